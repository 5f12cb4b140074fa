//! Input formats: comma lists, JSON matrices and descriptors, algebra files.

use std::fmt;
use std::path::Path;

use anyhow::{bail, Context as _, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Deserialize;

use eulerwedge::causal::IsometryElement;
use eulerwedge::cones::{Cone, LorentzCone, PolyhedralCone};
use eulerwedge::liealg::LieAlgebra;
use eulerwedge::linalg::Subspace;
use eulerwedge::nets::Region;
use eulerwedge::par::Execution;
use eulerwedge::stdsp::{AntiUnitaryOp, CMat};
use eulerwedge::wedgespace::GradedGroupElement;

/// Malformed input; maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

/// Settings shared by every command, and the record of files read.
pub struct Context {
    pub seed: u64,
    pub tol: f64,
    pub eigen_tol: f64,
    pub exec: Execution,
    pub inputs: Vec<(String, Vec<u8>)>,
}

impl Context {
    pub fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| input_error(format!("{} is not UTF-8", path.display())))?;
        self.inputs.push((path.display().to_string(), bytes));
        Ok(text)
    }

    pub fn read_json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| input_error(format!("`{t}` is not a number"))))
        .collect()
}

pub type Rows = Vec<Vec<f64>>;
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

pub fn matrix(rows: &Rows) -> Result<DMatrix<f64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
        bail!(input_error("matrices must be non-empty and rectangular"));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn complex_matrix(rows: &ComplexRows) -> Result<CMat> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
        bail!(input_error("matrices must be non-empty and rectangular"));
    }
    Ok(CMat::from_fn(r, c, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

pub fn rows(m: &DMatrix<f64>) -> Rows {
    m.row_iter().map(|r| r.iter().cloned().collect()).collect()
}

pub fn complex_rows(m: &CMat) -> ComplexRows {
    m.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn columns(m: &DMatrix<f64>) -> Rows {
    m.column_iter().map(|c| c.iter().cloned().collect()).collect()
}

/// A real subspace in interleaved `(re, im)` coordinates, given by spanning vectors.
#[derive(Deserialize)]
pub struct SubspaceJson {
    pub ambient_dim: Option<usize>,
    pub vectors: Rows,
}

impl SubspaceJson {
    pub fn build(&self, tol: f64) -> Result<Subspace> {
        let n = match (self.ambient_dim, self.vectors.first()) {
            (Some(n), _) => n,
            (None, Some(v)) => v.len(),
            (None, None) => bail!(input_error("an empty subspace needs `ambient_dim`")),
        };
        if n % 2 != 0 || self.vectors.iter().any(|v| v.len() != n) {
            bail!(input_error(format!("vectors must all have the same even length {n}")));
        }
        if self.vectors.is_empty() {
            return Ok(Subspace::zero(n));
        }
        let m = DMatrix::from_fn(n, self.vectors.len(), |i, j| self.vectors[j][i]);
        Ok(Subspace::span(&m, tol))
    }
}

pub fn subspace_value(v: &Subspace) -> serde_json::Value {
    serde_json::json!({ "ambient_dim": v.ambient_dim(), "dim": v.dim(), "vectors": columns(v.basis()) })
}

#[derive(Deserialize)]
pub struct IsometryJson {
    pub lorentz: Rows,
    pub translation: Vec<f64>,
}

impl IsometryJson {
    pub fn build(&self) -> Result<IsometryElement> {
        Ok(IsometryElement::new(matrix(&self.lorentz)?, DVector::from_vec(self.translation.clone()))?)
    }
}

/// Real-form (anti)unitary: `parity` 1 for linear, -1 for antilinear.
#[derive(Deserialize)]
pub struct OpJson {
    pub matrix: Rows,
    pub parity: i8,
}

impl OpJson {
    pub fn build(&self, tol: f64) -> Result<AntiUnitaryOp> {
        Ok(AntiUnitaryOp::new(matrix(&self.matrix)?, self.parity, tol)?)
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeJson {
    Polyhedral { dim: usize, generators: Rows },
    Lorentz { embed: Rows },
}

impl ConeJson {
    pub fn build(&self) -> Result<Cone> {
        Ok(match self {
            ConeJson::Polyhedral { dim, generators } => {
                let gens = generators.iter().map(|g| DVector::from_vec(g.clone())).collect();
                Cone::Polyhedral(PolyhedralCone::new(*dim, gens)?)
            }
            ConeJson::Lorentz { embed } => Cone::Lorentz(LorentzCone::new(matrix(embed)?)?),
        })
    }
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionJson {
    Wedge(IsometryJson),
    Hull(Vec<IsometryJson>),
    Diamond { p: Vec<f64>, q: Vec<f64> },
    Points(Rows),
    Whole,
    Empty,
}

impl RegionJson {
    pub fn build(&self) -> Result<Region> {
        Ok(match self {
            RegionJson::Wedge(g) => Region::Wedge(g.build()?),
            RegionJson::Hull(gs) => Region::Hull(gs.iter().map(IsometryJson::build).collect::<Result<_>>()?),
            RegionJson::Diamond { p, q } => {
                Region::Diamond { p: DVector::from_vec(p.clone()), q: DVector::from_vec(q.clone()) }
            }
            RegionJson::Points(xs) => Region::Points(xs.iter().map(|x| DVector::from_vec(x.clone())).collect()),
            RegionJson::Whole => Region::Whole,
            RegionJson::Empty => Region::Empty,
        })
    }
}

/// Group elements: an explicit automorphism, `exp(ad y)`, or a Poincare transformation.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum GroupJson {
    Matrix { matrix: Rows, parity: i8 },
    ExpAd { exp_ad: Vec<f64> },
    Isometry { isometry: IsometryJson },
}

impl GroupJson {
    pub fn build(&self, l: &LieAlgebra, tol: f64) -> Result<GradedGroupElement> {
        Ok(match self {
            GroupJson::Matrix { matrix: m, parity } => GradedGroupElement::checked(l, matrix(m)?, *parity, tol.max(1e-8))?,
            GroupJson::ExpAd { exp_ad } => GradedGroupElement::exp_ad(l, &l.element(exp_ad)?),
            GroupJson::Isometry { isometry } => GradedGroupElement::poincare(l, &isometry.build()?)?,
        })
    }
}

/// `builtin:NAME` or a TOML algebra file.
pub fn load_algebra(ctx: &mut Context, spec: &str) -> Result<LieAlgebra> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return LieAlgebra::builtin(name).map_err(|e| input_error(e.to_string()));
    }
    let path = Path::new(spec);
    let text = ctx.read(path)?;
    parse_algebra(&text).with_context(|| format!("loading {}", path.display()))
}

/// Parse the TOML algebra format, reporting bracket errors with their line.
pub fn parse_algebra(text: &str) -> Result<LieAlgebra> {
    use eulerwedge::liealg::LieError;
    match LieAlgebra::from_toml_str(text) {
        Ok(l) => Ok(l),
        Err(LieError::Parse(msg)) => {
            let line = msg
                .strip_prefix("bracket entry ")
                .and_then(|rest| rest.split(':').next())
                .and_then(|n| n.parse::<usize>().ok())
                .and_then(|n| text.lines().enumerate().filter(|(_, l)| l.trim() == "[[brackets]]").nth(n))
                .map(|(i, _)| i + 1);
            Err(match line {
                Some(line) => input_error(format!("line {line}: {msg}")),
                None => input_error(msg),
            })
        }
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_parse() {
        assert_eq!(parse_list("0.5, 0,-1").unwrap(), vec![0.5, 0.0, -1.0]);
        assert!(parse_list("1,x").is_err());
    }

    #[test]
    fn bracket_errors_carry_lines() {
        let text = "dim = 2\n\n[[brackets]]\ni = 0\nj = 1\ncoeffs = [1.0]\n";
        let e = parse_algebra(text).unwrap_err();
        assert!(e.to_string().starts_with("line 3:"), "{e}");
        assert!(e.downcast_ref::<InputError>().is_some());
    }

    #[test]
    fn regions_deserialize() {
        let r: RegionJson = serde_json::from_str(r#""whole""#).unwrap();
        assert!(matches!(r.build().unwrap(), Region::Whole));
        let r: RegionJson = serde_json::from_str(r#"{"points": [[0.0, 1.0]]}"#).unwrap();
        assert!(matches!(r.build().unwrap(), Region::Points(_)));
    }
}
