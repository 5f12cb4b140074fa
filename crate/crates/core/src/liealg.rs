//! Finite-dimensional real Lie algebras given by structure constants, and the
//! Euler analysis of an element: 3-grading, involution, the ideal `n_h`.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Subspace};

/// Default tolerance for eigenvalue membership and integrality.
pub const EIGEN_TOL: f64 = 1e-8;
/// Tolerance for Jacobi residuals at construction.
pub const JACOBI_TOL: f64 = 1e-10;
/// Tolerance for structural residuals (grading, automorphism, ideal).
pub const STRUCT_TOL: f64 = 1e-9;
/// Eigenbases with a larger condition number are treated as defective.
const MAX_CONDITION: f64 = 1e12;

pub type Element = DVector<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k}) with residual {residual:e}")]
    JacobiViolation { i: usize, j: usize, k: usize, residual: f64 },
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix basis is not closed under the commutator (residual {residual:e})")]
    NotClosed { residual: f64 },
    #[error("element is not an Euler element")]
    NotEuler,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("involution is not an automorphism (residual {residual:e})")]
    AutomorphismViolation { residual: f64 },
    #[error("anti-ellipticity criteria disagree (dimension count {dimension_count}, inclusion {inclusion})")]
    CriteriaDisagree { dimension_count: bool, inclusion: bool },
}

pub type Result<T> = std::result::Result<T, LieError>;

/// Real Lie algebra with structure constants `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    dim: usize,
    labels: Vec<String>,
    c: Vec<f64>,
    matrices: Option<Vec<DMatrix<f64>>>,
}

impl LieAlgebra {
    /// Build from a full structure-constant table indexed `(i * dim + j) * dim + k`.
    pub fn from_structure_constants(dim: usize, labels: Vec<String>, c: Vec<f64>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(LieError::DimensionMismatch { expected: dim * dim * dim, got: c.len() });
        }
        if labels.len() != dim {
            return Err(LieError::DimensionMismatch { expected: dim, got: labels.len() });
        }
        let alg = Self { dim, labels, c, matrices: None };
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let s = alg.structure_constant(i, j, k) + alg.structure_constant(j, i, k);
                    if s.abs() > JACOBI_TOL {
                        return Err(LieError::InvalidParameter(format!(
                            "structure constants not antisymmetric at ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        alg.check_jacobi()?;
        Ok(alg)
    }

    /// Build from a linearly independent list of matrices closed under the commutator.
    pub fn from_matrices(labels: Vec<String>, mats: Vec<DMatrix<f64>>) -> Result<Self> {
        let dim = mats.len();
        let m = mats.first().map(|x| x.nrows()).unwrap_or(0);
        let mut b = DMatrix::zeros(m * m, dim);
        for (i, x) in mats.iter().enumerate() {
            b.set_column(i, &DVector::from_column_slice(x.as_slice()));
        }
        if linalg::rank(&b, 1e-12) < dim {
            return Err(LieError::InvalidParameter("matrix basis is linearly dependent".into()));
        }
        let pinv = b.clone().pseudo_inverse(1e-12).map_err(|e| LieError::NumericalFailure(e.into()))?;
        let mut c = vec![0.0; dim * dim * dim];
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let br = &mats[i] * &mats[j] - &mats[j] * &mats[i];
                let v = DVector::from_column_slice(br.as_slice());
                let coeffs = &pinv * &v;
                worst = worst.max((&b * &coeffs - &v).amax());
                for k in 0..dim {
                    c[(i * dim + j) * dim + k] = snap_rational(coeffs[k]);
                }
            }
        }
        if worst > 1e-10 {
            return Err(LieError::NotClosed { residual: worst });
        }
        let mut alg = Self::from_structure_constants(dim, labels, c)?;
        alg.matrices = Some(mats);
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure_constants(&self) -> &[f64] {
        &self.c
    }

    /// Matrix realization of the basis, when the algebra was built from one.
    pub fn matrices(&self) -> Option<&[DMatrix<f64>]> {
        self.matrices.as_deref()
    }

    pub fn basis_vector(&self, i: usize) -> Element {
        let mut v = DVector::zeros(self.dim);
        v[i] = 1.0;
        v
    }

    pub fn element(&self, coeffs: &[f64]) -> Result<Element> {
        self.check_len(coeffs.len())?;
        Ok(DVector::from_column_slice(coeffs))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.dim {
            Ok(())
        } else {
            Err(LieError::DimensionMismatch { expected: self.dim, got: len })
        }
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Element {
        let d = self.dim;
        let mut out = DVector::zeros(d);
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                let base = (i * d + j) * d;
                for k in 0..d {
                    out[k] += w * self.c[base + k];
                }
            }
        }
        out
    }

    /// Matrix of `ad x` in the given basis: column `j` holds `[x, e_j]`.
    pub fn ad_matrix(&self, x: &Element) -> DMatrix<f64> {
        let d = self.dim;
        let mut m = DMatrix::zeros(d, d);
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                let base = (i * d + j) * d;
                for k in 0..d {
                    m[(k, j)] += x[i] * self.c[base + k];
                }
            }
        }
        m
    }

    /// Image of an element in the matrix realization.
    pub fn to_matrix(&self, x: &Element) -> Option<DMatrix<f64>> {
        let mats = self.matrices.as_ref()?;
        let n = mats[0].nrows();
        let mut out = DMatrix::zeros(n, n);
        for (xi, m) in x.iter().zip(mats) {
            out += m * *xi;
        }
        Some(out)
    }

    /// Coordinates of a matrix in the realization, if it lies in the span.
    pub fn from_matrix(&self, m: &DMatrix<f64>) -> Option<Element> {
        let mats = self.matrices.as_ref()?;
        let n = mats[0].nrows();
        let mut b = DMatrix::zeros(n * n, self.dim);
        for (i, x) in mats.iter().enumerate() {
            b.set_column(i, &DVector::from_column_slice(x.as_slice()));
        }
        let v = DVector::from_column_slice(m.as_slice());
        let coeffs = b.clone().svd(true, true).solve(&v, 1e-12).ok()?;
        ((&b * &coeffs - v).amax() < 1e-9).then_some(coeffs)
    }

    fn check_jacobi(&self) -> Result<()> {
        let d = self.dim;
        let ads: Vec<DMatrix<f64>> = (0..d).map(|i| self.ad_matrix(&self.basis_vector(i))).collect();
        let cmax = self.c.iter().fold(0.0_f64, |m, x| m.max(x.abs())).max(1.0);
        let tol = JACOBI_TOL * cmax * cmax;
        for i in 0..d {
            for j in (i + 1)..d {
                let mut r = &ads[i] * &ads[j] - &ads[j] * &ads[i];
                for k in 0..d {
                    let cij = self.structure_constant(i, j, k);
                    if cij != 0.0 {
                        r -= &ads[k] * cij;
                    }
                }
                let (idx, residual) = r
                    .iter()
                    .enumerate()
                    .fold((0, 0.0_f64), |acc, (n, v)| if v.abs() > acc.1 { (n, v.abs()) } else { acc });
                if residual > tol {
                    let k = idx / d;
                    return Err(LieError::JacobiViolation { i, j, k, residual });
                }
            }
        }
        Ok(())
    }

    /// Largest Jacobi residual over all basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            let x = self.basis_vector(i);
            for j in 0..d {
                let y = self.basis_vector(j);
                for k in 0..d {
                    let z = self.basis_vector(k);
                    let r = self.bracket(&x, &self.bracket(&y, &z))
                        + self.bracket(&y, &self.bracket(&z, &x))
                        + self.bracket(&z, &self.bracket(&x, &y));
                    worst = worst.max(r.amax());
                }
            }
        }
        worst
    }

    // ----- built-in algebras -----

    /// `sl(n)`: diagonal `H_k = E_kk - E_{k+1,k+1}` first, then `E_ab` (a != b) row-major.
    pub fn sl(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(LieError::InvalidParameter("sl(n) needs n >= 2".into()));
        }
        let mut mats = Vec::new();
        let mut labels = Vec::new();
        for k in 0..n - 1 {
            let mut m = DMatrix::zeros(n, n);
            m[(k, k)] = 1.0;
            m[(k + 1, k + 1)] = -1.0;
            mats.push(m);
            labels.push(format!("H{}", k + 1));
        }
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    mats.push(unit(n, a, b));
                    labels.push(format!("E{}{}", a + 1, b + 1));
                }
            }
        }
        if n == 2 {
            labels = vec!["h".into(), "e".into(), "f".into()];
        }
        Self::from_matrices(labels, mats)
    }

    /// `gl(n)`: matrix units `E_ab` row-major.
    pub fn gl(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(LieError::InvalidParameter("gl(n) needs n >= 1".into()));
        }
        let mut mats = Vec::new();
        let mut labels = Vec::new();
        for a in 0..n {
            for b in 0..n {
                mats.push(unit(n, a, b));
                labels.push(format!("E{}{}", a + 1, b + 1));
            }
        }
        Self::from_matrices(labels, mats)
    }

    /// Matrices of `so(p,q)` for `eta = diag(+1 x p, -1 x q)`, pairs `i < j` in order.
    fn so_matrices(p: usize, q: usize) -> (Vec<String>, Vec<DMatrix<f64>>) {
        let n = p + q;
        let mut mats = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let same = (i < p) == (j < p);
                let m = if same {
                    labels.push(format!("R{i}{j}"));
                    unit(n, j, i) - unit(n, i, j)
                } else {
                    labels.push(format!("B{i}{j}"));
                    unit(n, i, j) + unit(n, j, i)
                };
                mats.push(m);
            }
        }
        (labels, mats)
    }

    /// `so(p,q)`; rotations `E_ji - E_ij` and boosts `E_ij + E_ji`.
    pub fn so(p: usize, q: usize) -> Result<Self> {
        if p + q < 2 {
            return Err(LieError::InvalidParameter("so(p,q) needs p + q >= 2".into()));
        }
        let (labels, mats) = Self::so_matrices(p, q);
        Self::from_matrices(labels, mats)
    }

    /// `sp(2n, R)` as block matrices `[[A, B], [C, -A^T]]` with `B`, `C` symmetric.
    pub fn sp(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(LieError::InvalidParameter("sp(2n) needs n >= 1".into()));
        }
        let m = 2 * n;
        let mut mats = Vec::new();
        let mut labels = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let mut x = DMatrix::zeros(m, m);
                x[(a, b)] = 1.0;
                x[(n + b, n + a)] = -1.0;
                mats.push(x);
                labels.push(format!("A{}{}", a + 1, b + 1));
            }
        }
        for (tag, off_r, off_c) in [("B", 0, n), ("C", n, 0)] {
            for a in 0..n {
                for b in a..n {
                    let mut x = DMatrix::zeros(m, m);
                    x[(off_r + a, off_c + b)] = 1.0;
                    x[(off_r + b, off_c + a)] = 1.0;
                    mats.push(x);
                    labels.push(format!("{tag}{}{}", a + 1, b + 1));
                }
            }
        }
        Self::from_matrices(labels, mats)
    }

    /// `aff(1)` with `h = E_11`, `x = E_12`, so `[h, x] = x`.
    pub fn aff1() -> Result<Self> {
        Self::from_matrices(vec!["h".into(), "x".into()], vec![unit(2, 0, 0), unit(2, 0, 1)])
    }

    /// Poincare algebra of `d`-dimensional Minkowski space as affine
    /// `(d+1) x (d+1)` matrices: translations first, then `so(1, d-1)`.
    pub fn poincare(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(LieError::InvalidParameter("poincare(d) needs d >= 2".into()));
        }
        let mut mats = Vec::new();
        let mut labels = Vec::new();
        for mu in 0..d {
            mats.push(unit(d + 1, mu, d));
            labels.push(format!("P{mu}"));
        }
        let (l, m) = Self::so_matrices(1, d - 1);
        for x in m {
            let mut big = DMatrix::zeros(d + 1, d + 1);
            big.view_mut((0, 0), (d, d)).copy_from(&x);
            mats.push(big);
        }
        labels.extend(l);
        Self::from_matrices(labels, mats)
    }

    /// Direct sum; basis of `a` first.
    pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> Result<Self> {
        let d = a.dim + b.dim;
        let mut c = vec![0.0; d * d * d];
        for i in 0..a.dim {
            for j in 0..a.dim {
                for k in 0..a.dim {
                    c[(i * d + j) * d + k] = a.structure_constant(i, j, k);
                }
            }
        }
        let o = a.dim;
        for i in 0..b.dim {
            for j in 0..b.dim {
                for k in 0..b.dim {
                    c[((o + i) * d + o + j) * d + o + k] = b.structure_constant(i, j, k);
                }
            }
        }
        let labels = a.labels.iter().chain(&b.labels).cloned().collect();
        let mut out = Self::from_structure_constants(d, labels, c)?;
        if let (Some(ma), Some(mb)) = (&a.matrices, &b.matrices) {
            let za = DMatrix::zeros(ma[0].nrows(), ma[0].ncols());
            let zb = DMatrix::zeros(mb[0].nrows(), mb[0].ncols());
            let mut mats: Vec<DMatrix<f64>> = ma.iter().map(|x| linalg::block_diag(x, &zb)).collect();
            mats.extend(mb.iter().map(|y| linalg::block_diag(&za, y)));
            out.matrices = Some(mats);
        }
        Ok(out)
    }

    /// Semidirect product of an abelian ideal `R^m` by `acting`, where
    /// `action[i]` is the `m x m` matrix of the `i`-th basis element. Ideal basis first.
    pub fn semidirect(acting: &LieAlgebra, action: &[DMatrix<f64>], ideal_labels: Vec<String>) -> Result<Self> {
        if action.len() != acting.dim {
            return Err(LieError::DimensionMismatch { expected: acting.dim, got: action.len() });
        }
        let m = ideal_labels.len();
        if action.iter().any(|x| x.shape() != (m, m)) {
            return Err(LieError::InvalidParameter("action matrices must be square of ideal size".into()));
        }
        let d = m + acting.dim;
        let mut c = vec![0.0; d * d * d];
        for i in 0..acting.dim {
            for j in 0..acting.dim {
                for k in 0..acting.dim {
                    c[((m + i) * d + m + j) * d + m + k] = acting.structure_constant(i, j, k);
                }
            }
            for v in 0..m {
                for w in 0..m {
                    let a = action[i][(w, v)];
                    c[((m + i) * d + v) * d + w] = a;
                    c[(v * d + m + i) * d + w] = -a;
                }
            }
        }
        let labels = ideal_labels.into_iter().chain(acting.labels.iter().cloned()).collect();
        Self::from_structure_constants(d, labels, c)
    }

    /// Parse the TOML custom-algebra format with 0-based bracket indices.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Entry {
            i: usize,
            j: usize,
            coeffs: Vec<f64>,
        }
        #[derive(Deserialize)]
        struct File {
            dim: usize,
            labels: Option<Vec<String>>,
            #[serde(default)]
            brackets: Vec<Entry>,
        }
        let f: File = toml::from_str(text).map_err(|e| LieError::Parse(e.to_string()))?;
        let d = f.dim;
        let labels = f.labels.unwrap_or_else(|| (0..d).map(|i| format!("x{i}")).collect());
        if labels.len() != d {
            return Err(LieError::Parse(format!("expected {d} labels, found {}", labels.len())));
        }
        let mut c = vec![0.0; d * d * d];
        let mut set = vec![false; d * d];
        for (n, e) in f.brackets.iter().enumerate() {
            if e.i >= d || e.j >= d {
                return Err(LieError::Parse(format!("bracket entry {n}: index out of range")));
            }
            if e.coeffs.len() != d {
                return Err(LieError::Parse(format!(
                    "bracket entry {n}: expected {d} coefficients, found {}",
                    e.coeffs.len()
                )));
            }
            if e.i == e.j && e.coeffs.iter().any(|x| *x != 0.0) {
                return Err(LieError::Parse(format!("bracket entry {n}: [x{0}, x{0}] must vanish", e.i)));
            }
            for (k, &x) in e.coeffs.iter().enumerate() {
                let fwd = (e.i * d + e.j) * d + k;
                let rev = (e.j * d + e.i) * d + k;
                if set[e.j * d + e.i] && e.i != e.j && (c[fwd] - x).abs() > 0.0 {
                    return Err(LieError::Parse(format!(
                        "bracket entry {n}: conflicts with antisymmetric completion of ({}, {})",
                        e.j, e.i
                    )));
                }
                c[fwd] = x;
                c[rev] = -x;
            }
            set[e.i * d + e.j] = true;
        }
        Self::from_structure_constants(d, labels, c)
    }

    /// Structure constants in the TOML format (upper triangle only).
    pub fn to_toml_string(&self) -> String {
        let mut s = format!("dim = {}\nlabels = {:?}\n", self.dim, self.labels);
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let coeffs: Vec<f64> = (0..self.dim).map(|k| self.structure_constant(i, j, k)).collect();
                if coeffs.iter().any(|x| *x != 0.0) {
                    s.push_str(&format!("\n[[brackets]]\ni = {i}\nj = {j}\ncoeffs = {coeffs:?}\n"));
                }
            }
        }
        s
    }

    /// Built-in algebra by name: `sl3`, `gl2`, `so1_3`, `sp4`, `aff1`, `poincare4`;
    /// parenthesized forms like `so(1,3)` and `sp(4)` are accepted.
    pub fn builtin(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        let head: String = lower.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
        let nums: Vec<usize> = lower[head.len()..]
            .split(|c: char| !c.is_ascii_digit())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().expect("digits"))
            .collect();
        let bad = || LieError::InvalidParameter(format!("unknown built-in algebra `{name}`"));
        match (head.as_str(), nums.as_slice()) {
            ("sl", [n]) => Self::sl(*n),
            ("gl", [n]) => Self::gl(*n),
            ("so", [p, q]) => Self::so(*p, *q),
            ("sp", [m]) if m % 2 == 0 => Self::sp(m / 2),
            ("aff", [1]) => Self::aff1(),
            ("poincare", [d]) => Self::poincare(*d),
            _ => Err(bad()),
        }
    }
}

/// Snap to a rational with denominator dividing 2520 when within roundoff.
fn snap_rational(x: f64) -> f64 {
    let r = (x * 2520.0).round() / 2520.0;
    if (x - r).abs() < 1e-12 { r } else { x }
}

fn unit(n: usize, a: usize, b: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(a, b)] = 1.0;
    m
}

/// Eigenvalues of a real matrix via the real Schur form. Deflation thresholds are
/// loosened step by step when the QR iteration stalls on clustered eigenvalues.
pub fn spectrum(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = [f64::EPSILON, 1e-14, 1e-13, 1e-12]
        .into_iter()
        .find_map(|eps| Schur::try_new(m.clone(), eps, 10_000))
        .ok_or_else(|| LieError::NumericalFailure("Schur decomposition did not converge".into()))?;
    let mut ev: Vec<Complex64> = schur.complex_eigenvalues().iter().cloned().collect();
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ev)
}

/// Eigenspace decomposition of `ad h` for an Euler element.
#[derive(Clone, Debug)]
pub struct Grading {
    /// Orthonormal bases of `g_1`, `g_0`, `g_{-1}`.
    pub plus: DMatrix<f64>,
    pub zero: DMatrix<f64>,
    pub minus: DMatrix<f64>,
    /// Eigenbasis `[plus | zero | minus]` and its inverse.
    pub p: DMatrix<f64>,
    pub p_inv: DMatrix<f64>,
    /// Largest residual of `[g_i, g_j]` outside `g_{i+j}`.
    pub residual: f64,
}

impl Grading {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.plus.ncols(), self.zero.ncols(), self.minus.ncols())
    }

    pub fn basis(&self, nu: i32) -> &DMatrix<f64> {
        match nu {
            1 => &self.plus,
            0 => &self.zero,
            -1 => &self.minus,
            _ => panic!("grading degree must be -1, 0 or 1"),
        }
    }

    /// Projection onto `g_nu` along the other eigenspaces.
    pub fn projection(&self, nu: i32) -> DMatrix<f64> {
        let d = self.p.nrows();
        let (a, b, _) = self.dims();
        let (start, len) = match nu {
            1 => (0, a),
            0 => (a, b),
            -1 => (a + b, d - a - b),
            _ => return DMatrix::zeros(d, d),
        };
        let mut sel = DMatrix::zeros(d, d);
        for i in start..start + len {
            sel[(i, i)] = 1.0;
        }
        &self.p * sel * &self.p_inv
    }

    /// The involution `tau_h` acting as `(-1)^j` on `g_j`.
    pub fn tau(&self) -> DMatrix<f64> {
        let d = self.p.nrows();
        let (a, b, _) = self.dims();
        let diag = DVector::from_fn(d, |i, _| if i >= a && i < a + b { 1.0 } else { -1.0 });
        &self.p * DMatrix::from_diagonal(&diag) * &self.p_inv
    }
}

fn kernel(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    linalg::null_space(m, tol)
}

/// Eigenspaces of `ad h` for eigenvalues -1, 0, 1, if they exhaust the algebra.
fn euler_eigenspaces(l: &LieAlgebra, h: &Element, tol: f64) -> Result<Option<Grading>> {
    l.check_len(h.len())?;
    let ad = l.ad_matrix(h);
    let d = l.dim();
    if ad.amax() <= tol {
        return Ok(None);
    }
    let ev = spectrum(&ad)?;
    if ev.iter().any(|z| z.im.abs() > tol || [-1.0, 0.0, 1.0].iter().all(|n| (z.re - n).abs() > tol)) {
        return Ok(None);
    }
    let id = DMatrix::<f64>::identity(d, d);
    let plus = kernel(&(&ad - &id), tol);
    let zero = kernel(&ad, tol);
    let minus = kernel(&(&ad + &id), tol);
    if plus.ncols() + zero.ncols() + minus.ncols() != d {
        return Ok(None);
    }
    let p = linalg::hstack(&[&plus, &zero, &minus], d);
    let s = linalg::singular_values(&p);
    let cond = s[0] / s[d - 1].max(f64::MIN_POSITIVE);
    if !cond.is_finite() || cond > MAX_CONDITION {
        return Ok(None);
    }
    let p_inv = p
        .clone()
        .try_inverse()
        .ok_or_else(|| LieError::NumericalFailure("eigenbasis not invertible".into()))?;
    let mut dvals = DVector::zeros(d);
    for i in 0..plus.ncols() {
        dvals[i] = 1.0;
    }
    for i in (plus.ncols() + zero.ncols())..d {
        dvals[i] = -1.0;
    }
    let recon = &p * DMatrix::from_diagonal(&dvals) * &p_inv;
    if (&recon - &ad).amax() > tol.max(1e-9) * ad.amax().max(1.0) {
        return Ok(None);
    }
    let mut g = Grading { plus, zero, minus, p, p_inv, residual: 0.0 };
    g.residual = grading_residual(l, &g);
    Ok(Some(g))
}

fn grading_residual(l: &LieAlgebra, g: &Grading) -> f64 {
    let mut worst: f64 = 0.0;
    for i in [-1, 0, 1] {
        for j in [-1, 0, 1] {
            let target = i + j;
            let proj = g.projection(target);
            let bi = g.basis(i);
            let bj = g.basis(j);
            for a in 0..bi.ncols() {
                let x = bi.column(a).into_owned();
                for b in 0..bj.ncols() {
                    let y = bj.column(b).into_owned();
                    let z = l.bracket(&x, &y);
                    let r = if target.abs() >= 2 { z.amax() } else { (&z - &proj * &z).amax() };
                    worst = worst.max(r);
                }
            }
        }
    }
    worst
}

pub fn is_euler(l: &LieAlgebra, h: &Element, tol: f64) -> Result<bool> {
    Ok(euler_eigenspaces(l, h, tol)?.is_some())
}

/// The 3-grading `g_1, g_0, g_{-1}` of an Euler element.
pub fn grading(l: &LieAlgebra, h: &Element, tol: f64) -> Result<Grading> {
    let g = euler_eigenspaces(l, h, tol)?.ok_or(LieError::NotEuler)?;
    if g.residual > STRUCT_TOL {
        return Err(LieError::NumericalFailure(format!("grading residual {:e}", g.residual)));
    }
    Ok(g)
}

/// Residuals `(|tau^2 - 1|, max |tau[x,y] - [tau x, tau y]|)` over basis pairs.
pub fn tau_residuals(l: &LieAlgebra, tau: &DMatrix<f64>) -> (f64, f64) {
    let d = l.dim();
    let sq = (tau * tau - DMatrix::<f64>::identity(d, d)).amax();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        let x = l.basis_vector(i);
        for j in 0..d {
            let y = l.basis_vector(j);
            let lhs = tau * l.bracket(&x, &y);
            let rhs = l.bracket(&(tau * &x), &(tau * &y));
            worst = worst.max((lhs - rhs).amax());
        }
    }
    (sq, worst)
}

/// The involution `tau_h`, verified to be an involutive automorphism.
pub fn tau_h(l: &LieAlgebra, h: &Element, tol: f64) -> Result<DMatrix<f64>> {
    let g = grading(l, h, tol)?;
    let tau = g.tau();
    let (sq, auto) = tau_residuals(l, &tau);
    if sq > STRUCT_TOL || auto > STRUCT_TOL {
        return Err(LieError::AutomorphismViolation { residual: sq.max(auto) });
    }
    Ok(tau)
}

/// Whether `ad h` is diagonalizable with integer eigenvalues.
pub fn integrality_check(l: &LieAlgebra, h: &Element, tol: f64) -> Result<bool> {
    l.check_len(h.len())?;
    let ad = l.ad_matrix(h);
    let d = l.dim();
    let ev = spectrum(&ad)?;
    if ev.iter().any(|z| z.im.abs() > tol || (z.re - z.re.round()).abs() > tol) {
        return Ok(false);
    }
    let mut values: Vec<i64> = ev.iter().map(|z| z.re.round() as i64).collect();
    values.dedup();
    let total: usize = values
        .iter()
        .map(|&m| kernel(&(&ad - DMatrix::<f64>::identity(d, d) * m as f64), tol).ncols())
        .sum();
    Ok(total == d)
}

/// Brackets `[x, y]` over basis vectors `x` of `g_1` and `y` of `g_{-1}`.
fn cross_brackets(l: &LieAlgebra, g: &Grading) -> DMatrix<f64> {
    let d = l.dim();
    let mut cols = Vec::new();
    for a in 0..g.plus.ncols() {
        let x = g.plus.column(a).into_owned();
        for b in 0..g.minus.ncols() {
            cols.push(l.bracket(&x, &g.minus.column(b).into_owned()));
        }
    }
    if cols.is_empty() {
        DMatrix::zeros(d, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Largest residual of `[e_i, n]` outside `n` for basis vectors.
pub fn ideal_residual(l: &LieAlgebra, n: &Subspace) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..l.dim() {
        let x = l.basis_vector(i);
        for c in n.basis().column_iter() {
            let z = l.bracket(&x, &c.into_owned());
            worst = worst.max(n.residual(&z) * z.norm().max(1.0));
        }
    }
    worst
}

/// `n_h = g_1 + [g_1, g_{-1}] + g_{-1}`, verified to be an ideal.
pub fn n_h(l: &LieAlgebra, h: &Element, tol: f64) -> Result<Subspace> {
    let g = grading(l, h, tol)?;
    n_h_from_grading(l, &g)
}

fn n_h_from_grading(l: &LieAlgebra, g: &Grading) -> Result<Subspace> {
    let d = l.dim();
    let cb = cross_brackets(l, g);
    let n = Subspace::span(&linalg::hstack(&[&g.plus, &cb, &g.minus], d), linalg::DEFAULT_TOL);
    let r = ideal_residual(l, &n);
    if r > STRUCT_TOL {
        return Err(LieError::NumericalFailure(format!("n_h ideal residual {r:e}")));
    }
    Ok(n)
}

fn anti_elliptic_from(l: &LieAlgebra, h: &Element, g: &Grading, n: &Subspace) -> Result<bool> {
    let d = l.dim();
    let tol = linalg::DEFAULT_TOL;
    let hcol = DMatrix::from_column_slice(d, 1, h.as_slice());
    let natural = n.sum(&Subspace::span(&hcol, tol), tol);
    let by_dim = natural.dim() == d;
    let rh_plus_comm = Subspace::span(&linalg::hstack(&[&hcol, &cross_brackets(l, g)], d), tol);
    let zero = Subspace::span(&g.zero, tol);
    let by_inclusion = rh_plus_comm.contains(&zero, STRUCT_TOL);
    if by_dim != by_inclusion {
        return Err(LieError::CriteriaDisagree { dimension_count: by_dim, inclusion: by_inclusion });
    }
    Ok(by_dim)
}

/// Whether `n_h + R h` is the whole algebra; cross-checked against
/// `g_0 ⊆ R h + [g_1, g_{-1}]`.
pub fn is_anti_elliptic(l: &LieAlgebra, h: &Element, tol: f64) -> Result<bool> {
    let g = grading(l, h, tol)?;
    let n = n_h_from_grading(l, &g)?;
    anti_elliptic_from(l, h, &g, &n)
}

fn h_in_commutator_from(l: &LieAlgebra, h: &Element, g: &Grading) -> bool {
    let cb = cross_brackets(l, g);
    Subspace::span(&cb, linalg::DEFAULT_TOL).residual(h) <= STRUCT_TOL
}

/// Whether `h` lies in `[g_1, g_{-1}]`.
pub fn h_in_commutator(l: &LieAlgebra, h: &Element, tol: f64) -> Result<bool> {
    let g = grading(l, h, tol)?;
    Ok(h_in_commutator_from(l, h, &g))
}

/// Kernel of `ad h`.
pub fn centralizer(l: &LieAlgebra, h: &Element, tol: f64) -> Result<Subspace> {
    l.check_len(h.len())?;
    Ok(Subspace::from_orthonormal(kernel(&l.ad_matrix(h), tol)))
}

fn columns(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.column_iter().map(|c| c.iter().cloned().collect()).collect()
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().cloned().collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct GradingBases {
    pub minus: Vec<Vec<f64>>,
    pub zero: Vec<Vec<f64>>,
    pub plus: Vec<Vec<f64>>,
}

/// Full Euler analysis of an element; fields past `spectrum` are empty when
/// the element is not Euler.
#[derive(Clone, Debug, Serialize)]
pub struct EulerReport {
    pub is_euler: bool,
    pub spectrum: Vec<f64>,
    pub spectrum_imag_max: f64,
    pub grading_dims: Option<(usize, usize, usize)>,
    pub grading_bases: Option<GradingBases>,
    pub grading_residual: Option<f64>,
    pub tau_matrix: Option<Vec<Vec<f64>>>,
    pub tau_square_residual: Option<f64>,
    pub tau_automorphism_residual: Option<f64>,
    pub n_h_basis: Option<Vec<Vec<f64>>>,
    pub n_h_natural_basis: Option<Vec<Vec<f64>>>,
    pub anti_elliptic: Option<bool>,
    pub h_in_commutator: Option<bool>,
    pub centralizer_dim: usize,
}

pub fn euler_report(l: &LieAlgebra, h: &Element, tol: f64) -> Result<EulerReport> {
    l.check_len(h.len())?;
    let ad = l.ad_matrix(h);
    let ev = spectrum(&ad)?;
    let centralizer_dim = centralizer(l, h, tol)?.dim();
    let mut report = EulerReport {
        is_euler: false,
        spectrum: ev.iter().map(|z| z.re).collect(),
        spectrum_imag_max: ev.iter().fold(0.0, |m, z| m.max(z.im.abs())),
        grading_dims: None,
        grading_bases: None,
        grading_residual: None,
        tau_matrix: None,
        tau_square_residual: None,
        tau_automorphism_residual: None,
        n_h_basis: None,
        n_h_natural_basis: None,
        anti_elliptic: None,
        h_in_commutator: None,
        centralizer_dim,
    };
    let Some(g) = euler_eigenspaces(l, h, tol)? else {
        return Ok(report);
    };
    let tau = g.tau();
    let (sq, auto) = tau_residuals(l, &tau);
    let n = n_h_from_grading(l, &g)?;
    let hcol = DMatrix::from_column_slice(l.dim(), 1, h.as_slice());
    let natural = n.sum(&Subspace::span(&hcol, linalg::DEFAULT_TOL), linalg::DEFAULT_TOL);
    report.is_euler = true;
    report.grading_dims = Some(g.dims());
    report.grading_bases = Some(GradingBases {
        minus: columns(&g.minus),
        zero: columns(&g.zero),
        plus: columns(&g.plus),
    });
    report.grading_residual = Some(g.residual);
    report.tau_matrix = Some(rows(&tau));
    report.tau_square_residual = Some(sq);
    report.tau_automorphism_residual = Some(auto);
    report.n_h_basis = Some(columns(n.basis()));
    report.n_h_natural_basis = Some(columns(natural.basis()));
    report.anti_elliptic = Some(anti_elliptic_from(l, h, &g, &n)?);
    report.h_in_commutator = Some(h_in_commutator_from(l, h, &g));
    Ok(report)
}
