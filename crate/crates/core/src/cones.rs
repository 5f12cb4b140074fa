//! Convex cones in Lie algebras: finitely generated cones, embedded Lorentz
//! cones, graded parts with respect to an Euler element, Lie wedges and the
//! positive cone of a finite-dimensional unitary representation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::liealg::{Element, Grading, LieAlgebra};
use crate::linalg::{self, Subspace};

/// Number of sampled flow times for invariance checks.
pub const INVARIANCE_SAMPLES: usize = 64;
/// Largest ambient dimension for which facets are enumerated.
pub const MAX_FACET_DIM: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConeError {
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("generator {0} is zero")]
    ZeroGenerator(usize),
    #[error("nonnegative least squares did not converge: {0}")]
    SolverFailure(String),
    #[error("cone is not invariant under the flow of h (residual {residual:e})")]
    NotInvariant { residual: f64 },
    #[error("graded part of the cone is not finitely generated (rank {rank} image)")]
    NonPolyhedral { rank: usize },
    #[error("image {index} is not skew-hermitian (residual {residual:e})")]
    NotSkewHermitian { index: usize, residual: f64 },
    #[error("images violate the bracket relations (residual {residual:e})")]
    NotRepresentation { residual: f64 },
    #[error("facet enumeration limited to ambient dimension {MAX_FACET_DIM}, got {0}")]
    TooLarge(usize),
}

pub type Result<T> = std::result::Result<T, ConeError>;

/// Solve `min |A x - b|` subject to `x >= 0` (Lawson-Hanson active set).
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    if n == 0 {
        return Ok((x, b.norm()));
    }
    let mut passive = vec![false; n];
    let tol = 1e-12 * a.amax().max(1.0) * b.norm().max(1.0);
    let max_outer = 3 * n + 30;
    for _ in 0..max_outer {
        let w = a.transpose() * (b - a * &x);
        let cand = (0..n).filter(|&j| !passive[j] && w[j] > tol).max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = cand else {
            return Ok((x.clone(), (a * &x - b).norm()));
        };
        passive[j] = true;
        for _ in 0..(3 * n + 30) {
            let idx: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let sub = DMatrix::from_fn(a.nrows(), idx.len(), |r, c| a[(r, idx[c])]);
            let z_sub = sub
                .svd(true, true)
                .solve(b, 1e-14)
                .map_err(|e| ConeError::SolverFailure(e.to_string()))?;
            let mut z = DVector::zeros(n);
            for (c, &k) in idx.iter().enumerate() {
                z[k] = z_sub[c];
            }
            if idx.iter().all(|&k| z[k] > 0.0) {
                x = z;
                break;
            }
            let mut alpha = f64::INFINITY;
            for &k in &idx {
                if z[k] <= 0.0 {
                    alpha = alpha.min(x[k] / (x[k] - z[k]));
                }
            }
            x += (&z - &x) * alpha;
            for &k in &idx {
                if x[k] <= 1e-15 {
                    x[k] = 0.0;
                    passive[k] = false;
                }
            }
        }
    }
    Err(ConeError::SolverFailure("iteration budget exhausted".into()))
}

/// Convex cone spanned by finitely many nonzero generators.
#[derive(Clone, Debug)]
pub struct PolyhedralCone {
    ambient_dim: usize,
    generators: Vec<DVector<f64>>,
}

/// Inequality description `n . x >= 0`, `e . x = 0`.
#[derive(Clone, Debug)]
pub struct HalfspaceRep {
    pub inequalities: Vec<DVector<f64>>,
    pub equalities: Vec<DVector<f64>>,
}

impl PolyhedralCone {
    pub fn new(ambient_dim: usize, generators: Vec<DVector<f64>>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.len() != ambient_dim {
                return Err(ConeError::DimensionMismatch { expected: ambient_dim, got: g.len() });
            }
            if g.amax() == 0.0 {
                return Err(ConeError::ZeroGenerator(i));
            }
        }
        Ok(Self { ambient_dim, generators })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, generators: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[DVector<f64>] {
        &self.generators
    }

    fn generator_matrix(&self) -> DMatrix<f64> {
        if self.generators.is_empty() {
            DMatrix::zeros(self.ambient_dim, 0)
        } else {
            DMatrix::from_columns(&self.generators)
        }
    }

    /// Distance of `x` from the cone.
    pub fn distance(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.ambient_dim {
            return Err(ConeError::DimensionMismatch { expected: self.ambient_dim, got: x.len() });
        }
        Ok(nnls(&self.generator_matrix(), x)?.1)
    }

    /// Membership up to `tol * max(1, |x|)`.
    pub fn member(&self, x: &DVector<f64>, tol: f64) -> Result<bool> {
        Ok(self.distance(x)? <= tol * x.norm().max(1.0))
    }

    /// Cone with one more generator.
    pub fn with_generator(&self, g: DVector<f64>) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.push(g);
        Self::new(self.ambient_dim, gens)
    }

    /// True when the cone contains no line.
    pub fn is_pointed(&self, tol: f64) -> Result<bool> {
        if self.generators.is_empty() {
            return Ok(true);
        }
        let n = self.ambient_dim;
        let k = self.generators.len();
        let mut a = DMatrix::zeros(n + 1, k);
        for (j, g) in self.generators.iter().enumerate() {
            a.view_mut((0, j), (n, 1)).copy_from(&g.normalize());
            a[(n, j)] = 1.0;
        }
        let mut b = DVector::zeros(n + 1);
        b[n] = 1.0;
        let (_, res) = nnls(&a, &b)?;
        Ok(res > tol.sqrt())
    }

    /// Image under a linear map, dropping generators mapped to zero.
    pub fn image(&self, m: &DMatrix<f64>, zero_tol: f64) -> Self {
        let gens = self
            .generators
            .iter()
            .map(|g| m * g)
            .filter(|g| g.norm() > zero_tol)
            .collect();
        Self { ambient_dim: m.nrows(), generators: gens }
    }

    /// Remove generators that are positive combinations of the others and normalize.
    pub fn reduced(&self, tol: f64) -> Result<Self> {
        let mut gens: Vec<DVector<f64>> = self.generators.iter().map(|g| g.normalize()).collect();
        let mut i = 0;
        while i < gens.len() {
            let others: Vec<DVector<f64>> =
                gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            let rest = Self { ambient_dim: self.ambient_dim, generators: others.clone() };
            if !others.is_empty() && rest.member(&gens[i], tol)? {
                gens.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(Self { ambient_dim: self.ambient_dim, generators: gens })
    }

    /// Facet description by enumerating generator subsets inside the linear span.
    pub fn facets(&self, tol: f64) -> Result<HalfspaceRep> {
        let n = self.ambient_dim;
        if n > MAX_FACET_DIM {
            return Err(ConeError::TooLarge(n));
        }
        let span = Subspace::span(&self.generator_matrix(), tol);
        let equalities: Vec<DVector<f64>> = span
            .orthogonal_complement(tol)
            .basis()
            .column_iter()
            .map(|c| c.into_owned())
            .collect();
        let r = span.dim();
        let q = span.basis();
        let coords: Vec<DVector<f64>> = self.generators.iter().map(|g| q.transpose() * g).collect();
        let mut inequalities: Vec<DVector<f64>> = Vec::new();
        if r == 0 {
            return Ok(HalfspaceRep { inequalities, equalities });
        }
        let k = coords.len();
        let mut push = |normal: DVector<f64>| {
            let amb = (q * &normal).normalize();
            if !inequalities.iter().any(|f| (f - &amb).amax() < 1e-9) {
                inequalities.push(amb);
            }
        };
        if r == 1 {
            let pos = coords.iter().any(|c| c[0] > tol);
            let neg = coords.iter().any(|c| c[0] < -tol);
            if pos && !neg {
                push(DVector::from_element(1, 1.0));
            } else if neg && !pos {
                push(DVector::from_element(1, -1.0));
            }
            return Ok(HalfspaceRep { inequalities, equalities });
        }
        for subset in combinations(k, r - 1) {
            let m = DMatrix::from_columns(&subset.iter().map(|&i| coords[i].clone()).collect::<Vec<_>>());
            let ns = linalg::null_space(&m.transpose(), tol);
            if ns.ncols() != 1 {
                continue;
            }
            let normal = ns.column(0).into_owned();
            let vals: Vec<f64> = coords.iter().map(|c| c.dot(&normal)).collect();
            if vals.iter().all(|v| *v >= -tol) {
                push(normal);
            } else if vals.iter().all(|v| *v <= tol) {
                push(-normal);
            }
        }
        Ok(HalfspaceRep { inequalities, equalities })
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl HalfspaceRep {
    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        let s = x.norm().max(1.0);
        self.inequalities.iter().all(|f| f.dot(x) >= -tol * s) && self.equalities.iter().all(|e| e.dot(x).abs() <= tol * s)
    }
}

/// Linear image `{E y : y0 >= |(y1, .., yd)|}` of the standard Lorentz cone.
#[derive(Clone, Debug)]
pub struct LorentzCone {
    embed: DMatrix<f64>,
}

impl LorentzCone {
    /// `embed` is `ambient x (d+1)` with full column rank.
    pub fn new(embed: DMatrix<f64>) -> Result<Self> {
        if linalg::rank(&embed, 1e-12) != embed.ncols() {
            return Err(ConeError::DimensionMismatch { expected: embed.ncols(), got: linalg::rank(&embed, 1e-12) });
        }
        Ok(Self { embed })
    }

    /// Standard cone `x0 >= |x|` in `R^{1+d}`.
    pub fn standard(d: usize) -> Self {
        Self { embed: DMatrix::identity(d + 1, d + 1) }
    }

    pub fn embed(&self) -> &DMatrix<f64> {
        &self.embed
    }

    pub fn ambient_dim(&self) -> usize {
        self.embed.nrows()
    }

    pub fn member(&self, x: &DVector<f64>, tol: f64) -> Result<bool> {
        if x.len() != self.ambient_dim() {
            return Err(ConeError::DimensionMismatch { expected: self.ambient_dim(), got: x.len() });
        }
        let y = self
            .embed
            .clone()
            .svd(true, true)
            .solve(x, 1e-14)
            .map_err(|e| ConeError::SolverFailure(e.to_string()))?;
        let s = x.norm().max(1.0);
        if (&self.embed * &y - x).norm() > tol * s {
            return Ok(false);
        }
        let spatial = y.rows(1, y.len() - 1).norm();
        Ok(y[0] >= spatial - tol * s)
    }

    /// Random point on the boundary ray family, `E (1, u)` with `|u| = 1`.
    fn sample_boundary(&self, rng: &mut ChaCha8Rng) -> DVector<f64> {
        let d = self.embed.ncols() - 1;
        let mut y = DVector::zeros(d + 1);
        let u = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        let u = if u.norm() > 0.0 { u.normalize() } else { u };
        y[0] = 1.0;
        y.rows_mut(1, d).copy_from(&u);
        &self.embed * y
    }
}

#[derive(Clone, Debug)]
pub enum Cone {
    Polyhedral(PolyhedralCone),
    Lorentz(LorentzCone),
}

impl Cone {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Cone::Polyhedral(c) => c.ambient_dim(),
            Cone::Lorentz(c) => c.ambient_dim(),
        }
    }

    pub fn member(&self, x: &DVector<f64>, tol: f64) -> Result<bool> {
        match self {
            Cone::Polyhedral(c) => c.member(x, tol),
            Cone::Lorentz(c) => c.member(x, tol),
        }
    }

    /// Points of the cone used for sampled checks.
    fn probe_points(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<DVector<f64>> {
        match self {
            Cone::Polyhedral(c) => c.generators().to_vec(),
            Cone::Lorentz(c) => (0..n).map(|_| c.sample_boundary(rng)).collect(),
        }
    }
}

/// Membership in a cone; see [`Cone::member`].
pub fn cone_member(c: &Cone, x: &DVector<f64>, tol: f64) -> Result<bool> {
    c.member(x, tol)
}

/// Options for sampled invariance checks.
#[derive(Clone, Copy, Debug)]
pub struct SampleOptions {
    pub samples: usize,
    pub max_time: f64,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self { samples: INVARIANCE_SAMPLES, max_time: 3.0, seed: 0, tol: 1e-9 }
    }
}

/// Largest violation of `e^{t ad h} C ⊆ C` over sampled times and probe points.
pub fn invariance_defect(c: &Cone, l: &LieAlgebra, h: &Element, opts: SampleOptions) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let ad = l.ad_matrix(h);
    let probes = c.probe_points(&mut rng, 16);
    let mut worst: f64 = 0.0;
    for _ in 0..opts.samples {
        let t = rng.random_range(-opts.max_time..=opts.max_time);
        let flow = (&ad * t).exp();
        for p in &probes {
            let img = &flow * p;
            let scale = img.norm().max(1e-300);
            let unit = img / scale;
            let d = match c {
                Cone::Polyhedral(pc) => pc.distance(&unit)?,
                Cone::Lorentz(lc) => {
                    if lc.member(&unit, opts.tol)? {
                        0.0
                    } else {
                        1.0
                    }
                }
            };
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// The graded parts `C_+ = C ∩ g_1` and `C_- = -C ∩ g_{-1}`.
#[derive(Clone, Debug)]
pub struct GradedParts {
    pub plus: PolyhedralCone,
    pub minus: PolyhedralCone,
}

/// Graded parts of an `e^{ad h}`-invariant cone, computed as `p_+(C)` and
/// `-p_-(C)` for the eigenprojections.
pub fn graded_cone_parts(c: &Cone, l: &LieAlgebra, h: &Element, g: &Grading, opts: SampleOptions) -> Result<GradedParts> {
    let d = l.dim();
    if c.ambient_dim() != d {
        return Err(ConeError::DimensionMismatch { expected: d, got: c.ambient_dim() });
    }
    let defect = invariance_defect(c, l, h, opts)?;
    if defect > 1e-7 {
        return Err(ConeError::NotInvariant { residual: defect });
    }
    let p_plus = g.projection(1);
    let p_minus = g.projection(-1);
    let (plus, minus) = match c {
        Cone::Polyhedral(pc) => (pc.image(&p_plus, 1e-10), pc.image(&(-&p_minus), 1e-10)),
        Cone::Lorentz(lc) => (lorentz_image(lc, &p_plus)?, lorentz_image(lc, &(-&p_minus))?),
    };
    let plus = plus.reduced(1e-9)?;
    let minus = minus.reduced(1e-9)?;
    let neg = |v: &DVector<f64>| -v;
    for gen in plus.generators() {
        if !c.member(gen, 1e-7)? || (&p_plus * gen - gen).amax() > 1e-9 {
            return Err(ConeError::NotInvariant { residual: gen.norm() });
        }
    }
    for gen in minus.generators() {
        if !c.member(&neg(gen), 1e-7)? || (&p_minus * gen - gen).amax() > 1e-9 {
            return Err(ConeError::NotInvariant { residual: gen.norm() });
        }
    }
    Ok(GradedParts { plus, minus })
}

/// Image `P(C)` of a Lorentz cone under a map of rank at most one.
fn lorentz_image(c: &LorentzCone, p: &DMatrix<f64>) -> Result<PolyhedralCone> {
    let m = p * c.embed();
    let d = m.nrows();
    let r = linalg::rank(&m, 1e-10);
    if r == 0 {
        return Ok(PolyhedralCone::zero(d));
    }
    if r > 1 {
        return Err(ConeError::NonPolyhedral { rank: r });
    }
    let svd = m.clone().svd(true, true);
    let (i, _) = svd.singular_values.argmax();
    let u = svd.u.expect("u").column(i).into_owned();
    let a = (u.transpose() * &m).transpose();
    let spatial = a.rows(1, a.len() - 1).norm();
    let mut gens = Vec::new();
    if a[0] >= spatial - 1e-12 {
        gens.push(u.clone());
    }
    if -a[0] >= spatial - 1e-12 {
        gens.push(-u.clone());
    }
    PolyhedralCone::new(d, gens)
}

/// Lie wedge `g_0 + C_+ + C_-`: an edge subspace plus a cone.
#[derive(Clone, Debug)]
pub struct LieWedge {
    pub edge: Subspace,
    pub cone: PolyhedralCone,
}

pub fn lie_wedge_lsw(g0_basis: &DMatrix<f64>, plus: &PolyhedralCone, minus: &PolyhedralCone) -> Result<LieWedge> {
    let d = g0_basis.nrows();
    if plus.ambient_dim() != d || minus.ambient_dim() != d {
        return Err(ConeError::DimensionMismatch { expected: d, got: plus.ambient_dim().max(minus.ambient_dim()) });
    }
    let gens = plus.generators().iter().chain(minus.generators()).cloned().collect();
    Ok(LieWedge {
        edge: Subspace::span(g0_basis, linalg::DEFAULT_TOL),
        cone: PolyhedralCone::new(d, gens)?,
    })
}

impl LieWedge {
    pub fn ambient_dim(&self) -> usize {
        self.edge.ambient_dim()
    }

    /// Membership after quotienting the edge.
    pub fn member(&self, x: &DVector<f64>, tol: f64) -> Result<bool> {
        let q = self.edge.complement_projector();
        let projected = self.cone.image(&q, 1e-12);
        projected.member(&(&q * x), tol)
    }

    /// Random element: Gaussian edge part plus exponential weights on the cone generators.
    pub fn sample(&self, rng: &mut impl Rng) -> DVector<f64> {
        let mut x = DVector::zeros(self.ambient_dim());
        for c in self.edge.basis().column_iter() {
            x += c * rng.sample::<f64, _>(StandardNormal);
        }
        for g in self.cone.generators() {
            x += g * (-rng.random::<f64>().max(1e-300).ln());
        }
        x
    }
}

/// Skew-hermitian images of a basis of a Lie algebra.
#[derive(Clone, Debug)]
pub struct FiniteDimRep {
    images: Vec<DMatrix<Complex64>>,
}

impl FiniteDimRep {
    pub fn new(l: &LieAlgebra, images: Vec<DMatrix<Complex64>>, tol: f64) -> Result<Self> {
        if images.len() != l.dim() {
            return Err(ConeError::DimensionMismatch { expected: l.dim(), got: images.len() });
        }
        for (index, m) in images.iter().enumerate() {
            let residual = (m + m.adjoint()).iter().fold(0.0_f64, |a, z| a.max(z.norm()));
            if residual > tol {
                return Err(ConeError::NotSkewHermitian { index, residual });
            }
        }
        let d = l.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut r = &images[i] * &images[j] - &images[j] * &images[i];
                for (k, img) in images.iter().enumerate() {
                    r -= img * Complex64::from(l.structure_constant(i, j, k));
                }
                worst = worst.max(r.iter().fold(0.0, |a, z| a.max(z.norm())));
            }
        }
        if worst > tol {
            return Err(ConeError::NotRepresentation { residual: worst });
        }
        Ok(Self { images })
    }

    /// Trivial representation on `C^n`.
    pub fn trivial(l: &LieAlgebra, n: usize) -> Self {
        Self { images: vec![DMatrix::zeros(n, n); l.dim()] }
    }

    pub fn image(&self, x: &Element) -> DMatrix<Complex64> {
        let n = self.images.first().map(|m| m.nrows()).unwrap_or(0);
        let mut out = DMatrix::zeros(n, n);
        for (xi, m) in x.iter().zip(&self.images) {
            out += m * Complex64::from(*xi);
        }
        out
    }
}

/// Smallest eigenvalue of `-i dU(x)`.
pub fn positive_cone_margin(rep: &FiniteDimRep, x: &Element) -> f64 {
    let m = rep.image(x) * Complex64::new(0.0, -1.0);
    if m.nrows() == 0 {
        return 0.0;
    }
    let herm = (&m + m.adjoint()) * Complex64::from(0.5);
    herm.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Whether `x` lies in the positive cone `{x : -i dU(x) >= 0}`.
pub fn positive_cone_member(rep: &FiniteDimRep, x: &Element, tol: f64) -> bool {
    positive_cone_margin(rep, x) >= -tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{self, EIGEN_TOL};

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    /// The invariant cone `{a^2 <= -bc, b >= 0, c <= 0}` of `sl2` in `(H, e, f)` coordinates.
    fn sl2_cone() -> Cone {
        let e = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, -1.0, 0.0, 1.0]);
        Cone::Lorentz(LorentzCone::new(e).unwrap())
    }

    #[test]
    fn nnls_matches_unconstrained_when_interior() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        let b = v(&[1.0, 2.0, 3.0]);
        let (x, r) = nnls(&a, &b).unwrap();
        assert!((x - v(&[1.0, 2.0])).amax() < 1e-12);
        assert!(r < 1e-12);
        let (x, _) = nnls(&a, &v(&[-1.0, -1.0, -2.0])).unwrap();
        assert_eq!(x, v(&[0.0, 0.0]));
    }

    #[test]
    fn ray_membership() {
        let c = PolyhedralCone::new(2, vec![v(&[1.0, 0.0])]).unwrap();
        assert!(c.member(&v(&[2.0, 0.0]), 1e-9).unwrap());
        assert!(!c.member(&v(&[-1.0, 0.0]), 1e-9).unwrap());
    }

    #[test]
    fn light_cone_membership() {
        let c = Cone::Lorentz(LorentzCone::standard(3));
        assert!(cone_member(&c, &v(&[1.0, 0.5, 0.0, 0.0]), 1e-9).unwrap());
        assert!(!cone_member(&c, &v(&[0.5, 1.0, 0.0, 0.0]), 1e-9).unwrap());
        assert!(cone_member(&c, &v(&[1.0, 0.6, 0.8, 0.0]), 1e-9).unwrap());
    }

    #[test]
    fn pointedness() {
        let quadrant = PolyhedralCone::new(2, vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        assert!(quadrant.is_pointed(1e-9).unwrap());
        let halfplane = quadrant.with_generator(v(&[-1.0, 0.0])).unwrap();
        assert!(!halfplane.is_pointed(1e-9).unwrap());
    }

    #[test]
    fn facets_of_a_square_cone() {
        let c = PolyhedralCone::new(
            3,
            vec![v(&[1.0, 1.0, 1.0]), v(&[1.0, -1.0, 1.0]), v(&[-1.0, 1.0, 1.0]), v(&[-1.0, -1.0, 1.0])],
        )
        .unwrap();
        let h = c.facets(1e-9).unwrap();
        assert_eq!(h.inequalities.len(), 4);
        assert!(h.equalities.is_empty());
        assert!(h.contains(&v(&[0.2, 0.3, 1.0]), 1e-9));
        assert!(!h.contains(&v(&[2.0, 0.0, 1.0]), 1e-9));
    }

    #[test]
    fn sl2_graded_parts() {
        let l = LieAlgebra::sl(2).unwrap();
        let h = v(&[0.5, 0.0, 0.0]);
        let g = liealg::grading(&l, &h, EIGEN_TOL).unwrap();
        let parts = graded_cone_parts(&sl2_cone(), &l, &h, &g, SampleOptions::default()).unwrap();
        assert_eq!(parts.plus.generators().len(), 1);
        assert!((parts.plus.generators()[0].normalize() - v(&[0.0, 1.0, 0.0])).amax() < 1e-12);
        assert_eq!(parts.minus.generators().len(), 1);
        assert!((parts.minus.generators()[0].normalize() - v(&[0.0, 0.0, 1.0])).amax() < 1e-12);
        let w = lie_wedge_lsw(&g.zero, &parts.plus, &parts.minus).unwrap();
        assert_eq!(w.edge.dim(), 1);
        assert!(w.member(&v(&[3.0, 1.0, 2.0]), 1e-9).unwrap());
        assert!(!w.member(&v(&[0.0, -1.0, 0.0]), 1e-9).unwrap());
    }

    #[test]
    fn zero_cone_has_empty_parts() {
        let l = LieAlgebra::sl(2).unwrap();
        let h = v(&[0.5, 0.0, 0.0]);
        let g = liealg::grading(&l, &h, EIGEN_TOL).unwrap();
        let c = Cone::Polyhedral(PolyhedralCone::zero(3));
        let parts = graded_cone_parts(&c, &l, &h, &g, SampleOptions::default()).unwrap();
        assert!(parts.plus.generators().is_empty() && parts.minus.generators().is_empty());
        let w = lie_wedge_lsw(&g.zero, &parts.plus, &parts.minus).unwrap();
        assert!(w.member(&v(&[2.0, 0.0, 0.0]), 1e-9).unwrap());
        assert!(!w.member(&v(&[0.0, 1.0, 0.0]), 1e-9).unwrap());
    }

    #[test]
    fn non_invariant_cone_is_rejected() {
        let l = LieAlgebra::sl(2).unwrap();
        let h = v(&[0.5, 0.0, 0.0]);
        let g = liealg::grading(&l, &h, EIGEN_TOL).unwrap();
        let c = Cone::Polyhedral(PolyhedralCone::new(3, vec![v(&[0.0, 1.0, 1.0])]).unwrap());
        assert!(matches!(
            graded_cone_parts(&c, &l, &h, &g, SampleOptions::default()),
            Err(ConeError::NotInvariant { .. })
        ));
    }

    #[test]
    fn positive_cone_of_a_line() {
        let l = LieAlgebra::from_structure_constants(1, vec!["t".into()], vec![0.0]).unwrap();
        let p = DMatrix::from_diagonal(&DVector::from_vec(vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0)]));
        let rep = FiniteDimRep::new(&l, vec![p], 1e-12).unwrap();
        assert!(positive_cone_member(&rep, &v(&[1.0]), 1e-9));
        assert!(!positive_cone_member(&rep, &v(&[-1.0]), 1e-9));
        assert!(positive_cone_member(&FiniteDimRep::trivial(&l, 3), &v(&[-5.0]), 1e-9));
    }

    #[test]
    fn non_skew_image_is_rejected() {
        let l = LieAlgebra::from_structure_constants(1, vec!["t".into()], vec![0.0]).unwrap();
        let m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        assert!(matches!(FiniteDimRep::new(&l, vec![m], 1e-12), Err(ConeError::NotSkewHermitian { .. })));
    }
}
