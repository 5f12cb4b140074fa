//! Causal geometry of Minkowski space `R^{1,d}` and de Sitter space `dS^d`:
//! the right wedge, the boost flow and its vector field, positivity regions and
//! compression of the wedge by Poincare transformations.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::par::{self, Execution};

/// Tolerance for isometry and manifold checks.
pub const GEOM_TOL: f64 = 1e-9;
/// Sample points per random stream in sampled checks.
const CHUNK: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CausalError {
    #[error("point is not on the manifold (residual {residual:e})")]
    NotOnManifold { residual: f64 },
    #[error("transformation is not proper and orthochronous")]
    NotProper,
    #[error("matrix is not a Lorentz transformation (residual {residual:e})")]
    NotIsometry { residual: f64 },
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sample size must be positive")]
    EmptyRegionSample,
}

pub type Result<T> = std::result::Result<T, CausalError>;

/// A point `(x0, x1, .., xd)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimePoint {
    pub coords: DVector<f64>,
}

impl SpacetimePoint {
    pub fn new(coords: &[f64]) -> Self {
        Self { coords: DVector::from_column_slice(coords) }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Point `(sinh s, cosh s * n)` on `dS^d` for a unit vector `n`.
    pub fn de_sitter(s: f64, n: &[f64]) -> Self {
        let mut c = Vec::with_capacity(n.len() + 1);
        c.push(s.sinh());
        c.extend(n.iter().map(|x| s.cosh() * x));
        Self::new(&c)
    }
}

/// The Minkowski metric `diag(1, -1, .., -1)`.
pub fn eta(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| match (i, j) {
        (0, 0) => 1.0,
        _ if i == j => -1.0,
        _ => 0.0,
    })
}

pub fn minkowski_dot(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a[0] * b[0] - a.rows(1, a.len() - 1).dot(&b.rows(1, b.len() - 1))
}

/// Whether `v` lies in the open forward light cone.
pub fn is_future_timelike(v: &DVector<f64>) -> bool {
    v[0] > v.rows(1, v.len() - 1).norm()
}

/// Whether `v` lies in the closed forward light cone, up to `tol`.
pub fn is_future_causal(v: &DVector<f64>, tol: f64) -> bool {
    v[0] >= v.rows(1, v.len() - 1).norm() - tol
}

/// Light-cone coordinates `(x1 + x0, x1 - x0)`.
pub fn lightcone(x: &DVector<f64>) -> (f64, f64) {
    (x[1] + x[0], x[1] - x[0])
}

/// Open right wedge `|x0| < x1`.
pub fn in_wedge_wr(x: &SpacetimePoint) -> bool {
    let c = &x.coords;
    c.len() >= 2 && c[0].abs() < c[1]
}

/// Closed right wedge up to `tol`.
pub fn in_closed_wedge_wr(x: &DVector<f64>, tol: f64) -> bool {
    x[0].abs() <= x[1] + tol
}

/// Poincare transformation `x -> L x + t`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryElement {
    pub lorentz: DMatrix<f64>,
    pub translation: DVector<f64>,
}

impl IsometryElement {
    pub fn new(lorentz: DMatrix<f64>, translation: DVector<f64>) -> Result<Self> {
        let n = lorentz.nrows();
        if lorentz.ncols() != n || translation.len() != n {
            return Err(CausalError::DimensionMismatch { expected: n, got: translation.len() });
        }
        let e = eta(n);
        let residual = (lorentz.transpose() * &e * &lorentz - &e).amax();
        if residual > GEOM_TOL * lorentz.amax().max(1.0).powi(2) {
            return Err(CausalError::NotIsometry { residual });
        }
        Ok(Self { lorentz, translation })
    }

    pub fn identity(n: usize) -> Self {
        Self { lorentz: DMatrix::identity(n, n), translation: DVector::zeros(n) }
    }

    pub fn translation(v: &[f64]) -> Self {
        let n = v.len();
        Self { lorentz: DMatrix::identity(n, n), translation: DVector::from_column_slice(v) }
    }

    /// Boost with rapidity `t` in the `(x0, xk)` plane.
    pub fn boost(n: usize, k: usize, t: f64) -> Self {
        let mut l = DMatrix::identity(n, n);
        l[(0, 0)] = t.cosh();
        l[(k, k)] = t.cosh();
        l[(0, k)] = t.sinh();
        l[(k, 0)] = t.sinh();
        Self { lorentz: l, translation: DVector::zeros(n) }
    }

    /// Rotation by `angle` in the spatial `(xi, xj)` plane.
    pub fn rotation(n: usize, i: usize, j: usize, angle: f64) -> Self {
        let mut l = DMatrix::identity(n, n);
        l[(i, i)] = angle.cos();
        l[(j, j)] = angle.cos();
        l[(i, j)] = -angle.sin();
        l[(j, i)] = angle.sin();
        Self { lorentz: l, translation: DVector::zeros(n) }
    }

    /// The point reflection `(x0, x1, ..) -> (-x0, -x1, ..)` restricted to the first two coordinates.
    pub fn wedge_reflection(n: usize) -> Self {
        let mut l = DMatrix::identity(n, n);
        l[(0, 0)] = -1.0;
        l[(1, 1)] = -1.0;
        Self { lorentz: l, translation: DVector::zeros(n) }
    }

    /// From an affine `(n+1) x (n+1)` matrix `[[L, t], [0, 1]]`.
    pub fn from_affine(m: &DMatrix<f64>) -> Result<Self> {
        let n = m.nrows() - 1;
        Self::new(m.view((0, 0), (n, n)).into_owned(), m.view((0, n), (n, 1)).column(0).into_owned())
    }

    pub fn to_affine(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::identity(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(&self.lorentz);
        m.view_mut((0, n), (n, 1)).copy_from(&self.translation);
        m
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            lorentz: &self.lorentz * &other.lorentz,
            translation: &self.lorentz * &other.translation + &self.translation,
        }
    }

    pub fn inverse(&self) -> Self {
        let e = eta(self.dim());
        let linv = &e * self.lorentz.transpose() * &e;
        let t = -(&linv * &self.translation);
        Self { lorentz: linv, translation: t }
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.lorentz * x + &self.translation
    }

    pub fn is_orthochronous(&self) -> bool {
        self.lorentz[(0, 0)] > 0.0
    }

    pub fn is_proper(&self) -> bool {
        self.lorentz.determinant() > 0.0
    }

    /// Random proper orthochronous element built from boosts and rotations.
    pub fn random(rng: &mut impl Rng, n: usize, rapidity: f64, shift: f64) -> Self {
        let mut g = Self::identity(n);
        for k in 1..n {
            g = g.compose(&Self::boost(n, k, rng.random_range(-rapidity..=rapidity)));
        }
        for i in 1..n {
            for j in (i + 1)..n {
                g = g.compose(&Self::rotation(n, i, j, rng.random_range(-std::f64::consts::PI..=std::f64::consts::PI)));
            }
        }
        let t: Vec<f64> = (0..n).map(|_| rng.random_range(-shift..=shift)).collect();
        Self::translation(&t).compose(&g)
    }
}

/// Built-in Euler vector fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EulerFlow {
    /// The boost generator in the `(x0, x1)` plane.
    Boost01,
}

/// Vector field `h(x0, x1, ..) = (x1, x0, 0, ..)`.
pub fn modular_vector_field(kind: EulerFlow, m: &SpacetimePoint) -> DVector<f64> {
    match kind {
        EulerFlow::Boost01 => {
            let mut v = DVector::zeros(m.dim());
            v[0] = m.coords[1];
            v[1] = m.coords[0];
            v
        }
    }
}

/// Flow `exp(t h)` of the built-in Euler element.
pub fn flow(kind: EulerFlow, n: usize, t: f64) -> IsometryElement {
    match kind {
        EulerFlow::Boost01 => IsometryElement::boost(n, 1, t),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Minkowski,
    DeSitter,
}

/// Residual of the hyperboloid equation `|x|^2 - x0^2 = 1`.
pub fn de_sitter_residual(m: &SpacetimePoint) -> f64 {
    let c = &m.coords;
    (c.rows(1, c.len() - 1).norm_squared() - c[0] * c[0] - 1.0).abs()
}

fn check_de_sitter(m: &SpacetimePoint) -> Result<()> {
    let residual = de_sitter_residual(m);
    if residual > GEOM_TOL * m.coords.norm_squared().max(1.0) {
        Err(CausalError::NotOnManifold { residual })
    } else {
        Ok(())
    }
}

/// Whether the boost vector field at `m` is future-timelike.
pub fn positivity_region_member(space: Space, m: &SpacetimePoint) -> Result<bool> {
    let x = modular_vector_field(EulerFlow::Boost01, m);
    if space == Space::DeSitter {
        check_de_sitter(m)?;
        let tangency = minkowski_dot(&x, &m.coords);
        if tangency.abs() > GEOM_TOL * m.coords.norm_squared().max(1.0) {
            return Err(CausalError::NotOnManifold { residual: tangency.abs() });
        }
    }
    Ok(is_future_timelike(&x))
}

/// De Sitter wedge `W_R ∩ dS^d`.
pub fn wedge_region_ds_member(m: &SpacetimePoint) -> Result<bool> {
    check_de_sitter(m)?;
    Ok(in_wedge_wr(m))
}

/// Split sampled de Sitter points where the boost field is timelike into the
/// future-directed and past-directed classes.
pub fn timelike_components(points: &[SpacetimePoint]) -> (Vec<usize>, Vec<usize>) {
    let mut future = Vec::new();
    let mut past = Vec::new();
    for (i, m) in points.iter().enumerate() {
        let x = modular_vector_field(EulerFlow::Boost01, m);
        if is_future_timelike(&x) {
            future.push(i);
        } else if is_future_timelike(&-x) {
            past.push(i);
        }
    }
    (future, past)
}

/// Whether a proper orthochronous `g` maps `W_R` into itself: translation in
/// the closed wedge and Lorentz part a `(x0, x1)` boost times a rotation of the
/// remaining coordinates.
pub fn compression_member_poincare(g: &IsometryElement, tol: f64) -> Result<bool> {
    if !g.is_proper() || !g.is_orthochronous() {
        return Err(CausalError::NotProper);
    }
    let n = g.dim();
    let t = &g.translation;
    if t[0].abs() > t[1] + tol {
        return Ok(false);
    }
    let l = &g.lorentz;
    let scale = l.amax().max(1.0);
    for i in 0..2 {
        for j in 2..n {
            if l[(i, j)].abs() > tol * scale || l[(j, i)].abs() > tol * scale {
                return Ok(false);
            }
        }
    }
    let (a, b, c, d) = (l[(0, 0)], l[(0, 1)], l[(1, 0)], l[(1, 1)]);
    let is_boost = a > 0.0 && (a - d).abs() <= tol * scale && (b - c).abs() <= tol * scale && a * d - b * c > 0.0;
    if !is_boost {
        return Ok(false);
    }
    if n > 2 {
        let r = l.view((2, 2), (n - 2, n - 2)).into_owned();
        if r.determinant() <= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A region that can be sampled and tested pointwise.
pub trait SampledRegion: Sync {
    fn dim(&self) -> usize;
    fn contains(&self, x: &DVector<f64>) -> bool;
    fn sample(&self, rng: &mut ChaCha8Rng) -> DVector<f64>;
}

/// Transformed right wedge `frame . W_R`.
#[derive(Clone, Debug)]
pub struct WedgeRegion {
    pub frame: IsometryElement,
    frame_inv: IsometryElement,
}

impl WedgeRegion {
    pub fn new(frame: IsometryElement) -> Self {
        let frame_inv = frame.inverse();
        Self { frame, frame_inv }
    }

    pub fn standard(n: usize) -> Self {
        Self::new(IsometryElement::identity(n))
    }
}

/// Point of `W_R` with log-uniform light-cone coordinates in `[1e-6, 1e2]` and
/// uniform transverse coordinates in `[-10, 10]`.
pub fn sample_wr(rng: &mut impl Rng, n: usize) -> DVector<f64> {
    let lo = 1e-6_f64.ln();
    let hi = 1e2_f64.ln();
    let lp = rng.random_range(lo..hi).exp();
    let lm = rng.random_range(lo..hi).exp();
    let mut x = DVector::zeros(n);
    x[0] = 0.5 * (lp - lm);
    x[1] = 0.5 * (lp + lm);
    for k in 2..n {
        x[k] = rng.random_range(-10.0..10.0);
    }
    x
}

impl SampledRegion for WedgeRegion {
    fn dim(&self) -> usize {
        self.frame.dim()
    }

    fn contains(&self, x: &DVector<f64>) -> bool {
        let y = self.frame_inv.apply(x);
        y[0].abs() < y[1]
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> DVector<f64> {
        self.frame.apply(&sample_wr(rng, self.dim()))
    }
}

/// Random points on `dS^d`: `s` uniform in `[-s_max, s_max]`, direction uniform on the sphere.
pub fn sample_de_sitter(rng: &mut impl Rng, d: usize, s_max: f64) -> SpacetimePoint {
    let n = loop {
        let v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
        if v.norm() > 1e-12 {
            break v.normalize();
        }
    };
    SpacetimePoint::de_sitter(rng.random_range(-s_max..=s_max), n.as_slice())
}

#[derive(Clone, Debug, PartialEq)]
pub enum SampleVerdict {
    ConsistentIn,
    WitnessOut(DVector<f64>),
}

/// Sample `n` points of the region and look for one whose image under `g` leaves it.
pub fn sampled_compression_check(
    g: &IsometryElement,
    region: &dyn SampledRegion,
    n: usize,
    seed: u64,
    exec: Execution,
) -> Result<SampleVerdict> {
    if n == 0 {
        return Err(CausalError::EmptyRegionSample);
    }
    if g.dim() != region.dim() {
        return Err(CausalError::DimensionMismatch { expected: region.dim(), got: g.dim() });
    }
    let chunks = n.div_ceil(CHUNK);
    let hit = par::find_first(exec, 0..chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let count = CHUNK.min(n - c * CHUNK);
        (0..count).find_map(|_| {
            let x = region.sample(&mut rng);
            (!region.contains(&g.apply(&x))).then_some(x)
        })
    });
    Ok(match hit {
        Some((_, x)) => SampleVerdict::WitnessOut(x),
        None => SampleVerdict::ConsistentIn,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &[f64]) -> SpacetimePoint {
        SpacetimePoint::new(x)
    }

    #[test]
    fn wedge_examples() {
        assert!(in_wedge_wr(&p(&[0.0, 1.0, 0.0, 0.0])));
        assert!(!in_wedge_wr(&p(&[2.0, 1.0, 0.0, 0.0])));
        assert!(in_wedge_wr(&p(&[0.5, 0.6])));
    }

    #[test]
    fn vector_field_examples() {
        let f = |x: &[f64]| modular_vector_field(EulerFlow::Boost01, &p(x));
        assert_eq!(f(&[0.0, 1.0, 0.0, 0.0]).as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(f(&[0.0, 0.0, 1.0, 0.0]).as_slice(), &[0.0, 0.0, 0.0, 0.0]);
        assert_eq!(f(&[1.0, 0.0, 0.0, 0.0]).as_slice(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn vector_field_matches_flow_derivative() {
        let m = p(&[0.3, -1.2, 0.7, 2.0]);
        let step = 1e-6;
        let fwd = flow(EulerFlow::Boost01, 4, step).apply(&m.coords);
        let bwd = flow(EulerFlow::Boost01, 4, -step).apply(&m.coords);
        let fd = (fwd - bwd) / (2.0 * step);
        assert!((fd - modular_vector_field(EulerFlow::Boost01, &m)).amax() < 1e-8);
    }

    #[test]
    fn positivity_examples() {
        assert!(positivity_region_member(Space::DeSitter, &p(&[0.0, 1.0, 0.0, 0.0])).unwrap());
        assert!(!positivity_region_member(Space::DeSitter, &p(&[0.0, -1.0, 0.0, 0.0])).unwrap());
        assert!(!positivity_region_member(Space::Minkowski, &p(&[0.0, 0.0, 1.0, 0.0])).unwrap());
        assert!(matches!(
            positivity_region_member(Space::DeSitter, &p(&[0.0, 2.0, 0.0, 0.0])),
            Err(CausalError::NotOnManifold { .. })
        ));
    }

    #[test]
    fn de_sitter_wedge_examples() {
        assert!(wedge_region_ds_member(&p(&[0.0, 1.0, 0.0, 0.0])).unwrap());
        assert!(!wedge_region_ds_member(&p(&[0.0, -1.0, 0.0, 0.0])).unwrap());
        let x1 = (1.0_f64 + 0.09).sqrt();
        assert!(wedge_region_ds_member(&p(&[0.3, x1, 0.0, 0.0])).unwrap());
    }

    #[test]
    fn compression_examples() {
        let t = IsometryElement::translation(&[0.0, 1.0, 0.0, 0.0]);
        assert!(compression_member_poincare(&t, GEOM_TOL).unwrap());
        assert!(compression_member_poincare(&IsometryElement::boost(4, 1, 0.7), GEOM_TOL).unwrap());
        let r = IsometryElement::rotation(4, 1, 2, 0.4);
        assert!(!compression_member_poincare(&r, GEOM_TOL).unwrap());
        let region = WedgeRegion::standard(4);
        assert!(matches!(
            sampled_compression_check(&r, &region, 10_000, 0, Execution::Sequential).unwrap(),
            SampleVerdict::WitnessOut(_)
        ));
        let transverse = IsometryElement::rotation(4, 2, 3, 1.1);
        assert!(compression_member_poincare(&transverse, GEOM_TOL).unwrap());
        let time = IsometryElement::translation(&[1.0, 0.0, 0.0, 0.0]);
        assert!(!compression_member_poincare(&time, GEOM_TOL).unwrap());
        let refl = IsometryElement::wedge_reflection(4);
        assert_eq!(compression_member_poincare(&refl, GEOM_TOL), Err(CausalError::NotProper));
    }

    #[test]
    fn sampled_examples() {
        let region = WedgeRegion::standard(4);
        let small = IsometryElement::translation(&[0.01, 0.02, 0.0, 0.0]);
        assert_eq!(
            sampled_compression_check(&small, &region, 10_000, 0, Execution::Parallel).unwrap(),
            SampleVerdict::ConsistentIn
        );
        let id = IsometryElement::identity(4);
        assert_eq!(sampled_compression_check(&id, &region, 100, 0, Execution::Sequential).unwrap(), SampleVerdict::ConsistentIn);
        let time = IsometryElement::translation(&[1.0, 0.0, 0.0, 0.0]);
        match sampled_compression_check(&time, &region, 10_000, 0, Execution::Sequential).unwrap() {
            SampleVerdict::WitnessOut(x) => {
                assert!(region.contains(&x));
                assert!(!region.contains(&time.apply(&x)));
            }
            SampleVerdict::ConsistentIn => panic!("time translation must escape"),
        }
        assert_eq!(
            sampled_compression_check(&id, &region, 0, 0, Execution::Sequential),
            Err(CausalError::EmptyRegionSample)
        );
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let region = WedgeRegion::standard(3);
        let g = IsometryElement::translation(&[0.5, 0.1, 0.0]);
        let a = sampled_compression_check(&g, &region, 5000, 3, Execution::Sequential).unwrap();
        let b = sampled_compression_check(&g, &region, 5000, 3, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn isometry_group_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = IsometryElement::random(&mut rng, 4, 1.0, 2.0);
        let h = IsometryElement::random(&mut rng, 4, 1.0, 2.0);
        let x = DVector::from_vec(vec![0.1, 0.5, -0.3, 2.0]);
        let lhs = g.compose(&h).apply(&x);
        let rhs = g.apply(&h.apply(&x));
        assert!((lhs - rhs).amax() < 1e-10);
        assert!((g.inverse().apply(&g.apply(&x)) - x).amax() < 1e-10);
        assert!(IsometryElement::new(g.lorentz.clone(), g.translation.clone()).is_ok());
    }

    #[test]
    fn tangency_on_de_sitter() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let m = sample_de_sitter(&mut rng, 3, 2.0);
            assert!(de_sitter_residual(&m) < 1e-10);
            let x = modular_vector_field(EulerFlow::Boost01, &m);
            assert!(minkowski_dot(&x, &m.coords).abs() < 1e-10);
        }
    }
}
