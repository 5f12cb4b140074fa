//! Abstract wedge space: Euler couples `(h, tau)`, the twisted adjoint action,
//! duality, and the order given by the compression semigroup
//! `S_W = exp(C_+) G_W exp(C_-)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::causal::{self, IsometryElement, SampleVerdict, WedgeRegion};
use crate::cones::{self, Cone, ConeError, PolyhedralCone, SampleOptions};
use crate::liealg::{self, Element, Grading, LieAlgebra, LieError};
use crate::par::{self, Execution};

/// Tolerance for automorphism and couple invariants.
pub const COUPLE_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WedgeError {
    #[error("Euler couple invariant violated: {what} (residual {residual:e})")]
    InvariantViolation { what: &'static str, residual: f64 },
    #[error("no geometric realization attached; cannot certify Out")]
    NoGeometricRealization,
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("semigroup membership needs an even element (parity +1)")]
    OddElement,
    #[error("invariant cone is not pointed")]
    NotPointed,
    #[error("wedge is not the base couple of the configuration")]
    UnsupportedWedge,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Causal(#[from] causal::CausalError),
}

pub type Result<T> = std::result::Result<T, WedgeError>;

/// Automorphism `Ad(g)` with its parity and an optional spacetime realization.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedGroupElement {
    pub matrix: DMatrix<f64>,
    pub parity: i8,
    pub geometry: Option<IsometryElement>,
}

impl GradedGroupElement {
    pub fn new(matrix: DMatrix<f64>, parity: i8) -> Self {
        Self { matrix, parity, geometry: None }
    }

    /// Checked constructor: `matrix` must be an automorphism of `l`.
    pub fn checked(l: &LieAlgebra, matrix: DMatrix<f64>, parity: i8, tol: f64) -> Result<Self> {
        if matrix.shape() != (l.dim(), l.dim()) {
            return Err(WedgeError::DimensionMismatch { expected: l.dim(), got: matrix.nrows() });
        }
        let g = Self::new(matrix, parity);
        let residual = g.automorphism_residual(l);
        if residual > tol || (parity != 1 && parity != -1) {
            return Err(WedgeError::InvariantViolation { what: "automorphism", residual });
        }
        Ok(g)
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(DMatrix::identity(dim, dim), 1)
    }

    pub fn with_geometry(mut self, g: IsometryElement) -> Self {
        self.geometry = Some(g);
        self
    }

    /// `exp(ad y)`.
    pub fn exp_ad(l: &LieAlgebra, y: &Element) -> Self {
        Self::new(l.ad_matrix(y).exp(), 1)
    }

    /// `Ad` of a Poincare transformation acting on `poincare(d)`; parity is the time orientation.
    pub fn poincare(l: &LieAlgebra, g: &IsometryElement) -> Result<Self> {
        let mats = l.matrices().ok_or(WedgeError::DimensionMismatch { expected: g.dim() + 1, got: 0 })?;
        let a = g.to_affine();
        let a_inv = g.inverse().to_affine();
        let mut m = DMatrix::zeros(l.dim(), l.dim());
        for (j, x) in mats.iter().enumerate() {
            if x.nrows() != a.nrows() {
                return Err(WedgeError::DimensionMismatch { expected: x.nrows(), got: a.nrows() });
            }
            let col = l
                .from_matrix(&(&a * x * &a_inv))
                .ok_or(WedgeError::InvariantViolation { what: "adjoint image outside algebra", residual: 1.0 })?;
            m.set_column(j, &col);
        }
        let parity = if g.is_orthochronous() { 1 } else { -1 };
        Ok(Self { matrix: m, parity, geometry: Some(g.clone()) })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        let geometry = match (&self.geometry, &other.geometry) {
            (Some(a), Some(b)) => Some(a.compose(b)),
            _ => None,
        };
        Self { matrix: &self.matrix * &other.matrix, parity: self.parity * other.parity, geometry }
    }

    pub fn inverse(&self) -> Self {
        let matrix = self.matrix.clone().try_inverse().unwrap_or_else(|| self.matrix.clone().pseudo_inverse(1e-14).expect("pinv"));
        Self { matrix, parity: self.parity, geometry: self.geometry.as_ref().map(|g| g.inverse()) }
    }

    /// Largest entry of `A[x, y] - [A x, A y]` over basis pairs.
    pub fn automorphism_residual(&self, l: &LieAlgebra) -> f64 {
        let d = l.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            let ai = self.matrix.column(i).into_owned();
            for j in (i + 1)..d {
                let aj = self.matrix.column(j).into_owned();
                let lhs = &self.matrix * l.bracket(&l.basis_vector(i), &l.basis_vector(j));
                let rhs = l.bracket(&ai, &aj);
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst / self.matrix.amax().max(1.0).powi(2)
    }
}

/// `eps(g) Ad(g) x`.
pub fn twisted_adjoint(g: &GradedGroupElement, x: &Element) -> Element {
    f64::from(g.parity) * (&g.matrix * x)
}

/// Euler couple `(h, tau)` with `tau` odd, `tau^2 = 1` and `tau h = h`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerCouple {
    pub h: Element,
    pub tau: GradedGroupElement,
}

impl EulerCouple {
    pub fn new(h: Element, tau: GradedGroupElement, tol: f64) -> Result<Self> {
        let w = Self { h, tau };
        w.verify(tol)?;
        Ok(w)
    }

    /// The couple `(h, tau_h)` for an Euler element `h`.
    pub fn standard(l: &LieAlgebra, h: &Element, tol: f64) -> Result<Self> {
        let tau = liealg::tau_h(l, h, tol)?;
        Self::new(h.clone(), GradedGroupElement::new(tau, -1), tol)
    }

    fn verify(&self, tol: f64) -> Result<()> {
        if self.tau.parity != -1 {
            return Err(WedgeError::InvariantViolation { what: "tau must be odd", residual: 1.0 });
        }
        let d = self.h.len();
        if self.tau.dim() != d {
            return Err(WedgeError::DimensionMismatch { expected: d, got: self.tau.dim() });
        }
        let scale = self.tau.matrix.amax().max(1.0);
        let sq = (&self.tau.matrix * &self.tau.matrix - DMatrix::identity(d, d)).amax() / (scale * scale);
        if sq > tol {
            return Err(WedgeError::InvariantViolation { what: "tau^2 = 1", residual: sq });
        }
        let fix = (&self.tau.matrix * &self.h - &self.h).amax() / (scale * self.h.amax().max(1.0));
        if fix > tol {
            return Err(WedgeError::InvariantViolation { what: "Ad(tau) h = h", residual: fix });
        }
        Ok(())
    }

    /// Whether `Ad(tau) = tau_h`.
    pub fn is_euler_couple(&self, l: &LieAlgebra, tol: f64) -> Result<bool> {
        let th = liealg::tau_h(l, &self.h, tol)?;
        Ok((th - &self.tau.matrix).amax() <= tol * self.tau.matrix.amax().max(1.0))
    }

    /// Largest difference of `h` and of `Ad(tau)`.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.h - &other.h).amax().max((&self.tau.matrix - &other.tau.matrix).amax())
    }
}

/// `g.(h, tau) = (eps(g) Ad(g) h, g tau g^{-1})`.
pub fn act_on_wedge(g: &GradedGroupElement, w: &EulerCouple) -> Result<EulerCouple> {
    if g.dim() != w.h.len() {
        return Err(WedgeError::DimensionMismatch { expected: w.h.len(), got: g.dim() });
    }
    let h = twisted_adjoint(g, &w.h);
    let tau = g.compose(&w.tau).compose(&g.inverse());
    EulerCouple::new(h, tau, COUPLE_TOL * g.matrix.amax().max(1.0).powi(2))
}

/// `W' = (-h, tau)`.
pub fn dual_wedge(w: &EulerCouple) -> EulerCouple {
    EulerCouple { h: -&w.h, tau: w.tau.clone() }
}

/// Predicate for membership in the stabilizer `G_W`.
#[derive(Clone)]
pub enum StabilizerTest {
    /// `s` fixes `h` and commutes with `tau`.
    FixesCouple,
    Custom(Arc<dyn Fn(&GradedGroupElement) -> bool + Send + Sync>),
}

impl fmt::Debug for StabilizerTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FixesCouple => write!(f, "FixesCouple"),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Budget for the certificate search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    pub starts: usize,
    pub iterations: usize,
    pub seed: u64,
    pub tol: f64,
    pub samples: usize,
    pub exec: Execution,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { starts: 200, iterations: 100, seed: 0, tol: 1e-8, samples: 100_000, exec: Execution::default() }
    }
}

/// Base couple, invariant cone, its graded parts and the stabilizer test.
#[derive(Clone, Debug)]
pub struct WedgeOrderConfig {
    pub algebra: LieAlgebra,
    pub base: EulerCouple,
    pub invariant_cone: Cone,
    pub plus: PolyhedralCone,
    pub minus: PolyhedralCone,
    pub g0_basis: DMatrix<f64>,
    pub stabilizer_test: StabilizerTest,
    /// Spacetime dimension when the base couple is the right wedge of Minkowski space.
    pub spacetime: Option<usize>,
    pub search: SearchOptions,
}

impl WedgeOrderConfig {
    /// Configuration for a pointed `e^{ad h}`-invariant cone, with graded parts computed from it.
    pub fn new(l: &LieAlgebra, base: EulerCouple, cone: Cone, tol: f64) -> Result<Self> {
        if let Cone::Polyhedral(p) = &cone {
            if !p.is_pointed(tol)? {
                return Err(WedgeError::NotPointed);
            }
        }
        let grading: Grading = liealg::grading(l, &base.h, liealg::EIGEN_TOL)?;
        let parts = cones::graded_cone_parts(&cone, l, &base.h, &grading, SampleOptions { tol, ..Default::default() })?;
        Ok(Self {
            algebra: l.clone(),
            base,
            invariant_cone: cone,
            plus: parts.plus,
            minus: parts.minus,
            g0_basis: grading.zero.clone(),
            stabilizer_test: StabilizerTest::FixesCouple,
            spacetime: None,
            search: SearchOptions::default(),
        })
    }

    /// Right wedge in `d`-dimensional Minkowski space with the boost in the `(x0, x1)` plane,
    /// the point reflection of that plane as `tau` and the forward light cone of translations.
    pub fn poincare(d: usize) -> Result<Self> {
        let l = LieAlgebra::poincare(d)?;
        let h = l.basis_vector(d);
        let tau = GradedGroupElement::poincare(&l, &IsometryElement::wedge_reflection(d))?;
        let base = EulerCouple::new(h, tau, COUPLE_TOL)?;
        let grading = liealg::grading(&l, &base.h, liealg::EIGEN_TOL)?;
        let mut plus = DVector::zeros(l.dim());
        plus[0] = 1.0;
        plus[1] = 1.0;
        let mut minus = DVector::zeros(l.dim());
        minus[0] = -1.0;
        minus[1] = 1.0;
        let mut embed = DMatrix::zeros(l.dim(), d);
        for mu in 0..d {
            embed[(mu, mu)] = 1.0;
        }
        Ok(Self {
            algebra: l.clone(),
            base,
            invariant_cone: Cone::Lorentz(cones::LorentzCone::new(embed)?),
            plus: PolyhedralCone::new(l.dim(), vec![plus])?,
            minus: PolyhedralCone::new(l.dim(), vec![minus])?,
            g0_basis: grading.zero.clone(),
            stabilizer_test: StabilizerTest::FixesCouple,
            spacetime: Some(d),
            search: SearchOptions::default(),
        })
    }

    pub fn with_search(mut self, search: SearchOptions) -> Self {
        self.search = search;
        self
    }

    pub fn with_stabilizer_test(mut self, test: StabilizerTest) -> Self {
        self.stabilizer_test = test;
        self
    }

    fn in_stabilizer(&self, s: &GradedGroupElement) -> bool {
        match &self.stabilizer_test {
            StabilizerTest::FixesCouple => {
                let tol = self.search.tol * 10.0 * s.matrix.amax().max(1.0).powi(2);
                let fix_h = (twisted_adjoint(s, &self.base.h) - &self.base.h).amax();
                let comm = (&s.matrix * &self.base.tau.matrix - &self.base.tau.matrix * &s.matrix).amax();
                fix_h <= tol && comm <= tol
            }
            StabilizerTest::Custom(f) => f(s),
        }
    }
}

/// Tri-state semigroup membership.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    In,
    Out,
    Unknown,
}

/// Tri-state order relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderVerdict {
    True,
    False,
    Unknown,
}

/// Whether `g ∈ S_W` for the base couple `W` of `cfg`. With `certify_out`, failing to find a
/// factorization without a geometric realization is an error instead of `Unknown`.
pub fn semigroup_member(cfg: &WedgeOrderConfig, w: &EulerCouple, g: &GradedGroupElement, certify_out: bool) -> Result<Verdict> {
    if g.parity != 1 {
        return Err(WedgeError::OddElement);
    }
    if g.dim() != cfg.algebra.dim() {
        return Err(WedgeError::DimensionMismatch { expected: cfg.algebra.dim(), got: g.dim() });
    }
    if w.distance(&cfg.base) > COUPLE_TOL {
        return Err(WedgeError::UnsupportedWedge);
    }
    if let (Some(_), Some(geom)) = (cfg.spacetime, &g.geometry) {
        return Ok(if causal::compression_member_poincare(geom, causal::GEOM_TOL)? { Verdict::In } else { Verdict::Out });
    }
    if factorization_search(cfg, g).is_some() {
        return Ok(Verdict::In);
    }
    if let (Some(d), Some(geom)) = (cfg.spacetime, &g.geometry) {
        let region = WedgeRegion::standard(d);
        let verdict = causal::sampled_compression_check(geom, &region, cfg.search.samples, cfg.search.seed, cfg.search.exec)?;
        if matches!(verdict, SampleVerdict::WitnessOut(_)) {
            return Ok(Verdict::Out);
        }
    }
    if certify_out && g.geometry.is_none() {
        return Err(WedgeError::NoGeometricRealization);
    }
    Ok(Verdict::Unknown)
}

/// Parameters `(c_+, y, c_-)` of a factorization `exp(ad c_+) exp(ad y) exp(ad c_-) = Ad(g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub c_plus: Element,
    pub y: Element,
    pub c_minus: Element,
    pub residual: f64,
}

struct Layout<'a> {
    cfg: &'a WedgeOrderConfig,
    np: usize,
    n0: usize,
    nm: usize,
}

impl Layout<'_> {
    fn split(&self, x: &DVector<f64>) -> (Element, Element, Element) {
        let d = self.cfg.algebra.dim();
        let mut cp = DVector::zeros(d);
        for (i, gen) in self.cfg.plus.generators().iter().enumerate() {
            cp += gen * (x[i] * x[i]);
        }
        let y = &self.cfg.g0_basis * x.rows(self.np, self.n0);
        let mut cm = DVector::zeros(d);
        for (i, gen) in self.cfg.minus.generators().iter().enumerate() {
            cm += gen * (x[self.np + self.n0 + i].powi(2));
        }
        (cp, y, cm)
    }

    fn product(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let (cp, y, cm) = self.split(x);
        let l = &self.cfg.algebra;
        l.ad_matrix(&cp).exp() * l.ad_matrix(&y).exp() * l.ad_matrix(&cm).exp()
    }

    fn len(&self) -> usize {
        self.np + self.n0 + self.nm
    }
}

/// Seeded multi-start Levenberg-Marquardt search for a factorization of `g`.
pub fn factorization_search(cfg: &WedgeOrderConfig, g: &GradedGroupElement) -> Option<Factorization> {
    let layout = Layout { cfg, np: cfg.plus.generators().len(), n0: cfg.g0_basis.ncols(), nm: cfg.minus.generators().len() };
    let target = g.matrix.clone();
    let scale = target.amax().max(1.0);
    let opts = cfg.search;
    let hit = par::find_first(opts.exec, 0..opts.starts, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(k as u64);
        let spread = if k == 0 { 0.0 } else { 1.0 + (k % 4) as f64 };
        let x0 = DVector::from_fn(layout.len(), |_, _| spread * rng.sample::<f64, _>(StandardNormal) * 0.5);
        let f = |x: &DVector<f64>| {
            let m = layout.product(x) - &target;
            DVector::from_column_slice(m.as_slice())
        };
        let (x, res) = levenberg_marquardt(&f, x0, opts.iterations, opts.tol * scale * 1e-2);
        if !(res <= opts.tol * scale) {
            return None;
        }
        let (cp, y, cm) = layout.split(&x);
        let s = GradedGroupElement::exp_ad(&cfg.algebra, &y);
        cfg.in_stabilizer(&s).then_some(Factorization { c_plus: cp, y, c_minus: cm, residual: res })
    });
    hit.map(|(_, f)| f)
}

/// Minimize `|f(x)|` with forward-difference Jacobians. Returns the point and the largest residual entry.
pub fn levenberg_marquardt<F>(f: &F, mut x: DVector<f64>, iterations: usize, target: f64) -> (DVector<f64>, f64)
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let n = x.len();
    let mut r = f(&x);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..iterations {
        if r.amax() <= target || n == 0 {
            break;
        }
        let mut jac = DMatrix::zeros(r.len(), n);
        for i in 0..n {
            let step = 1e-7 * x[i].abs().max(1.0);
            let mut xp = x.clone();
            xp[i] += step;
            jac.set_column(i, &((f(&xp) - &r) / step));
        }
        let jt = jac.transpose();
        let a = &jt * &jac;
        let grad = &jt * &r;
        let mut improved = false;
        while lambda < 1e12 {
            let mut damped = a.clone();
            for i in 0..n {
                damped[(i, i)] += lambda * (a[(i, i)] + 1e-12);
            }
            let Some(delta) = damped.cholesky().map(|c| c.solve(&grad)) else {
                lambda *= 4.0;
                continue;
            };
            let xn = &x - delta;
            let rn = f(&xn);
            let cn = rn.norm_squared();
            if cn.is_finite() && cn < cost {
                x = xn;
                r = rn;
                cost = cn;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    let res = r.amax();
    (x, res)
}

/// `W_1 = g_1.W <= W_2 = g_2.W` iff `g_2^{-1} g_1 ∈ S_W`.
pub fn wedge_leq(cfg: &WedgeOrderConfig, g1: &GradedGroupElement, g2: &GradedGroupElement) -> Result<OrderVerdict> {
    let g = g2.inverse().compose(g1);
    Ok(match semigroup_member(cfg, &cfg.base, &g, false)? {
        Verdict::In => OrderVerdict::True,
        Verdict::Out => OrderVerdict::False,
        Verdict::Unknown => OrderVerdict::Unknown,
    })
}

/// Random element `exp(ad y)` with Gaussian `y` of the given scale, optionally composed with `tau`.
pub fn random_element(rng: &mut impl Rng, l: &LieAlgebra, scale: f64, tau: Option<&GradedGroupElement>) -> GradedGroupElement {
    let y = DVector::from_fn(l.dim(), |_, _| scale * rng.sample::<f64, _>(StandardNormal));
    let g = GradedGroupElement::exp_ad(l, &y);
    match tau {
        Some(t) if rng.random_bool(0.5) => g.compose(t),
        _ => g,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> (LieAlgebra, EulerCouple) {
        let l = LieAlgebra::sl(2).unwrap();
        let h = l.element(&[0.5, 0.0, 0.0]).unwrap();
        let w = EulerCouple::standard(&l, &h, COUPLE_TOL).unwrap();
        (l, w)
    }

    fn sl2_config() -> WedgeOrderConfig {
        let (l, w) = sl2();
        let embed = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0, -1.0, 0.0, 1.0]);
        let cone = Cone::Lorentz(cones::LorentzCone::new(embed).unwrap());
        WedgeOrderConfig::new(&l, w, cone, 1e-9)
            .unwrap()
            .with_search(SearchOptions { starts: 40, iterations: 100, ..Default::default() })
    }

    #[test]
    fn twisted_adjoint_examples() {
        let x = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        assert_eq!(twisted_adjoint(&GradedGroupElement::identity(3), &x), x);
        assert_eq!(twisted_adjoint(&GradedGroupElement::new(DMatrix::identity(3, 3), -1), &x), -&x);
        let l = LieAlgebra::so(1, 2).unwrap();
        let rot = IsometryElement::rotation(3, 1, 2, std::f64::consts::PI);
        let mut a = rot.lorentz.clone();
        let ainv = rot.inverse().lorentz;
        let mats = l.matrices().unwrap();
        let mut m = DMatrix::zeros(3, 3);
        for (j, x) in mats.iter().enumerate() {
            m.set_column(j, &l.from_matrix(&(&a * x * &ainv)).unwrap());
        }
        a = m;
        let g = GradedGroupElement::checked(&l, a, 1, 1e-10).unwrap();
        let h = l.basis_vector(0);
        assert!((twisted_adjoint(&g, &h) + &h).amax() < 1e-12);
    }

    #[test]
    fn action_examples() {
        let (l, w) = sl2();
        let id = GradedGroupElement::identity(3);
        assert!(act_on_wedge(&id, &w).unwrap().distance(&w) < 1e-12);
        let dual = act_on_wedge(&w.tau, &w).unwrap();
        assert!(dual.distance(&dual_wedge(&w)) < 1e-12);
        let flow = GradedGroupElement::exp_ad(&l, &w.h);
        assert!(act_on_wedge(&flow, &w).unwrap().distance(&w) < 1e-10);
        assert!(dual_wedge(&dual_wedge(&w)).distance(&w) == 0.0);
        assert!(w.is_euler_couple(&l, 1e-9).unwrap());
    }

    #[test]
    fn action_and_duality_laws() {
        let (l, w) = sl2();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let g1 = random_element(&mut rng, &l, 0.5, Some(&w.tau));
            let g2 = random_element(&mut rng, &l, 0.5, Some(&w.tau));
            let lhs = act_on_wedge(&g1.compose(&g2), &w).unwrap();
            let rhs = act_on_wedge(&g1, &act_on_wedge(&g2, &w).unwrap()).unwrap();
            assert!(lhs.distance(&rhs) < 1e-8);
            let a = dual_wedge(&act_on_wedge(&g1, &w).unwrap());
            let b = act_on_wedge(&g1, &dual_wedge(&w)).unwrap();
            assert!(a.distance(&b) < 1e-8);
        }
    }

    #[test]
    fn centralizer_fixes_couple() {
        let cfg = WedgeOrderConfig::poincare(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let y = &cfg.g0_basis * DVector::from_fn(cfg.g0_basis.ncols(), |_, _| rng.sample::<f64, _>(StandardNormal));
            let s = GradedGroupElement::exp_ad(&cfg.algebra, &y);
            assert!(act_on_wedge(&s, &cfg.base).unwrap().distance(&cfg.base) < 1e-8);
        }
        assert!(cfg.base.is_euler_couple(&cfg.algebra, 1e-9).unwrap());
    }

    #[test]
    fn poincare_membership() {
        let cfg = WedgeOrderConfig::poincare(4).unwrap();
        let l = &cfg.algebra;
        let el = |g: IsometryElement| GradedGroupElement::poincare(l, &g).unwrap();
        let t = el(IsometryElement::translation(&[0.0, 1.0, 0.0, 0.0]));
        assert_eq!(semigroup_member(&cfg, &cfg.base, &t, true).unwrap(), Verdict::In);
        let t = el(IsometryElement::translation(&[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(semigroup_member(&cfg, &cfg.base, &t, true).unwrap(), Verdict::Out);
        let flow = GradedGroupElement::exp_ad(l, &(0.8 * &cfg.base.h));
        assert_eq!(semigroup_member(&cfg, &cfg.base, &flow, false).unwrap(), Verdict::In);
        let id = GradedGroupElement::identity(l.dim());
        let up = el(IsometryElement::translation(&[0.0, 1.0, 0.0, 0.0]));
        let down = el(IsometryElement::translation(&[0.0, -1.0, 0.0, 0.0]));
        assert_eq!(wedge_leq(&cfg, &id, &id).unwrap(), OrderVerdict::True);
        assert_eq!(wedge_leq(&cfg, &up, &el(IsometryElement::identity(4))).unwrap(), OrderVerdict::True);
        assert_eq!(wedge_leq(&cfg, &down, &el(IsometryElement::identity(4))).unwrap(), OrderVerdict::False);
        assert_eq!(semigroup_member(&cfg, &cfg.base, &cfg.base.tau, false), Err(WedgeError::OddElement));
    }

    #[test]
    fn poincare_numeric_search_agrees() {
        let cfg = WedgeOrderConfig::poincare(3).unwrap().with_search(SearchOptions { starts: 20, ..Default::default() });
        let g = GradedGroupElement::poincare(&cfg.algebra, &IsometryElement::translation(&[0.3, 1.0, 0.5])).unwrap();
        let plain = GradedGroupElement::new(g.matrix.clone(), 1);
        assert!(factorization_search(&cfg, &plain).is_some());
        let bad = GradedGroupElement::poincare(&cfg.algebra, &IsometryElement::translation(&[1.0, 0.0, 0.0])).unwrap();
        let plain = GradedGroupElement::new(bad.matrix.clone(), 1);
        assert!(factorization_search(&cfg, &plain).is_none());
        assert_eq!(semigroup_member(&cfg, &cfg.base, &plain, true), Err(WedgeError::NoGeometricRealization));
    }

    #[test]
    fn sl2_semigroup_closure() {
        let cfg = sl2_config();
        let l = &cfg.algebra;
        assert_eq!(cfg.plus.generators().len(), 1);
        let e = l.basis_vector(1);
        let f = l.basis_vector(2);
        let a = GradedGroupElement::exp_ad(l, &(0.7 * &e))
            .compose(&GradedGroupElement::exp_ad(l, &(0.4 * &cfg.base.h)))
            .compose(&GradedGroupElement::exp_ad(l, &(1.2 * &f)));
        let b = GradedGroupElement::exp_ad(l, &(0.2 * &e)).compose(&GradedGroupElement::exp_ad(l, &(0.5 * &f)));
        assert_eq!(semigroup_member(&cfg, &cfg.base, &a, false).unwrap(), Verdict::In);
        assert_eq!(semigroup_member(&cfg, &cfg.base, &b, false).unwrap(), Verdict::In);
        assert_eq!(semigroup_member(&cfg, &cfg.base, &a.compose(&b), false).unwrap(), Verdict::In);
        let back = GradedGroupElement::exp_ad(l, &(-1.0 * &e));
        assert_eq!(semigroup_member(&cfg, &cfg.base, &back, false).unwrap(), Verdict::Unknown);
    }

    #[test]
    fn invalid_couples() {
        let (l, w) = sl2();
        let even = GradedGroupElement::new(w.tau.matrix.clone(), 1);
        assert!(EulerCouple::new(w.h.clone(), even, COUPLE_TOL).is_err());
        let e = l.basis_vector(1);
        assert!(matches!(EulerCouple::new(e, w.tau.clone(), COUPLE_TOL), Err(WedgeError::InvariantViolation { .. })));
        let line = PolyhedralCone::new(3, vec![l.basis_vector(1), -l.basis_vector(1)]).unwrap();
        assert_eq!(WedgeOrderConfig::new(&l, w, Cone::Polyhedral(line), 1e-9).unwrap_err(), WedgeError::NotPointed);
    }
}
