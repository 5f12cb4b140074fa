//! Maximal and minimal nets of real subspaces over finite wedge families in
//! Minkowski space, the equivalences for `H^max(W) = V`, regularity probes and
//! the degenerate part `V_G`.
//!
//! With a finite family the intersection defining `H^max` runs over fewer
//! wedges, so it can only be larger than the continuum net; likewise `H^min`
//! can only be smaller.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::causal::{is_future_causal, is_future_timelike, IsometryElement};
use crate::linalg::{Subspace, DEFAULT_TOL};
use crate::stdsp::{self, AntiUnitaryOp, CMat, ModularPair, RealSubspace, StdspError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetError {
    #[error("cannot certify inclusion of region into wedge {member}")]
    AmbiguousInclusion { member: usize },
    #[error("precondition {0:?} violated")]
    PreconditionViolated(Axiom),
    #[error("representation is not a homomorphism on members ({i}, {j}) (residual {residual:e})")]
    NotHomomorphism { i: usize, j: usize, residual: f64 },
    #[error("expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Stdsp(#[from] StdspError),
}

pub type Result<T> = std::result::Result<T, NetError>;

/// Net axioms checked by [`sandwich_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Iso,
    Cov,
    Base,
}

/// Open half-space `normal . x > offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpace {
    pub normal: DVector<f64>,
    pub offset: f64,
}

/// The two null half-spaces `x1 + x0 > 0` and `x1 - x0 > 0` of `g . W_R`.
pub fn wedge_halfspaces(g: &IsometryElement) -> [HalfSpace; 2] {
    let n = g.dim();
    let linv_t = g.inverse().lorentz.transpose();
    let make = |s: f64| {
        let mut a = DVector::zeros(n);
        a[0] = s;
        a[1] = 1.0;
        let normal = &linv_t * a;
        let offset = normal.dot(&g.translation);
        HalfSpace { normal, offset }
    };
    [make(1.0), make(-1.0)]
}

/// Region descriptors.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    /// `g . W_R`.
    Wedge(IsometryElement),
    /// Interior of the intersection of wedges `g_i . W_R`.
    Hull(Vec<IsometryElement>),
    /// Open double cone `I^+(p) ∩ I^-(q)`.
    Diamond { p: DVector<f64>, q: DVector<f64> },
    /// A finite point sample standing in for a region.
    Points(Vec<DVector<f64>>),
    Whole,
    Empty,
}

impl Region {
    pub fn base(n: usize) -> Self {
        Region::Wedge(IsometryElement::identity(n))
    }

    pub fn transform(&self, g: &IsometryElement) -> Self {
        match self {
            Region::Wedge(k) => Region::Wedge(g.compose(k)),
            Region::Hull(ks) => Region::Hull(ks.iter().map(|k| g.compose(k)).collect()),
            Region::Diamond { p, q } => {
                let (a, b) = (g.apply(p), g.apply(q));
                if g.is_orthochronous() { Region::Diamond { p: a, q: b } } else { Region::Diamond { p: b, q: a } }
            }
            Region::Points(xs) => Region::Points(xs.iter().map(|x| g.apply(x)).collect()),
            Region::Whole => Region::Whole,
            Region::Empty => Region::Empty,
        }
    }

    fn halfspaces(&self) -> Option<Vec<HalfSpace>> {
        match self {
            Region::Wedge(g) => Some(wedge_halfspaces(g).to_vec()),
            Region::Hull(gs) => Some(gs.iter().flat_map(wedge_halfspaces).collect()),
            _ => None,
        }
    }
}

/// Inclusion of an open polyhedron `{A x > b}` (assumed nonempty) in the half-space `h`,
/// by affine Farkas: the best `lambda >= 0` with `A^T lambda = c` must reach `lambda . b >= gamma`.
fn polyhedron_in_halfspace(poly: &[HalfSpace], h: &HalfSpace, tol: f64) -> bool {
    let n = h.normal.len();
    let m = poly.len();
    let scale = h.normal.norm().max(1.0);
    let mut best = f64::NEG_INFINITY;
    let mut subset = Vec::new();
    for size in 1..=n.min(m) {
        subset.clear();
        subset.extend(0..size);
        loop {
            let a = DMatrix::from_fn(n, size, |r, c| poly[subset[c]].normal[r]);
            let svd = a.clone().svd(true, true);
            if svd.singular_values.min() > 1e-12 * svd.singular_values.max().max(1.0) {
                if let Ok(lambda) = svd.solve(&h.normal, 1e-14) {
                    let resid = (&a * &lambda - &h.normal).norm();
                    if resid <= tol * scale && lambda.iter().all(|&x| x >= -tol) {
                        let value: f64 = subset.iter().zip(lambda.iter()).map(|(&i, l)| l * poly[i].offset).sum();
                        best = best.max(value);
                    }
                }
            }
            if !next_subset(&mut subset, m) {
                break;
            }
        }
    }
    best >= h.offset - tol * scale.max(h.offset.abs())
}

fn next_subset(s: &mut [usize], m: usize) -> bool {
    let k = s.len();
    for i in (0..k).rev() {
        if s[i] < m - k + i {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Decide `a ⊆ b`. `member` labels the error for sampled regions near a boundary.
pub fn region_subset(a: &Region, b: &Region, member: usize, tol: f64) -> Result<bool> {
    match (a, b) {
        (Region::Empty, _) => Ok(true),
        (_, Region::Whole) => Ok(true),
        (Region::Points(xs), _) if xs.is_empty() => Ok(true),
        (Region::Whole, _) => Ok(false),
        (_, Region::Empty) => Ok(false),
        (_, Region::Wedge(_) | Region::Hull(_)) => {
            let hs = b.halfspaces().expect("polyhedral region");
            for h in &hs {
                if !region_in_halfspace(a, h, member, tol)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Region::Wedge(_) | Region::Hull(_), _) => Ok(false),
        (Region::Diamond { p: p1, q: q1 }, Region::Diamond { p: p2, q: q2 }) => {
            Ok(is_future_causal(&(p1 - p2), tol) && is_future_causal(&(q2 - q1), tol))
        }
        (Region::Points(xs), Region::Diamond { p, q }) => {
            Ok(xs.iter().all(|x| is_future_timelike(&(x - p)) && is_future_timelike(&(q - x))))
        }
        (Region::Points(xs), Region::Points(ys)) => {
            Ok(xs.iter().all(|x| ys.iter().any(|y| (x - y).amax() <= tol)))
        }
        (Region::Diamond { .. }, Region::Points(_)) => Ok(false),
    }
}

fn region_in_halfspace(a: &Region, h: &HalfSpace, member: usize, tol: f64) -> Result<bool> {
    let scale = h.normal.norm().max(1.0);
    match a {
        Region::Empty => Ok(true),
        Region::Whole => Ok(false),
        Region::Wedge(_) | Region::Hull(_) => Ok(polyhedron_in_halfspace(&a.halfspaces().expect("polyhedral"), h, tol)),
        Region::Diamond { p, q } => {
            let mut dual = h.normal.clone();
            for k in 1..dual.len() {
                dual[k] = -dual[k];
            }
            let value = if is_future_causal(&dual, tol * scale) {
                h.normal.dot(p)
            } else if is_future_causal(&-&dual, tol * scale) {
                h.normal.dot(q)
            } else {
                return Err(NetError::AmbiguousInclusion { member });
            };
            Ok(value >= h.offset - tol * scale)
        }
        Region::Points(xs) => {
            let mut ambiguous = false;
            for x in xs {
                let margin = h.normal.dot(x) - h.offset;
                if margin < -tol * scale {
                    return Ok(false);
                }
                if margin <= tol * scale {
                    ambiguous = true;
                }
            }
            if ambiguous { Err(NetError::AmbiguousInclusion { member }) } else { Ok(true) }
        }
    }
}

/// Finite list of Poincare elements; member `k` carries the wedge `g_k . W_R`.
#[derive(Clone, Debug)]
pub struct WedgeFamily {
    pub spacetime_dim: usize,
    pub members: Vec<IsometryElement>,
}

/// Family, representation on the members and the standard subspace `V` of the base wedge.
#[derive(Clone, Debug)]
pub struct NetConfig {
    pub family: WedgeFamily,
    pub ops: Vec<AntiUnitaryOp>,
    pub v: RealSubspace,
    pub tol: f64,
}

impl NetConfig {
    /// Checks that `U(g_i) U(g_j) = U(g_m)` whenever `g_i g_j = g_m` within the family.
    pub fn new(family: WedgeFamily, ops: Vec<AntiUnitaryOp>, v: RealSubspace, tol: f64) -> Result<Self> {
        if family.members.len() != ops.len() {
            return Err(NetError::DimensionMismatch { expected: family.members.len(), got: ops.len() });
        }
        let members = &family.members;
        for i in 0..members.len() {
            for j in 0..members.len() {
                let prod = members[i].compose(&members[j]);
                let hit = members.iter().position(|m| {
                    (&m.lorentz - &prod.lorentz).amax() < 1e-9 && (&m.translation - &prod.translation).amax() < 1e-9
                });
                if let Some(m) = hit {
                    let residual = (&ops[i].matrix * &ops[j].matrix - &ops[m].matrix).amax();
                    if residual > tol.max(1e-9) || ops[i].parity * ops[j].parity != ops[m].parity {
                        return Err(NetError::NotHomomorphism { i, j, residual });
                    }
                }
            }
        }
        Ok(Self { family, ops, v, tol })
    }

    pub fn n(&self) -> usize {
        self.v.ambient_dim() / 2
    }

    pub fn base_region(&self) -> Region {
        Region::base(self.family.spacetime_dim)
    }

    fn image(&self, k: usize) -> Subspace {
        stdsp::apply(&self.ops[k], &self.v)
    }

    /// Members `k` with `O ⊆ g_k W`.
    pub fn containing(&self, o: &Region) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (k, g) in self.family.members.iter().enumerate() {
            if region_subset(o, &Region::Wedge(g.clone()), k, self.tol)? {
                out.push(k);
            }
        }
        Ok(out)
    }

    /// Members `k` with `g_k W ⊆ O`.
    pub fn contained(&self, o: &Region) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (k, g) in self.family.members.iter().enumerate() {
            if region_subset(&Region::Wedge(g.clone()), o, k, self.tol)? {
                out.push(k);
            }
        }
        Ok(out)
    }

    /// `O^∧` restricted to the family: the hull of the family wedges containing `O`.
    pub fn enlargement(&self, o: &Region) -> Result<Region> {
        let ks = self.containing(o)?;
        Ok(if ks.is_empty() {
            Region::Whole
        } else {
            Region::Hull(ks.iter().map(|&k| self.family.members[k].clone()).collect())
        })
    }

    /// Blockwise model on `H_1 (+) H_2` over the same family.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(a, b)| a.direct_sum(b))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(self.family.clone(), ops, stdsp::direct_sum(&self.v, &other.v), self.tol)
    }

    /// Members `s` whose left action permutes the family wedges together with their subspaces.
    pub fn symmetries(&self) -> Vec<usize> {
        let members = &self.family.members;
        (0..members.len())
            .filter(|&s| {
                (0..members.len()).all(|k| {
                    let moved = Region::Wedge(members[s].compose(&members[k]));
                    let sub = stdsp::apply(&self.ops[s].compose(&self.ops[k]), &self.v);
                    (0..members.len()).any(|m| {
                        let target = Region::Wedge(members[m].clone());
                        matches!(region_subset(&moved, &target, m, self.tol), Ok(true))
                            && matches!(region_subset(&target, &moved, m, self.tol), Ok(true))
                            && sub.same_as(&self.image(m), 1e-8)
                    })
                })
            })
            .collect()
    }
}

/// `H^max(O)`: intersection of `U(g) V` over family wedges containing `O`; the whole space if none.
pub fn h_max(cfg: &NetConfig, o: &Region) -> Result<RealSubspace> {
    let ks = cfg.containing(o)?;
    if ks.is_empty() {
        return Ok(Subspace::whole(cfg.v.ambient_dim()));
    }
    let ops: Vec<AntiUnitaryOp> = ks.iter().map(|&k| cfg.ops[k].clone()).collect();
    Ok(stdsp::intersect_family(&cfg.v, &ops, DEFAULT_TOL))
}

/// `H^min(O)`: span of `U(g) V` over family wedges inside `O`; `{0}` if none.
pub fn h_min(cfg: &NetConfig, o: &Region) -> Result<RealSubspace> {
    let ks = cfg.contained(o)?;
    let mut out = Subspace::zero(cfg.v.ambient_dim());
    for k in ks {
        out = out.sum(&cfg.image(k), DEFAULT_TOL);
    }
    Ok(out)
}

/// Verdicts for the seven equivalent conditions on the base wedge `W`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectNetReport {
    /// (i) `U(g) V ⊆ V` for every family member with `g W ⊆ W`.
    pub compressors_in_sv: bool,
    /// First compressor violating (i).
    pub counterexample: Option<usize>,
    pub hmax_equals_v: bool,
    pub hmax_standard: bool,
    pub hmax_cyclic: bool,
    pub hmin_equals_v: bool,
    pub hmin_standard: bool,
    pub hmin_separating: bool,
    /// All seven verdicts agree.
    pub consistent: bool,
}

impl DirectNetReport {
    pub fn verdicts(&self) -> [bool; 7] {
        [
            self.compressors_in_sv,
            self.hmax_equals_v,
            self.hmax_standard,
            self.hmax_cyclic,
            self.hmin_equals_v,
            self.hmin_standard,
            self.hmin_separating,
        ]
    }
}

/// Evaluate the equivalences on the finite family. Condition (i) only sees compressors
/// present in the family, so a `true` there certifies the family, not the full semigroup.
pub fn direct_net_report(cfg: &NetConfig) -> Result<DirectNetReport> {
    let w = cfg.base_region();
    let mut counterexample = None;
    for k in cfg.contained(&w)? {
        if !cfg.v.contains(&cfg.image(k), 1e-8) {
            counterexample = Some(k);
            break;
        }
    }
    let hmax = h_max(cfg, &w)?;
    let hmin = h_min(cfg, &w)?;
    let report = DirectNetReport {
        compressors_in_sv: counterexample.is_none(),
        counterexample,
        hmax_equals_v: hmax.same_as(&cfg.v, 1e-8),
        hmax_standard: stdsp::is_standard(&hmax),
        hmax_cyclic: stdsp::is_cyclic(&hmax),
        hmin_equals_v: hmin.same_as(&cfg.v, 1e-8),
        hmin_standard: stdsp::is_standard(&hmin),
        hmin_separating: stdsp::is_separating(&hmin),
        consistent: false,
    };
    let v = report.verdicts();
    Ok(DirectNetReport { consistent: v.iter().all(|&x| x == v[0]), ..report })
}

/// Check `H^min(O) ⊆ H(O) ⊆ H^max(O)` on the probes after verifying isotony and covariance
/// of the candidate (under the family symmetries) and `H(W) = V`.
pub fn sandwich_check(cfg: &NetConfig, candidate: &dyn Fn(&Region) -> RealSubspace, probes: &[Region]) -> Result<bool> {
    let tol = 1e-8;
    if !candidate(&cfg.base_region()).same_as(&cfg.v, tol) {
        return Err(NetError::PreconditionViolated(Axiom::Base));
    }
    let values: Vec<Subspace> = probes.iter().map(candidate).collect();
    for (i, a) in probes.iter().enumerate() {
        for (j, b) in probes.iter().enumerate() {
            if i != j && matches!(region_subset(a, b, 0, cfg.tol), Ok(true)) && !values[j].contains(&values[i], tol) {
                return Err(NetError::PreconditionViolated(Axiom::Iso));
            }
        }
    }
    for s in cfg.symmetries() {
        let g = &cfg.family.members[s];
        for (o, value) in probes.iter().zip(&values) {
            let moved = candidate(&o.transform(g));
            if !moved.same_as(&stdsp::apply(&cfg.ops[s], value), tol) {
                return Err(NetError::PreconditionViolated(Axiom::Cov));
            }
        }
    }
    for (o, value) in probes.iter().zip(&values) {
        if !value.contains(&h_min(cfg, o)?, tol) || !h_max(cfg, o)?.contains(value, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cyclicity of `V_N = ⋂ U(g) V` over operators near the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub cyclic_rank: usize,
    pub regular: bool,
}

pub fn regularity_probe(v: &RealSubspace, ops_near_identity: &[AntiUnitaryOp], tol: f64) -> RegularityReport {
    let vn = stdsp::intersect_family(v, ops_near_identity, tol);
    let i = stdsp::complex_structure(v.ambient_dim() / 2);
    let sum = vn.sum(&vn.image(&i, tol), tol);
    RegularityReport { cyclic_rank: sum.dim(), regular: sum.dim() == v.ambient_dim() }
}

/// `V_G` against `V ∩ V'`, computed independently.
#[derive(Clone, Debug)]
pub struct DegeneracyReport {
    pub v_g: RealSubspace,
    pub v_cap_vprime: RealSubspace,
    pub equals_v_cap_vprime: bool,
}

pub fn degeneracy_report(v: &RealSubspace, ops: &[AntiUnitaryOp]) -> DegeneracyReport {
    let v_g = stdsp::intersect_family(v, ops, DEFAULT_TOL);
    let v_cap_vprime = v.intersect(&stdsp::symplectic_complement(v), DEFAULT_TOL);
    let equals = v_g.same_as(&v_cap_vprime, 1e-8);
    DegeneracyReport { v_g, v_cap_vprime, equals_v_cap_vprime: equals }
}

/// Modular unitary `Delta^{-it / 2 pi}` implementing the boost with rapidity `t`.
pub fn modular_boost(p: &ModularPair, t: f64) -> AntiUnitaryOp {
    p.delta_it(-t / (2.0 * std::f64::consts::PI))
}

/// Unitary `exp(iK)` with `K` hermitian and `J K J = K`, so that `J W J = W^{-1}`;
/// generic otherwise, so `W V != V`.
fn twisted_unitary(p: &ModularPair, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.n();
    let u = stdsp::random_unitary(&mut rng, n);
    let d = CMat::from_diagonal(&DVector::from_fn(n, |i, _| Complex64::new(0.3 + 0.4 * i as f64, 0.0)));
    let k0 = &u * d * u.adjoint();
    let k0r = stdsp::realify(&k0);
    let kr = 0.5 * (&k0r + &p.j * &k0r * &p.j);
    let k = stdsp::complexify(&kr);
    (k * Complex64::i()).exp()
}

/// Two-dimensional toy net on `C^2`: `V` is the graph subspace for `(lambda, 1/lambda)`,
/// boosts act by the modular group, `tau` by `J`, and the family is closed under `tau`.
/// With `counterexample`, the compressor translation `(0, 1)` acts by a unitary moving `V`.
pub fn graph_toy(lambda: f64, counterexample: bool, seed: u64) -> Result<NetConfig> {
    let p = ModularPair::canonical(&[lambda], 0);
    let v = stdsp::subspace_from_modular(&p)?;
    let tau = IsometryElement::wedge_reflection(2);
    let w = if counterexample { twisted_unitary(&p, seed) } else { CMat::identity(2, 2) };
    let w_op = AntiUnitaryOp::unitary(&w)?;
    let base: Vec<(IsometryElement, AntiUnitaryOp)> = vec![
        (IsometryElement::identity(2), AntiUnitaryOp::identity(2)),
        (IsometryElement::boost(2, 1, 0.7), modular_boost(&p, 0.7)),
        (IsometryElement::boost(2, 1, -0.7), modular_boost(&p, -0.7)),
        (IsometryElement::translation(&[0.0, 1.0]), w_op.clone()),
        (IsometryElement::translation(&[0.0, -1.0]), w_op.inverse()),
        (IsometryElement::translation(&[0.5, 1.0]), AntiUnitaryOp::identity(2)),
        (IsometryElement::translation(&[-0.5, -1.0]), AntiUnitaryOp::identity(2)),
    ];
    let mut members = Vec::new();
    let mut ops = Vec::new();
    for (g, u) in &base {
        members.push(g.clone());
        ops.push(u.clone());
    }
    for (g, u) in &base {
        members.push(tau.compose(g));
        ops.push(p.j_op().compose(u));
    }
    NetConfig::new(WedgeFamily { spacetime_dim: 2, members }, ops, v, 1e-9)
}

/// Probe regions for the toy nets.
pub fn toy_probes() -> Vec<Region> {
    let v = |a: f64, b: f64| DVector::from_vec(vec![a, b]);
    vec![
        Region::base(2),
        Region::Wedge(IsometryElement::translation(&[0.0, 1.0])),
        Region::Wedge(IsometryElement::wedge_reflection(2)),
        Region::Diamond { p: v(0.0, 1.0), q: v(0.5, 1.0) },
        Region::Diamond { p: v(-0.2, -2.0), q: v(0.2, -2.0) },
        Region::Points(vec![v(0.1, 3.0), v(-0.2, 4.0)]),
        Region::Whole,
        Region::Empty,
    ]
}

/// `V` on `C^1 (+) C^2`: a `Delta = 1` block fixed by the whole family and a moving graph
/// block, with modular flows and generic unitaries on the moving block.
pub fn moore_fixture(lambda: f64, seed: u64) -> (RealSubspace, Vec<AntiUnitaryOp>) {
    let p_fix = ModularPair::trivial(1);
    let p_mov = ModularPair::canonical(&[lambda], 0);
    let v = stdsp::direct_sum(
        &stdsp::subspace_from_modular(&p_fix).expect("trivial pair"),
        &stdsp::subspace_from_modular(&p_mov).expect("graph pair"),
    );
    let fix = AntiUnitaryOp::identity(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ops = vec![AntiUnitaryOp::identity(3)];
    for t in [0.4, -1.3] {
        ops.push(fix.direct_sum(&modular_boost(&p_mov, t)).expect("unitary"));
    }
    for _ in 0..3 {
        let u = AntiUnitaryOp::unitary(&stdsp::random_unitary(&mut rng, 2)).expect("unitary");
        ops.push(fix.direct_sum(&u).expect("unitary"));
    }
    (v, ops)
}

/// Graph-case `V` with only its modular flow as operator family.
pub fn flow_fixture(lambda: f64) -> (RealSubspace, Vec<AntiUnitaryOp>) {
    let p = ModularPair::canonical(&[lambda], 0);
    let v = stdsp::subspace_from_modular(&p).expect("graph pair");
    let ops = [0.0, 0.5, -1.0, 2.3].iter().map(|&t| modular_boost(&p, t)).collect();
    (v, ops)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v2(a: f64, b: f64) -> DVector<f64> {
        DVector::from_vec(vec![a, b])
    }

    #[test]
    fn wedge_inclusions() {
        let w = Region::base(4);
        let up = Region::Wedge(IsometryElement::translation(&[0.0, 1.0, 0.0, 0.0]));
        let down = Region::Wedge(IsometryElement::translation(&[0.0, -1.0, 0.0, 0.0]));
        assert!(region_subset(&up, &w, 0, 1e-9).unwrap());
        assert!(!region_subset(&down, &w, 0, 1e-9).unwrap());
        assert!(region_subset(&w, &down, 0, 1e-9).unwrap());
        let boosted = Region::Wedge(IsometryElement::boost(4, 1, 1.3));
        assert!(region_subset(&boosted, &w, 0, 1e-9).unwrap() && region_subset(&w, &boosted, 0, 1e-9).unwrap());
        let left = Region::Wedge(IsometryElement::wedge_reflection(4));
        assert!(!region_subset(&left, &w, 0, 1e-9).unwrap());
        let rotated = Region::Wedge(IsometryElement::rotation(4, 1, 2, 0.3));
        assert!(!region_subset(&rotated, &w, 0, 1e-9).unwrap());
    }

    #[test]
    fn diamond_inclusions() {
        let w = Region::base(2);
        let inside = Region::Diamond { p: v2(0.0, 1.0), q: v2(0.5, 1.0) };
        let straddle = Region::Diamond { p: v2(-1.0, 0.0), q: v2(1.0, 0.0) };
        assert!(region_subset(&inside, &w, 0, 1e-9).unwrap());
        assert!(!region_subset(&straddle, &w, 0, 1e-9).unwrap());
        assert!(region_subset(&inside, &straddle, 0, 1e-9).is_ok());
        let edge = Region::Points(vec![v2(0.0, 0.0)]);
        assert_eq!(region_subset(&edge, &w, 3, 1e-9), Err(NetError::AmbiguousInclusion { member: 3 }));
    }

    #[test]
    fn toy_all_true() {
        let cfg = graph_toy(4.0, false, 0).unwrap();
        let r = direct_net_report(&cfg).unwrap();
        assert_eq!(r.verdicts(), [true; 7]);
        assert!(r.consistent);
        assert!(h_max(&cfg, &cfg.base_region()).unwrap().same_as(&cfg.v, 1e-9));
        assert_eq!(h_max(&cfg, &Region::Whole).unwrap().dim(), 4);
        assert_eq!(h_min(&cfg, &Region::Empty).unwrap().dim(), 0);
        let all = h_min(&cfg, &Region::Whole).unwrap();
        assert_eq!(all.dim(), 4);
    }

    #[test]
    fn toy_counterexample() {
        let cfg = graph_toy(4.0, true, 1).unwrap();
        let r = direct_net_report(&cfg).unwrap();
        assert_eq!(r.counterexample, Some(3));
        assert_eq!(r.verdicts(), [false; 7]);
        assert!(r.consistent);
    }

    #[test]
    fn singleton_family() {
        let p = ModularPair::canonical(&[2.0], 0);
        let v = stdsp::subspace_from_modular(&p).unwrap();
        let cfg = NetConfig::new(
            WedgeFamily { spacetime_dim: 2, members: vec![IsometryElement::identity(2)] },
            vec![AntiUnitaryOp::identity(2)],
            v,
            1e-9,
        )
        .unwrap();
        assert_eq!(direct_net_report(&cfg).unwrap().verdicts(), [true; 7]);
    }

    #[test]
    fn covariance_and_sandwich() {
        for counterexample in [false, true] {
            let cfg = graph_toy(3.0, counterexample, 2).unwrap();
            let syms = cfg.symmetries();
            assert!(syms.contains(&0) && syms.contains(&7));
            let probes = toy_probes();
            let hmax = |o: &Region| h_max(&cfg, o).unwrap();
            let hmin = |o: &Region| h_min(&cfg, o).unwrap();
            if !counterexample {
                assert!(sandwich_check(&cfg, &hmax, &probes).unwrap());
                assert!(sandwich_check(&cfg, &hmin, &probes).unwrap());
            }
            let bad = |o: &Region| match o {
                Region::Whole => Subspace::zero(4),
                _ => h_max(&cfg, o).unwrap(),
            };
            if !counterexample {
                assert_eq!(sandwich_check(&cfg, &bad, &probes), Err(NetError::PreconditionViolated(Axiom::Iso)));
            }
        }
    }

    #[test]
    fn isotone_and_enlargement() {
        let good = graph_toy(4.0, false, 0).unwrap();
        let cfg = graph_toy(4.0, true, 5).unwrap();
        let probes = toy_probes();
        for a in &probes {
            let hull = cfg.enlargement(a).unwrap();
            assert!(h_max(&cfg, &hull).unwrap().same_as(&h_max(&cfg, a).unwrap(), 1e-9));
            assert!(h_max(&good, a).unwrap().contains(&h_min(&good, a).unwrap(), 1e-8));
            for b in &probes {
                if region_subset(a, b, 0, 1e-9).unwrap_or(false) {
                    assert!(h_max(&cfg, b).unwrap().contains(&h_max(&cfg, a).unwrap(), 1e-8));
                    assert!(h_min(&cfg, b).unwrap().contains(&h_min(&cfg, a).unwrap(), 1e-8));
                }
            }
        }
    }

    #[test]
    fn direct_sum_of_nets() {
        let a = graph_toy(4.0, true, 1).unwrap();
        let b = graph_toy(2.0, false, 0).unwrap();
        let ab = a.direct_sum(&b).unwrap();
        for o in toy_probes() {
            let lhs = h_max(&ab, &o).unwrap();
            let rhs = stdsp::direct_sum(&h_max(&a, &o).unwrap(), &h_max(&b, &o).unwrap());
            assert!(lhs.same_as(&rhs, 1e-8));
        }
    }

    #[test]
    fn regularity() {
        let p = ModularPair::canonical(&[4.0], 0);
        let v = stdsp::subspace_from_modular(&p).unwrap();
        let r = regularity_probe(&v, &[AntiUnitaryOp::identity(2)], DEFAULT_TOL);
        assert_eq!(r, RegularityReport { cyclic_rank: 4, regular: true });
        let flows: Vec<_> = [0.1, -0.2].iter().map(|&t| modular_boost(&p, t)).collect();
        assert!(regularity_probe(&v, &flows, DEFAULT_TOL).regular);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut ops = vec![AntiUnitaryOp::identity(2)];
        for _ in 0..2 {
            let x = stdsp::random_unitary(&mut rng, 2);
            let k = (x.clone() + x.adjoint()) * Complex64::new(0.05, 0.0);
            ops.push(AntiUnitaryOp::unitary(&(k * Complex64::i()).exp()).unwrap());
        }
        let r = regularity_probe(&v, &ops, DEFAULT_TOL);
        assert_eq!(r.cyclic_rank, 0);
        assert!(!r.regular);
    }

    #[test]
    fn degeneracy() {
        let v = stdsp::subspace_from_modular(&ModularPair::trivial(2)).unwrap();
        let r = degeneracy_report(&v, &[AntiUnitaryOp::identity(2)]);
        assert!(r.equals_v_cap_vprime && r.v_g.same_as(&v, 1e-9));
        let (v, ops) = flow_fixture(4.0);
        let r = degeneracy_report(&v, &ops);
        assert!(r.v_g.same_as(&v, 1e-9));
        assert_eq!(r.v_cap_vprime.dim(), 0);
        assert!(!r.equals_v_cap_vprime);
        let p = ModularPair::canonical(&[4.0], 0);
        let v = stdsp::subspace_from_modular(&p).unwrap();
        let r = degeneracy_report(&v, &[AntiUnitaryOp::identity(2), p.j_op()]);
        assert_eq!((r.v_g.dim(), r.v_cap_vprime.dim()), (0, 0));
        let (v, ops) = moore_fixture(3.0, 4);
        let r = degeneracy_report(&v, &ops);
        assert_eq!(r.v_g.dim(), 1);
        assert!(r.equals_v_cap_vprime);
    }
}
