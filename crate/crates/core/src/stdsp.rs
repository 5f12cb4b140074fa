//! Finite-dimensional standard subspaces.
//!
//! A complex space `C^n` is realified as `R^{2n}` with interleaved coordinates
//! `(Re z1, Im z1, Re z2, Im z2, ..)` and complex structure `I` (multiplication
//! by `i`). Antilinear maps are then ordinary real matrices anticommuting with
//! `I`, and `Im<x, y> = (I x)^T y`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::{self, hstack, null_space, rank_info, Subspace};

pub type CMat = DMatrix<Complex64>;
pub type RealSubspace = Subspace;

/// Tolerance for the modular relations of a pair `(Delta, J)`.
pub const MODULAR_TOL: f64 = 1e-10;
/// Tolerance for roundtrips and verified laws.
pub const LAW_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StdspError {
    #[error("not a modular pair: {0}")]
    NotModularPair(String),
    #[error("subspace is not standard (cyclic: {cyclic}, separating: {separating})")]
    NotStandard { cyclic: bool, separating: bool },
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("modular relation J Delta J = Delta^-1 fails (residual {residual:e})")]
    ModularRelationViolation { residual: f64 },
    #[error("operator is not (anti-)unitary with the stated parity (residual {residual:e})")]
    NotAntiUnitary { residual: f64 },
    #[error("{law} fails (residual {residual:e})")]
    LawViolation { law: &'static str, residual: f64 },
}

pub type Result<T> = std::result::Result<T, StdspError>;

/// Complex space `C^n` with its realification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexSpace {
    pub n: usize,
}

impl ComplexSpace {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn real_dim(&self) -> usize {
        2 * self.n
    }

    pub fn complex_structure(&self) -> DMatrix<f64> {
        complex_structure(self.n)
    }

    pub fn conjugation(&self) -> DMatrix<f64> {
        conjugation(self.n)
    }
}

/// Multiplication by `i` on `R^{2n}`.
pub fn complex_structure(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(2 * k + 1, 2 * k)] = 1.0;
        m[(2 * k, 2 * k + 1)] = -1.0;
    }
    m
}

/// Coordinate conjugation `z -> conj(z)`.
pub fn conjugation(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i == j, i % 2) {
        (true, 0) => 1.0,
        (true, _) => -1.0,
        _ => 0.0,
    })
}

/// Real form of a complex-linear map.
pub fn realify(a: &CMat) -> DMatrix<f64> {
    let (r, c) = a.shape();
    let mut m = DMatrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = a[(i, j)];
            m[(2 * i, 2 * j)] = z.re;
            m[(2 * i, 2 * j + 1)] = -z.im;
            m[(2 * i + 1, 2 * j)] = z.im;
            m[(2 * i + 1, 2 * j + 1)] = z.re;
        }
    }
    m
}

/// Complex form of a real matrix commuting with `I`.
pub fn complexify(m: &DMatrix<f64>) -> CMat {
    CMat::from_fn(m.nrows() / 2, m.ncols() / 2, |i, j| {
        Complex64::new(m[(2 * i, 2 * j)], m[(2 * i + 1, 2 * j)])
    })
}

/// Real form of the antilinear map `z -> A conj(z)`.
pub fn realify_antilinear(a: &CMat) -> DMatrix<f64> {
    realify(a) * conjugation(a.ncols())
}

pub fn realify_vec(v: &DVector<Complex64>) -> DVector<f64> {
    DVector::from_fn(2 * v.len(), |i, _| if i % 2 == 0 { v[i / 2].re } else { v[i / 2].im })
}

pub fn complexify_vec(v: &DVector<f64>) -> DVector<Complex64> {
    DVector::from_fn(v.len() / 2, |i, _| Complex64::new(v[2 * i], v[2 * i + 1]))
}

/// `a^s` for a positive-definite hermitian `a`.
pub fn herm_power(a: &CMat, s: f64) -> CMat {
    let eig = a.clone().symmetric_eigen();
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|x| Complex64::new(x.max(f64::MIN_POSITIVE).powf(s), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// The unitary `a^{it}` for a positive-definite hermitian `a`.
pub fn herm_flow(a: &CMat, t: f64) -> CMat {
    let eig = a.clone().symmetric_eigen();
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|x| Complex64::new(0.0, t * x.ln()).exp()));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Haar-distributed unitary from the QR decomposition of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DVector::from_fn(n, |i, _| {
        let d = r[(i, i)];
        if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) }
    });
    q * CMat::from_diagonal(&phases)
}

/// Real orthogonal operator that is unitary (`parity = 1`) or antiunitary (`parity = -1`).
#[derive(Clone, Debug, PartialEq)]
pub struct AntiUnitaryOp {
    pub matrix: DMatrix<f64>,
    pub parity: i8,
}

impl AntiUnitaryOp {
    pub fn new(matrix: DMatrix<f64>, parity: i8, tol: f64) -> Result<Self> {
        let n2 = matrix.nrows();
        if matrix.ncols() != n2 || !n2.is_multiple_of(2) {
            return Err(StdspError::DimensionMismatch { expected: n2, got: matrix.ncols() });
        }
        let i = complex_structure(n2 / 2);
        let orth = (matrix.transpose() * &matrix - DMatrix::identity(n2, n2)).amax();
        let law = (&i * &matrix - f64::from(parity) * &matrix * &i).amax();
        let residual = orth.max(law);
        if residual > tol || (parity != 1 && parity != -1) {
            return Err(StdspError::NotAntiUnitary { residual });
        }
        Ok(Self { matrix, parity })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: DMatrix::identity(2 * n, 2 * n), parity: 1 }
    }

    pub fn unitary(u: &CMat) -> Result<Self> {
        Self::new(realify(u), 1, LAW_TOL)
    }

    /// The antiunitary `z -> A conj(z)`.
    pub fn antiunitary(a: &CMat) -> Result<Self> {
        Self::new(realify_antilinear(a), -1, LAW_TOL)
    }

    pub fn complex_dim(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix * &other.matrix, parity: self.parity * other.parity }
    }

    pub fn inverse(&self) -> Self {
        Self { matrix: self.matrix.transpose(), parity: self.parity }
    }

    /// `self (+) other` on `C^{n1} (+) C^{n2}`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.parity != other.parity {
            return Err(StdspError::NotAntiUnitary { residual: 1.0 });
        }
        Ok(Self { matrix: linalg::block_diag(&self.matrix, &other.matrix), parity: self.parity })
    }
}

/// Modular data `(Delta, J)` with `J Delta J = Delta^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularPair {
    pub delta: CMat,
    pub j: DMatrix<f64>,
}

impl ModularPair {
    pub fn new(delta: CMat, j: DMatrix<f64>, tol: f64) -> Result<Self> {
        let n = delta.nrows();
        if delta.ncols() != n || j.shape() != (2 * n, 2 * n) {
            return Err(StdspError::DimensionMismatch { expected: 2 * n, got: j.nrows() });
        }
        let herm = (&delta - delta.adjoint()).camax();
        if herm > tol * delta.camax().max(1.0) {
            return Err(StdspError::NotModularPair(format!("Delta not hermitian (residual {herm:e})")));
        }
        let min_eig = delta.clone().symmetric_eigen().eigenvalues.min();
        if min_eig <= 0.0 {
            return Err(StdspError::NotModularPair(format!("Delta not positive definite (min eigenvalue {min_eig:e})")));
        }
        let jop = AntiUnitaryOp::new(j.clone(), -1, tol)
            .map_err(|_| StdspError::NotModularPair("J is not antiunitary".into()))?;
        let inv = (&jop.matrix * &jop.matrix - DMatrix::identity(2 * n, 2 * n)).amax();
        if inv > tol {
            return Err(StdspError::NotModularPair(format!("J is not an involution (residual {inv:e})")));
        }
        let d = realify(&delta);
        let dinv = realify(&herm_power(&delta, -1.0));
        let residual = (&j * &d * &j - &dinv).amax() / dinv.amax().max(1.0);
        if residual > tol {
            return Err(StdspError::ModularRelationViolation { residual });
        }
        Ok(Self { delta, j })
    }

    pub fn n(&self) -> usize {
        self.delta.nrows()
    }

    /// `Delta = 1`, `J` = coordinate conjugation.
    pub fn trivial(n: usize) -> Self {
        Self { delta: CMat::identity(n, n), j: conjugation(n) }
    }

    /// Pairs `(lambda, 1/lambda)` on consecutive coordinate pairs with `J(z1, z2) = (conj z2, conj z1)`,
    /// followed by `fixed` coordinates with `Delta = 1` and plain conjugation.
    pub fn canonical(lambdas: &[f64], fixed: usize) -> Self {
        let n = 2 * lambdas.len() + fixed;
        let mut diag = Vec::with_capacity(n);
        let mut a = CMat::zeros(n, n);
        for (k, &l) in lambdas.iter().enumerate() {
            diag.push(l);
            diag.push(1.0 / l);
            a[(2 * k, 2 * k + 1)] = Complex64::new(1.0, 0.0);
            a[(2 * k + 1, 2 * k)] = Complex64::new(1.0, 0.0);
        }
        for k in 2 * lambdas.len()..n {
            diag.push(1.0);
            a[(k, k)] = Complex64::new(1.0, 0.0);
        }
        let delta = CMat::from_diagonal(&DVector::from_iterator(n, diag.into_iter().map(|x| Complex64::new(x, 0.0))));
        Self { delta, j: realify_antilinear(&a) }
    }

    /// Conjugate by a unitary: `(U Delta U*, U J U*)`.
    pub fn conjugated(&self, u: &CMat) -> Self {
        let ur = realify(u);
        Self { delta: u * &self.delta * u.adjoint(), j: &ur * &self.j * ur.transpose() }
    }

    /// Random pair on `C^n` with eigenvalues of `Delta` in `[1/max_ratio, max_ratio]`.
    pub fn random(rng: &mut impl Rng, n: usize, max_ratio: f64) -> Self {
        let lambdas: Vec<f64> = (0..n / 2).map(|_| rng.random_range(0.0..max_ratio.ln()).exp()).collect();
        let base = Self::canonical(&lambdas, n % 2);
        base.conjugated(&random_unitary(rng, n))
    }

    pub fn delta_real(&self) -> DMatrix<f64> {
        realify(&self.delta)
    }

    pub fn delta_power(&self, s: f64) -> DMatrix<f64> {
        realify(&herm_power(&self.delta, s))
    }

    /// The modular unitary `Delta^{it}`.
    pub fn delta_it(&self, t: f64) -> AntiUnitaryOp {
        AntiUnitaryOp { matrix: realify(&herm_flow(&self.delta, t)), parity: 1 }
    }

    pub fn j_op(&self) -> AntiUnitaryOp {
        AntiUnitaryOp { matrix: self.j.clone(), parity: -1 }
    }

    /// Largest entrywise difference of `Delta` and `J` in real form.
    pub fn distance(&self, other: &Self) -> f64 {
        let d = (self.delta_real() - other.delta_real()).amax() / self.delta_real().amax().max(1.0);
        d.max((&self.j - &other.j).amax())
    }
}

/// Real subspace `Fix(J Delta^{1/2})`.
pub fn subspace_from_modular(p: &ModularPair) -> Result<RealSubspace> {
    let n = p.n();
    let t = &p.j * p.delta_power(0.5) - DMatrix::identity(2 * n, 2 * n);
    let v = Subspace::from_orthonormal(null_space(&t, LAW_TOL));
    if v.dim() != n || !is_standard(&v) {
        return Err(StdspError::NotModularPair(format!("fixed space has dimension {} of {n}", v.dim())));
    }
    Ok(v)
}

/// Polar decomposition `S = J Delta^{1/2}` of the Tomita operator of `V`.
pub fn modular_from_subspace(v: &RealSubspace) -> Result<ModularPair> {
    check_standard(v)?;
    let n = v.ambient_dim() / 2;
    let i = complex_structure(n);
    let b = v.basis();
    let ib = &i * b;
    let src = hstack(&[b, &ib], 2 * n);
    let dst = hstack(&[b, &(-&ib)], 2 * n);
    let src_inv = src.try_inverse().ok_or(StdspError::NotStandard { cyclic: true, separating: false })?;
    let s = dst * src_inv;
    let delta_r = s.transpose() * &s;
    let delta = complexify(&(0.5 * (&delta_r + delta_r.transpose())));
    let delta = (&delta + delta.adjoint()) * Complex64::new(0.5, 0.0);
    let j = s * realify(&herm_power(&delta, -0.5));
    Ok(ModularPair { delta, j })
}

/// `V' = (I V)^perp`, the kernel of `Im<., .>` against `V`.
pub fn symplectic_complement(v: &RealSubspace) -> RealSubspace {
    let i = complex_structure(v.ambient_dim() / 2);
    v.image(&i, LAW_TOL).orthogonal_complement(LAW_TOL)
}

fn warn_near(label: &str, info: &linalg::RankInfo) {
    if info.near_threshold(LAW_TOL) {
        log::warn!(
            "DegenerateRank: {label} rank {} is near the threshold (kept {:?}, cut {:?})",
            info.rank, info.smallest_kept, info.largest_cut
        );
    }
}

/// `V + IV` is the whole space.
pub fn is_cyclic(v: &RealSubspace) -> bool {
    let n2 = v.ambient_dim();
    let i = complex_structure(n2 / 2);
    let info = rank_info(&hstack(&[v.basis(), &(&i * v.basis())], n2), LAW_TOL);
    warn_near("V + IV", &info);
    info.rank == n2
}

/// `V ∩ IV = {0}`.
pub fn is_separating(v: &RealSubspace) -> bool {
    let n2 = v.ambient_dim();
    let i = complex_structure(n2 / 2);
    let info = rank_info(&hstack(&[v.basis(), &(&i * v.basis())], n2), LAW_TOL);
    warn_near("V + IV", &info);
    info.rank == 2 * v.dim()
}

pub fn is_standard(v: &RealSubspace) -> bool {
    is_cyclic(v) && is_separating(v)
}

fn check_standard(v: &RealSubspace) -> Result<()> {
    let (cyclic, separating) = (is_cyclic(v), is_separating(v));
    if cyclic && separating {
        Ok(())
    } else {
        Err(StdspError::NotStandard { cyclic, separating })
    }
}

/// `U V` without verification.
pub fn apply(u: &AntiUnitaryOp, v: &RealSubspace) -> RealSubspace {
    v.image(&u.matrix, LAW_TOL)
}

/// `U V`, verifying `U Delta^{it} U* = Delta_{UV}^{eps it}` at sampled `t` and `J_{UV} = U J U*`.
pub fn transform(u: &AntiUnitaryOp, v: &RealSubspace) -> Result<RealSubspace> {
    let p = modular_from_subspace(v)?;
    let uv = apply(u, v);
    let q = modular_from_subspace(&uv)?;
    let ur = &u.matrix;
    let mut residual = (&q.j - ur * &p.j * ur.transpose()).amax();
    for t in [0.3, -1.1, 2.7] {
        let lhs = ur * p.delta_it(t).matrix * ur.transpose();
        let rhs = q.delta_it(f64::from(u.parity) * t).matrix;
        residual = residual.max((lhs - rhs).amax());
    }
    if residual > LAW_TOL * 10.0 {
        return Err(StdspError::LawViolation { law: "transformation law", residual });
    }
    Ok(uv)
}

/// `V_A = ⋂ U(g) V` over the given operators.
pub fn intersect_family(v: &RealSubspace, ops: &[AntiUnitaryOp], tol: f64) -> RealSubspace {
    if ops.is_empty() {
        return v.clone();
    }
    let images: Vec<Subspace> = ops.iter().map(|u| apply(u, v)).collect();
    let refs: Vec<&Subspace> = images.iter().collect();
    Subspace::intersect_all(&refs, tol)
}

/// `V1 (+) V2` in `C^{n1} (+) C^{n2}`.
pub fn direct_sum(v1: &RealSubspace, v2: &RealSubspace) -> RealSubspace {
    let (a, b) = (v1.ambient_dim(), v2.ambient_dim());
    let mut m = DMatrix::zeros(a + b, v1.dim() + v2.dim());
    m.view_mut((0, 0), (a, v1.dim())).copy_from(v1.basis());
    m.view_mut((a, v1.dim()), (b, v2.dim())).copy_from(v2.basis());
    Subspace::from_orthonormal(m)
}

/// Doubled representation on `C^n (+) conj(C^n)`. The second summand is written
/// in conjugated coordinates, so an operator `T` on it acts as `conj(T)`.
#[derive(Clone, Debug)]
pub struct Doubling {
    pub n: usize,
    pub delta: CMat,
    pub j: DMatrix<f64>,
    pub subspace: RealSubspace,
    pub ops: Vec<AntiUnitaryOp>,
}

/// Double a unitary family. Each entry is `(U(g), U(tau g))`; `tilde U(g) = U(g) (+) U(tau g)`,
/// `tilde J(v, w) = (w, v)`, and `tilde V` is the graph of `Delta^{1/2}`.
pub fn doubling(ops: &[(CMat, CMat)], delta: &CMat) -> Result<Doubling> {
    let n = delta.nrows();
    let mut a = CMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        a[(k, n + k)] = Complex64::new(1.0, 0.0);
        a[(n + k, k)] = Complex64::new(1.0, 0.0);
    }
    let mut dt = CMat::zeros(2 * n, 2 * n);
    dt.view_mut((0, 0), (n, n)).copy_from(delta);
    dt.view_mut((n, n), (n, n)).copy_from(&herm_power(delta, -1.0).map(|z| z.conj()));
    let j = realify_antilinear(&a);
    let half = herm_power(delta, 0.5);
    let mut graph = CMat::zeros(2 * n, 2 * n);
    for k in 0..n {
        let mut e = DVector::zeros(n);
        e[k] = Complex64::new(1.0, 0.0);
        let img = (&half * &e).map(|z| z.conj());
        graph.view_mut((0, 2 * k), (n, 1)).copy_from(&e);
        graph.view_mut((n, 2 * k), (n, 1)).copy_from(&img);
        let ie = e.map(|z| z * Complex64::i());
        let iimg = (&half * &ie).map(|z| z.conj());
        graph.view_mut((0, 2 * k + 1), (n, 1)).copy_from(&ie);
        graph.view_mut((n, 2 * k + 1), (n, 1)).copy_from(&iimg);
    }
    let mut basis = DMatrix::zeros(4 * n, 2 * n);
    for c in 0..2 * n {
        basis.set_column(c, &realify_vec(&graph.column(c).into_owned()));
    }
    let subspace = Subspace::span(&basis, LAW_TOL);
    let mut tilde_ops = Vec::with_capacity(ops.len());
    for (u, ut) in ops {
        let mut m = CMat::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(u);
        m.view_mut((n, n), (n, n)).copy_from(&ut.map(|z| z.conj()));
        tilde_ops.push(AntiUnitaryOp::unitary(&m)?);
    }
    Ok(Doubling { n, delta: dt, j, subspace, ops: tilde_ops })
}

/// Kronecker product of complex matrices.
pub fn ckron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Closed real span of `v1 ⊗ v2`, with the modular data and complement law verified.
pub fn tensor(v1: &RealSubspace, v2: &RealSubspace) -> Result<RealSubspace> {
    let p1 = modular_from_subspace(v1)?;
    let p2 = modular_from_subspace(v2)?;
    let t = tensor_span(v1, v2);
    let p = modular_from_subspace(&t)?;
    let c1 = v1.ambient_dim() / 2;
    let c2 = v2.ambient_dim() / 2;
    let expected = ModularPair {
        delta: ckron(&p1.delta, &p2.delta),
        j: realify_antilinear(&ckron(&complexify(&(&p1.j * conjugation(c1))), &complexify(&(&p2.j * conjugation(c2))))),
    };
    let residual = p.distance(&expected);
    if residual > LAW_TOL * 10.0 {
        return Err(StdspError::LawViolation { law: "tensor modular data", residual });
    }
    let lhs = symplectic_complement(&t);
    let rhs = tensor_span(&symplectic_complement(v1), &symplectic_complement(v2));
    let residual = lhs.distance(&rhs);
    if lhs.dim() != rhs.dim() || residual > LAW_TOL * 10.0 {
        return Err(StdspError::LawViolation { law: "tensor complement law", residual });
    }
    Ok(t)
}

/// Real span of elementary tensors of basis vectors.
pub fn tensor_span(v1: &RealSubspace, v2: &RealSubspace) -> RealSubspace {
    let (c1, c2) = (v1.ambient_dim() / 2, v2.ambient_dim() / 2);
    let mut m = DMatrix::zeros(2 * c1 * c2, v1.dim() * v2.dim());
    let mut col = 0;
    for a in v1.basis().column_iter() {
        let za = complexify_vec(&a.into_owned());
        for b in v2.basis().column_iter() {
            let zb = complexify_vec(&b.into_owned());
            m.set_column(col, &realify_vec(&za.kronecker(&zb)));
            col += 1;
        }
    }
    Subspace::span(&m, LAW_TOL)
}

/// Standard subspace with `Delta = exp(-2 pi K)` and conjugation `J`.
pub fn bgl_pair(k: &CMat, j: &DMatrix<f64>) -> Result<(ModularPair, RealSubspace)> {
    let n = k.nrows();
    let herm = (k - k.adjoint()).camax();
    if herm > LAW_TOL * k.camax().max(1.0) {
        return Err(StdspError::NotModularPair(format!("K not hermitian (residual {herm:e})")));
    }
    let kr = realify(k);
    let residual = (j * &kr * j + &kr).amax() / kr.amax().max(1.0);
    if residual > LAW_TOL {
        return Err(StdspError::ModularRelationViolation { residual });
    }
    let eig = k.clone().symmetric_eigen();
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|x| Complex64::new((-2.0 * std::f64::consts::PI * x).exp(), 0.0)));
    let delta = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
    if j.shape() != (2 * n, 2 * n) {
        return Err(StdspError::DimensionMismatch { expected: 2 * n, got: j.nrows() });
    }
    let pair = ModularPair::new(delta, j.clone(), LAW_TOL)?;
    let v = subspace_from_modular(&pair)?;
    Ok((pair, v))
}

/// Largest `|Delta^{1/2} x - J x|` over an orthonormal basis of `V`.
pub fn kms_residual(p: &ModularPair, v: &RealSubspace) -> f64 {
    let r = p.delta_power(0.5) * v.basis() - &p.j * v.basis();
    r.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
}
