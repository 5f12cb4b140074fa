//! Grid models of two one-particle representations: the U(1)-current on
//! `L^2(R_+, p dp)` in logarithmic momentum coordinates, and the affine group
//! acting on `L^2(R)`.
//!
//! Every quantity here is approximate. Diagnostics come with values at two
//! resolutions so that verdicts key off refinement trends.
//!
//! Vectors are stored as Hilbert-space samples `psi_j = sqrt(w_j) F(p_j)`, so
//! the grid inner product is the plain Euclidean one on `C^N`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, Subspace};
use crate::nets;
use crate::stdsp::{self, AntiUnitaryOp, CMat, RealSubspace};

pub type CVec = DVector<Complex64>;

/// Smallest accepted grid size.
pub const MIN_NODES: usize = 16;
/// Relative singular-value cut for dictionary spans.
pub const DICTIONARY_TOL: f64 = 1e-12;
/// Largest `pi * kappa` for which `Delta^{1/2}` is still representable.
const MAX_MODULAR_EXPONENT: f64 = 700.0;
/// Octaves of dyadic pieces used to stand in for a half-line.
const HALF_LINE_OCTAVES: std::ops::RangeInclusive<i32> = -8..=10;
const GL_PANEL_NODES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("grid too coarse: {nodes} nodes (need at least {min})")]
    ResolutionTooCoarse { nodes: usize, min: usize },
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("dilation generator ill-conditioned: pi * kappa_max = {exponent}")]
    GeneratorIllConditioned { exponent: f64 },
    #[error("empty test-function dictionary")]
    EmptyDictionary,
    #[error("operation requires the {0:?} model")]
    WrongModel(ModelKind),
}

pub type Result<T> = std::result::Result<T, ModelError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    /// `L^2(R_+, p dp)`, periodic log-spaced grid.
    U1Current,
    /// `L^2(R)`, uniform grid with Dirichlet ends.
    Affine,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub kind: ModelKind,
    /// Grid variable: `u = log p` for the current, `p` for the affine model.
    pub coords: Vec<f64>,
    /// Momentum values at the nodes.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub step: f64,
}

impl Grid {
    /// `n` nodes `u_j = log p_min + j h`, `h = log(p_max / p_min) / n`. Weights
    /// carry the measure `p dp = p^2 du`.
    pub fn log_spaced(n: usize, p_min: f64, p_max: f64) -> Result<Self> {
        if n < MIN_NODES {
            return Err(ModelError::ResolutionTooCoarse { nodes: n, min: MIN_NODES });
        }
        if !(p_min > 0.0 && p_max > p_min) {
            return Err(ModelError::InvalidRange { lo: p_min, hi: p_max });
        }
        let (u0, u1) = (p_min.ln(), p_max.ln());
        let step = (u1 - u0) / n as f64;
        let coords: Vec<f64> = (0..n).map(|j| u0 + j as f64 * step).collect();
        let nodes: Vec<f64> = coords.iter().map(|u| u.exp()).collect();
        let weights = nodes.iter().map(|p| p * p * step).collect();
        Ok(Self { kind: ModelKind::U1Current, coords, nodes, weights, step })
    }

    /// `n` equispaced nodes on `[-l, l]` including both ends.
    pub fn uniform(n: usize, l: f64) -> Result<Self> {
        if n < MIN_NODES {
            return Err(ModelError::ResolutionTooCoarse { nodes: n, min: MIN_NODES });
        }
        if !(l > 0.0) {
            return Err(ModelError::InvalidRange { lo: -l, hi: l });
        }
        let step = 2.0 * l / (n - 1) as f64;
        let coords: Vec<f64> = (0..n).map(|j| -l + j as f64 * step).collect();
        Ok(Self { kind: ModelKind::Affine, nodes: coords.clone(), coords, weights: vec![step; n], step })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Hilbert-space samples of the function `f(p)`.
    pub fn sample(&self, f: impl Fn(f64) -> Complex64) -> CVec {
        CVec::from_iterator(self.len(), self.nodes.iter().zip(&self.weights).map(|(&p, &w)| f(p) * w.sqrt()))
    }

    /// Hilbert-space samples given directly in the grid variable.
    pub fn sample_coords(&self, f: impl Fn(f64) -> Complex64) -> CVec {
        CVec::from_iterator(self.len(), self.coords.iter().map(|&u| f(u)))
    }

    /// Function values `F(p_j)` from Hilbert-space samples.
    pub fn values(&self, psi: &CVec) -> CVec {
        CVec::from_iterator(self.len(), psi.iter().zip(&self.weights).map(|(z, w)| z / w.sqrt()))
    }

    /// Quadrature of `conj(F) G` against the grid measure.
    pub fn inner(&self, f: &CVec, g: &CVec) -> Complex64 {
        f.iter().zip(g.iter()).zip(&self.weights).map(|((a, b), w)| a.conj() * b * w).sum()
    }
}

/// Translations, dilations, conjugation and the dilation generator on a grid.
///
/// `U(b, a) = translation(b) dilation(a)` realizes `e^{i b X(p)} a F(a p)` with
/// `X(p) = p` for the current and `X(p) = e^p` for the affine model, where the
/// dilation is a shift by `log a` in the grid variable.
#[derive(Clone, Debug)]
pub struct GridOperatorSet {
    pub grid: Grid,
    /// Spectral multipliers of the generator in FFT order (current only).
    kappa: Vec<f64>,
}

pub fn build_u1_current(n: usize, p_min: f64, p_max: f64) -> Result<GridOperatorSet> {
    let grid = Grid::log_spaced(n, p_min, p_max)?;
    let h = grid.step;
    let kappa = (0..n)
        .map(|j| {
            if 2 * j == n {
                return 0.0;
            }
            let theta = 2.0 * PI * signed_freq(j, n) as f64 / n as f64;
            (8.0 * theta.sin() - (2.0 * theta).sin()) / (6.0 * h)
        })
        .collect();
    Ok(GridOperatorSet { grid, kappa })
}

pub fn build_aff_rep(n: usize, l: f64) -> Result<GridOperatorSet> {
    Ok(GridOperatorSet { grid: Grid::uniform(n, l)?, kappa: Vec::new() })
}

fn signed_freq(j: usize, n: usize) -> i64 {
    if 2 * j <= n {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn fft(v: &CVec, inverse: bool) -> CVec {
    let n = v.len();
    let mut planner = FftPlanner::new();
    let plan = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    let mut buf: Vec<Complex64> = v.iter().cloned().collect();
    plan.process(&mut buf);
    let s = 1.0 / (n as f64).sqrt();
    CVec::from_iterator(n, buf.into_iter().map(|z| z * s))
}

/// Unitary DFT coefficients `c_j = <e_j, psi>`, `e_j(k) = e^{2 pi i jk/N} / sqrt N`.
pub fn dft(psi: &CVec) -> CVec {
    fft(psi, false)
}

pub fn idft(c: &CVec) -> CVec {
    fft(c, true)
}

impl GridOperatorSet {
    pub fn kind(&self) -> ModelKind {
        self.grid.kind
    }

    pub fn n(&self) -> usize {
        self.grid.len()
    }

    fn x_value(&self, p: f64) -> f64 {
        match self.kind() {
            ModelKind::U1Current => p,
            ModelKind::Affine => p.exp(),
        }
    }

    /// Diagonal of `translation(b)`.
    pub fn translation_phases(&self, b: f64) -> CVec {
        CVec::from_iterator(self.n(), self.grid.nodes.iter().map(|&p| Complex64::from_polar(1.0, b * self.x_value(p))))
    }

    pub fn translation(&self, b: f64) -> CMat {
        CMat::from_diagonal(&self.translation_phases(b))
    }

    /// Diagonal of the generator of `b -> translation(b)`, namely `i X(p)`.
    pub fn x_generator(&self) -> CVec {
        CVec::from_iterator(self.n(), self.grid.nodes.iter().map(|&p| Complex64::new(0.0, self.x_value(p))))
    }

    /// Dilation by `a > 0`, a shift by `log a` in the grid variable.
    ///
    /// The current uses band-limited (periodic) interpolation, which is an exact
    /// node roll when `log a` is a multiple of the step. The affine model shifts
    /// with linear interpolation and zero fill past the ends.
    pub fn apply_dilation(&self, a: f64, psi: &CVec) -> CVec {
        let t = a.ln();
        let n = self.n();
        let h = self.grid.step;
        let m = (t / h).round();
        let on_grid = (t / h - m).abs() < 1e-9;
        match self.kind() {
            ModelKind::U1Current if on_grid => {
                let m = m as i64;
                CVec::from_fn(n, |j, _| psi[(j as i64 + m).rem_euclid(n as i64) as usize])
            }
            ModelKind::U1Current => {
                let mut c = dft(psi);
                for (j, cj) in c.iter_mut().enumerate() {
                    let omega = if 2 * j == n { 0.0 } else { 2.0 * PI * signed_freq(j, n) as f64 / (n as f64 * h) };
                    *cj *= Complex64::from_polar(1.0, omega * t);
                }
                idft(&c)
            }
            ModelKind::Affine => CVec::from_fn(n, |j, _| {
                let x = j as f64 + t / h;
                let i0 = x.floor();
                let frac = x - i0;
                let at = |i: f64| {
                    if i < 0.0 || i >= n as f64 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        psi[i as usize]
                    }
                };
                if frac < 1e-12 {
                    at(i0)
                } else {
                    at(i0) * (1.0 - frac) + at(i0 + 1.0) * frac
                }
            }),
        }
    }

    pub fn dilation(&self, a: f64) -> CMat {
        let n = self.n();
        let mut m = CMat::zeros(n, n);
        for k in 0..n {
            let mut e = CVec::zeros(n);
            e[k] = Complex64::new(1.0, 0.0);
            m.set_column(k, &self.apply_dilation(a, &e));
        }
        m
    }

    /// `U(b, a) psi`.
    pub fn apply(&self, b: f64, a: f64, psi: &CVec) -> CVec {
        self.apply_dilation(a, psi).component_mul(&self.translation_phases(b))
    }

    pub fn group_element(&self, b: f64, a: f64) -> CMat {
        CMat::from_diagonal(&self.translation_phases(b)) * self.dilation(a)
    }

    /// `J psi = -conj(psi)`.
    pub fn conjugation(&self, psi: &CVec) -> CVec {
        psi.map(|z| -z.conj())
    }

    /// Realified matrix of `J`.
    pub fn conjugation_real(&self) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i == j, i % 2) {
            (true, 0) => -1.0,
            (true, _) => 1.0,
            _ => 0.0,
        })
    }

    /// Dilation generator `K = -i d/du` with `U(0, e^t) = e^{itK}`: a periodic
    /// fourth-order stencil for the current, a Dirichlet central difference for
    /// the affine model.
    pub fn generator(&self) -> CMat {
        let n = self.n();
        let h = self.grid.step;
        let mut d = DMatrix::<f64>::zeros(n, n);
        match self.kind() {
            ModelKind::U1Current => {
                let taps = [(1_i64, 8.0), (2, -1.0)];
                for j in 0..n {
                    for &(o, c) in &taps {
                        let fwd = (j as i64 + o).rem_euclid(n as i64) as usize;
                        let bwd = (j as i64 - o).rem_euclid(n as i64) as usize;
                        d[(j, fwd)] += c / (12.0 * h);
                        d[(j, bwd)] -= c / (12.0 * h);
                    }
                }
            }
            ModelKind::Affine => {
                for j in 0..n {
                    if j + 1 < n {
                        d[(j, j + 1)] = 0.5 / h;
                    }
                    if j > 0 {
                        d[(j, j - 1)] = -0.5 / h;
                    }
                }
            }
        }
        d.map(|x| Complex64::new(0.0, -x))
    }

    /// `max |D(a)^* D(a) - 1|`.
    pub fn unitarity_defect(&self, a: f64) -> f64 {
        let d = self.dilation(a);
        let n = self.n();
        (d.adjoint() * &d - CMat::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |U(b1,a1) U(b2,a2) psi - U(b1 + a1 b2, a1 a2) psi|` over the samples.
    pub fn group_law_residual(&self, samples: &[((f64, f64), (f64, f64))], psi: &CVec) -> f64 {
        samples
            .iter()
            .map(|&((b1, a1), (b2, a2))| {
                let lhs = self.apply(b1, a1, &self.apply(b2, a2, psi));
                let rhs = self.apply(b1 + a1 * b2, a1 * a2, psi);
                (lhs - rhs).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Grid BGL subspace `V = Fix(J Delta^{1/2})` with `Delta = e^{-2 pi K}`.
///
/// `K` is diagonal on DFT modes with multiplier `kappa_j`; modes `j` and `-j`
/// are exchanged by `J`, so `V` splits into two-dimensional pieces
/// `{alpha e_j - s conj(alpha) e_{-j}}` with `s = e^{-pi kappa_j}`.
#[derive(Clone, Debug)]
pub struct BglSubspace {
    n: usize,
    kappa: Vec<f64>,
}

pub fn bgl_subspace_grid(ops: &GridOperatorSet) -> Result<BglSubspace> {
    if ops.kind() != ModelKind::U1Current {
        return Err(ModelError::WrongModel(ModelKind::U1Current));
    }
    let exponent = PI * ops.kappa.iter().cloned().fold(0.0, f64::max);
    if exponent > MAX_MODULAR_EXPONENT {
        return Err(ModelError::GeneratorIllConditioned { exponent });
    }
    Ok(BglSubspace { n: ops.n(), kappa: ops.kappa.clone() })
}

impl BglSubspace {
    pub fn n(&self) -> usize {
        self.n
    }

    fn self_paired(&self, j: usize) -> bool {
        j == 0 || 2 * j == self.n
    }

    fn partner(&self, j: usize) -> usize {
        (self.n - j) % self.n
    }

    fn s(&self, j: usize) -> f64 {
        (-PI * self.kappa[j]).exp()
    }

    /// Closest vector of `V` in the real inner product.
    pub fn project(&self, psi: &CVec) -> CVec {
        let c = dft(psi);
        let mut out = CVec::zeros(self.n);
        for j in 0..self.n {
            if self.self_paired(j) {
                out[j] = Complex64::new(0.0, c[j].im);
            } else if 2 * j < self.n {
                let m = self.partner(j);
                let s = self.s(j);
                let alpha = (c[j] - s * c[m].conj()) / (1.0 + s * s);
                out[j] = alpha;
                out[m] = -s * alpha.conj();
            }
        }
        idft(&out)
    }

    /// `|psi - P_V psi| / |psi|`: how far a vector is from satisfying the KMS
    /// relation on the grid.
    pub fn kms_residual(&self, psi: &CVec) -> f64 {
        (psi - self.project(psi)).norm() / psi.norm()
    }

    /// Unit basis of `V` as DFT coefficient vectors, `n` of them, orthonormal in
    /// the real inner product.
    pub fn basis_modes(&self) -> Vec<CVec> {
        let mut out = Vec::with_capacity(self.n);
        for j in 0..self.n {
            if self.self_paired(j) {
                let mut c = CVec::zeros(self.n);
                c[j] = Complex64::new(0.0, 1.0);
                out.push(c);
            } else if 2 * j < self.n {
                let m = self.partner(j);
                let s = self.s(j);
                let norm = (1.0 + s * s).sqrt();
                for alpha in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                    let mut c = CVec::zeros(self.n);
                    c[j] = alpha / norm;
                    c[m] = -s * alpha.conj() / norm;
                    out.push(c);
                }
            }
        }
        out
    }

    /// [`Self::basis_modes`] on the grid.
    pub fn basis_vectors(&self) -> Vec<CVec> {
        self.basis_modes().iter().map(idft).collect()
    }

    /// `|Delta^{1/2} xi - J xi| / |xi|` for `xi` given by its DFT coefficients.
    /// Working on coefficients avoids amplifying round-off in the modes where
    /// `Delta^{1/2}` is large.
    pub fn modular_residual(&self, modes: &CVec) -> f64 {
        let r = CVec::from_fn(self.n, |j, _| modes[j] * self.s(j) + modes[self.partner(j)].conj());
        r.norm() / modes.norm()
    }

    /// Realified span of [`Self::basis_vectors`].
    pub fn subspace(&self) -> RealSubspace {
        let vecs = self.basis_vectors();
        let mut m = DMatrix::zeros(2 * self.n, vecs.len());
        for (k, v) in vecs.iter().enumerate() {
            m.set_column(k, &stdsp::realify_vec(v));
        }
        Subspace::from_orthonormal(m)
    }
}

/// `i exp(-(u - c - i pi/2)^2 / 2 sigma^2)`, analytic in the strip and
/// satisfying the continuum KMS relation for the current.
pub fn analytic_bgl_vector(grid: &Grid, center: f64, sigma: f64) -> CVec {
    grid.sample_coords(|u| {
        let z = Complex64::new(u - center, -PI / 2.0);
        Complex64::new(0.0, 1.0) * (-(z * z) / (2.0 * sigma * sigma)).exp()
    })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; q];
    let mut w = vec![0.0; q];
    for i in 0..q.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=q {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if q == 1 {
                p0 = 1.0;
            }
            dp = q as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[q - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[q - 1 - i] = w[i];
    }
    (x, w)
}

fn legendre(m: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return 1.0;
    }
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

/// `f_hat(p) = int e^{ipx} f(x) dx` at the grid nodes for each dictionary
/// function `P_m(y) bump(y)` on `[a, b]`, `y` the affine coordinate.
fn dictionary_transforms(grid: &Grid, a: f64, b: f64, m: usize) -> Vec<CVec> {
    let p_max = grid.nodes.iter().cloned().fold(0.0, f64::max);
    let panels = ((b - a) * p_max / 10.0).ceil().max(8.0) as usize;
    let (gx, gw) = gauss_legendre(GL_PANEL_NODES);
    let width = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * GL_PANEL_NODES);
    let mut ws = Vec::with_capacity(panels * GL_PANEL_NODES);
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * width;
        for (x, w) in gx.iter().zip(&gw) {
            xs.push(mid + 0.5 * width * x);
            ws.push(0.5 * width * w);
        }
    }
    let ys: Vec<f64> = xs.iter().map(|x| (2.0 * x - a - b) / (b - a)).collect();
    let phases: Vec<Vec<Complex64>> =
        grid.nodes.iter().map(|&p| xs.iter().map(|&x| Complex64::from_polar(1.0, p * x)).collect()).collect();
    (0..m)
        .map(|deg| {
            let f: Vec<f64> = ys.iter().zip(&ws).map(|(&y, &w)| w * legendre(deg, y) * bump(y)).collect();
            CVec::from_iterator(grid.len(), phases.iter().map(|row| row.iter().zip(&f).map(|(e, fv)| e * fv).sum()))
        })
        .collect()
}

/// Span of a test-function dictionary under the one-particle embedding.
#[derive(Clone, Debug)]
pub struct TestFunctionSubspace {
    pub subspace: RealSubspace,
    /// Singular values of the realified dictionary, descending, so the rank cut
    /// can be audited.
    pub singular_values: Vec<f64>,
}

/// `H^(k)(O)`: span of `(k-1)`-th derivatives of `m` polynomial-times-bump
/// functions per interval of `O`. An interval with infinite right end is
/// replaced by dyadic pieces `a + [2^j, 2^{j+1}]`.
pub fn test_function_subspace(
    ops: &GridOperatorSet,
    intervals: &[(f64, f64)],
    k: usize,
    m: usize,
) -> Result<TestFunctionSubspace> {
    if ops.kind() != ModelKind::U1Current {
        return Err(ModelError::WrongModel(ModelKind::U1Current));
    }
    if m == 0 || k == 0 || intervals.is_empty() {
        return Err(ModelError::EmptyDictionary);
    }
    let mut pieces = Vec::new();
    for &(a, b) in intervals {
        if !a.is_finite() || !(b > a) {
            return Err(ModelError::InvalidRange { lo: a, hi: b });
        }
        if b.is_infinite() {
            pieces.extend(HALF_LINE_OCTAVES.map(|j| (a + 2f64.powi(j), a + 2f64.powi(j + 1))));
        } else {
            pieces.push((a, b));
        }
    }
    let grid = &ops.grid;
    let factor = CVec::from_iterator(
        grid.len(),
        grid.nodes.iter().zip(&grid.weights).map(|(&p, &w)| Complex64::new(0.0, -p).powu(k as u32 - 1) * w.sqrt()),
    );
    let cols: Vec<CVec> =
        pieces.iter().flat_map(|&(a, b)| dictionary_transforms(grid, a, b, m)).map(|f| f.component_mul(&factor)).collect();
    let mut a = DMatrix::zeros(2 * grid.len(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        a.set_column(j, &stdsp::realify_vec(c));
    }
    let svd = a.svd(true, false);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let cut = DICTIONARY_TOL * singular_values.first().cloned().unwrap_or(0.0);
    let u = svd.u.expect("left singular vectors");
    let kept: Vec<usize> = order.into_iter().filter(|&i| svd.singular_values[i] > cut).collect();
    if kept.is_empty() {
        return Err(ModelError::EmptyDictionary);
    }
    let mut q = DMatrix::zeros(u.nrows(), kept.len());
    for (c, &i) in kept.iter().enumerate() {
        q.set_column(c, &u.column(i));
    }
    Ok(TestFunctionSubspace { subspace: Subspace::from_orthonormal_raw(q), singular_values })
}

/// Principal sines of `H_k` against `H_l` and the codimension read off the
/// largest gap.
#[derive(Clone, Debug, Serialize)]
pub struct CodimReport {
    pub k: usize,
    pub l: usize,
    pub sines: Vec<f64>,
    pub codim: usize,
    /// Ratio between the last kept and the first cut sine.
    pub gap_ratio: f64,
}

pub fn codimension(hk: &TestFunctionSubspace, hl: &TestFunctionSubspace, k: usize, l: usize) -> CodimReport {
    let qk = hk.subspace.basis();
    let ql = hl.subspace.basis();
    let r = qk - ql * (ql.transpose() * qk);
    let sines = linalg::singular_values(&r);
    let mut best = (0, 0.0);
    let mut prev = 1.0_f64;
    for (i, &s) in sines.iter().enumerate() {
        let ratio = prev / s.max(f64::MIN_POSITIVE);
        if ratio > best.1 {
            best = (i, ratio);
        }
        prev = s;
    }
    CodimReport { k, l, sines, codim: best.0, gap_ratio: best.1 }
}

/// A diagnostic at two resolutions.
#[derive(Clone, Debug, Serialize)]
pub struct Refinement {
    pub coarse_n: usize,
    pub fine_n: usize,
    pub coarse: f64,
    pub fine: f64,
    /// `fine / coarse`.
    pub ratio: f64,
}

impl Refinement {
    fn new(coarse_n: usize, fine_n: usize, coarse: f64, fine: f64) -> Self {
        Self { coarse_n, fine_n, coarse, fine, ratio: fine / coarse }
    }

    /// True when the value at least halves under refinement.
    pub fn halves(&self) -> bool {
        self.ratio <= 0.5
    }
}

/// Default window for the current, `p in [1e-4, 1e4]`.
pub const U1_P_RANGE: (f64, f64) = (1e-4, 1e4);
/// Centers (in `u = log p`) of the analytic KMS test vectors.
pub const KMS_CENTERS: [f64; 3] = [-1.0, 0.0, 1.0];

/// Largest KMS residual of the analytic test vectors at `n` and `2n`.
pub fn kms_refinement(n: usize, p_min: f64, p_max: f64) -> Result<Refinement> {
    let at = |n: usize| -> Result<f64> {
        let ops = build_u1_current(n, p_min, p_max)?;
        let v = bgl_subspace_grid(&ops)?;
        Ok(KMS_CENTERS.iter().map(|&c| v.kms_residual(&analytic_bgl_vector(&ops.grid, c, 1.0))).fold(0.0, f64::max))
    };
    Ok(Refinement::new(n, 2 * n, at(n)?, at(2 * n)?))
}

/// Default codimension experiment: `I = (-1, 1)` on `p in [1e-4, 4e2]`.
pub const CODIM_P_RANGE: (f64, f64) = (1e-4, 4e2);
pub const CODIM_PAIRS: [(usize, usize); 3] = [(1, 2), (1, 3), (2, 3)];
pub const CODIM_SMALL_DICTIONARY: usize = 6;
pub const CODIM_LARGE_DICTIONARY: usize = 40;

/// `dim H^(k)(I) / H^(l)(I)` for each pair, with `H^(k)` from a small dictionary
/// and `H^(l)` from a large one so that it approximates its closure.
pub fn codim_study(n: usize, interval: (f64, f64), pairs: &[(usize, usize)]) -> Result<Vec<CodimReport>> {
    let ops = build_u1_current(n, CODIM_P_RANGE.0, CODIM_P_RANGE.1)?;
    pairs
        .iter()
        .map(|&(k, l)| {
            let hk = test_function_subspace(&ops, &[interval], k, CODIM_SMALL_DICTIONARY)?;
            let hl = test_function_subspace(&ops, &[interval], l, CODIM_LARGE_DICTIONARY)?;
            Ok(codimension(&hk, &hl, k, l))
        })
        .collect()
}

/// Localization of generator eigenvectors in the affine model.
#[derive(Clone, Debug, Serialize)]
pub struct FlatnessReport {
    pub n: usize,
    pub bins: usize,
    pub boundary_bins: usize,
    /// Largest eigenvector mass inside one interior spatial bin.
    pub max_interior_mass: f64,
    /// Eigenvalue histogram over `bins` equal-width bins.
    pub spectrum_histogram: Vec<usize>,
    pub flat: bool,
}

pub const FLATNESS_LIMIT: f64 = 0.05;

/// Bins eigenvector mass of `K` over space and reports the largest share any
/// eigenvector puts in a single interior bin. A numerically isolated
/// eigenvector would concentrate there.
pub fn spectral_flatness(ops: &GridOperatorSet, bins: usize, boundary_bins: usize) -> FlatnessReport {
    let n = ops.n();
    let eig = ops.generator().symmetric_eigen();
    let bin_of = |j: usize| j * bins / n;
    let mut max_mass = 0.0_f64;
    for col in eig.eigenvectors.column_iter() {
        let mut mass = vec![0.0; bins];
        for (j, z) in col.iter().enumerate() {
            mass[bin_of(j)] += z.norm_sqr();
        }
        let total: f64 = mass.iter().sum();
        for m in &mass[boundary_bins..bins - boundary_bins] {
            max_mass = max_mass.max(m / total);
        }
    }
    let (lo, hi) = eig.eigenvalues.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let mut hist = vec![0; bins];
    for &x in eig.eigenvalues.iter() {
        let idx = (((x - lo) / (hi - lo)) * bins as f64) as usize;
        hist[idx.min(bins - 1)] += 1;
    }
    FlatnessReport {
        n,
        bins,
        boundary_bins,
        max_interior_mass: max_mass,
        spectrum_histogram: hist,
        flat: max_mass < FLATNESS_LIMIT,
    }
}

/// Default affine window `p in [-25, 25]`.
pub const AFF_HALF_WIDTH: f64 = 25.0;

pub fn flatness_refinement(n: usize, l: f64) -> Result<(FlatnessReport, FlatnessReport)> {
    Ok((spectral_flatness(&build_aff_rep(n, l)?, 64, 2), spectral_flatness(&build_aff_rep(2 * n, l)?, 64, 2)))
}

/// Relative residual of `[D, X] f = X f` for a Gaussian `f`, with `D = iK` the
/// finite-difference derivative and `X` the x-generator, over the interior.
pub fn commutator_residual(ops: &GridOperatorSet) -> f64 {
    let f = ops.grid.sample_coords(|p| Complex64::new((-p * p / 2.0).exp(), 0.0));
    let x = ops.x_generator();
    let d = ops.generator() * Complex64::new(0.0, 1.0);
    let xf = f.component_mul(&x);
    let lhs = &d * &xf - (&d * &f).component_mul(&x);
    let n = ops.n();
    let interior = n / 8..n - n / 8;
    let num: f64 = interior.clone().map(|j| (lhs[j] - xf[j]).norm_sqr()).sum();
    let den: f64 = interior.map(|j| xf[j].norm_sqr()).sum();
    (num / den).sqrt()
}

/// Cyclic rank of `V_N` for one neighborhood scale.
#[derive(Clone, Debug, Serialize)]
pub struct RegularityPoint {
    pub scale: f64,
    pub cyclic_rank: usize,
    pub grid_dim: usize,
}

/// For each scale `eps`, intersects `U(eps b, a^eps) V` over the sampled
/// `(b, a)` and records the real rank of `V_N + i V_N`. Principal angles with
/// `sin^2 <= tol` count as shared directions.
pub fn regularity_demo(
    ops: &GridOperatorSet,
    sample: &[(f64, f64)],
    scales: &[f64],
    tol: f64,
) -> Result<Vec<RegularityPoint>> {
    let v = bgl_subspace_grid(ops)?.subspace();
    scales
        .iter()
        .map(|&eps| {
            let family: Vec<AntiUnitaryOp> = sample
                .iter()
                .map(|&(b, a)| AntiUnitaryOp::unitary(&ops.group_element(eps * b, a.powf(eps))))
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| ModelError::ResolutionTooCoarse { nodes: ops.n(), min: MIN_NODES })?;
            let report = nets::regularity_probe(&v, &family, tol);
            Ok(RegularityPoint { scale: eps, cyclic_rank: report.cyclic_rank, grid_dim: 2 * ops.n() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn grids_reject_bad_input() {
        assert!(matches!(build_u1_current(8, 1.0, 2.0), Err(ModelError::ResolutionTooCoarse { .. })));
        assert!(matches!(build_u1_current(32, 2.0, 1.0), Err(ModelError::InvalidRange { .. })));
        assert!(matches!(build_aff_rep(8, 1.0), Err(ModelError::ResolutionTooCoarse { .. })));
        let g = Grid::log_spaced(32, 1e-2, 1e2).unwrap();
        assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(g.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn translation_is_unitary_and_trivial_dilation_is_identity() {
        let ops = build_u1_current(64, 1e-2, 1e2).unwrap();
        assert!(ops.translation_phases(3.7).iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));
        let id = ops.dilation(1.0);
        assert!((id - CMat::identity(64, 64)).iter().all(|z| z.norm() < 1e-14));
        for a in [0.4, 1.3, 2.7] {
            assert!(ops.unitarity_defect(a) < 1e-6);
        }
    }

    #[test]
    fn constant_function_scales_under_dilation() {
        let ops = build_u1_current(128, 1e-2, 1e2).unwrap();
        let one = ops.grid.sample(|_| c(1.0));
        let m = 5;
        let a = (m as f64 * ops.grid.step).exp();
        let out = ops.grid.values(&ops.apply_dilation(a, &one));
        for v in out.iter().take(128 - m) {
            assert!((v - c(a)).norm() < 1e-12 * a);
        }
    }

    #[test]
    fn affine_group_law_on_node_ratios() {
        let ops = build_u1_current(256, 1e-2, 1e2).unwrap();
        let psi = ops.grid.sample_coords(|u| c((-2.0 * u * u).exp()));
        let h = ops.grid.step;
        let samples = [((0.3, (3.0 * h).exp()), (-0.7, (-5.0 * h).exp())), ((1.1, (-2.0 * h).exp()), (0.2, (7.0 * h).exp()))];
        assert!(ops.group_law_residual(&samples, &psi) < 1e-12);
    }

    #[test]
    fn inner_product_converges_to_quadrature_oracle() {
        let (p_min, p_max) = (1e-6_f64, 1e2_f64);
        let fhat = |p: f64| Complex64::from_polar((2.0 * PI).sqrt() * (-p * p / 2.0).exp(), p);
        let ghat = |p: f64| c((2.0 * PI).sqrt() * (-p * p / 2.0).exp());
        let (gx, gw) = gauss_legendre(64);
        let (u0, u1) = (p_min.ln(), p_max.ln());
        let panels = 200;
        let width = (u1 - u0) / panels as f64;
        let mut oracle = c(0.0);
        for k in 0..panels {
            for (x, w) in gx.iter().zip(&gw) {
                let u = u0 + (k as f64 + 0.5 + 0.5 * x) * width;
                let p = u.exp();
                oracle += fhat(p).conj() * ghat(p) * p * p * (0.5 * width * w);
            }
        }
        let errs: Vec<f64> = [16, 32, 64]
            .iter()
            .map(|&n| {
                let g = Grid::log_spaced(n, p_min, p_max).unwrap();
                let f = CVec::from_iterator(n, g.nodes.iter().map(|&p| fhat(p)));
                let h = CVec::from_iterator(n, g.nodes.iter().map(|&p| ghat(p)));
                (g.inner(&f, &h) - oracle).norm()
            })
            .collect();
        assert!(errs[1] / errs[0] < 0.5 && errs[2] / errs[1] < 0.5, "{errs:?}");
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(12);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn bgl_basis_satisfies_kms() {
        let ops = build_u1_current(64, 1e-2, 1e2).unwrap();
        let v = bgl_subspace_grid(&ops).unwrap();
        let modes = v.basis_modes();
        assert_eq!(modes.len(), 64);
        for m in &modes {
            assert!(v.modular_residual(m) < 1e-12);
            assert!(v.kms_residual(&idft(m)) < 1e-12);
        }
        let i = Complex64::new(0.0, 1.0);
        let mut e0 = CVec::zeros(64);
        e0[0] = i;
        assert!(v.kms_residual(&idft(&e0)) < 1e-14);
    }

    #[test]
    fn bgl_grid_matches_dense_construction() {
        let ops = build_u1_current(16, 1e-6, 1e6).unwrap();
        let v = bgl_subspace_grid(&ops).unwrap().subspace();
        let (_, dense) = stdsp::bgl_pair(&ops.generator(), &ops.conjugation_real()).unwrap();
        assert!(v.same_as(&dense, 1e-8), "distance {}", v.distance(&dense));
    }

    #[test]
    fn kms_residual_improves_under_refinement() {
        let r = kms_refinement(256, U1_P_RANGE.0, U1_P_RANGE.1).unwrap();
        assert!(r.halves(), "{r:?}");
        assert!(r.fine < 1e-5);
    }

    #[test]
    fn generator_ill_conditioned_on_absurd_grids() {
        let ops = build_u1_current(1 << 14, 1.0, 1.001).unwrap();
        assert!(matches!(bgl_subspace_grid(&ops), Err(ModelError::GeneratorIllConditioned { .. })));
    }

    #[test]
    fn bounded_interval_codimensions() {
        let reports = codim_study(256, (-1.0, 1.0), &CODIM_PAIRS).unwrap();
        for r in &reports {
            assert_eq!(r.codim, r.l - r.k, "{:?}", &r.sines[..6]);
            assert!(r.gap_ratio >= 1e3);
        }
    }

    #[test]
    fn empty_dictionary_is_rejected() {
        let ops = build_u1_current(32, 1e-2, 1e2).unwrap();
        assert_eq!(test_function_subspace(&ops, &[], 1, 4).unwrap_err(), ModelError::EmptyDictionary);
        assert_eq!(test_function_subspace(&ops, &[(0.0, 1.0)], 1, 0).unwrap_err(), ModelError::EmptyDictionary);
    }

    #[test]
    fn affine_identity_and_commutator() {
        let ops = build_aff_rep(200, 10.0).unwrap();
        let psi = ops.grid.sample_coords(|p| c((-p * p).exp()));
        assert!((ops.apply(0.0, 1.0, &psi) - &psi).norm() < 1e-15);
        let coarse = commutator_residual(&ops);
        let fine = commutator_residual(&build_aff_rep(400, 10.0).unwrap());
        assert!(fine < 0.5 * coarse, "{coarse} {fine}");
    }

    #[test]
    fn affine_generator_has_no_isolated_eigenvectors() {
        let (a, b) = flatness_refinement(200, AFF_HALF_WIDTH).unwrap();
        assert!(a.flat && b.flat, "{} {}", a.max_interior_mass, b.max_interior_mass);
    }

    #[test]
    fn regularity_identity_is_full_rank() {
        let ops = build_u1_current(32, 1e-3, 1e3).unwrap();
        let pts = regularity_demo(&ops, &[(0.0, 1.0)], &[1.0], 1e-9).unwrap();
        assert_eq!(pts[0].cyclic_rank, 64);
    }

    fn cyclic_rank(v: &RealSubspace) -> usize {
        let i = stdsp::complex_structure(v.ambient_dim() / 2);
        v.sum(&v.image(&i, 1e-9), 1e-9).dim()
    }

    #[test]
    fn half_line_subspaces_saturate_the_grid() {
        let ops = build_u1_current(64, 1e-2, 1e2).unwrap();
        let ranks: Vec<usize> = (1..=3)
            .map(|k| cyclic_rank(&test_function_subspace(&ops, &[(0.0, f64::INFINITY)], k, 8).unwrap().subspace))
            .collect();
        assert_eq!(ranks, vec![128; 3]);
    }

    #[test]
    fn regularity_trajectory() {
        let ops = build_u1_current(32, 1e-3, 1e3).unwrap();
        let scales = [1.0, 0.01];
        let forward = regularity_demo(&ops, &[(0.05, 1.0)], &scales, 1e-6).unwrap();
        assert!(forward.iter().all(|p| p.cyclic_rank == 64));
        let mixed = [(0.05, 1.0), (-0.05, 1.0), (0.0, 1.2), (0.0, 0.8)];
        let pts = regularity_demo(&ops, &mixed, &scales, 1e-6).unwrap();
        assert!(pts[0].cyclic_rank < 64);
        assert!(pts[1].cyclic_rank > pts[0].cyclic_rank);
    }
}
