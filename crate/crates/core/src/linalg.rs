//! Dense real linear algebra helpers: ranks, orthonormal spans, null spaces
//! and subspace arithmetic on column-span representations.

use nalgebra::{DMatrix, DVector};

/// Default absolute rank tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Singular values within this factor of the tolerance are reported as near-threshold.
const NEAR_FACTOR: f64 = 100.0;

/// Outcome of a rank decision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    /// Smallest singular value above the cut, if any.
    pub smallest_kept: Option<f64>,
    /// Largest singular value below the cut, if any.
    pub largest_cut: Option<f64>,
}

impl RankInfo {
    /// True when a singular value sits within two orders of magnitude of the cut.
    pub fn near_threshold(&self, tol: f64) -> bool {
        let kept = self.smallest_kept.is_some_and(|s| s < tol * NEAR_FACTOR);
        let cut = self.largest_cut.is_some_and(|s| s > tol / NEAR_FACTOR);
        kept || cut
    }
}

fn scale(s: &DVector<f64>) -> f64 {
    s.iter().cloned().fold(0.0_f64, f64::max).max(1.0)
}

/// Singular values, sorted descending.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().cloned().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Numerical rank with cut `tol * max(1, sigma_max)`.
pub fn rank_info(a: &DMatrix<f64>, tol: f64) -> RankInfo {
    let s = singular_values(a);
    let cut = tol * s.first().cloned().unwrap_or(0.0).max(1.0);
    let rank = s.iter().filter(|&&x| x > cut).count();
    RankInfo {
        rank,
        smallest_kept: if rank > 0 { Some(s[rank - 1]) } else { None },
        largest_cut: s.get(rank).cloned(),
    }
}

pub fn rank(a: &DMatrix<f64>, tol: f64) -> usize {
    rank_info(a, tol).rank
}

/// Numerical rank from singular values with cut `tol * max(1, sigma_max)`.
fn svd_rank(a: &DMatrix<f64>, tol: f64) -> usize {
    let s = a.clone().svd(false, false).singular_values;
    let cut = tol * scale(&s);
    s.iter().filter(|&&x| x > cut).count()
}

/// Orthonormal basis of the column space of `a`. The rank comes from the singular
/// values; the basis from column-pivoted Householder QR, whose `Q` stays accurate on
/// rank-deficient input where the SVD vectors can drift.
pub fn orth(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = a.nrows();
    if a.ncols() == 0 || n == 0 {
        return DMatrix::zeros(n, 0);
    }
    let r = svd_rank(a, tol);
    if r == 0 {
        return DMatrix::zeros(n, 0);
    }
    a.clone().col_piv_qr().q().columns(0, r).into_owned()
}

/// Orthonormal basis of the null space of `a`, as the complement of the row space.
pub fn null_space(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let r = svd_rank(a, tol);
    if r == 0 {
        return DMatrix::identity(n, n);
    }
    let mut at = DMatrix::zeros(n, a.nrows().max(n));
    at.view_mut((0, 0), (n, a.nrows())).copy_from(&a.transpose());
    at.col_piv_qr().q().columns(r, n - r).into_owned()
}

/// Concatenate column blocks with a common row count.
pub fn hstack(blocks: &[&DMatrix<f64>], nrows: usize) -> DMatrix<f64> {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(nrows, cols);
    let mut c = 0;
    for b in blocks {
        assert_eq!(b.nrows(), nrows, "hstack row mismatch");
        out.view_mut((0, c), (nrows, b.ncols())).copy_from(*b);
        c += b.ncols();
    }
    out
}

/// Block-diagonal matrix.
pub fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

/// Matrix square root and inverse square root of a symmetric positive-definite matrix.
pub fn spd_power(a: &DMatrix<f64>, power: f64) -> DMatrix<f64> {
    let sym = (a + a.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| x.max(0.0).powf(power)));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

/// Real linear subspace of R^n stored as an orthonormal span matrix in
/// canonical form: a function of the orthogonal projector only.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Span of the columns of `a`.
    pub fn span(a: &DMatrix<f64>, tol: f64) -> Self {
        Self::from_orthonormal(orth(a, tol))
    }

    pub fn zero(n: usize) -> Self {
        Self { basis: DMatrix::zeros(n, 0) }
    }

    pub fn whole(n: usize) -> Self {
        Self { basis: DMatrix::identity(n, n) }
    }

    /// Canonicalize an orthonormal basis by pivoted Gram-Schmidt on the projector columns.
    pub fn from_orthonormal(q: DMatrix<f64>) -> Self {
        let n = q.nrows();
        let k = q.ncols();
        if k == 0 || k == n {
            return if k == 0 { Self::zero(n) } else { Self::whole(n) };
        }
        let p = &q * q.transpose();
        let mut residual: Vec<DVector<f64>> = (0..n).map(|i| p.column(i).into_owned()).collect();
        let mut used = vec![false; n];
        let mut out = DMatrix::zeros(n, k);
        for c in 0..k {
            let mut best = None;
            let mut best_norm = -1.0;
            for i in 0..n {
                if used[i] {
                    continue;
                }
                let nr = residual[i].norm();
                if nr > best_norm * (1.0 + 1e-8) {
                    best_norm = nr;
                    best = Some(i);
                }
            }
            let i = best.expect("projector rank");
            used[i] = true;
            let mut v = residual[i].clone();
            for j in 0..c {
                let col = out.column(j).into_owned();
                let proj = col.dot(&v);
                v -= col * proj;
            }
            let mut v = v.normalize();
            let lead = v.iter().cloned().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
            if lead < 0.0 {
                v = -v;
            }
            out.set_column(c, &v);
            for (r, res) in residual.iter_mut().enumerate() {
                if !used[r] {
                    let proj = v.dot(res);
                    *res -= &v * proj;
                }
            }
        }
        Self { basis: out }
    }

    /// Wrap an orthonormal basis as-is, skipping canonicalization.
    pub fn from_orthonormal_raw(q: DMatrix<f64>) -> Self {
        Self { basis: q }
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// Projector onto the orthogonal complement.
    pub fn complement_projector(&self) -> DMatrix<f64> {
        DMatrix::identity(self.ambient_dim(), self.ambient_dim()) - self.projector()
    }

    pub fn orthogonal_complement(&self, tol: f64) -> Self {
        if self.dim() == 0 {
            return Self::whole(self.ambient_dim());
        }
        Self::from_orthonormal(null_space(&self.basis.transpose(), tol))
    }

    /// Distance of `v` from the subspace, relative to `max(1, |v|)`.
    pub fn residual(&self, v: &DVector<f64>) -> f64 {
        let proj = &self.basis * (self.basis.transpose() * v);
        (v - proj).norm() / v.norm().max(1.0)
    }

    pub fn contains_vector(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.residual(v) <= tol
    }

    /// Largest residual of a basis vector of `other` against `self`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        if other.dim() == 0 {
            return 0.0;
        }
        let r = other.basis() - &self.basis * (self.basis.transpose() * other.basis());
        r.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn contains(&self, other: &Subspace, tol: f64) -> bool {
        self.containment_residual(other) <= tol
    }

    pub fn same_as(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim() && self.contains(other, tol) && other.contains(self, tol)
    }

    /// Largest entry of the projector difference.
    pub fn distance(&self, other: &Subspace) -> f64 {
        (self.projector() - other.projector()).amax()
    }

    pub fn sum(&self, other: &Subspace, tol: f64) -> Self {
        let n = self.ambient_dim();
        Self::span(&hstack(&[&self.basis, &other.basis], n), tol)
    }

    /// Intersection via the null space of the summed complement projectors.
    pub fn intersect_all(spaces: &[&Subspace], tol: f64) -> Self {
        let n = spaces.first().map(|s| s.ambient_dim()).unwrap_or(0);
        let mut m = DMatrix::zeros(n, n);
        for s in spaces {
            m += s.complement_projector();
        }
        Self::from_orthonormal(null_space(&m, tol))
    }

    pub fn intersect(&self, other: &Subspace, tol: f64) -> Self {
        Self::intersect_all(&[self, other], tol)
    }

    /// Image under a linear map.
    pub fn image(&self, a: &DMatrix<f64>, tol: f64) -> Self {
        Self::span(&(a * &self.basis), tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_outer_product_is_one() {
        let u = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let v = DVector::from_vec(vec![1.0, -1.0]);
        assert_eq!(rank(&(&u * v.transpose()), DEFAULT_TOL), 1);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let ns = null_space(&a, DEFAULT_TOL);
        assert_eq!(ns.ncols(), 2);
        assert!((&a * &ns).amax() < 1e-12);
    }

    #[test]
    fn canonical_form_is_representation_independent() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 1.0, 1.0, 0.0, 1.0]);
        let b = DMatrix::from_row_slice(3, 2, &[2.0, 1.0, 3.0, 1.0, 1.0, 0.0]);
        let sa = Subspace::span(&a, DEFAULT_TOL);
        let sb = Subspace::span(&b, DEFAULT_TOL);
        assert!((sa.basis() - sb.basis()).amax() < 1e-12);
    }

    #[test]
    fn intersection_of_planes_is_line() {
        let x = Subspace::span(&DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]), 1e-9);
        let y = Subspace::span(&DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]), 1e-9);
        let z = x.intersect(&y, 1e-9);
        assert_eq!(z.dim(), 1);
        assert!(z.contains_vector(&DVector::from_vec(vec![1.0, 0.0, 0.0]), 1e-12));
    }

    #[test]
    fn complement_dimensions_add_up() {
        let s = Subspace::span(&DMatrix::from_row_slice(4, 1, &[1.0, 2.0, 0.0, 1.0]), 1e-9);
        assert_eq!(s.orthogonal_complement(1e-9).dim(), 3);
        assert_eq!(Subspace::zero(4).orthogonal_complement(1e-9).dim(), 4);
    }

    #[test]
    fn bases_of_rank_deficient_products_are_exact() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let b = DMatrix::from_fn(15, 9, |_, _| rng.random_range(-1.0..1.0));
        let c = DMatrix::from_fn(9, 10, |_, _| rng.random_range(-1.0..1.0));
        let a = &b * &c;
        let q = orth(&a, DEFAULT_TOL);
        assert_eq!(q.ncols(), 9);
        assert!((&a - &q * (q.transpose() * &a)).amax() < 1e-12);
        let k = null_space(&a, DEFAULT_TOL);
        assert_eq!(k.ncols(), 1);
        assert!((&a * &k).amax() < 1e-12);
        assert!((k.transpose() * &k - DMatrix::<f64>::identity(1, 1)).amax() < 1e-14);
    }
}
