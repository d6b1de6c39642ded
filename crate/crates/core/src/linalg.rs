//! Dense complex matrices and the decompositions the rest of the crate is
//! built on.
//!
//! Operators stay small here (dimension a few hundred at most), so every
//! algorithm favours robustness over speed: the Hermitian eigensolver is a
//! cyclic Jacobi iteration with complex rotations, and the SVD is recovered
//! from the eigendecomposition of `M^H M`. All tolerances are relative to
//! `max(1, ‖·‖_∞)` so behaviour is stable across operator magnitudes.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex;
// Inherent f64 methods shadow this in std test builds.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::states::BipartiteSpace;

pub type C64 = Complex<f64>;

pub const ZERO: C64 = Complex::new(0.0, 0.0);
pub const ONE: C64 = Complex::new(1.0, 0.0);

/// Relative tolerance for Hermiticity checks.
pub const HERMITICITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    /// Input violated a Hermiticity precondition.
    NonHermitian,
    /// The Jacobi sweep cap was exhausted before the off-diagonal mass
    /// dropped below the convergence threshold.
    NoConvergence,
    /// Matrix shape is inconsistent with the space or factor selection.
    DimensionMismatch,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NonHermitian => write!(f, "matrix is not Hermitian within tolerance"),
            LinalgError::NoConvergence => write!(f, "eigensolver did not converge"),
            LinalgError::DimensionMismatch => write!(f, "matrix dimensions do not match"),
        }
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from row-major real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let mut m = Matrix::zeros(rows, cols);
        for (k, &x) in entries.iter().enumerate() {
            m.data[k] = C64::new(x, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must match shape");
        assert!(rows > 0 && cols > 0);
        Matrix { rows, cols, data }
    }

    pub fn column_vector(entries: &[C64]) -> Self {
        Matrix::from_vec(entries.len(), 1, entries.to_vec())
    }

    /// Rank-one |u⟩⟨v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Matrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix::from_vec(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix::from_vec(self.rows, self.cols, data)
    }

    pub fn scale(&self, factor: C64) -> Matrix {
        let data = self.data.iter().map(|a| a * factor).collect();
        Matrix::from_vec(self.rows, self.cols, data)
    }

    pub fn scale_re(&self, factor: f64) -> Matrix {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must match in matmul");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Matrix {
        let data = self.data.iter().map(|a| a.conj()).collect();
        Matrix::from_vec(self.rows, self.cols, data)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Entrywise max-abs norm; every relative tolerance in the crate is
    /// measured against `max(1, max_abs)`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `tr(self† · other)`, the Hilbert-Schmidt inner product.
    pub fn hs_inner(&self, other: &Matrix) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = 1.0f64.max(self.max_abs());
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Replace by the Hermitian part `(M + M†)/2`; used to scrub rounding
    /// noise off operators that are Hermitian by construction.
    pub fn hermitize(&self) -> Matrix {
        assert!(self.is_square());
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * C64::new(0.5, 0.0)
        })
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Reorder tensor factors: `dims` are the current factor dimensions
    /// (row index = mixed-radix number over `dims`, first factor most
    /// significant), and `perm[new] = old` lists which old factor lands at
    /// each new position. Rows and columns are permuted alike.
    pub fn permute_subsystems(&self, dims: &[usize], perm: &[usize]) -> Matrix {
        let total: usize = dims.iter().product();
        assert_eq!(self.rows, total);
        assert_eq!(self.cols, total);
        assert_eq!(perm.len(), dims.len());
        let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
        let mut map = vec![0usize; total];
        let mut comps = vec![0usize; dims.len()];
        for idx in 0..total {
            decode_index(idx, dims, &mut comps);
            let mut new_idx = 0;
            for (pos, &old) in perm.iter().enumerate() {
                new_idx = new_idx * new_dims[pos] + comps[old];
            }
            map[idx] = new_idx;
        }
        let mut out = Matrix::zeros(total, total);
        for r in 0..total {
            for c in 0..total {
                out[(map[r], map[c])] = self[(r, c)];
            }
        }
        out
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Decompose `idx` into mixed-radix components over `dims` (first factor
/// most significant).
pub(crate) fn decode_index(idx: usize, dims: &[usize], out: &mut [usize]) {
    let mut rem = idx;
    for k in (0..dims.len()).rev() {
        out[k] = rem % dims[k];
        rem /= dims[k];
    }
}

pub(crate) fn encode_index(comps: &[usize], dims: &[usize]) -> usize {
    let mut idx = 0;
    for (c, d) in comps.iter().zip(dims) {
        debug_assert!(c < d);
        idx = idx * d + c;
    }
    idx
}

/// Eigendecomposition of a Hermitian matrix: `h = V Λ V†` with eigenvalues
/// ascending and `V` unitary (columns are eigenvectors).
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

/// Cyclic Jacobi with complex rotations. Converges when the off-diagonal
/// Frobenius mass falls below `1e-12 · ‖H‖_F`; sweep cap 100.
pub fn hermitian_eigen(h: &Matrix) -> Result<HermitianEig, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::DimensionMismatch);
    }
    if !h.is_hermitian(HERMITICITY_TOL) {
        return Err(LinalgError::NonHermitian);
    }
    let n = h.rows();
    let mut a = h.hermitize();
    let mut v = Matrix::identity(n);
    let fro = a.frobenius();
    let target = 1e-12 * fro;

    let mut converged = fro == 0.0 || n == 1 || off_frobenius(&a) <= target;
    if !converged {
        for _sweep in 0..100 {
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
            if off_frobenius(&a) <= target {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

fn off_frobenius(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One complex Jacobi rotation zeroing `a[(p, q)]`. The pivot phase is
/// absorbed first so the remaining rotation is the classical real one.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / C64::new(r, 0.0); // e^{iθ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let cc = C64::new(c, 0.0);
    let s_phase = phase.conj() * C64::new(s, 0.0); // s·e^{-iθ}

    let n = a.rows();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = akp * cc - akq * s_phase;
        let new_kq = akp * C64::new(s, 0.0) + akq * cc * phase.conj();
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp.conj();
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq.conj();
    }
    a[(p, p)] = C64::new(app - t * r, 0.0);
    a[(q, q)] = C64::new(aqq + t * r, 0.0);
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cc - vkq * s_phase;
        v[(k, q)] = vkp * C64::new(s, 0.0) + vkq * cc * phase.conj();
    }
}

/// Singular value decomposition `m = U · diag(s) · V†` with `s` descending
/// and `U`, `V` square unitaries.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

/// SVD via `hermitian_eigen` of `M†M` plus column recovery; adequate at the
/// dimensions this crate handles.
pub fn svd(m: &Matrix) -> Result<Svd, LinalgError> {
    let rows = m.rows();
    let cols = m.cols();
    let gram = m.dagger().matmul(m).hermitize();
    let eig = hermitian_eigen(&gram)?;
    // Descending singular values; clip tiny negative rounding.
    let mut s: Vec<f64> = eig
        .eigenvalues
        .iter()
        .rev()
        .map(|&l| l.max(0.0).sqrt())
        .collect();
    s.truncate(cols.min(rows).max(0));
    // Actually keep all cols values; only min(rows, cols) can be nonzero.
    let mut sing = Vec::with_capacity(rows.min(cols));
    for k in 0..rows.min(cols) {
        sing.push(*s.get(k).unwrap_or(&0.0));
    }

    let v = Matrix::from_fn(cols, cols, |i, j| eig.eigenvectors[(i, cols - 1 - j)]);

    // Left vectors: u_k = M v_k / s_k for the numerically nonzero part,
    // then complete to a unitary basis.
    let smax = sing.first().copied().unwrap_or(0.0);
    let rank_tol = smax * 1e-12;
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(rows);
    for k in 0..rows.min(cols) {
        if sing[k] > rank_tol && sing[k] > 0.0 {
            let col = v.column(k);
            let mut uk = m.apply(&col);
            let inv = C64::new(1.0 / sing[k], 0.0);
            for z in uk.iter_mut() {
                *z *= inv;
            }
            u_cols.push(uk);
        }
    }
    complete_orthonormal(&mut u_cols, rows);
    let u = Matrix::from_fn(rows, rows, |i, j| u_cols[j][i]);

    Ok(Svd {
        u,
        singular_values: sing,
        v,
    })
}

/// Extend a set of orthonormal columns to a full orthonormal basis of C^n
/// by Gram-Schmidt over the standard basis.
fn complete_orthonormal(cols: &mut Vec<Vec<C64>>, n: usize) {
    let mut candidate = 0;
    while cols.len() < n {
        assert!(candidate < n, "failed to complete orthonormal basis");
        let mut v = vec![ZERO; n];
        v[candidate] = ONE;
        candidate += 1;
        // Two rounds of classical Gram-Schmidt for numerical safety.
        for _ in 0..2 {
            for u in cols.iter() {
                let overlap: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= overlap * ui;
                }
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            let inv = C64::new(1.0 / norm, 0.0);
            for z in v.iter_mut() {
                *z *= inv;
            }
            cols.push(v);
        }
    }
}

/// Kronecker product; dimensions multiply.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let f = a[(ia, ja)];
            if f == ZERO {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out[(ia * b.rows() + ib, ja * b.cols() + jb)] = f * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Partial transpose over the composite Alice index; Bob factors fixed.
/// On basis operators `(|ij⟩⟨kl|)^Γ = |kj⟩⟨il|` with `i, k` the Alice
/// components. Involutive.
pub fn partial_transpose(m: &Matrix, space: &BipartiteSpace) -> Result<Matrix, LinalgError> {
    let total = space.total_dim();
    if !m.is_square() || m.rows() != total {
        return Err(LinalgError::DimensionMismatch);
    }
    let dims = space.dims();
    let alice: Vec<bool> = space.sides().iter().map(|s| s.is_alice()).collect();
    let nf = dims.len();
    let mut rc = vec![0usize; nf];
    let mut cc = vec![0usize; nf];
    let mut out = Matrix::zeros(total, total);
    for r in 0..total {
        decode_index(r, &dims, &mut rc);
        for c in 0..total {
            decode_index(c, &dims, &mut cc);
            // Swap the Alice components between row and column.
            let mut nr = 0usize;
            let mut nc = 0usize;
            for f in 0..nf {
                let (rf, cf) = if alice[f] { (cc[f], rc[f]) } else { (rc[f], cc[f]) };
                nr = nr * dims[f] + rf;
                nc = nc * dims[f] + cf;
            }
            out[(nr, nc)] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Trace out every factor not listed in `keep`; the factors in `keep` are
/// retained in their original order. Trace is preserved.
pub fn partial_trace(
    m: &Matrix,
    space: &BipartiteSpace,
    keep: &[usize],
) -> Result<Matrix, LinalgError> {
    let total = space.total_dim();
    if !m.is_square() || m.rows() != total {
        return Err(LinalgError::DimensionMismatch);
    }
    let dims = space.dims();
    let nf = dims.len();
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.iter().any(|&k| k >= nf) || keep_sorted.is_empty() {
        return Err(LinalgError::DimensionMismatch);
    }
    let keep_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = keep_dims.iter().product();
    let mut rc = vec![0usize; nf];
    let mut cc = vec![0usize; nf];
    let mut out = Matrix::zeros(out_dim, out_dim);
    for r in 0..total {
        decode_index(r, &dims, &mut rc);
        for c in 0..total {
            decode_index(c, &dims, &mut cc);
            // Only row/column pairs agreeing on every traced factor survive.
            if (0..nf).any(|f| !keep_sorted.contains(&f) && rc[f] != cc[f]) {
                continue;
            }
            let kr: Vec<usize> = keep_sorted.iter().map(|&k| rc[k]).collect();
            let kc: Vec<usize> = keep_sorted.iter().map(|&k| cc[k]).collect();
            out[(encode_index(&kr, &keep_dims), encode_index(&kc, &keep_dims))] += m[(r, c)];
        }
    }
    Ok(out)
}

/// True iff the minimum eigenvalue is at least `-tol · max(1, ‖h‖_∞)`.
pub fn psd_check(h: &Matrix, tol: f64) -> Result<bool, LinalgError> {
    let eig = hermitian_eigen(h)?;
    let scale = 1.0f64.max(h.max_abs());
    Ok(eig.eigenvalues.first().map_or(true, |&l| l >= -tol * scale))
}

/// Minimum eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &Matrix) -> Result<f64, LinalgError> {
    let eig = hermitian_eigen(h)?;
    Ok(eig.eigenvalues[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{BipartiteSpace, Side};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(n: usize, seed: u64) -> Matrix {
        // Small deterministic LCG; plenty for test inputs.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        Matrix::from_fn(n, n, |_, _| c(next(), next()))
    }

    fn random_hermitian(n: usize, seed: u64) -> Matrix {
        random_matrix(n, seed).hermitize()
    }

    #[test]
    fn eigen_identity_and_diagonal() {
        let eig = hermitian_eigen(&Matrix::identity(2)).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-12);

        let d = Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let eig = hermitian_eigen(&d).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_reconstructs_and_orthonormal() {
        for seed in 0..20 {
            let n = 2 + (seed as usize % 7);
            let h = random_hermitian(n, seed);
            let eig = hermitian_eigen(&h).unwrap();
            let v = &eig.eigenvectors;
            let lam = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    c(eig.eigenvalues[i], 0.0)
                } else {
                    ZERO
                }
            });
            let recon = v.matmul(&lam).matmul(&v.dagger());
            let scale = 1.0f64.max(h.max_abs());
            assert!(recon.sub(&h).max_abs() <= 1e-10 * scale, "reconstruction residual");
            let gram = v.dagger().matmul(v);
            assert!(gram.sub(&Matrix::identity(n)).max_abs() <= 1e-10, "V not unitary");
            // ascending order
            for w in eig.eigenvalues.windows(2) {
                assert!(w[0] <= w[1] + 1e-14);
            }
        }
    }

    #[test]
    fn eigen_trace_matches_sum() {
        for seed in 100..110 {
            let h = random_hermitian(6, seed);
            let eig = hermitian_eigen(&h).unwrap();
            let sum: f64 = eig.eigenvalues.iter().sum();
            let scale = 1.0f64.max(h.max_abs());
            assert!((sum - h.trace().re).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = Matrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(hermitian_eigen(&m).unwrap_err(), LinalgError::NonHermitian);
    }

    #[test]
    fn svd_zero_and_diagonal() {
        let z = Matrix::zeros(3, 2);
        let s = svd(&z).unwrap();
        assert!(s.singular_values.iter().all(|&x| x == 0.0));

        let d = Matrix::from_real(2, 2, &[3.0, 0.0, 0.0, 4.0]);
        let s = svd(&d).unwrap();
        assert!((s.singular_values[0] - 4.0).abs() < 1e-12);
        assert!((s.singular_values[1] - 3.0).abs() < 1e-12);

        let sq = Matrix::from_real(2, 2, &[0.8f64.sqrt(), 0.0, 0.0, 0.2f64.sqrt()]);
        let s = svd(&sq).unwrap();
        assert!((s.singular_values[0] - 0.8f64.sqrt()).abs() < 1e-12);
        assert!((s.singular_values[1] - 0.2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn svd_reconstructs_rectangular() {
        for (rows, cols, seed) in [(3usize, 5usize, 1u64), (5, 3, 2), (4, 4, 3), (1, 4, 4)] {
            let mut m = Matrix::zeros(rows, cols);
            let r = random_matrix(rows.max(cols), seed);
            for i in 0..rows {
                for j in 0..cols {
                    m[(i, j)] = r[(i, j)];
                }
            }
            let s = svd(&m).unwrap();
            let mut sig = Matrix::zeros(rows, cols);
            for (k, &val) in s.singular_values.iter().enumerate() {
                sig[(k, k)] = c(val, 0.0);
            }
            let recon = s.u.matmul(&sig).matmul(&s.v.dagger());
            let scale = 1.0f64.max(m.max_abs());
            assert!(recon.sub(&m).max_abs() <= 1e-10 * scale);
            // descending, nonnegative
            for w in s.singular_values.windows(2) {
                assert!(w[0] >= w[1] - 1e-14);
            }
            assert!(s.singular_values.iter().all(|&x| x >= 0.0));
            let gu = s.u.dagger().matmul(&s.u);
            assert!(gu.sub(&Matrix::identity(rows)).max_abs() <= 1e-10);
            let gv = s.v.dagger().matmul(&s.v);
            assert!(gv.sub(&Matrix::identity(cols)).max_abs() <= 1e-10);
        }
    }

    #[test]
    fn kron_basics() {
        let i2 = Matrix::identity(2);
        assert_eq!(kron(&i2, &i2), Matrix::identity(4));

        let z = Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let zi = kron(&z, &i2);
        let expect = Matrix::from_fn(4, 4, |i, j| {
            if i == j {
                c(if i < 2 { 1.0 } else { -1.0 }, 0.0)
            } else {
                ZERO
            }
        });
        assert_eq!(zi, expect);
    }

    #[test]
    fn kron_associative() {
        for seed in 0..3 {
            let a = random_matrix(2, seed);
            let b = random_matrix(2, seed + 10);
            let cm = random_matrix(2, seed + 20);
            let left = kron(&kron(&a, &b), &cm);
            let right = kron(&a, &kron(&b, &cm));
            assert!(left.sub(&right).max_abs() < 1e-14);
        }
    }

    fn space_ab(da: usize, db: usize) -> BipartiteSpace {
        BipartiteSpace::new(vec![(da, Side::A), (db, Side::B)]).unwrap()
    }

    #[test]
    fn partial_transpose_product_case() {
        let sp = space_ab(2, 2);
        for seed in 0..10 {
            let a = random_matrix(2, seed);
            let b = random_matrix(2, seed + 5);
            let lhs = partial_transpose(&kron(&a, &b), &sp).unwrap();
            let rhs = kron(&a.transpose(), &b);
            assert!(lhs.sub(&rhs).max_abs() < 1e-14);
        }
    }

    #[test]
    fn partial_transpose_basis_operator() {
        // |01⟩⟨10| has Alice comps (0 row, 1 col); swapping gives |11⟩⟨00|.
        // Spec case: |0⟩⟨1| ⊗ |1⟩⟨0| → |1⟩⟨0| ⊗ |1⟩⟨0|.
        let sp = space_ab(2, 2);
        let e01 = Matrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]); // |0⟩⟨1|
        let e10 = Matrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]); // |1⟩⟨0|
        let m = kron(&e01, &e10);
        let pt = partial_transpose(&m, &sp).unwrap();
        let expect = kron(&e10, &e10);
        assert!(pt.sub(&expect).max_abs() < 1e-14);
    }

    #[test]
    fn partial_transpose_involutive_and_trace_preserving() {
        let sp = BipartiteSpace::new(vec![(2, Side::A), (3, Side::B), (2, Side::A)]).unwrap();
        for seed in 0..50 {
            let m = random_matrix(12, seed);
            let pt = partial_transpose(&m, &sp).unwrap();
            let back = partial_transpose(&pt, &sp).unwrap();
            assert!(back.sub(&m).max_abs() < 1e-14);
            assert!((pt.trace() - m.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_entangled_projector() {
        // Projector onto (|00⟩+|11⟩)/√2: partial transpose has min eigenvalue -1/2.
        let sp = space_ab(2, 2);
        let mut v = vec![ZERO; 4];
        v[0] = c(1.0 / 2.0f64.sqrt(), 0.0);
        v[3] = c(1.0 / 2.0f64.sqrt(), 0.0);
        let proj = Matrix::outer(&v, &v);
        let pt = partial_transpose(&proj, &sp).unwrap();
        let eig = hermitian_eigen(&pt).unwrap();
        assert!((eig.eigenvalues[0] + 0.5).abs() < 1e-12);
        assert!(!psd_check(&pt, 1e-9).unwrap());
    }

    #[test]
    fn partial_trace_product_and_entangled() {
        let sp = space_ab(2, 2);
        for seed in 0..5 {
            let a = random_matrix(2, seed);
            let b = random_matrix(2, seed + 3);
            let reduced = partial_trace(&kron(&a, &b), &sp, &[0]).unwrap();
            let expect = a.scale(b.trace());
            assert!(reduced.sub(&expect).max_abs() < 1e-13);
        }

        let mut v = vec![ZERO; 4];
        v[0] = c(1.0 / 2.0f64.sqrt(), 0.0);
        v[3] = c(1.0 / 2.0f64.sqrt(), 0.0);
        let proj = Matrix::outer(&v, &v);
        for keep in [0usize, 1] {
            let red = partial_trace(&proj, &sp, &[keep]).unwrap();
            assert!(red.sub(&Matrix::identity(2).scale_re(0.5)).max_abs() < 1e-14);
        }

        // √0.8|00⟩ + √0.2|11⟩ reduces to diag(0.8, 0.2) on Alice.
        let mut w = vec![ZERO; 4];
        w[0] = c(0.8f64.sqrt(), 0.0);
        w[3] = c(0.2f64.sqrt(), 0.0);
        let proj = Matrix::outer(&w, &w);
        let red = partial_trace(&proj, &sp, &[0]).unwrap();
        let expect = Matrix::from_real(2, 2, &[0.8, 0.0, 0.0, 0.2]);
        assert!(red.sub(&expect).max_abs() < 1e-14);
    }

    #[test]
    fn psd_check_cases() {
        assert!(psd_check(&Matrix::identity(3), 1e-9).unwrap());
        let d = Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, -0.1]);
        assert!(!psd_check(&d, 1e-9).unwrap());
    }

    #[test]
    fn psd_projection_passes() {
        for seed in 0..10 {
            let h = random_hermitian(5, seed);
            let eig = hermitian_eigen(&h).unwrap();
            let n = 5;
            let lam = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    c(eig.eigenvalues[i].max(0.0), 0.0)
                } else {
                    ZERO
                }
            });
            let proj = eig
                .eigenvectors
                .matmul(&lam)
                .matmul(&eig.eigenvectors.dagger())
                .hermitize();
            assert!(psd_check(&proj, 1e-9).unwrap());
        }
    }

    #[test]
    fn permute_subsystems_swaps_kron_factors() {
        let a = random_matrix(2, 7);
        let b = random_matrix(3, 8);
        let ab = kron(&a, &b);
        let ba = ab.permute_subsystems(&[2, 3], &[1, 0]);
        assert!(ba.sub(&kron(&b, &a)).max_abs() < 1e-14);
    }
}
