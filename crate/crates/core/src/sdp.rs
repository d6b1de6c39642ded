//! Self-contained solver for small dense semidefinite programs in standard
//! conic form, plus a dense simplex LP used for the diagonal special case.
//!
//! Problems are stated over complex Hermitian blocks:
//!
//! ```text
//!   maximize   Σ_b tr(C_b X_b)
//!   subject to Σ_b tr(A_{i,b} X_b) = rhs_i   (i = 1..m)
//!              X_b ⪰ 0
//! ```
//!
//! Internally each Hermitian block becomes a real symmetric block (doubled
//! dimension unless the block's data is entirely real) and a primal-dual
//! interior point method with a Mehrotra-style predictor-corrector runs on
//! the homogeneous self-dual embedding, so both optimality and primal
//! infeasibility come with certificates. Constraint matrices are kept as
//! sparse triplets for the Schur complement assembly; everything else is
//! dense.

pub mod lp;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

// Inherent f64 methods shadow this in std test builds.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::linalg::{Matrix, C64};

/// Cap on the summed Hermitian block dimensions.
pub const MAX_TOTAL_DIM: usize = 600;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SdpError {
    /// Total variable dimension exceeds [`MAX_TOTAL_DIM`].
    TooLarge,
    /// A coefficient matrix is not Hermitian or has the wrong shape.
    BadCoefficient,
    /// The problem has no constraints.
    NoConstraints,
    /// Rank-deficient or vacuous constraint system detected during
    /// factorization; reported, not silently repaired.
    IllPosed,
}

impl fmt::Display for SdpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SdpError::TooLarge => write!(f, "total variable dimension exceeds {MAX_TOTAL_DIM}"),
            SdpError::BadCoefficient => write!(f, "coefficient matrix not Hermitian or mis-shaped"),
            SdpError::NoConstraints => write!(f, "problem needs at least one constraint"),
            SdpError::IllPosed => write!(f, "rank-deficient constraint system"),
        }
    }
}

/// One linear equality `Σ_b tr(coeff_b · X_b) = rhs`. Blocks without a term
/// are simply omitted from `terms`.
#[derive(Debug, Clone)]
pub struct SdpConstraint {
    pub terms: Vec<(usize, Matrix)>,
    pub rhs: f64,
}

/// Block-PSD-variable conic program with linear equalities.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub block_dims: Vec<usize>,
    /// One Hermitian objective matrix per block; the objective is maximized.
    pub objective: Vec<Matrix>,
    pub constraints: Vec<SdpConstraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    Indeterminate,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// Hermitian primal blocks (meaningful when `status == Optimal`).
    pub primal: Vec<Matrix>,
    /// Dual multipliers: the dual point at optimality, or the Farkas
    /// certificate (normalized to `Σ y_i rhs_i = 1`) when infeasible.
    pub dual_multipliers: Vec<f64>,
    /// Objective in the caller's (maximize) sense.
    pub objective: f64,
    /// Complementarity gap `Σ tr(X_b S_b) / τ²` at the last iterate.
    pub gap: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub gap_tol: f64,
    pub max_iter: usize,
    /// Reserved; the solver is deterministic and never draws randomness.
    pub seed: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            gap_tol: 1e-8,
            max_iter: 200,
            seed: None,
        }
    }
}

impl SdpProblem {
    pub fn new(
        block_dims: Vec<usize>,
        objective: Vec<Matrix>,
        constraints: Vec<SdpConstraint>,
    ) -> Result<Self, SdpError> {
        if block_dims.iter().sum::<usize>() > MAX_TOTAL_DIM {
            return Err(SdpError::TooLarge);
        }
        if constraints.is_empty() {
            return Err(SdpError::NoConstraints);
        }
        if objective.len() != block_dims.len() || block_dims.iter().any(|&d| d == 0) {
            return Err(SdpError::BadCoefficient);
        }
        let check = |b: usize, m: &Matrix| -> Result<(), SdpError> {
            if b >= block_dims.len() || m.rows() != block_dims[b] || !m.is_square() {
                return Err(SdpError::BadCoefficient);
            }
            if !m.is_hermitian(1e-10) {
                return Err(SdpError::BadCoefficient);
            }
            Ok(())
        };
        for (b, c) in objective.iter().enumerate() {
            check(b, c)?;
        }
        for con in &constraints {
            for (b, a) in &con.terms {
                check(*b, a)?;
            }
        }
        Ok(SdpProblem {
            block_dims,
            objective,
            constraints,
        })
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }
}

// ──────────────────────────── dense real kernel ────────────────────────────

/// Dense real square matrix, row major. Internal to the solver.
#[derive(Debug, Clone)]
pub(crate) struct RMat {
    n: usize,
    a: Vec<f64>,
}

impl RMat {
    pub(crate) fn zeros(n: usize) -> Self {
        RMat { n, a: vec![0.0; n * n] }
    }

    pub(crate) fn identity(n: usize) -> Self {
        let mut m = RMat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub(crate) fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.a[i * self.n + j]
    }

    pub(crate) fn dim(&self) -> usize {
        self.n
    }

    pub(crate) fn add_scaled(&mut self, other: &RMat, s: f64) {
        for (x, y) in self.a.iter_mut().zip(&other.a) {
            *x += s * y;
        }
    }

    pub(crate) fn scale(&mut self, s: f64) {
        for x in self.a.iter_mut() {
            *x *= s;
        }
    }

    /// tr(self · other) for symmetric matrices (elementwise dot).
    pub(crate) fn sym_dot(&self, other: &RMat) -> f64 {
        self.a.iter().zip(&other.a).map(|(x, y)| x * y).sum()
    }

    pub(crate) fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    pub(crate) fn matmul(&self, other: &RMat) -> RMat {
        let n = self.n;
        let mut out = RMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let v = self.a[i * n + k];
                if v == 0.0 {
                    continue;
                }
                let row = &other.a[k * n..(k + 1) * n];
                let dst = &mut out.a[i * n..(i + 1) * n];
                for (d, &r) in dst.iter_mut().zip(row) {
                    *d += v * r;
                }
            }
        }
        out
    }

    pub(crate) fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (self.a[i * n + j] + self.a[j * n + i]);
                self.a[i * n + j] = v;
                self.a[j * n + i] = v;
            }
        }
    }

    /// Lower Cholesky factor; `None` on a nonpositive pivot. `self` must be
    /// symmetric.
    pub(crate) fn cholesky(&self) -> Option<RMat> {
        self.cholesky_with_pivot_floor(0.0)
    }

    /// Cholesky requiring every pivot to exceed `rel_floor` times the largest
    /// initial diagonal entry; used to detect rank deficiency.
    pub(crate) fn cholesky_with_pivot_floor(&self, rel_floor: f64) -> Option<RMat> {
        let n = self.n;
        let mut l = self.clone();
        let floor = if rel_floor > 0.0 {
            let max_diag = (0..n).fold(0.0f64, |m, i| m.max(l.a[i * n + i].abs()));
            rel_floor * max_diag.max(1e-300)
        } else {
            0.0
        };
        for j in 0..n {
            let mut d = l.a[j * n + j];
            for k in 0..j {
                d -= l.a[j * n + k] * l.a[j * n + k];
            }
            if !(d > floor) || !d.is_finite() {
                return None;
            }
            let dj = d.sqrt();
            l.a[j * n + j] = dj;
            let inv = 1.0 / dj;
            for i in (j + 1)..n {
                let mut v = l.a[i * n + j];
                let (ri, rj) = (i * n, j * n);
                for k in 0..j {
                    v -= l.a[ri + k] * l.a[rj + k];
                }
                l.a[ri + j] = v * inv;
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                l.a[i * n + j] = 0.0;
            }
        }
        Some(l)
    }

    /// Solve `(L Lᵀ) x = rhs` given the Cholesky factor.
    pub(crate) fn chol_solve(l: &RMat, rhs: &[f64]) -> Vec<f64> {
        let n = l.n;
        let mut x = rhs.to_vec();
        for i in 0..n {
            let mut v = x[i];
            for k in 0..i {
                v -= l.a[i * n + k] * x[k];
            }
            x[i] = v / l.a[i * n + i];
        }
        for i in (0..n).rev() {
            let mut v = x[i];
            for k in (i + 1)..n {
                v -= l.a[k * n + i] * x[k];
            }
            x[i] = v / l.a[i * n + i];
        }
        x
    }

    /// Inverse from the Cholesky factor.
    pub(crate) fn inverse_from_chol(l: &RMat) -> RMat {
        let n = l.n;
        let mut inv = RMat::zeros(n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[j] = 1.0;
            let col = RMat::chol_solve(l, &e);
            for i in 0..n {
                inv.a[i * n + j] = col[i];
            }
        }
        inv.symmetrize();
        inv
    }
}

/// Sparse symmetric matrix as upper triplets `(p ≤ q, value)`; an
/// off-diagonal triplet stands for the pair of equal entries.
#[derive(Debug, Clone, Default)]
struct SparseSym {
    entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    fn from_rmat(m: &RMat) -> Self {
        let n = m.dim();
        let mut entries = Vec::new();
        for p in 0..n {
            for q in p..n {
                let v = m.at(p, q);
                if v.abs() > 1e-14 {
                    entries.push((p, q, v));
                }
            }
        }
        SparseSym { entries }
    }

    fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// tr(A · M) for dense symmetric `M`.
    fn dot(&self, m: &RMat) -> f64 {
        let mut acc = 0.0;
        for &(p, q, v) in &self.entries {
            acc += if p == q { v * m.at(p, p) } else { 2.0 * v * m.at(p, q) };
        }
        acc
    }

    /// `out = sym(X · A · Z)` accumulated from rank-one pieces; `X`, `Z`
    /// symmetric dense.
    fn k_apply(&self, x: &RMat, z: &RMat, out: &mut RMat) {
        let n = x.dim();
        out.a.iter_mut().for_each(|v| *v = 0.0);
        for &(p, q, v) in &self.entries {
            for i in 0..n {
                let xp = x.at(i, p);
                let dst = &mut out.a[i * n..(i + 1) * n];
                if p == q {
                    if xp == 0.0 {
                        continue;
                    }
                    let zrow = &z.a[q * n..(q + 1) * n];
                    for (d, &zv) in dst.iter_mut().zip(zrow) {
                        *d += v * xp * zv;
                    }
                } else {
                    let xq = x.at(i, q);
                    let zq = &z.a[q * n..(q + 1) * n];
                    let zp = &z.a[p * n..(p + 1) * n];
                    for ((d, &zqv), &zpv) in dst.iter_mut().zip(zq).zip(zp) {
                        *d += v * (xp * zqv + xq * zpv);
                    }
                }
            }
        }
        out.symmetrize();
    }
}

/// Dense version of the HKM scaling operator `sym(X · U · Z)`.
fn k_apply_dense(x: &RMat, z: &RMat, u: &RMat) -> RMat {
    let mut t = x.matmul(u).matmul(z);
    t.symmetrize();
    t
}

// ─────────────────────────── real embedding ───────────────────────────

struct EmbeddedBlock {
    hdim: usize,
    rdim: usize,
    complex: bool,
}

/// Real symmetric image of a Hermitian coefficient. For complex blocks this
/// is `[[Re, -Im], [Im, Re]] / 2`; the halving keeps trace inner products
/// equal to their complex counterparts.
fn embed_coeff(m: &Matrix, block: &EmbeddedBlock) -> RMat {
    let n = block.hdim;
    let mut out = RMat::zeros(block.rdim);
    if block.complex {
        for i in 0..n {
            for j in 0..n {
                let z = m[(i, j)];
                *out.at_mut(i, j) = 0.5 * z.re;
                *out.at_mut(i + n, j + n) = 0.5 * z.re;
                *out.at_mut(i, j + n) = -0.5 * z.im;
                *out.at_mut(i + n, j) = 0.5 * z.im;
            }
        }
    } else {
        for i in 0..n {
            for j in 0..n {
                *out.at_mut(i, j) = m[(i, j)].re;
            }
        }
    }
    out
}

/// Decode a real symmetric iterate back to a Hermitian matrix (the variable
/// embedding carries no ½ factor).
fn decode_block(y: &RMat, block: &EmbeddedBlock) -> Matrix {
    let n = block.hdim;
    if block.complex {
        Matrix::from_fn(n, n, |i, j| {
            let re = 0.5 * (y.at(i, j) + y.at(i + n, j + n));
            let im = 0.5 * (y.at(i + n, j) - y.at(i, j + n));
            C64::new(re, im)
        })
        .hermitize()
    } else {
        Matrix::from_fn(n, n, |i, j| C64::new(0.5 * (y.at(i, j) + y.at(j, i)), 0.0))
    }
}

fn block_is_real(problem: &SdpProblem, b: usize) -> bool {
    let imag_small = |m: &Matrix| m.data().iter().all(|z| z.im.abs() <= 1e-14);
    imag_small(&problem.objective[b])
        && problem.constraints.iter().all(|c| {
            c.terms
                .iter()
                .filter(|(bb, _)| *bb == b)
                .all(|(_, m)| imag_small(m))
        })
}

// ─────────────────────────────── solver ───────────────────────────────

struct Workspace {
    blocks: Vec<EmbeddedBlock>,
    /// Internal minimize-form objective per block (`-C`).
    c_int: Vec<RMat>,
    /// Sparse constraint terms: `rows[i]` is (`(block, coeff)` list, rhs).
    rows: Vec<(Vec<(usize, SparseSym)>, f64)>,
    block_rows: Vec<Vec<usize>>,
    b_vec: Vec<f64>,
}

fn build_workspace(problem: &SdpProblem) -> Result<Workspace, SdpError> {
    let blocks: Vec<EmbeddedBlock> = (0..problem.block_dims.len())
        .map(|b| {
            let hdim = problem.block_dims[b];
            let complex = !block_is_real(problem, b);
            EmbeddedBlock {
                hdim,
                rdim: if complex { 2 * hdim } else { hdim },
                complex,
            }
        })
        .collect();

    let c_int: Vec<RMat> = blocks
        .iter()
        .enumerate()
        .map(|(b, blk)| {
            let mut c = embed_coeff(&problem.objective[b], blk);
            c.scale(-1.0);
            c
        })
        .collect();

    let mut rows = Vec::with_capacity(problem.constraints.len());
    let mut block_rows = vec![Vec::new(); blocks.len()];
    for (i, con) in problem.constraints.iter().enumerate() {
        let mut terms: Vec<(usize, SparseSym)> = Vec::new();
        for (b, m) in &con.terms {
            let sp = SparseSym::from_rmat(&embed_coeff(m, &blocks[*b]));
            if sp.is_empty() {
                continue;
            }
            if terms.iter().any(|(bb, _)| bb == b) {
                return Err(SdpError::BadCoefficient); // duplicate block term
            }
            terms.push((*b, sp));
        }
        if terms.is_empty() {
            // A vacuous row constrains nothing (or is plainly unsatisfiable).
            return Err(SdpError::IllPosed);
        }
        for (b, _) in &terms {
            block_rows[*b].push(i);
        }
        rows.push((terms, con.rhs));
    }
    let b_vec = problem.constraints.iter().map(|c| c.rhs).collect();
    Ok(Workspace {
        blocks,
        c_int,
        rows,
        block_rows,
        b_vec,
    })
}

impl Workspace {
    fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// `A(U)` for dense symmetric blocks `U`.
    fn apply_a(&self, u: &[RMat]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|(terms, _)| terms.iter().map(|(b, sp)| sp.dot(&u[*b])).sum())
            .collect()
    }

    /// `Aᵀ(y)` as dense symmetric blocks.
    fn apply_at(&self, y: &[f64]) -> Vec<RMat> {
        let mut out: Vec<RMat> = self.blocks.iter().map(|b| RMat::zeros(b.rdim)).collect();
        for (i, (terms, _)) in self.rows.iter().enumerate() {
            let yi = y[i];
            if yi == 0.0 {
                continue;
            }
            for (b, sp) in terms {
                let dst = &mut out[*b];
                for &(p, q, v) in &sp.entries {
                    *dst.at_mut(p, q) += yi * v;
                    if p != q {
                        *dst.at_mut(q, p) += yi * v;
                    }
                }
            }
        }
        out
    }
}

struct Point {
    x: Vec<RMat>,
    s: Vec<RMat>,
    y: Vec<f64>,
    tau: f64,
    kappa: f64,
}

struct Direction {
    dx: Vec<RMat>,
    ds: Vec<RMat>,
    dy: Vec<f64>,
    dtau: f64,
    dkappa: f64,
}

/// Solve the program with the homogeneous self-dual interior point method.
pub fn solve(problem: &SdpProblem, opts: &SolveOptions) -> Result<SdpSolution, SdpError> {
    if problem.block_dims.iter().sum::<usize>() > MAX_TOTAL_DIM {
        return Err(SdpError::TooLarge);
    }
    if problem.constraints.is_empty() {
        return Err(SdpError::NoConstraints);
    }
    let ws = build_workspace(problem)?;
    let m = ws.num_rows();
    let nu: usize = ws.blocks.iter().map(|b| b.rdim).sum();

    let mut pt = Point {
        x: ws.blocks.iter().map(|b| RMat::identity(b.rdim)).collect(),
        s: ws.blocks.iter().map(|b| RMat::identity(b.rdim)).collect(),
        y: vec![0.0; m],
        tau: 1.0,
        kappa: 1.0,
    };

    let feas_tol = (opts.gap_tol * 0.1).min(1e-9);
    let c_scale = 1.0f64.max(ws.c_int.iter().fold(0.0f64, |a, c| a.max(c.max_abs())));

    let mut iterations = 0;
    let mut last_gap = f64::INFINITY;
    for iter in 0..opts.max_iter {
        iterations = iter + 1;

        // HKM scaling data: S⁻¹ per block.
        let mut zinv = Vec::with_capacity(ws.blocks.len());
        for s in &pt.s {
            let l = match s.cholesky() {
                Some(l) => l,
                None => return Ok(finish_indeterminate(&pt, last_gap, iterations)),
            };
            zinv.push(RMat::inverse_from_chol(&l));
        }

        // Schur matrix M_ij = Σ_b tr(A_i sym(X A_j S⁻¹)).
        let mut schur = RMat::zeros(m);
        {
            let mut tbufs: Vec<RMat> = ws.blocks.iter().map(|b| RMat::zeros(b.rdim)).collect();
            for j in 0..m {
                for (b, spj) in &ws.rows[j].0 {
                    spj.k_apply(&pt.x[*b], &zinv[*b], &mut tbufs[*b]);
                    for &i in &ws.block_rows[*b] {
                        if let Some((_, spi)) = ws.rows[i].0.iter().find(|(bb, _)| bb == b) {
                            *schur.at_mut(i, j) += spi.dot(&tbufs[*b]);
                        }
                    }
                }
            }
        }
        schur.symmetrize();
        // Iteration 0 sees the raw constraint Gram (X = S = I); a pivot
        // collapse there means structurally dependent rows.
        let schur_chol = if iter == 0 {
            schur.cholesky_with_pivot_floor(1e-10)
        } else {
            schur.cholesky()
        };
        let schur_l = match schur_chol {
            Some(l) => l,
            None => {
                if iter == 0 {
                    return Err(SdpError::IllPosed);
                }
                // Late-iteration numerical breakdown: tiny diagonal lift.
                let mut reg = schur.clone();
                let lift = 1e-12 * (1.0 + schur.max_abs());
                for i in 0..m {
                    *reg.at_mut(i, i) += lift;
                }
                match reg.cholesky() {
                    Some(l) => l,
                    None => return Ok(finish_indeterminate(&pt, last_gap, iterations)),
                }
            }
        };

        // Residuals.
        let ax = ws.apply_a(&pt.x);
        let r_p: Vec<f64> = (0..m).map(|i| ax[i] - ws.b_vec[i] * pt.tau).collect();
        let at_y = ws.apply_at(&pt.y);
        let mut r_d: Vec<RMat> = Vec::with_capacity(ws.blocks.len());
        for b in 0..ws.blocks.len() {
            let mut rd = at_y[b].clone();
            rd.add_scaled(&pt.s[b], 1.0);
            rd.add_scaled(&ws.c_int[b], -pt.tau);
            r_d.push(rd);
        }
        let cx: f64 = ws.c_int.iter().zip(&pt.x).map(|(c, x)| c.sym_dot(x)).sum();
        let by: f64 = ws.b_vec.iter().zip(&pt.y).map(|(b, y)| b * y).sum();
        let r_g = cx - by + pt.kappa;
        let gap_inner: f64 = pt.x.iter().zip(&pt.s).map(|(x, s)| x.sym_dot(s)).sum();
        let mu = (gap_inner + pt.tau * pt.kappa) / (nu + 1) as f64;

        // Weak duality at the iterate, up to residual slack.
        #[cfg(debug_assertions)]
        {
            let slack: f64 = pt.y.iter().zip(&r_p).map(|(y, r)| y * r).sum::<f64>().abs()
                + r_d
                    .iter()
                    .zip(&pt.x)
                    .map(|(r, x)| r.sym_dot(x).abs())
                    .sum::<f64>();
            debug_assert!(
                cx - by + slack / pt.tau.max(1e-300) + 1e-9 * (1.0 + cx.abs() + by.abs()) >= 0.0,
                "weak duality violated beyond residual slack"
            );
        }

        // Convergence of the scaled (divided by τ) iterate.
        let inv_tau = 1.0 / pt.tau;
        let p_res = (0..m).fold(0.0f64, |acc, i| {
            acc.max((ax[i] * inv_tau - ws.b_vec[i]).abs() / (1.0 + ws.b_vec[i].abs()))
        });
        let d_res = r_d
            .iter()
            .fold(0.0f64, |acc, rd| acc.max(rd.max_abs() * inv_tau))
            / c_scale;
        let obj_p = cx * inv_tau;
        let gap_scaled = gap_inner * inv_tau * inv_tau;
        last_gap = gap_scaled;
        if p_res <= feas_tol && d_res <= feas_tol && gap_scaled <= opts.gap_tol * (1.0 + obj_p.abs())
        {
            return Ok(finish_optimal(problem, &ws, &pt, gap_scaled, iterations));
        }

        // Infeasibility certificate once τ collapses relative to κ.
        if pt.kappa > 1e6 * pt.tau {
            if let Some(cert) = try_infeasibility_certificate(&ws, &pt) {
                return Ok(SdpSolution {
                    status: SdpStatus::Infeasible,
                    primal: Vec::new(),
                    dual_multipliers: cert,
                    objective: 0.0,
                    gap: gap_scaled,
                    iterations,
                });
            }
            if pt.tau < 1e-12 {
                return Ok(finish_indeterminate(&pt, gap_scaled, iterations));
            }
        }

        // Predictor (affine) direction: γ = 0.
        let rc_aff: Vec<RMat> = pt
            .x
            .iter()
            .map(|x| {
                let mut r = x.clone();
                r.scale(-1.0);
                r
            })
            .collect();
        let aff = solve_newton(
            &ws,
            &pt,
            &zinv,
            &schur_l,
            &r_p,
            &r_d,
            r_g,
            &rc_aff,
            -pt.tau * pt.kappa,
            1.0,
        );

        let alpha_aff = max_step(&pt, &aff);
        let mut gap_aff = (pt.tau + alpha_aff * aff.dtau) * (pt.kappa + alpha_aff * aff.dkappa);
        for b in 0..pt.x.len() {
            let mut xa = pt.x[b].clone();
            xa.add_scaled(&aff.dx[b], alpha_aff);
            let mut sa = pt.s[b].clone();
            sa.add_scaled(&aff.ds[b], alpha_aff);
            gap_aff += xa.sym_dot(&sa);
        }
        let mu_aff = gap_aff / (nu + 1) as f64;
        let sigma = (mu_aff / mu).powi(3).clamp(1e-8, 0.999);

        // Combined direction: centering plus second-order correctors.
        let mut rc: Vec<RMat> = Vec::with_capacity(pt.x.len());
        for b in 0..pt.x.len() {
            let mut r = zinv[b].clone();
            r.scale(sigma * mu);
            r.add_scaled(&pt.x[b], -1.0);
            let corr = k_apply_dense(&aff.dx[b], &zinv[b], &aff.ds[b]);
            r.add_scaled(&corr, -1.0);
            rc.push(r);
        }
        let rc_tau = sigma * mu - pt.tau * pt.kappa - aff.dtau * aff.dkappa;
        let dir = solve_newton(
            &ws,
            &pt,
            &zinv,
            &schur_l,
            &r_p,
            &r_d,
            r_g,
            &rc,
            rc_tau,
            1.0 - sigma,
        );

        let alpha = 0.99 * max_step(&pt, &dir);
        for b in 0..pt.x.len() {
            pt.x[b].add_scaled(&dir.dx[b], alpha);
            pt.s[b].add_scaled(&dir.ds[b], alpha);
        }
        for (y, dy) in pt.y.iter_mut().zip(&dir.dy) {
            *y += alpha * dy;
        }
        pt.tau += alpha * dir.dtau;
        pt.kappa += alpha * dir.dkappa;
        if pt.tau <= 0.0 || pt.kappa <= 0.0 || !pt.tau.is_finite() {
            return Ok(finish_indeterminate(&pt, gap_scaled, iterations));
        }
    }

    Ok(finish_indeterminate(&pt, last_gap, iterations))
}

/// Newton direction for residual factor `eta` (1 for the predictor, `1-σ`
/// for the combined step) and complementarity targets `rc`, `rc_tau`.
#[allow(clippy::too_many_arguments)]
fn solve_newton(
    ws: &Workspace,
    pt: &Point,
    zinv: &[RMat],
    schur_l: &RMat,
    r_p: &[f64],
    r_d: &[RMat],
    r_g: f64,
    rc: &[RMat],
    rc_tau: f64,
    eta: f64,
) -> Direction {
    let m = ws.num_rows();
    let nb = ws.blocks.len();

    let kc: Vec<RMat> = (0..nb)
        .map(|b| k_apply_dense(&pt.x[b], &zinv[b], &ws.c_int[b]))
        .collect();
    let krd: Vec<RMat> = (0..nb)
        .map(|b| k_apply_dense(&pt.x[b], &zinv[b], &r_d[b]))
        .collect();

    let a_kc = ws.apply_a(&kc);
    let a_krd = ws.apply_a(&krd);
    let a_rc = ws.apply_a(rc);

    // M Δy − u Δτ = v₁ and dᵀΔy − g Δτ = v₂, then back-substitution.
    let u: Vec<f64> = (0..m).map(|i| ws.b_vec[i] + a_kc[i]).collect();
    let v1: Vec<f64> = (0..m)
        .map(|i| -eta * r_p[i] - a_rc[i] - eta * a_krd[i])
        .collect();

    let g_c: f64 = ws.c_int.iter().zip(&kc).map(|(c, k)| c.sym_dot(k)).sum();
    let c_rc: f64 = ws.c_int.iter().zip(rc).map(|(c, r)| c.sym_dot(r)).sum();
    let c_krd: f64 = ws.c_int.iter().zip(&krd).map(|(c, k)| c.sym_dot(k)).sum();
    let d: Vec<f64> = (0..m).map(|i| a_kc[i] - ws.b_vec[i]).collect();
    let g = g_c + pt.kappa / pt.tau;
    let v2 = -eta * r_g - c_rc - eta * c_krd - rc_tau / pt.tau;

    let p = RMat::chol_solve(schur_l, &v1);
    let q = RMat::chol_solve(schur_l, &u);
    let dp: f64 = d.iter().zip(&p).map(|(a, b)| a * b).sum();
    let dq: f64 = d.iter().zip(&q).map(|(a, b)| a * b).sum();
    let denom = dq - g;
    let dtau = if denom.abs() > 1e-300 { (v2 - dp) / denom } else { 0.0 };
    let dy: Vec<f64> = (0..m).map(|i| p[i] + dtau * q[i]).collect();

    // ΔS = −η R_d + C Δτ − Aᵀ(Δy); ΔX = Rc − K(ΔS).
    let at_dy = ws.apply_at(&dy);
    let mut ds = Vec::with_capacity(nb);
    let mut dx = Vec::with_capacity(nb);
    for b in 0..nb {
        let mut dsb = r_d[b].clone();
        dsb.scale(-eta);
        dsb.add_scaled(&ws.c_int[b], dtau);
        dsb.add_scaled(&at_dy[b], -1.0);
        let kds = k_apply_dense(&pt.x[b], &zinv[b], &dsb);
        let mut dxb = rc[b].clone();
        dxb.add_scaled(&kds, -1.0);
        dx.push(dxb);
        ds.push(dsb);
    }
    let dkappa = (rc_tau - pt.kappa * dtau) / pt.tau;
    Direction {
        dx,
        ds,
        dy,
        dtau,
        dkappa,
    }
}

/// Largest step in a geometric ladder keeping every block strictly positive
/// definite and τ, κ positive; Cholesky probes instead of eigenvalues.
fn max_step(pt: &Point, dir: &Direction) -> f64 {
    let mut alpha: f64 = 1.0;
    if dir.dtau < 0.0 {
        alpha = alpha.min(-0.999 * pt.tau / dir.dtau);
    }
    if dir.dkappa < 0.0 {
        alpha = alpha.min(-0.999 * pt.kappa / dir.dkappa);
    }
    let psd_at = |alpha: f64| -> bool {
        for b in 0..pt.x.len() {
            let mut xa = pt.x[b].clone();
            xa.add_scaled(&dir.dx[b], alpha);
            if xa.cholesky().is_none() {
                return false;
            }
            let mut sa = pt.s[b].clone();
            sa.add_scaled(&dir.ds[b], alpha);
            if sa.cholesky().is_none() {
                return false;
            }
        }
        true
    };
    let mut a = alpha;
    for _ in 0..400 {
        if psd_at(a) {
            return a;
        }
        a *= 0.94;
        if a < 1e-12 {
            break;
        }
    }
    0.0
}

fn try_infeasibility_certificate(ws: &Workspace, pt: &Point) -> Option<Vec<f64>> {
    let by: f64 = ws.b_vec.iter().zip(&pt.y).map(|(b, y)| b * y).sum();
    if by <= 1e-12 {
        return None;
    }
    let yhat: Vec<f64> = pt.y.iter().map(|y| y / by).collect();
    let aty = ws.apply_at(&yhat);
    // Σ ŷ_i A_i must be negative semidefinite on every block: check that
    // (ε·I − Σ ŷ A) is positive definite for a small ε.
    for m in &aty {
        let n = m.dim();
        let eps = 1e-8 * (1.0 + m.max_abs());
        let mut shifted = m.clone();
        shifted.scale(-1.0);
        for i in 0..n {
            *shifted.at_mut(i, i) += eps;
        }
        if shifted.cholesky().is_none() {
            return None;
        }
    }
    Some(yhat)
}

fn finish_optimal(
    problem: &SdpProblem,
    ws: &Workspace,
    pt: &Point,
    gap: f64,
    iterations: usize,
) -> SdpSolution {
    let inv_tau = 1.0 / pt.tau;
    let primal: Vec<Matrix> = (0..ws.blocks.len())
        .map(|b| {
            let mut xb = pt.x[b].clone();
            xb.scale(inv_tau);
            decode_block(&xb, &ws.blocks[b])
        })
        .collect();
    let objective: f64 = primal
        .iter()
        .zip(&problem.objective)
        .map(|(x, c)| c.hs_inner(x).re)
        .sum();
    // The caller-facing dual for "maximize" flips the internal sign.
    let dual_multipliers: Vec<f64> = pt.y.iter().map(|y| -y * inv_tau).collect();
    SdpSolution {
        status: SdpStatus::Optimal,
        primal,
        dual_multipliers,
        objective,
        gap,
        iterations,
    }
}

fn finish_indeterminate(pt: &Point, gap: f64, iterations: usize) -> SdpSolution {
    SdpSolution {
        status: SdpStatus::Indeterminate,
        primal: Vec::new(),
        dual_multipliers: pt.y.clone(),
        objective: 0.0,
        gap,
        iterations,
    }
}
