//! Dense two-phase simplex for small linear programs.
//!
//! This is the independent "diagonal path" companion to the interior-point
//! solver: diagonal-coefficient SDPs reduce to exactly this form, and the
//! multicopy reduction solves its sign-pattern programs here. Everything is
//! a dense tableau; sizes stay in the hundreds of variables.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpCmp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct LpRow {
    /// Sparse coefficients `(variable index, value)`.
    pub coeffs: Vec<(usize, f64)>,
    pub cmp: LpCmp,
    pub rhs: f64,
}

/// `maximize objective·x` subject to the rows and per-variable bounds
/// `lo ≤ x ≤ hi` (`hi` may be infinite; `lo` must be finite).
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    pub bounds: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    BadShape,
    IterationLimit,
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::BadShape => write!(f, "inconsistent problem shape"),
            LpError::IterationLimit => write!(f, "simplex iteration limit reached"),
        }
    }
}

const EPS: f64 = 1e-9;

struct Tableau {
    m: usize,
    n: usize,
    /// m rows of n coefficients plus the rhs column.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col];
        let inv = 1.0 / piv;
        for v in self.rows[row].iter_mut() {
            *v *= inv;
        }
        for r in 0..self.m {
            if r == row {
                continue;
            }
            let f = self.rows[r][col];
            if f.abs() <= 1e-13 {
                continue;
            }
            for c in 0..=self.n {
                let sub = f * self.rows[row][c];
                self.rows[r][c] -= sub;
            }
        }
        self.basis[row] = col;
    }

    /// Reduced-cost row for cost vector `c` (maximize) under the current
    /// basis: `z_j = c_j − Σ_i c_{basis(i)} T[i][j]`.
    fn reduced_costs(&self, c: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.n + 1];
        z[..self.n].copy_from_slice(&c[..self.n]);
        for i in 0..self.m {
            let cb = c[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            for j in 0..=self.n {
                z[j] -= cb * self.rows[i][j];
            }
        }
        z
    }

    /// Run simplex maximizing `c`; Dantzig pricing with a Bland fallback
    /// after stalls. Returns false on unboundedness.
    fn maximize(&mut self, c: &[f64]) -> Result<bool, LpError> {
        let mut stall = 0usize;
        let mut last_obj = f64::NEG_INFINITY;
        for _ in 0..20_000 {
            let z = self.reduced_costs(c);
            let bland = stall > 60;
            let mut enter = None;
            if bland {
                for (j, &zj) in z[..self.n].iter().enumerate() {
                    if zj > EPS {
                        enter = Some(j);
                        break;
                    }
                }
            } else {
                let mut best = EPS;
                for (j, &zj) in z[..self.n].iter().enumerate() {
                    if zj > best {
                        best = zj;
                        enter = Some(j);
                    }
                }
            }
            let Some(col) = enter else {
                return Ok(true); // optimal
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.rows[i][col];
                if a > EPS {
                    let ratio = self.rows[i][self.n] / a;
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - 1e-12
                                || (ratio < lr + 1e-12 && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Ok(false); // unbounded direction
            };
            self.pivot(row, col);

            let obj: f64 = (0..self.m).map(|i| c[self.basis[i]] * self.rows[i][self.n]).sum();
            if obj > last_obj + 1e-12 {
                stall = 0;
                last_obj = obj;
            } else {
                stall += 1;
            }
        }
        Err(LpError::IterationLimit)
    }
}

pub fn solve(problem: &LpProblem) -> Result<LpSolution, LpError> {
    let nv = problem.num_vars;
    if problem.objective.len() != nv || problem.bounds.len() != nv {
        return Err(LpError::BadShape);
    }
    for (lo, hi) in &problem.bounds {
        if !lo.is_finite() || hi < lo {
            return Err(LpError::BadShape);
        }
    }
    for row in &problem.rows {
        if row.coeffs.iter().any(|&(j, _)| j >= nv) {
            return Err(LpError::BadShape);
        }
    }

    // Shift to x = lo + x', x' ≥ 0; finite upper bounds become rows.
    let lo: Vec<f64> = problem.bounds.iter().map(|&(l, _)| l).collect();
    let mut rows: Vec<(Vec<(usize, f64)>, LpCmp, f64)> = Vec::new();
    for r in &problem.rows {
        let shift: f64 = r.coeffs.iter().map(|&(j, v)| v * lo[j]).sum();
        rows.push((r.coeffs.clone(), r.cmp, r.rhs - shift));
    }
    for (j, &(l, h)) in problem.bounds.iter().enumerate() {
        if h.is_finite() {
            rows.push((vec![(j, 1.0)], LpCmp::Le, h - l));
        }
    }

    // Normalize rows to nonnegative rhs, flipping the comparison as needed.
    let normalized: Vec<(Vec<(usize, f64)>, LpCmp, f64)> = rows
        .into_iter()
        .map(|(coeffs, cmp, rhs)| {
            if rhs < 0.0 {
                let flipped = coeffs.into_iter().map(|(j, v)| (j, -v)).collect();
                let cmp = match cmp {
                    LpCmp::Le => LpCmp::Ge,
                    LpCmp::Ge => LpCmp::Le,
                    LpCmp::Eq => LpCmp::Eq,
                };
                (flipped, cmp, -rhs)
            } else {
                (coeffs, cmp, rhs)
            }
        })
        .collect();

    // Standard form: slacks for Le, surplus+artificial for Ge, artificial
    // for Eq. Column layout: [vars | slacks/surpluses | artificials | rhs].
    let m = normalized.len();
    let num_slack = normalized.iter().filter(|(_, c, _)| !matches!(c, LpCmp::Eq)).count();
    let num_art = normalized.iter().filter(|(_, c, _)| !matches!(c, LpCmp::Le)).count();
    let art_base = nv + num_slack;
    let total_cols = art_base + num_art;

    let mut tab_rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut slack_cursor = nv;
    let mut art_cursor = art_base;
    let artificials: Vec<usize> = (art_base..total_cols).collect();
    for (coeffs, cmp, rhs) in &normalized {
        let mut dense = vec![0.0; total_cols + 1];
        for &(j, v) in coeffs {
            dense[j] += v;
        }
        dense[total_cols] = *rhs;
        match cmp {
            LpCmp::Le => {
                dense[slack_cursor] = 1.0;
                basis.push(slack_cursor);
                slack_cursor += 1;
            }
            LpCmp::Ge => {
                dense[slack_cursor] = -1.0;
                slack_cursor += 1;
                dense[art_cursor] = 1.0;
                basis.push(art_cursor);
                art_cursor += 1;
            }
            LpCmp::Eq => {
                dense[art_cursor] = 1.0;
                basis.push(art_cursor);
                art_cursor += 1;
            }
        }
        tab_rows.push(dense);
    }

    let mut tab = Tableau {
        m,
        n: total_cols,
        rows: tab_rows,
        basis,
    };

    // Phase 1: drive artificials to zero.
    if num_art > 0 {
        let mut c1 = vec![0.0; total_cols];
        for &a in &artificials {
            c1[a] = -1.0;
        }
        if !tab.maximize(&c1)? {
            return Err(LpError::BadShape); // phase 1 cannot be unbounded
        }
        let infeas: f64 = (0..tab.m)
            .filter(|&i| tab.basis[i] >= art_base)
            .map(|i| tab.rows[i][tab.n])
            .sum();
        if infeas > 1e-7 {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: vec![0.0; nv],
                objective: 0.0,
            });
        }
        // Pivot lingering zero-level artificials out where possible.
        for i in 0..tab.m {
            if tab.basis[i] >= art_base {
                if let Some(col) = (0..art_base).find(|&c| tab.rows[i][c].abs() > 1e-7) {
                    tab.pivot(i, col);
                }
            }
        }
    }

    // Phase 2 on the true objective; artificial columns are frozen out.
    let mut c2 = vec![0.0; total_cols];
    c2[..nv].copy_from_slice(&problem.objective);
    for row in tab.rows.iter_mut() {
        for &a in &artificials {
            row[a] = 0.0;
        }
    }
    // A lingering artificial basis column (redundant row) stays pinned at
    // zero; zeroing its column keeps it out of pricing.
    if !tab.maximize(&c2)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            x: vec![0.0; nv],
            objective: f64::INFINITY,
        });
    }

    let mut x = lo;
    for i in 0..tab.m {
        let b = tab.basis[i];
        if b < nv {
            x[b] += tab.rows[i][tab.n];
        }
    }
    let objective: f64 = problem
        .objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective,
    })
}
