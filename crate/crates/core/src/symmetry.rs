//! Twirling channels and the symmetry operators used by the discrimination
//! arguments, implemented as exact analytic projections, plus a seeded Monte
//! Carlo oracle for testing the analytic forms against sampled averages.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;

// Inherent f64 methods shadow this in std test builds.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{kron, Matrix, C64, ONE};
use crate::states::{maximally_entangled, pauli, BipartiteSpace, PureState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    DimensionMismatch,
    NonHermitian,
    /// Channel kind incompatible with the matrix shape.
    BadChannelKind,
    /// Monte Carlo averaging needs at least one sample.
    BadSampleCount,
}

impl fmt::Display for SymmetryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryError::DimensionMismatch => write!(f, "dimension mismatch"),
            SymmetryError::NonHermitian => write!(f, "input must be Hermitian"),
            SymmetryError::BadChannelKind => write!(f, "channel incompatible with matrix shape"),
            SymmetryError::BadSampleCount => write!(f, "sample count must be positive"),
        }
    }
}

/// Weights of the isotropic twirl output `a·ρ₁ + b·ρ₂`, where `ρ₁` is the
/// maximally entangled projector and `ρ₂` its normalized complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwirlCoefficients {
    pub a: f64,
    pub b: f64,
}

/// Average over all `V ⊗ V*` conjugations. The two invariant components are
/// the projectors `P₁ = Φ` and `P₂ = I − Φ`; trace preservation on each
/// pins the weights to `a = tr(N P₁)` and `b = tr(N P₂)`.
pub fn isotropic_twirl(n: &Matrix, d: usize) -> Result<TwirlCoefficients, SymmetryError> {
    if d < 2 || !n.is_square() || n.rows() != d * d {
        return Err(SymmetryError::DimensionMismatch);
    }
    if !n.is_hermitian(1e-10) {
        return Err(SymmetryError::NonHermitian);
    }
    let p1 = maximally_entangled(d).unwrap().projector();
    let a = p1.hs_inner(n).re;
    let b = n.trace().re - a;
    Ok(TwirlCoefficients { a, b })
}

/// The twirled operator itself, `a·Φ + b·(I−Φ)/(d²−1)`.
pub fn isotropic_twirl_apply(n: &Matrix, d: usize) -> Result<Matrix, SymmetryError> {
    let TwirlCoefficients { a, b } = isotropic_twirl(n, d)?;
    let p1 = maximally_entangled(d).unwrap().projector();
    let p2 = Matrix::identity(d * d).sub(&p1);
    Ok(p1
        .scale_re(a)
        .add(&p2.scale_re(b / ((d * d - 1) as f64))))
}

/// Bell dephasing `(1/4) Σ_i (σ_i⊗σ_i) M (σ_i⊗σ_i)` on a 2⊗2 system; the
/// output is diagonal in the Bell basis.
pub fn pauli_twirl(m: &Matrix) -> Result<Matrix, SymmetryError> {
    if !m.is_square() || m.rows() != 4 {
        return Err(SymmetryError::DimensionMismatch);
    }
    let mut acc = Matrix::zeros(4, 4);
    for k in 0..4 {
        let ss = kron(&pauli(k).unwrap(), &pauli(k).unwrap());
        acc = acc.add(&ss.matmul(m).matmul(&ss));
    }
    Ok(acc.scale_re(0.25))
}

/// The 4×4 unitary that cycles the Bell projectors Ψ₁ → Ψ₂ → Ψ₃ → Ψ₁ under
/// conjugation while fixing every state of the form `· ⊗ α`.
pub fn w_matrix() -> Matrix {
    let i = C64::new(0.0, 1.0);
    let half = C64::new(0.5, 0.0);
    let left = Matrix::from_vec(2, 2, vec![-i, ONE, -i, -ONE]);
    let right = Matrix::from_vec(2, 2, vec![i, ONE, i, -ONE]);
    kron(&left, &right).scale(half)
}

/// Exact average over diagonal unitaries `v ⊗ v*` acting on the trailing
/// factor pair of dimension `local_dim` each; any leading block is a fixed
/// bystander. With the pair indices written `⟨ij|·|kl⟩`, the phase picked up
/// is `θ_i − θ_j − θ_k + θ_l`, whose uniform average is 1 exactly when
/// (i=k and j=l) or (i=j and k=l), and 0 otherwise.
pub fn diagonal_phase_twirl(m: &Matrix, local_dim: usize) -> Result<Matrix, SymmetryError> {
    let pair = local_dim * local_dim;
    if local_dim == 0 || !m.is_square() || m.rows() % pair != 0 {
        return Err(SymmetryError::DimensionMismatch);
    }
    let bystander = m.rows() / pair;
    let dims = [bystander, local_dim, local_dim];
    let total = m.rows();
    let mut out = Matrix::zeros(total, total);
    let mut rc = [0usize; 3];
    let mut cc = [0usize; 3];
    for r in 0..total {
        crate::linalg::decode_index(r, &dims, &mut rc);
        for c in 0..total {
            crate::linalg::decode_index(c, &dims, &mut cc);
            let (i, j, k, l) = (rc[1], rc[2], cc[1], cc[2]);
            if (i == k && j == l) || (i == j && k == l) {
                out[(r, c)] = m[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Random channel families for the Monte Carlo averaging oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    /// No averaging; returns the input.
    Identity,
    /// Haar `V ⊗ V*` conjugations on a d⊗d system.
    Isotropic,
    /// Uniform-phase diagonal `v ⊗ v*` on the trailing factor pair.
    DiagonalPhase { local_dim: usize },
}

/// Empirical mean of random-channel conjugations; deterministic for a given
/// seed. This is the testing oracle for the analytic twirls.
pub fn haar_average_sample(
    m: &Matrix,
    kind: ChannelKind,
    samples: usize,
    seed: u64,
) -> Result<Matrix, SymmetryError> {
    if samples == 0 {
        return Err(SymmetryError::BadSampleCount);
    }
    if !m.is_square() {
        return Err(SymmetryError::DimensionMismatch);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        ChannelKind::Identity => Ok(m.clone()),
        ChannelKind::Isotropic => {
            let d = int_sqrt(m.rows()).ok_or(SymmetryError::BadChannelKind)?;
            let mut acc = Matrix::zeros(m.rows(), m.rows());
            for _ in 0..samples {
                let v = haar_unitary(d, &mut rng);
                acc = acc.add(&conjugate_local_pair(&v, &v.conj(), m));
            }
            Ok(acc.scale_re(1.0 / samples as f64))
        }
        ChannelKind::DiagonalPhase { local_dim } => {
            let pair = local_dim * local_dim;
            if local_dim == 0 || m.rows() % pair != 0 {
                return Err(SymmetryError::BadChannelKind);
            }
            let bystander = m.rows() / pair;
            let mut acc = Matrix::zeros(m.rows(), m.rows());
            for _ in 0..samples {
                let phases: Vec<f64> = (0..local_dim).map(|_| rng.gen::<f64>() * TAU).collect();
                // Diagonal conjugation is an entrywise phase multiply.
                let mut sample = m.clone();
                let dims = [bystander, local_dim, local_dim];
                let mut rc = [0usize; 3];
                let mut cc = [0usize; 3];
                for r in 0..m.rows() {
                    crate::linalg::decode_index(r, &dims, &mut rc);
                    for c in 0..m.cols() {
                        crate::linalg::decode_index(c, &dims, &mut cc);
                        let angle = phases[rc[1]] - phases[rc[2]] - phases[cc[1]] + phases[cc[2]];
                        sample[(r, c)] *= C64::new(angle.cos(), angle.sin());
                    }
                }
                acc = acc.add(&sample);
            }
            Ok(acc.scale_re(1.0 / samples as f64))
        }
    }
}

fn int_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n && r >= 1).then_some(r)
}

/// `(V ⊗ W) M (V ⊗ W)†` without forming the Kronecker factor, using the
/// column-reshape identity `(V ⊗ W) vec(X) = vec(V X Wᵀ)`.
fn conjugate_local_pair(v: &Matrix, w: &Matrix, m: &Matrix) -> Matrix {
    let d = v.rows();
    let n = d * d;
    debug_assert_eq!(m.rows(), n);
    let mut half = Matrix::zeros(n, n);
    for col in 0..n {
        let x = Matrix::from_fn(d, d, |a, b| m[(a * d + b, col)]);
        let y = v.matmul(&x).matmul(&w.transpose());
        for a in 0..d {
            for b in 0..d {
                half[(a * d + b, col)] = y[(a, b)];
            }
        }
    }
    // Right side: (half) (V⊗W)† = ((V⊗W) half†)†
    let mut out = Matrix::zeros(n, n);
    for col in 0..n {
        let x = Matrix::from_fn(d, d, |a, b| half[(col, a * d + b)].conj());
        let y = v.matmul(&x).matmul(&w.transpose());
        for a in 0..d {
            for b in 0..d {
                out[(col, a * d + b)] = y[(a, b)].conj();
            }
        }
    }
    out
}

/// Haar-distributed unitary via modified Gram-Schmidt of a complex Ginibre
/// matrix. Normalizing each pivot to a positive real is exactly the
/// R-diagonal phase fix that makes the distribution Haar.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> Matrix {
    assert!(n > 0);
    let mut cols: Vec<Vec<C64>> = (0..n)
        .map(|_| (0..n).map(|_| complex_gaussian(rng)).collect())
        .collect();
    for j in 0..n {
        for i in 0..j {
            let overlap: C64 = cols[i]
                .iter()
                .zip(&cols[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            for k in 0..n {
                let correction = overlap * cols[i][k];
                cols[j][k] -= correction;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let inv = C64::new(1.0 / norm, 0.0);
        for z in cols[j].iter_mut() {
            *z *= inv;
        }
    }
    Matrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Haar-random pure state on a space (normalized complex Gaussian vector).
pub fn haar_random_pure(space: &BipartiteSpace, rng: &mut impl Rng) -> PureState {
    let amps: Vec<C64> = (0..space.total_dim())
        .map(|_| complex_gaussian(rng))
        .collect();
    PureState::from_unnormalized(amps, space.clone()).expect("gaussian vector is nonzero")
}

fn complex_gaussian(rng: &mut impl Rng) -> C64 {
    // Box-Muller; u1 pulled away from zero.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = TAU * u2;
    C64::new(r * theta.cos(), r * theta.sin()) * C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0)
}
