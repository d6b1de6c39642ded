//! Bipartite spaces, pure and mixed states, Schmidt data and the specific
//! state families used throughout the crate.
//!
//! A [`BipartiteSpace`] is an ordered list of tensor factors, each tagged as
//! belonging to Alice or Bob. Factors of the two sides may interleave; every
//! cut-dependent operation groups Alice factors (in listed order) before Bob
//! factors (in listed order), which fixes the coefficient-matrix reshape used
//! for Schmidt decompositions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

// Inherent f64 methods shadow this in std test builds.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::linalg::{self, kron, Matrix, C64, ZERO};

/// Eigenvalue cutoff separating genuine Schmidt coefficients from rounding.
pub const SCHMIDT_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateError {
    BadIndex,
    BadDimension,
    OneSidedSpace,
    DimensionMismatch,
    TooLarge,
    NotNormalized,
    /// Matrix failed a density-operator invariant (Hermitian / PSD / unit trace).
    NotDensityOperator,
    /// Discrimination instances require pairwise orthogonal states.
    NotOrthogonal,
    Linalg(linalg::LinalgError),
}

impl fmt::Display for StateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateError::BadIndex => write!(f, "index out of range"),
            StateError::BadDimension => write!(f, "invalid dimension"),
            StateError::OneSidedSpace => write!(f, "operation requires factors on both sides"),
            StateError::DimensionMismatch => write!(f, "dimension mismatch"),
            StateError::TooLarge => write!(f, "output dimension exceeds the guard"),
            StateError::NotNormalized => write!(f, "state vector is not normalized"),
            StateError::NotDensityOperator => {
                write!(f, "matrix is not a density operator within tolerance")
            }
            StateError::NotOrthogonal => write!(f, "states are not pairwise orthogonal"),
            StateError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl From<linalg::LinalgError> for StateError {
    fn from(e: linalg::LinalgError) -> Self {
        StateError::Linalg(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn is_alice(self) -> bool {
        matches!(self, Side::A)
    }
}

/// Ordered tensor factors, each tagged Alice or Bob.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteSpace {
    factors: Vec<(usize, Side)>,
}

impl BipartiteSpace {
    pub fn new(factors: Vec<(usize, Side)>) -> Result<Self, StateError> {
        if factors.is_empty() || factors.iter().any(|&(d, _)| d == 0) {
            return Err(StateError::BadDimension);
        }
        Ok(BipartiteSpace { factors })
    }

    /// The standard `dA ⊗ dB` two-factor space.
    pub fn two_party(da: usize, db: usize) -> Result<Self, StateError> {
        BipartiteSpace::new(vec![(da, Side::A), (db, Side::B)])
    }

    pub fn factors(&self) -> &[(usize, Side)] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|&(d, _)| d).collect()
    }

    pub fn sides(&self) -> Vec<Side> {
        self.factors.iter().map(|&(_, s)| s).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|&(d, _)| d).product()
    }

    pub fn alice_dim(&self) -> usize {
        self.factors
            .iter()
            .filter(|(_, s)| s.is_alice())
            .map(|&(d, _)| d)
            .product()
    }

    pub fn bob_dim(&self) -> usize {
        self.factors
            .iter()
            .filter(|(_, s)| !s.is_alice())
            .map(|&(d, _)| d)
            .product()
    }

    pub fn has_both_sides(&self) -> bool {
        self.factors.iter().any(|(_, s)| s.is_alice())
            && self.factors.iter().any(|(_, s)| !s.is_alice())
    }

    /// Concatenate factor lists (this ⊗ other).
    pub fn tensor(&self, other: &BipartiteSpace) -> BipartiteSpace {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        BipartiteSpace { factors }
    }

    /// Repeat the factor list `m` times.
    pub fn power(&self, m: usize) -> BipartiteSpace {
        let mut factors = Vec::with_capacity(self.factors.len() * m);
        for _ in 0..m {
            factors.extend_from_slice(&self.factors);
        }
        BipartiteSpace { factors }
    }

    pub fn reorder(&self, perm: &[usize]) -> BipartiteSpace {
        assert_eq!(perm.len(), self.factors.len());
        BipartiteSpace {
            factors: perm.iter().map(|&p| self.factors[p]).collect(),
        }
    }

    fn side_indices(&self, side: Side) -> Vec<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, (_, s))| *s == side)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Normalized pure state with a fixed global phase: the first amplitude of
/// magnitude above 1e-12 is made real nonnegative, so equality checks are
/// deterministic.
#[derive(Debug, Clone)]
pub struct PureState {
    amplitudes: Vec<C64>,
    space: BipartiteSpace,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, space: BipartiteSpace) -> Result<Self, StateError> {
        if amplitudes.len() != space.total_dim() {
            return Err(StateError::DimensionMismatch);
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(StateError::NotNormalized);
        }
        Ok(Self::fixed_phase(amplitudes, space))
    }

    /// Normalize and construct; rejects the zero vector.
    pub fn from_unnormalized(
        amplitudes: Vec<C64>,
        space: BipartiteSpace,
    ) -> Result<Self, StateError> {
        if amplitudes.len() != space.total_dim() {
            return Err(StateError::DimensionMismatch);
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(StateError::NotNormalized);
        }
        let inv = C64::new(1.0 / norm, 0.0);
        let scaled = amplitudes.into_iter().map(|z| z * inv).collect();
        Ok(Self::fixed_phase(scaled, space))
    }

    fn fixed_phase(mut amplitudes: Vec<C64>, space: BipartiteSpace) -> Self {
        if let Some(first) = amplitudes.iter().find(|z| z.norm() > 1e-12) {
            let phase = first.conj() / C64::new(first.norm(), 0.0);
            for z in amplitudes.iter_mut() {
                *z *= phase;
            }
        }
        PureState { amplitudes, space }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn space(&self) -> &BipartiteSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |ψ⟩⟨ψ|.
    pub fn projector(&self) -> Matrix {
        Matrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::new(self.projector(), self.space.clone())
            .expect("projector of a normalized state is a density operator")
    }

    /// Tensor product; factor lists concatenate.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        PureState::fixed_phase(amplitudes, self.space.tensor(&other.space))
    }

    /// Reorder tensor factors; `perm[new] = old`.
    pub fn permute_factors(&self, perm: &[usize]) -> PureState {
        let dims = self.space.dims();
        let new_space = self.space.reorder(perm);
        let new_dims = new_space.dims();
        let mut comps = vec![0usize; dims.len()];
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (idx, &amp) in self.amplitudes.iter().enumerate() {
            linalg::decode_index(idx, &dims, &mut comps);
            let mut new_idx = 0;
            for (pos, &old) in perm.iter().enumerate() {
                new_idx = new_idx * new_dims[pos] + comps[old];
            }
            out[new_idx] = amp;
        }
        PureState::fixed_phase(out, new_space)
    }
}

/// Trace-one positive semidefinite operator on a bipartite space.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: Matrix,
    space: BipartiteSpace,
}

impl DensityOperator {
    pub fn new(matrix: Matrix, space: BipartiteSpace) -> Result<Self, StateError> {
        if !matrix.is_square() || matrix.rows() != space.total_dim() {
            return Err(StateError::DimensionMismatch);
        }
        if !matrix.is_hermitian(1e-10) {
            return Err(StateError::NotDensityOperator);
        }
        if (matrix.trace().re - 1.0).abs() > 1e-10 || matrix.trace().im.abs() > 1e-10 {
            return Err(StateError::NotDensityOperator);
        }
        if !linalg::psd_check(&matrix, 1e-9)? {
            return Err(StateError::NotDensityOperator);
        }
        Ok(DensityOperator { matrix, space })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn space(&self) -> &BipartiteSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Projector onto the support (eigenvalues above `1e-9` relative).
    pub fn support_projector(&self) -> Result<Matrix, StateError> {
        support_projector(&self.matrix)
    }
}

/// Projector onto the span of eigenvectors with eigenvalue above `1e-9`
/// relative to the largest.
pub fn support_projector(h: &Matrix) -> Result<Matrix, StateError> {
    let eig = linalg::hermitian_eigen(h)?;
    let scale = eig.eigenvalues.last().map_or(0.0, |&l| l.abs()).max(1.0);
    let n = h.rows();
    let mut proj = Matrix::zeros(n, n);
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l > 1e-9 * scale {
            let col = eig.eigenvectors.column(k);
            proj = proj.add(&Matrix::outer(&col, &col));
        }
    }
    Ok(proj.hermitize())
}

/// Schmidt data of a bipartite pure state: probabilities `λ` descending and
/// the local bases, stored as full square unitaries whose leading columns
/// pair with the `λ`s. The state reconstructs as `Σ √λ_k |left_k⟩|right_k⟩`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub lambdas: Vec<f64>,
    pub left_vectors: Matrix,
    pub right_vectors: Matrix,
}

impl SchmidtDecomposition {
    /// Count of coefficients above the 1e-10 cutoff.
    pub fn schmidt_number(&self) -> usize {
        self.lambdas.iter().filter(|&&l| l > SCHMIDT_CUTOFF).count()
    }
}

/// List of mutually orthogonal density operators on one space. Orthogonality
/// (`tr(ρ_i ρ_j) ≤ 1e-9` for `i ≠ j`) is enforced at construction.
#[derive(Debug, Clone)]
pub struct DiscriminationInstance {
    states: Vec<DensityOperator>,
}

impl DiscriminationInstance {
    pub fn new(states: Vec<DensityOperator>) -> Result<Self, StateError> {
        if states.is_empty() {
            return Err(StateError::BadDimension);
        }
        let space = states[0].space().clone();
        for s in &states[1..] {
            if *s.space() != space {
                return Err(StateError::DimensionMismatch);
            }
        }
        for i in 0..states.len() {
            for j in (i + 1)..states.len() {
                let overlap = states[i].matrix().hs_inner(states[j].matrix()).norm();
                if overlap > 1e-9 {
                    return Err(StateError::NotOrthogonal);
                }
            }
        }
        Ok(DiscriminationInstance { states })
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn space(&self) -> &BipartiteSpace {
        self.states[0].space()
    }
}

/// The Pauli matrices in this paper-family's indexing: σ₀ = I, σ₁ the
/// diagonal one, σ₂ the bit flip, σ₃ the imaginary one.
pub fn pauli(k: usize) -> Result<Matrix, StateError> {
    let i = C64::new(0.0, 1.0);
    let m = match k {
        0 => Matrix::identity(2),
        1 => Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        2 => Matrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        3 => Matrix::from_vec(2, 2, vec![ZERO, -i, i, ZERO]),
        _ => return Err(StateError::BadIndex),
    };
    Ok(m)
}

/// Bell state `(I ⊗ σ_k)(|00⟩+|11⟩)/√2` on a 2⊗2 space, phase-normalized.
pub fn bell_state(k: usize) -> Result<PureState, StateError> {
    if k > 3 {
        return Err(StateError::BadIndex);
    }
    let sigma = pauli(k)?;
    let inv = 1.0 / 2.0f64.sqrt();
    let mut amps = vec![ZERO; 4];
    // (I ⊗ σ) (|00⟩+|11⟩)/√2: column j of σ lands on Bob's index.
    for j in 0..2 {
        for b in 0..2 {
            amps[2 * j + b] += C64::new(inv, 0.0) * sigma[(b, j)];
        }
    }
    PureState::new(amps, BipartiteSpace::two_party(2, 2)?)
}

/// `Φ_d = (1/√d) Σ |jj⟩` on a d⊗d space.
pub fn maximally_entangled(d: usize) -> Result<PureState, StateError> {
    if d < 2 {
        return Err(StateError::BadDimension);
    }
    let inv = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut amps = vec![ZERO; d * d];
    for j in 0..d {
        amps[j * d + j] = inv;
    }
    PureState::new(amps, BipartiteSpace::two_party(d, d)?)
}

/// A two-party state `Σ √λ_i |ii⟩` from a probability spectrum (not
/// necessarily sorted); used pervasively as a resource state.
pub fn schmidt_form_state(lambdas: &[f64]) -> Result<PureState, StateError> {
    let d = lambdas.len();
    if d == 0 || lambdas.iter().any(|&l| l < -1e-12) {
        return Err(StateError::BadDimension);
    }
    let mut amps = vec![ZERO; d * d];
    for (i, &l) in lambdas.iter().enumerate() {
        amps[i * d + i] = C64::new(l.max(0.0).sqrt(), 0.0);
    }
    PureState::new(amps, BipartiteSpace::two_party(d, d)?)
}

/// Schmidt decomposition across the Alice:Bob cut. Alice factors (listed
/// order) group into the row index, Bob factors into the column index.
pub fn schmidt(psi: &PureState) -> Result<SchmidtDecomposition, StateError> {
    let space = psi.space();
    if !space.has_both_sides() {
        return Err(StateError::OneSidedSpace);
    }
    let dims = space.dims();
    let a_idx = space.side_indices(Side::A);
    let b_idx = space.side_indices(Side::B);
    let a_dims: Vec<usize> = a_idx.iter().map(|&i| dims[i]).collect();
    let b_dims: Vec<usize> = b_idx.iter().map(|&i| dims[i]).collect();
    let da: usize = a_dims.iter().product();
    let db: usize = b_dims.iter().product();

    let mut coeff = Matrix::zeros(da, db);
    let mut comps = vec![0usize; dims.len()];
    for (idx, &amp) in psi.amplitudes().iter().enumerate() {
        linalg::decode_index(idx, &dims, &mut comps);
        let ac: Vec<usize> = a_idx.iter().map(|&i| comps[i]).collect();
        let bc: Vec<usize> = b_idx.iter().map(|&i| comps[i]).collect();
        coeff[(
            linalg::encode_index(&ac, &a_dims),
            linalg::encode_index(&bc, &b_dims),
        )] = amp;
    }

    let svd = linalg::svd(&coeff)?;
    let lambdas: Vec<f64> = svd
        .singular_values
        .iter()
        .map(|&s| s * s)
        .collect();
    Ok(SchmidtDecomposition {
        lambdas,
        left_vectors: svd.u,
        right_vectors: svd.v.conj(),
    })
}

/// Schmidt number across the Alice:Bob cut.
pub fn schmidt_number(psi: &PureState) -> Result<usize, StateError> {
    Ok(schmidt(psi)?.schmidt_number())
}

/// The normalized orthogonal complement `(I − |ψ⟩⟨ψ|)/(D−1)`.
pub fn complement_state(psi: &PureState) -> DensityOperator {
    let d = psi.dim();
    assert!(d >= 2, "complement needs total dimension at least 2");
    let m = Matrix::identity(d)
        .sub(&psi.projector())
        .scale_re(1.0 / (d as f64 - 1.0));
    DensityOperator::new(m.hermitize(), psi.space().clone())
        .expect("complement of a pure state is a density operator")
}

/// The four orthogonal ququad-ququad maximally entangled states
/// χ₀ = Ψ₀⊗Ψ₀, χ₁ = Ψ₁⊗Ψ₁, χ₂ = Ψ₂⊗Ψ₁, χ₃ = Ψ₃⊗Ψ₁, on the factor order
/// (X₁:A, X₂:A, Y₁:B, Y₂:B).
pub fn ququad_set() -> Vec<PureState> {
    let pairs = [(0usize, 0usize), (1, 1), (2, 1), (3, 1)];
    pairs
        .iter()
        .map(|&(a, b)| {
            let chi = bell_state(a).unwrap().tensor(&bell_state(b).unwrap());
            // (X₁, Y₁, X₂, Y₂) → (X₁, X₂, Y₁, Y₂)
            chi.permute_factors(&[0, 2, 1, 3])
        })
        .collect()
}

/// Tensor every state of the instance with the projector of `alpha`.
pub fn tensor_with_resource(
    instance: &DiscriminationInstance,
    alpha: &PureState,
) -> Result<DiscriminationInstance, StateError> {
    let alpha_proj = alpha.projector();
    let merged = instance.space().tensor(alpha.space());
    let states = instance
        .states()
        .iter()
        .map(|rho| {
            DensityOperator::new(kron(rho.matrix(), &alpha_proj).hermitize(), merged.clone())
        })
        .collect::<Result<Vec<_>, _>>()?;
    DiscriminationInstance::new(states)
}

/// `m`-fold tensor power; the output dimension is guarded at 4096.
pub fn multicopy(rho: &DensityOperator, m: usize) -> Result<DensityOperator, StateError> {
    if m < 1 {
        return Err(StateError::BadDimension);
    }
    let mut out_dim: usize = 1;
    for _ in 0..m {
        out_dim = out_dim.saturating_mul(rho.dim());
        if out_dim > 4096 {
            return Err(StateError::TooLarge);
        }
    }
    let mut matrix = rho.matrix().clone();
    for _ in 1..m {
        matrix = kron(&matrix, rho.matrix());
    }
    DensityOperator::new(matrix.hermitize(), rho.space().power(m))
}

/// Entanglement entropy `−Σ λ log₂ λ` in bits across the Alice:Bob cut.
pub fn entanglement_entropy(psi: &PureState) -> Result<f64, StateError> {
    let dec = schmidt(psi)?;
    Ok(dec
        .lambdas
        .iter()
        .filter(|&&l| l > 1e-12)
        .map(|&l| -l * l.log2())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{partial_trace, ONE};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pauli_matrices() {
        assert_eq!(pauli(0).unwrap(), Matrix::identity(2));
        assert_eq!(
            pauli(1).unwrap(),
            Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
        );
        let s2 = pauli(2).unwrap();
        assert!(s2.matmul(&s2).sub(&Matrix::identity(2)).max_abs() < 1e-15);
        let s3 = pauli(3).unwrap();
        assert!(s3.matmul(&s3).sub(&Matrix::identity(2)).max_abs() < 1e-15);
        assert!(pauli(4).is_err());
    }

    #[test]
    fn bell_states_orthonormal() {
        let states: Vec<PureState> = (0..4).map(|k| bell_state(k).unwrap()).collect();
        let inv = 1.0 / 2.0f64.sqrt();
        assert!(states[0].amplitudes()[0].re - inv < 1e-12);
        assert!((states[1].amplitudes()[3].re + inv).abs() < 1e-12);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (states[i].inner(&states[j]).norm() - expect).abs() < 1e-12,
                    "⟨Ψ{i}|Ψ{j}⟩"
                );
            }
        }
    }

    #[test]
    fn maximally_entangled_basics() {
        let phi2 = maximally_entangled(2).unwrap();
        let psi0 = bell_state(0).unwrap();
        assert!(phi2.inner(&psi0).re > 1.0 - 1e-12);

        for d in 2..=4 {
            let phi = maximally_entangled(d).unwrap();
            let proj = phi.projector();
            for keep in [0usize, 1] {
                let red = partial_trace(&proj, phi.space(), &[keep]).unwrap();
                let expect = Matrix::identity(d).scale_re(1.0 / d as f64);
                assert!(red.sub(&expect).max_abs() < 1e-12);
            }
            let dec = schmidt(&phi).unwrap();
            assert_eq!(dec.schmidt_number(), d);
            for &l in &dec.lambdas {
                assert!((l - 1.0 / d as f64).abs() < 1e-12);
            }
        }
        assert!(maximally_entangled(1).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let space = BipartiteSpace::two_party(2, 2).unwrap();
        let mut amps = vec![ZERO; 4];
        amps[0] = ONE;
        let product = PureState::new(amps, space.clone()).unwrap();
        let dec = schmidt(&product).unwrap();
        assert_eq!(dec.schmidt_number(), 1);
        assert!((dec.lambdas[0] - 1.0).abs() < 1e-12);

        let psi0 = bell_state(0).unwrap();
        let dec = schmidt(&psi0).unwrap();
        assert!((dec.lambdas[0] - 0.5).abs() < 1e-12);
        assert!((dec.lambdas[1] - 0.5).abs() < 1e-12);

        let skew = schmidt_form_state(&[0.8, 0.2]).unwrap();
        let dec = schmidt(&skew).unwrap();
        assert!((dec.lambdas[0] - 0.8).abs() < 1e-12);
        assert!((dec.lambdas[1] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn schmidt_grouping_interleaved_factors() {
        // Ψ₀ ⊗ Ψ₀ on (A, B, A, B) has Schmidt number 4 across the cut.
        let chi = bell_state(0).unwrap().tensor(&bell_state(0).unwrap());
        assert_eq!(schmidt_number(&chi).unwrap(), 4);
    }

    #[test]
    fn complement_of_phi2() {
        let phi = maximally_entangled(2).unwrap();
        let rho2 = complement_state(&phi);
        let eig = linalg::hermitian_eigen(rho2.matrix()).unwrap();
        assert!(eig.eigenvalues[0].abs() < 1e-12);
        for &l in &eig.eigenvalues[1..] {
            assert!((l - 1.0 / 3.0).abs() < 1e-12);
        }
        let overlap = rho2.matrix().hs_inner(&phi.projector()).norm();
        assert!(overlap < 1e-12);
        assert!((rho2.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ququad_set_properties() {
        let chis = ququad_set();
        assert_eq!(chis.len(), 4);
        for chi in &chis {
            // Alice factors precede Bob factors.
            assert_eq!(
                chi.space().sides(),
                vec![Side::A, Side::A, Side::B, Side::B]
            );
            assert_eq!(schmidt_number(chi).unwrap(), 4);
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert!(chis[i].inner(&chis[j]).norm() < 1e-12);
            }
        }
        let red = partial_trace(&chis[2].projector(), chis[2].space(), &[0, 1]).unwrap();
        assert!(red.sub(&Matrix::identity(4).scale_re(0.25)).max_abs() < 1e-12);
    }

    #[test]
    fn tensor_with_resource_three_bell() {
        let bells: Vec<DensityOperator> =
            (1..4).map(|k| bell_state(k).unwrap().to_density()).collect();
        let instance = DiscriminationInstance::new(bells).unwrap();
        let alpha = schmidt_form_state(&[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let tensored = tensor_with_resource(&instance, &alpha).unwrap();
        assert_eq!(tensored.len(), 3);
        assert_eq!(tensored.space().total_dim(), 16);
        for s in tensored.states() {
            assert!((s.matrix().trace().re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn orthogonality_enforced() {
        let psi0 = bell_state(0).unwrap().to_density();
        let tilted = PureState::from_unnormalized(
            vec![c(1.0, 0.0), ZERO, ZERO, c(0.2, 0.0)],
            BipartiteSpace::two_party(2, 2).unwrap(),
        )
        .unwrap()
        .to_density();
        assert!(matches!(
            DiscriminationInstance::new(vec![psi0, tilted]),
            Err(StateError::NotOrthogonal)
        ));
    }

    #[test]
    fn multicopy_basics() {
        let phi = maximally_entangled(2).unwrap();
        let rho2 = complement_state(&phi);
        let one = multicopy(&rho2, 1).unwrap();
        assert!(one.matrix().sub(rho2.matrix()).max_abs() < 1e-15);

        let two = multicopy(&rho2, 2).unwrap();
        assert!((two.matrix().trace().re - 1.0).abs() < 1e-9);
        // purity of ρ₂^{⊗2} is (1/3)² for d = 2
        let purity = two.matrix().matmul(two.matrix()).trace().re;
        assert!((purity - 1.0 / 9.0).abs() < 1e-10);

        // guard: dim 4 allows up to 4^6 = 4096; one more copy trips it
        assert!(matches!(multicopy(&rho2, 7), Err(StateError::TooLarge)));
    }

    #[test]
    fn entropy_examples() {
        let space = BipartiteSpace::two_party(2, 2).unwrap();
        let mut amps = vec![ZERO; 4];
        amps[1] = ONE;
        let product = PureState::new(amps, space).unwrap();
        assert!(entanglement_entropy(&product).unwrap().abs() < 1e-12);

        let psi0 = bell_state(0).unwrap();
        assert!((entanglement_entropy(&psi0).unwrap() - 1.0).abs() < 1e-12);

        let alpha = schmidt_form_state(&[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert!((entanglement_entropy(&alpha).unwrap() - 0.9183).abs() < 1e-4);
    }

    #[test]
    fn phase_convention_applied() {
        let space = BipartiteSpace::two_party(2, 2).unwrap();
        let amps = vec![c(0.0, 1.0), ZERO, ZERO, ZERO];
        let psi = PureState::new(amps, space).unwrap();
        assert!((psi.amplitudes()[0] - ONE).norm() < 1e-12);
    }
}
