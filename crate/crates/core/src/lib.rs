//! Distinguishability of bipartite quantum states under PPT POVMs.
//!
//! The crate decides whether a set of mutually orthogonal states can be
//! perfectly (or unambiguously) discriminated by measurements whose effects
//! all have positive partial transpose, and carries the explicit measurement
//! constructions, twirling channels, majorization tooling and multicopy
//! reductions needed to exercise every threshold around that question.
//!
//! Everything is built on a small dense complex linear-algebra layer
//! ([`linalg`]) and a self-contained conic solver ([`sdp`]); no BLAS or
//! external solver is involved. The crate is `no_std` (with `alloc`); IO,
//! JSON formats and the command line live in the companion `pptdist-cli`
//! crate.
//!
//! Module map:
//! - [`linalg`]: dense complex matrices, Hermitian eigensolver, SVD,
//!   Kronecker products, partial transpose/trace.
//! - [`states`]: bipartite spaces, pure/density states, Schmidt data,
//!   Bell/maximally-entangled constructions, discrimination instances.
//! - [`symmetry`]: isotropic/Pauli/diagonal-phase twirls and a seeded
//!   Monte Carlo averaging oracle.
//! - [`sdp`]: primal-dual interior-point solver for small dense SDPs plus
//!   a dense simplex LP path.
//! - [`discrim`]: the PPT feasibility criterion, unambiguous-value programs
//!   and the derived decision predicates.
//! - [`povm`]: POVM verification and the explicit PPT POVM constructions.
//! - [`hssh`]: majorization, Nielsen/Jonathan-Plenio checks and the
//!   detector-ensemble indistinguishability pipeline.
//! - [`multicopy`]: the twirl-reduced LP certifying multicopy
//!   indistinguishability of a maximally entangled state and its complement.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod discrim;
pub mod hssh;
pub mod linalg;
pub mod multicopy;
pub mod povm;
pub mod sdp;
pub mod states;
pub mod symmetry;

pub use linalg::{Matrix, C64};
pub use states::{BipartiteSpace, DensityOperator, DiscriminationInstance, PureState, Side};
