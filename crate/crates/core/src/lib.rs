//! Analysis toolkit for a two-parameter family of two-qubit mixed states and
//! the three-qubit pure states obtained by purifying them.
//!
//! The pipeline, end to end:
//!
//! 1. [`family`] builds the mixed state
//!    `σ_AB = p|χ₁⟩⟨χ₁|⊗ρ₁ + (1−p)|χ₂⟩⟨χ₂|⊗ρ₂` from the parameter tuple
//!    `(p, α, n, r⃗, s⃗)`, both as an explicit 4×4 density matrix and in
//!    Bloch form `(x⃗, y⃗, T)`.
//! 2. [`discord`] evaluates the normalized geometric discord of `σ_AB`
//!    twice: through the closed form built on the `E/F/G` block entries of
//!    `x⃗x⃗ᵀ + TTᵀ`, and through a brute-force sweep over projective
//!    measurements on party A.
//! 3. [`purify`] attaches a one-qubit ancilla and assembles the pure state
//!    `|ξ⟩_ABC`; tracing the ancilla back out recovers `σ_AB` exactly when
//!    both branch states are pure (`|r⃗| = |s⃗| = 1`).
//! 4. [`tangle`] computes the three-tangle of `|ξ⟩_ABC` (general
//!    hyperdeterminant form, relabeled `k`-form, and a closed form in the
//!    family parameters) and classifies the state: biseparable, W-type or
//!    GHZ-type, plus an independent rank-based SLOCC check.
//!
//! [`report`] and [`sweep`] wrap the pipeline for the `triclass` CLI:
//! single-point JSON reports, CSV phase maps over `(p, α)` grids, and a
//! built-in self-test ([`selftest`]).
//!
//! All values are immutable after construction and every operation is a pure
//! function, so the whole crate is safe to drive from parallel sweeps.

use thiserror::Error;

pub mod cxmat;
pub mod discord;
pub mod family;
pub mod purify;
pub mod report;
pub mod sample;
pub mod selftest;
pub mod sweep;
pub mod tangle;

/// Default tolerance for Hermiticity / trace checks on density matrices.
pub const HERM_TOL: f64 = 1e-10;
/// Default tolerance for eigen-residual and orthonormality checks.
pub const EIG_TOL: f64 = 1e-12;
/// Default tolerance for unit-norm checks on state vectors.
pub const NORM_TOL: f64 = 1e-8;
/// How close `|r⃗|` must be to 1 for a branch state to count as pure.
pub const PURITY_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("tensor product dimension {0} exceeds the supported maximum of 8")]
    DimOverflow(usize),
    #[error("matrix dimension {0} is unsupported (expected 2, 4 or 8)")]
    BadDim(usize),
    #[error("malformed subsystem specification: {0}")]
    BadSubsystems(String),
    #[error("matrix is not Hermitian within tolerance {0:e}")]
    NotHermitian(f64),
    #[error("matrix is not a density matrix: {0}")]
    NotDensity(String),
    #[error("state vector is not normalized: |norm - 1| = {0:e}")]
    NotNormalized(f64),
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("no purification exists for mixed branch states: {0}")]
    MixedBranch(String),
    #[error("closed-form coefficients singular here: {0}")]
    SingularClosedForm(String),
    #[error("stereographic distance undefined at south pole; use general tangle")]
    DeltaAtPole,
    #[error("measurement grid {0} too coarse to refine (minimum 8)")]
    GridTooCoarse(usize),
    #[error("closed-form discord came out negative ({0:e}); formula used outside its domain")]
    NegativeDiscord(f64),
    #[error("invalid sweep specification: {0}")]
    InvalidSweep(String),
}

pub type Result<T> = std::result::Result<T, Error>;
