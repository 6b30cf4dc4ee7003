//! Spectral moments of sums of rank-one `k`-fold tensor products.
//!
//! The model is `M = Σ_α τ_α Y_α Y_α*` where each column `Y_α` is a tensor
//! product of `k` independent `n`-dimensional vectors with i.i.d. centered,
//! unit-variance entries scaled by `1/√n`. Under `k/n → d` and `m/n^k → c`
//! the normalized trace moments `n^{-k} Tr M^p` converge to limits that
//! depend on the fourth absolute moment of the base variable through
//! `θ = exp(d (m4 - 1))`.
//!
//! The crate is split into:
//!
//! * [`combinatorics`]: canonical sequences, walk graphs and their
//!   classification, the characteristic-pair reconstruction, and brute-force
//!   checks of the counting identities.
//! * [`moments`]: the limiting moments, symbolically (exact integer
//!   coefficients) and numerically, plus the Marčenko–Pastur specialization
//!   and Carleman diagnostics.
//! * [`oracle`]: exact finite-size expectations and variances by enumeration.
//! * [`simulator`]: a Monte Carlo engine working entirely on the `m × m` Gram
//!   matrix of the tensor columns.
//! * [`verify`]: the lemma verification battery used by the CLI.

pub mod combinatorics;
pub mod error;
pub mod moments;
pub mod numeric;
pub mod oracle;
pub mod simulator;
pub mod verify;

pub use combinatorics::{CanonicalSequence, CharacteristicPair, DegreeProfile, DeltaClass, WalkEdge, WalkGraph};
pub use error::{Error, Result};
pub use moments::{LimitParams, MomentPolynomial, TauMoments};
pub use oracle::{BaseDistribution, WalkExpectation};
pub use simulator::{ExperimentConfig, Scheme, SpectralSummary, TauRule};

/// Crate version, embedded in emitted artifacts.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
