//! Exact finite-size expectations by enumeration.
//!
//! These routines make no asymptotic assumption: for tiny `(n, k, m, p)` they
//! evaluate `n^{-k} E[Tr M^p]` and `Var(n^{-k} Tr M^p)` exactly (up to
//! floating rounding) from the mixed moments of the base distribution. They
//! are the ground truth for both the limit formula and the simulator.

mod distribution;
mod expectation;
mod trace;

pub use distribution::BaseDistribution;
pub use expectation::{expectation_pair_walk, expectation_walk, WalkExpectation};
pub use trace::{
    exact_expected_trace_moment, exact_expected_trace_moment_with_budget, exact_variance_trace_moment,
    exact_variance_trace_moment_with_budget, expected_trace_moment_naive, expected_trace_moment_reduced, OracleBudget,
    DEFAULT_MEAN_CAP, DEFAULT_VARIANCE_CAP,
};
