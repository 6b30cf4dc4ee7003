//! Monte Carlo engine for `M = Σ_α τ_α Y_α Y_α*`.
//!
//! Every computation goes through the `m × m` Gram matrix of the tensor
//! columns, `G[α][β] = Π_l ⟨y_α^l, y_β^l⟩`, which shares the nonzero spectrum
//! of `M` after weighting by `τ`. Nothing of dimension `n^k` is built.

mod config;
mod experiment;
mod kernels;

pub use config::{ExperimentConfig, HistogramConfig, ResolvedSizes, Scheme, TauRule};
pub use experiment::{
    run_experiment, variance_decay_report, DecayRow, MomentStat, SpectralSummary, VarianceDecayReport,
    COMPLEX_DERIVED_LABEL, LIMIT_LABEL,
};
pub use kernels::{eigen_histogram, gram_matrix, sample_base_vectors, trace_moments_from_gram, BaseVectors, Histogram};
