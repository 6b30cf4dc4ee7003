use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ResolvedSizes};
use super::kernels::{eigen_histogram, gram_matrix, sample_base_vectors, trace_moments_from_gram, Histogram};
use crate::error::{Error, Result};
use crate::moments::{limit_moment_value, LimitParams};
use crate::numeric::CompensatedSum;

/// Label of theoretical targets for complex base laws.
pub const LIMIT_LABEL: &str = "limit";
/// Label of theoretical targets attached to real base laws.
pub const COMPLEX_DERIVED_LABEL: &str = "complex-derived";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentStat {
    pub p: usize,
    pub mean: f64,
    /// Sample variance across replicas; absent for a single replica.
    pub variance: Option<f64>,
    pub stderr: Option<f64>,
    pub theory: Option<f64>,
    /// `|mean − theory|`.
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub config: ExperimentConfig,
    pub sizes: ResolvedSizes,
    pub moments: Vec<MomentStat>,
    pub theory_label: Option<String>,
    pub histogram: Option<Histogram>,
}

impl SpectralSummary {
    pub fn moment(&self, p: usize) -> Option<&MomentStat> {
        self.moments.iter().find(|s| s.p == p)
    }
}

struct ReplicaOutcome {
    moments: Vec<f64>,
    histogram: Option<Histogram>,
}

fn run_replica(cfg: &ExperimentConfig, sizes: &ResolvedSizes, taus: &[f64], replica: u64) -> Result<ReplicaOutcome> {
    let v = sample_base_vectors(sizes.n, sizes.k, sizes.m, &cfg.dist, cfg.seed, replica);
    let g = gram_matrix(&v);
    let moments = trace_moments_from_gram(&g, taus, cfg.p_max, sizes.n, sizes.k)?;
    let histogram = cfg.histogram.as_ref().map(|h| eigen_histogram(&g, taus, h, sizes.n, sizes.k)).transpose()?;
    Ok(ReplicaOutcome { moments, histogram })
}

fn mean_and_variance(xs: &[f64]) -> (f64, Option<f64>) {
    let len = xs.len() as f64;
    let mean = xs.iter().copied().collect::<CompensatedSum>().value() / len;
    if xs.len() < 2 {
        return (mean, None);
    }
    let ss = xs.iter().map(|x| (x - mean) * (x - mean)).collect::<CompensatedSum>().value();
    (mean, Some(ss / (len - 1.0)))
}

/// Runs the replicas in parallel and reduces them in replica order, so the
/// summary depends only on the configuration.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<SpectralSummary> {
    let sizes = cfg.resolve()?;
    if cfg.histogram.is_some() && !cfg.tau.all_positive() {
        return Err(Error::Unsupported("eigenvalue histograms need strictly positive tau".into()));
    }
    let taus = cfg.tau.resolve(sizes.m);
    let outcomes: Vec<ReplicaOutcome> =
        (0..cfg.replicas as u64).into_par_iter().map(|r| run_replica(cfg, &sizes, &taus, r)).collect::<Result<_>>()?;

    let theory = match cfg.scheme {
        Some(s) => {
            let params = LimitParams::new(s.c, s.d, cfg.dist.m4())?;
            let tau = cfg.tau.moments(cfg.p_max)?;
            Some((1..=cfg.p_max).map(|p| limit_moment_value(p, &params, &tau)).collect::<Result<Vec<_>>>()?)
        }
        None => None,
    };

    let moments = (1..=cfg.p_max)
        .map(|p| {
            let xs: Vec<f64> = outcomes.iter().map(|o| o.moments[p - 1]).collect();
            let (mean, variance) = mean_and_variance(&xs);
            let target = theory.as_ref().map(|t| t[p - 1]);
            MomentStat {
                p,
                mean,
                variance,
                stderr: variance.map(|v| (v / xs.len() as f64).sqrt()),
                theory: target,
                gap: target.map(|t| (mean - t).abs()),
            }
        })
        .collect();

    let histogram = cfg.histogram.as_ref().map(|h| {
        let dimension = (sizes.n as f64).powi(sizes.k as i32);
        let mut acc = Histogram::empty(h, dimension, ((dimension - sizes.m as f64) / dimension).max(0.0));
        for o in &outcomes {
            if let Some(part) = &o.histogram {
                acc.merge(part);
            }
        }
        acc
    });

    let theory_label =
        theory.map(|_| if cfg.dist.is_complex() { LIMIT_LABEL } else { COMPLEX_DERIVED_LABEL }.to_string());
    Ok(SpectralSummary { config: cfg.clone(), sizes, moments, theory_label, histogram })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub mean: f64,
    pub variance: f64,
    /// `variance · n^k`.
    pub scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceDecayReport {
    pub p: usize,
    pub rows: Vec<DecayRow>,
    /// Least-squares `b` in `Var ≈ A · (n^k)^{−b}`; absent if a variance is zero.
    pub fitted_exponent: Option<f64>,
    /// `max(Var·n^k) / min(Var·n^k)` over the family.
    pub scaled_spread: f64,
    /// Smallest `C` with `Var ≤ C^k / n^k` for every member.
    pub envelope_constant: f64,
}

/// Empirical variance of the order-`p` moment across a family of sizes.
pub fn variance_decay_report(family: &[ExperimentConfig], p: usize) -> Result<VarianceDecayReport> {
    if family.len() < 2 {
        return Err(Error::Invalid(format!("variance decay needs at least two configurations, got {}", family.len())));
    }
    let mut rows = Vec::with_capacity(family.len());
    for cfg in family {
        if p == 0 || p > cfg.p_max {
            return Err(Error::Invalid(format!("order {p} outside 1..={}", cfg.p_max)));
        }
        let summary = run_experiment(cfg)?;
        let stat = &summary.moments[p - 1];
        let variance =
            stat.variance.ok_or_else(|| Error::Invalid("variance decay needs at least two replicas".into()))?;
        let s = summary.sizes;
        let nk = (s.n as f64).powi(s.k as i32);
        rows.push(DecayRow { n: s.n, k: s.k, m: s.m, mean: stat.mean, variance, scaled: variance * nk });
    }
    let fitted_exponent = if rows.iter().all(|r| r.variance > 0.0) {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.k as f64 * (r.n as f64).ln(), r.variance.ln())).collect();
        let len = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        (sxx > 0.0).then(|| -sxy / sxx)
    } else {
        None
    };
    let max = rows.iter().map(|r| r.scaled).fold(f64::NEG_INFINITY, f64::max);
    let min = rows.iter().map(|r| r.scaled).fold(f64::INFINITY, f64::min);
    let envelope_constant = rows.iter().map(|r| r.scaled.powf(1.0 / r.k as f64)).fold(0.0, f64::max);
    Ok(VarianceDecayReport {
        p,
        rows,
        fitted_exponent,
        scaled_spread: if min > 0.0 { max / min } else { f64::INFINITY },
        envelope_constant,
    })
}
