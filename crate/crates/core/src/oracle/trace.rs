use num_complex::Complex64;
use rayon::prelude::*;

use super::distribution::BaseDistribution;
use super::expectation::{pair_walk_value, walk_value};
use crate::combinatorics::{degree_profile, enumerate_canonical, CanonicalSequence};
use crate::error::{Error, Result};
use crate::numeric::{falling_factorial, CompensatedComplexSum};

pub const DEFAULT_MEAN_CAP: u128 = 100_000_000;
pub const DEFAULT_VARIANCE_CAP: u128 = 10_000_000;

/// Enumeration caps, checked before any allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Bound on `n^p · m^p` walk evaluations for the mean.
    pub mean_cap: u128,
    /// Bound on `(n m)^{2p}` pair evaluations for the variance.
    pub variance_cap: u128,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { mean_cap: DEFAULT_MEAN_CAP, variance_cap: DEFAULT_VARIANCE_CAP }
    }
}

fn validate(n: usize, k: usize, m: usize, p: usize, taus: &[f64]) -> Result<()> {
    if n == 0 || k == 0 || m == 0 || p == 0 {
        return Err(Error::Domain(format!("need n, k, m, p >= 1 (got {n}, {k}, {m}, {p})")));
    }
    if taus.len() != m {
        return Err(Error::Invalid(format!("{} tau values for m = {m}", taus.len())));
    }
    if let Some(t) = taus.iter().find(|t| !t.is_finite()) {
        return Err(Error::Invalid(format!("non-finite tau {t}")));
    }
    Ok(())
}

fn checked_pow(base: u128, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

fn check_cap(what: &'static str, needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        return Err(Error::BudgetExceeded { what, needed, cap });
    }
    Ok(())
}

/// All sequences in `[base]^len`, 1-based, in lexicographic order.
fn all_sequences(len: usize, base: usize) -> Vec<Vec<u32>> {
    let total = checked_pow(base as u128, len) as usize;
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![1u32; len];
    loop {
        out.push(cur.clone());
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if (cur[pos] as usize) < base {
                cur[pos] += 1;
                break;
            }
            cur[pos] = 1;
        }
    }
}

fn tau_product(alpha: &[u32], taus: &[f64]) -> f64 {
    alpha.iter().map(|&a| taus[a as usize - 1]).product()
}

fn naive_row_sum(alpha: &[u32], rows: &[Vec<u32>], dist: &BaseDistribution) -> Complex64 {
    rows.iter().map(|i| walk_value(i, alpha, dist)).collect::<CompensatedComplexSum>().value()
}

/// `(1/n^k) E[Tr M^p]` by direct enumeration of `α ∈ [m]^p` and `i ∈ [n]^p`.
pub fn expected_trace_moment_naive(
    n: usize,
    k: usize,
    m: usize,
    p: usize,
    taus: &[f64],
    dist: &BaseDistribution,
    budget: &OracleBudget,
) -> Result<f64> {
    validate(n, k, m, p, taus)?;
    check_cap("mean enumeration", checked_pow((n * m) as u128, p), budget.mean_cap)?;
    let rows = all_sequences(p, n);
    let cols = all_sequences(p, m);
    let scale = (n as f64).powi(-(p as i32));
    let terms: Vec<Complex64> = cols
        .par_iter()
        .map(|alpha| {
            let s = naive_row_sum(alpha, &rows, dist) * scale;
            s.powi(k as i32) * tau_product(alpha, taus)
        })
        .collect();
    let total: CompensatedComplexSum = terms.into_iter().collect();
    Ok(total.value().re / (n as f64).powi(k as i32))
}

/// `Σ_φ Π_t τ_{φ(t)}^{deg_t}` over injections `φ : [s] → [m]`.
fn injection_weight(degrees: &[i32], taus: &[f64]) -> f64 {
    fn rec(t: usize, degrees: &[i32], taus: &[f64], used: &mut [bool], acc: f64) -> f64 {
        if t == degrees.len() {
            return acc;
        }
        let mut total = 0.0;
        for (j, &tau) in taus.iter().enumerate() {
            if !used[j] {
                used[j] = true;
                total += rec(t + 1, degrees, taus, used, acc * tau.powi(degrees[t]));
                used[j] = false;
            }
        }
        total
    }
    if degrees.len() > taus.len() {
        return 0.0;
    }
    rec(0, degrees, taus, &mut vec![false; taus.len()], 1.0)
}

fn injection_count(m: usize, s: usize) -> u128 {
    (0..s).fold(1u128, |acc, j| acc.saturating_mul((m - j) as u128))
}

/// `(1/n^k) E[Tr M^p]` summed over canonical classes: each row class of size
/// `r` stands for `n(n−1)⋯(n−r+1)` sequences and each column class for all
/// injective relabelings into `[m]`.
pub fn expected_trace_moment_reduced(
    n: usize,
    k: usize,
    m: usize,
    p: usize,
    taus: &[f64],
    dist: &BaseDistribution,
    budget: &OracleBudget,
) -> Result<f64> {
    validate(n, k, m, p, taus)?;
    let smax = p.min(m);
    let work: u128 = (1..=smax).map(|s| injection_count(m, s)).fold(0u128, u128::saturating_add);
    check_cap("reduced column enumeration", work, budget.mean_cap)?;
    let row_classes: Vec<(f64, Vec<CanonicalSequence>)> = (1..=p.min(n))
        .map(|r| Ok((falling_factorial(n as u64, r as u64), enumerate_canonical(r, p)?)))
        .collect::<Result<_>>()?;
    let mut alphas = Vec::new();
    for s in 1..=smax {
        alphas.extend(enumerate_canonical(s, p)?);
    }
    let scale = (n as f64).powi(-(p as i32));
    let terms: Vec<Complex64> = alphas
        .par_iter()
        .map(|alpha| {
            let mut row = CompensatedComplexSum::default();
            for (weight, class) in &row_classes {
                let inner: CompensatedComplexSum =
                    class.iter().map(|i| walk_value(i.entries(), alpha.entries(), dist)).collect();
                row.add(inner.value() * *weight);
            }
            let degrees: Vec<i32> = degree_profile(alpha).iter().map(|(_, d)| d as i32).collect();
            (row.value() * scale).powi(k as i32) * injection_weight(&degrees, taus)
        })
        .collect();
    let total: CompensatedComplexSum = terms.into_iter().collect();
    Ok(total.value().re / (n as f64).powi(k as i32))
}

/// Exact `(1/n^k) E[Tr M^p]`. The size precondition is the `n^p m^p` budget of
/// direct enumeration; the value is computed on canonical classes.
pub fn exact_expected_trace_moment_with_budget(
    n: usize,
    k: usize,
    m: usize,
    p: usize,
    taus: &[f64],
    dist: &BaseDistribution,
    budget: &OracleBudget,
) -> Result<f64> {
    validate(n, k, m, p, taus)?;
    check_cap("mean enumeration", checked_pow((n * m) as u128, p), budget.mean_cap)?;
    expected_trace_moment_reduced(n, k, m, p, taus, dist, budget)
}

pub fn exact_expected_trace_moment(
    n: usize,
    k: usize,
    m: usize,
    p: usize,
    taus: &[f64],
    dist: &BaseDistribution,
) -> Result<f64> {
    exact_expected_trace_moment_with_budget(n, k, m, p, taus, dist, &OracleBudget::default())
}

/// Exact `Var((1/n^k) Tr M^p)`. Pairs of column sequences with no common
/// column are independent and drop out.
pub fn exact_variance_trace_moment_with_budget(
    n: usize,
    k: usize,
    m: usize,
    p: usize,
    taus: &[f64],
    dist: &BaseDistribution,
    budget: &OracleBudget,
) -> Result<f64> {
    validate(n, k, m, p, taus)?;
    check_cap("variance enumeration", checked_pow((n * m) as u128, 2 * p), budget.variance_cap)?;
    let rows = all_sequences(p, n);
    let cols = all_sequences(p, m);
    let scale = (n as f64).powi(-(p as i32));
    let sums: Vec<Complex64> = cols.iter().map(|a| naive_row_sum(a, &rows, dist) * scale).collect();
    let ki = k as i32;
    let terms: Vec<Complex64> = (0..cols.len())
        .into_par_iter()
        .map(|x| {
            let alpha = &cols[x];
            let mut acc = CompensatedComplexSum::default();
            for (y, beta) in cols.iter().enumerate() {
                if !alpha.iter().any(|a| beta.contains(a)) {
                    continue;
                }
                let joint: CompensatedComplexSum = rows
                    .iter()
                    .flat_map(|i| rows.iter().map(move |j| (i, j)))
                    .map(|(i, j)| pair_walk_value(i, alpha, j, beta, dist))
                    .collect();
                let joint = joint.value() * (scale * scale);
                let w = tau_product(alpha, taus) * tau_product(beta, taus);
                acc.add((joint.powi(ki) - (sums[x] * sums[y]).powi(ki)) * w);
            }
            acc.value()
        })
        .collect();
    let total: CompensatedComplexSum = terms.into_iter().collect();
    Ok((total.value().re / (n as f64).powi(2 * ki)).max(0.0))
}

pub fn exact_variance_trace_moment(
    n: usize,
    k: usize,
    m: usize,
    p: usize,
    taus: &[f64],
    dist: &BaseDistribution,
) -> Result<f64> {
    exact_variance_trace_moment_with_budget(n, k, m, p, taus, dist, &OracleBudget::default())
}
