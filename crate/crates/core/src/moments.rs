//! Limiting spectral moments.
//!
//! For `τ`-moment limits `m_q` and `θ = exp(d (m4 − 1))` the `p`-th limit is
//!
//! ```text
//! γ_p = Σ_s c^s Σ_{α ∈ C¹_{s,p}} Π_t m_{deg_t(α)} · θ^{Σ_t C(deg_t(α), 2)}
//! ```
//!
//! where `C¹_{s,p}` are the canonical sequences admitting a paired-tree
//! witness. Coefficients are collected exactly and only the final
//! substitution is done in floating point.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{degree_profile, enumerate_class_one};
use crate::error::{Error, Result};
use crate::numeric::narayana;

/// Largest order computed unless the caller raises the bound.
pub const DEFAULT_MAX_ORDER: usize = 12;

/// Limit parameters: `c = lim m/n^k`, `d = lim k/n`, `m4 = E|ξ|⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitParams {
    pub c: f64,
    pub d: f64,
    pub m4: f64,
}

impl LimitParams {
    pub fn new(c: f64, d: f64, m4: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Invalid(format!("c must be positive, got {c}")));
        }
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::Invalid(format!("d must be nonnegative, got {d}")));
        }
        if !(m4.is_finite() && m4 >= 1.0) {
            return Err(Error::Invalid(format!("m4 must be at least 1, got {m4}")));
        }
        Ok(Self { c, d, m4 })
    }

    pub fn theta(&self) -> f64 {
        (self.d * (self.m4 - 1.0)).exp()
    }
}

/// Limits `m_q = lim (1/m) Σ_j τ_j^q` for `q = 1..=q_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauMoments {
    values: Vec<f64>,
}

impl TauMoments {
    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn constant(a: f64, q_max: usize) -> Self {
        Self { values: (1..=q_max).map(|q| a.powi(q as i32)).collect() }
    }

    pub fn unit(q_max: usize) -> Self {
        Self::constant(1.0, q_max)
    }

    /// Equal-weight mixture of two values: `m_q = (a^q + b^q) / 2`.
    pub fn two_point(a: f64, b: f64, q_max: usize) -> Self {
        Self { values: (1..=q_max).map(|q| 0.5 * (a.powi(q as i32) + b.powi(q as i32))).collect() }
    }

    pub fn get(&self, q: usize) -> Result<f64> {
        q.checked_sub(1).and_then(|j| self.values.get(j)).copied().ok_or(Error::MissingTauMoment(q))
    }

    pub fn q_max(&self) -> usize {
        self.values.len()
    }
}

/// Finite-`m` averages `(1/m) Σ_j τ_j^q`.
pub fn tau_moments_from_sequence(taus: &[f64], q_max: usize) -> Result<TauMoments> {
    if taus.is_empty() {
        return Err(Error::Invalid("tau sequence is empty".into()));
    }
    let m = taus.len() as f64;
    Ok(TauMoments { values: (1..=q_max).map(|q| taus.iter().map(|t| t.powi(q as i32)).sum::<f64>() / m).collect() })
}

/// Index of one monomial `c^s · Π_{d ∈ degrees} m_d · θ^theta_exp`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TermKey {
    pub s: usize,
    pub theta_exp: u64,
    /// Block sizes, largest first.
    pub degrees: Vec<usize>,
}

/// `γ_p` as an exact integer combination of monomials in `c`, `θ` and `m_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentPolynomial {
    p: usize,
    terms: BTreeMap<TermKey, BigUint>,
}

/// One row of the serialized polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SerializedTerm {
    pub s: usize,
    pub theta_exp: u64,
    pub degrees: Vec<usize>,
    pub coeff: serde_json::Value,
}

impl MomentPolynomial {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, BigUint> {
        &self.terms
    }

    /// Sum of coefficients over terms with the given `s`.
    pub fn coefficient_sum(&self, s: usize) -> BigUint {
        self.terms.iter().filter(|(k, _)| k.s == s).map(|(_, v)| v).sum()
    }

    /// Coefficients of `c^s θ^E` once every `m_q` is set to one.
    pub fn collapse_unit_tau(&self) -> BTreeMap<(usize, u64), BigUint> {
        let mut out: BTreeMap<(usize, u64), BigUint> = BTreeMap::new();
        for (k, v) in &self.terms {
            *out.entry((k.s, k.theta_exp)).or_default() += v;
        }
        out
    }

    pub fn evaluate(&self, c: f64, theta: f64, tau: &TauMoments) -> Result<f64> {
        let mut total = 0.0;
        for (k, v) in &self.terms {
            let mut term = v.to_f64().unwrap_or(f64::INFINITY) * c.powi(k.s as i32);
            for &deg in &k.degrees {
                term *= tau.get(deg)?;
            }
            total += term * theta.powi(k.theta_exp as i32);
        }
        Ok(total)
    }

    /// Exact value at `τ ≡ 1` for rational `c` and `θ`.
    pub fn evaluate_unit_tau_exact(&self, c: &BigRational, theta: &BigRational) -> BigRational {
        self.collapse_unit_tau().into_iter().fold(BigRational::zero(), |acc, ((s, e), v)| {
            acc + BigRational::from_integer(BigInt::from(v)) * pow_rational(c, s as u64) * pow_rational(theta, e)
        })
    }

    pub fn to_serialized(&self) -> Vec<SerializedTerm> {
        self.terms
            .iter()
            .map(|(k, v)| SerializedTerm {
                s: k.s,
                theta_exp: k.theta_exp,
                degrees: k.degrees.clone(),
                coeff: match v.to_u64() {
                    Some(x) => serde_json::Value::from(x),
                    None => serde_json::Value::from(v.to_string()),
                },
            })
            .collect()
    }

    /// Rendering with every `m_q` set to one, highest θ power first within each `s`.
    pub fn display_unit_tau(&self) -> String {
        let collapsed = self.collapse_unit_tau();
        let mut keys: Vec<_> = collapsed.keys().copied().collect();
        keys.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let parts: Vec<String> = keys
            .iter()
            .map(|key| {
                let (s, e) = *key;
                let mut t = String::new();
                let coeff = &collapsed[key];
                if !coeff.is_one() {
                    t.push_str(&coeff.to_string());
                }
                t.push('c');
                if s > 1 {
                    t.push_str(&format!("^{s}"));
                }
                match e {
                    0 => {}
                    1 => t.push_str("·θ"),
                    _ => t.push_str(&format!("·θ^{e}")),
                }
                t
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for MomentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if !v.is_one() {
                write!(f, "{v}·")?;
            }
            write!(f, "c^{}", k.s)?;
            for d in &k.degrees {
                write!(f, "·m{d}")?;
            }
            if k.theta_exp > 0 {
                write!(f, "·θ^{}", k.theta_exp)?;
            }
        }
        Ok(())
    }
}

fn pow_rational(x: &BigRational, e: u64) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

pub fn limit_moment_symbolic(p: usize) -> Result<MomentPolynomial> {
    limit_moment_symbolic_bounded(p, DEFAULT_MAX_ORDER)
}

pub fn limit_moment_symbolic_bounded(p: usize, max_order: usize) -> Result<MomentPolynomial> {
    if p == 0 {
        return Err(Error::Domain("moment order must be at least 1".into()));
    }
    if p > max_order {
        return Err(Error::BudgetExceeded { what: "symbolic moment order", needed: p as u128, cap: max_order as u128 });
    }
    let per_s: Vec<BTreeMap<TermKey, BigUint>> = (1..=p)
        .into_par_iter()
        .map(|s| -> Result<_> {
            let mut terms: BTreeMap<TermKey, BigUint> = BTreeMap::new();
            for alpha in enumerate_class_one(s, p)? {
                let prof = degree_profile(&alpha);
                let key = TermKey { s, theta_exp: prof.pair_count(), degrees: prof.sorted_degrees() };
                *terms.entry(key).or_default() += 1u32;
            }
            Ok(terms)
        })
        .collect::<Result<_>>()?;
    let terms = per_s.into_iter().flatten().collect();
    Ok(MomentPolynomial { p, terms })
}

pub fn limit_moment_value(p: usize, params: &LimitParams, tau: &TauMoments) -> Result<f64> {
    if tau.q_max() < p {
        return Err(Error::MissingTauMoment(p));
    }
    limit_moment_symbolic(p)?.evaluate(params.c, params.theta(), tau)
}

/// The `d = 0` limit (θ fixed to one).
pub fn limit_moment_d0(p: usize, c: f64, tau: &TauMoments) -> Result<f64> {
    if tau.q_max() < p {
        return Err(Error::MissingTauMoment(p));
    }
    limit_moment_symbolic(p)?.evaluate(c, 1.0, tau)
}

/// Direct loop over class-one sequences, bypassing the symbolic grouping.
pub fn limit_moment_direct(p: usize, params: &LimitParams, tau: &TauMoments) -> Result<f64> {
    let theta = params.theta();
    let mut total = 0.0;
    for s in 1..=p {
        for alpha in enumerate_class_one(s, p)? {
            let prof = degree_profile(&alpha);
            let mut term = params.c.powi(s as i32) * theta.powi(prof.pair_count() as i32);
            for (_, deg) in prof.iter() {
                term *= tau.get(deg)?;
            }
            total += term;
        }
    }
    Ok(total)
}

/// Marčenko–Pastur moment `Σ_s N(p, s) c^s`.
pub fn mp_moment(p: usize, c: f64) -> f64 {
    (1..=p).map(|s| narayana(p as u64, s as u64).to_f64().unwrap_or(f64::INFINITY) * c.powi(s as i32)).sum()
}

pub fn mp_moment_exact(p: usize, c: &BigRational) -> BigRational {
    (1..=p).fold(BigRational::zero(), |acc, s| {
        acc + BigRational::from_integer(BigInt::from(narayana(p as u64, s as u64))) * pow_rational(c, s as u64)
    })
}

/// Lower-bound row: `γ_p` against its `s = 1` term `c θ^{p(p−1)/2}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundRow {
    pub p: usize,
    pub gamma: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarlemanReport {
    /// `Σ_{j ≤ P} γ_{2j}^{−1/(2j)}` for `P = 1, 2, ...`.
    pub partial_sums: Vec<f64>,
    pub increments: Vec<f64>,
    pub lower_bound: Vec<LowerBoundRow>,
    /// Set when `θ > 1` and every `γ_p` dominates `c θ^{p(p−1)/2}`.
    pub super_exponential: bool,
}

/// `gammas[j]` is `γ_{j+1}`. The lower-bound columns need `(c, θ)`.
pub fn carleman_report(gammas: &[f64], c_theta: Option<(f64, f64)>) -> Result<CarlemanReport> {
    if let Some((j, g)) = gammas.iter().enumerate().find(|(_, g)| **g <= 0.0 || g.is_nan()) {
        return Err(Error::Domain(format!("moment γ_{} = {g} is not positive", j + 1)));
    }
    let mut increments = Vec::new();
    let mut partial_sums = Vec::new();
    let mut acc = 0.0;
    for j in 1..=gammas.len() / 2 {
        let inc = gammas[2 * j - 1].powf(-1.0 / (2 * j) as f64);
        acc += inc;
        increments.push(inc);
        partial_sums.push(acc);
    }
    let mut lower_bound = Vec::new();
    let mut super_exponential = false;
    if let Some((c, theta)) = c_theta {
        for (j, &g) in gammas.iter().enumerate() {
            let p = j + 1;
            let bound = c * theta.powf((p * (p - 1) / 2) as f64);
            lower_bound.push(LowerBoundRow { p, gamma: g, bound, ratio: g / bound });
        }
        super_exponential = theta > 1.0 && lower_bound.iter().all(|r| r.ratio >= 1.0);
    }
    Ok(CarlemanReport { partial_sums, increments, lower_bound, super_exponential })
}

/// Per-order numbers gathered for the `moments` report.
#[derive(Debug, Clone, Serialize)]
pub struct MomentRow {
    pub p: usize,
    pub gamma: f64,
    pub gamma_d0: f64,
    pub mp: f64,
    pub polynomial: String,
    pub terms: Vec<SerializedTerm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentTable {
    pub params: LimitParams,
    pub theta: f64,
    pub tau: TauMoments,
    pub rows: Vec<MomentRow>,
    pub carleman: CarlemanReport,
    /// Present whenever the first moment is reported.
    pub gamma1_note: Option<String>,
}

pub fn moment_table(p_max: usize, params: &LimitParams, tau: &TauMoments) -> Result<MomentTable> {
    if p_max == 0 {
        return Err(Error::Domain("p_max must be at least 1".into()));
    }
    let theta = params.theta();
    let mut rows = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let poly = limit_moment_symbolic(p)?;
        rows.push(MomentRow {
            p,
            gamma: poly.evaluate(params.c, theta, tau)?,
            gamma_d0: poly.evaluate(params.c, 1.0, tau)?,
            mp: mp_moment(p, params.c),
            polynomial: poly.display_unit_tau(),
            terms: poly.to_serialized(),
        });
    }
    let gammas: Vec<f64> = rows.iter().map(|r| r.gamma).collect();
    let carleman = carleman_report(&gammas, Some((params.c, theta)))?;
    let gamma1_note =
        Some(format!("gamma_1 = c*m_1 = {}; it equals 1 only under the normalization c*m_1 = 1", rows[0].gamma));
    Ok(MomentTable { params: *params, theta, tau: tau.clone(), rows, carleman, gamma1_note })
}
