use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{tau_moments_from_sequence, TauMoments};
use crate::oracle::BaseDistribution;

/// Limit ratios `k/n → d` and `m/n^k → c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scheme {
    pub c: f64,
    pub d: f64,
}

impl Scheme {
    pub fn new(c: f64, d: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) || !(d.is_finite() && d >= 0.0) {
            return Err(Error::Invalid(format!("scheme needs c > 0 and d >= 0 (got c={c}, d={d})")));
        }
        Ok(Scheme { c, d })
    }

    /// `k = round(d n)` and `m = round(c n^k)`, each at least 1.
    pub fn resolve(&self, n: usize) -> Result<(usize, usize)> {
        let k = ((self.d * n as f64).round() as usize).max(1);
        let m = self.c * (n as f64).powi(k as i32);
        if !m.is_finite() || m > u32::MAX as f64 {
            return Err(Error::Invalid(format!("scheme gives m = {m:e} at n = {n}")));
        }
        Ok((k, (m.round() as usize).max(1)))
    }
}

/// How the weights `τ_1..τ_m` are chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TauRule {
    /// `const:a`
    Constant(f64),
    /// `list:a,b,...`, cycled to length `m`
    List(Vec<f64>),
    /// `twopoint:a,b`, alternating `a, b, a, b, ...`
    TwoPoint(f64, f64),
}

impl Default for TauRule {
    fn default() -> Self {
        TauRule::Constant(1.0)
    }
}

impl TauRule {
    pub fn resolve(&self, m: usize) -> Vec<f64> {
        match self {
            TauRule::Constant(a) => vec![*a; m],
            TauRule::List(v) => v.iter().copied().cycle().take(m).collect(),
            TauRule::TwoPoint(a, b) => (0..m).map(|j| if j % 2 == 0 { *a } else { *b }).collect(),
        }
    }

    /// Limit moments fed to the theoretical targets.
    pub fn moments(&self, q_max: usize) -> Result<TauMoments> {
        match self {
            TauRule::Constant(a) => Ok(TauMoments::constant(*a, q_max)),
            TauRule::List(v) => tau_moments_from_sequence(v, q_max),
            TauRule::TwoPoint(a, b) => Ok(TauMoments::two_point(*a, *b, q_max)),
        }
    }

    pub fn all_positive(&self) -> bool {
        match self {
            TauRule::Constant(a) => *a > 0.0,
            TauRule::List(v) => v.iter().all(|t| *t > 0.0),
            TauRule::TwoPoint(a, b) => *a > 0.0 && *b > 0.0,
        }
    }
}

fn parse_numbers(body: &str) -> Result<Vec<f64>> {
    body.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Invalid(format!("bad tau value {t:?}")))
        })
        .collect()
}

impl FromStr for TauRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s.split_once(':').ok_or_else(|| {
            Error::Invalid(format!("tau spec {s:?} must look like const:1, list:1,2 or twopoint:1,2"))
        })?;
        let vals = parse_numbers(body)?;
        match (kind.trim(), vals.as_slice()) {
            ("const", [a]) => Ok(TauRule::Constant(*a)),
            ("list", v) if !v.is_empty() => Ok(TauRule::List(v.to_vec())),
            ("twopoint", [a, b]) => Ok(TauRule::TwoPoint(*a, *b)),
            _ => Err(Error::Invalid(format!("unrecognized tau spec {s:?}"))),
        }
    }
}

impl TryFrom<String> for TauRule {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TauRule> for String {
    fn from(t: TauRule) -> String {
        t.to_string()
    }
}

impl fmt::Display for TauRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            TauRule::Constant(a) => write!(f, "const:{a}"),
            TauRule::List(v) => write!(f, "list:{}", join(v)),
            TauRule::TwoPoint(a, b) => write!(f, "twopoint:{a},{b}"),
        }
    }
}

/// Fixed-edge histogram on `[0, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramConfig {
    pub bins: usize,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    /// Explicit `k`; overrides the scheme.
    #[serde(default)]
    pub k: Option<usize>,
    /// Explicit `m`; overrides the scheme.
    #[serde(default)]
    pub m: Option<usize>,
    pub p_max: usize,
    pub dist: BaseDistribution,
    #[serde(default)]
    pub tau: TauRule,
    pub replicas: usize,
    pub seed: u64,
    #[serde(default)]
    pub scheme: Option<Scheme>,
    #[serde(default)]
    pub histogram: Option<HistogramConfig>,
}

/// Sizes after scheme rounding, with the ratios actually realized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedSizes {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub k_over_n: f64,
    pub m_over_nk: f64,
}

impl ExperimentConfig {
    pub fn new(n: usize, k: usize, m: usize, p_max: usize, dist: BaseDistribution) -> Self {
        ExperimentConfig {
            n,
            k: Some(k),
            m: Some(m),
            p_max,
            dist,
            tau: TauRule::default(),
            replicas: 1,
            seed: 0,
            scheme: None,
            histogram: None,
        }
    }

    pub fn from_scheme(n: usize, scheme: Scheme, p_max: usize, dist: BaseDistribution) -> Self {
        ExperimentConfig { k: None, m: None, scheme: Some(scheme), ..Self::new(n, 1, 1, p_max, dist) }
    }

    pub fn with_replicas(mut self, replicas: usize) -> Self {
        self.replicas = replicas;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tau(mut self, tau: TauRule) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_histogram(mut self, bins: usize, upper: f64) -> Self {
        self.histogram = Some(HistogramConfig { bins, upper });
        self
    }

    pub fn resolve(&self) -> Result<ResolvedSizes> {
        if self.n < 2 {
            return Err(Error::Invalid(format!("n must be at least 2, got {}", self.n)));
        }
        if self.p_max == 0 {
            return Err(Error::Invalid("p_max must be at least 1".into()));
        }
        if self.replicas == 0 {
            return Err(Error::Invalid("replicas must be at least 1".into()));
        }
        let from_scheme = self.scheme.map(|s| s.resolve(self.n)).transpose()?;
        let k = self.k.or(from_scheme.map(|x| x.0));
        let m = self.m.or(from_scheme.map(|x| x.1));
        let (k, m) = match (k, m) {
            (Some(k), Some(m)) => (k, m),
            _ => return Err(Error::Invalid("k and m need a scheme or explicit values".into())),
        };
        if k == 0 || m == 0 {
            return Err(Error::Invalid(format!("k and m must be at least 1 (got k={k}, m={m})")));
        }
        if let TauRule::List(v) = &self.tau {
            if v.is_empty() {
                return Err(Error::Invalid("empty tau list".into()));
            }
        }
        if let Some(h) = &self.histogram {
            if h.bins == 0 || !(h.upper.is_finite() && h.upper > 0.0) {
                return Err(Error::Invalid("histogram needs bins >= 1 and a positive upper edge".into()));
            }
        }
        let nk = (self.n as f64).powi(k as i32);
        Ok(ResolvedSizes { n: self.n, k, m, k_over_n: k as f64 / self.n as f64, m_over_nk: m as f64 / nk })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_rounding() {
        let s = Scheme::new(1.0, 1.0).unwrap();
        assert_eq!(s.resolve(2).unwrap(), (2, 4));
        assert_eq!(s.resolve(4).unwrap(), (4, 256));
        let s = Scheme::new(0.5, 0.1).unwrap();
        assert_eq!(s.resolve(3).unwrap(), (1, 2));
        assert_eq!(Scheme::new(0.01, 0.0).unwrap().resolve(2).unwrap(), (1, 1));
        assert!(Scheme::new(0.0, 1.0).is_err());
    }

    #[test]
    fn tau_rules() {
        assert_eq!("const:2".parse::<TauRule>().unwrap().resolve(3), vec![2.0; 3]);
        assert_eq!("list:1,2".parse::<TauRule>().unwrap().resolve(5), vec![1.0, 2.0, 1.0, 2.0, 1.0]);
        assert_eq!("twopoint:1,2".parse::<TauRule>().unwrap().resolve(3), vec![1.0, 2.0, 1.0]);
        for bad in ["const", "const:1,2", "list:", "twopoint:1", "poisson:3", "const:x", "const:inf"] {
            assert!(bad.parse::<TauRule>().is_err(), "{bad}");
        }
        let t = TauRule::TwoPoint(1.0, 2.0);
        assert_eq!(t.to_string().parse::<TauRule>().unwrap(), t);
        assert_eq!(t.moments(3).unwrap().get(3).unwrap(), 4.5);
        assert!(!TauRule::List(vec![1.0, -1.0]).all_positive());
    }

    #[test]
    fn resolve_prefers_explicit_sizes() {
        let base = ExperimentConfig::from_scheme(3, Scheme::new(1.0, 1.0).unwrap(), 2, BaseDistribution::Phase);
        let r = base.resolve().unwrap();
        assert_eq!((r.k, r.m), (3, 27));
        assert_eq!(r.m_over_nk, 1.0);
        let over = ExperimentConfig { m: Some(5), ..base.clone() };
        assert_eq!(over.resolve().unwrap().m, 5);
        let bare = ExperimentConfig { scheme: None, ..base.clone() };
        assert!(bare.resolve().is_err());
        assert!(ExperimentConfig { n: 1, ..base.clone() }.resolve().is_err());
        assert!(base.clone().with_replicas(0).resolve().is_err());
        assert!(base.with_histogram(0, 1.0).resolve().is_err());
    }
}
