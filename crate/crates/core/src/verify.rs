//! Brute-force verification of the counting identities.

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{
    class_one_witness, count_delta1_bruteforce, count_delta3_bruteforce, count_delta4_bruteforce, delta3_count_formula,
    delta4_count_formula, enumerate_canonical, enumerate_class_one, enumerate_class_one_exhaustive,
    has_crossing_pattern, CanonicalSequence,
};
use crate::error::{Error, Result};
use crate::numeric::{catalan, narayana};

/// Largest `p` the battery accepts by default.
pub const DEFAULT_VERIFY_CAP: usize = 7;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub p: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub p_max: usize,
    pub checks: Vec<CheckResult>,
    /// `|C^{(1)}_{s,p}|` for every `(p, s)`, stored as `(p, s, count)`.
    pub class_one_counts: Vec<(usize, usize, usize)>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn class_one_count(&self, p: usize, s: usize) -> Option<usize> {
        self.class_one_counts.iter().find(|&&(pp, ss, _)| pp == p && ss == s).map(|&(_, _, n)| n)
    }
}

fn check(name: &str, p: usize, mismatches: Vec<String>) -> CheckResult {
    let passed = mismatches.is_empty();
    let detail = if passed {
        "ok".to_string()
    } else {
        let shown: Vec<_> = mismatches.iter().take(3).cloned().collect();
        format!("{} mismatch(es): {}", mismatches.len(), shown.join("; "))
    };
    CheckResult { name: name.to_string(), p, passed, detail }
}

/// Runs the battery for every `1 <= p <= p_max`.
pub fn verify_lemmas(p_max: usize) -> Result<VerificationReport> {
    verify_lemmas_with_cap(p_max, DEFAULT_VERIFY_CAP)
}

pub fn verify_lemmas_with_cap(p_max: usize, cap: usize) -> Result<VerificationReport> {
    if p_max == 0 {
        return Err(Error::Domain("p_max must be at least 1".into()));
    }
    if p_max > cap {
        return Err(Error::BudgetExceeded {
            what: "lemma verification order",
            needed: p_max as u128,
            cap: cap as u128,
        });
    }
    let mut checks = Vec::new();
    let mut class_one_counts = Vec::new();
    for p in 1..=p_max {
        let all: Vec<CanonicalSequence> =
            (1..=p).map(|s| enumerate_canonical(s, p)).collect::<Result<Vec<_>>>()?.concat();

        // class-one counts against the closed form, and their Catalan sum
        let mut count_errs = Vec::new();
        let mut total = 0usize;
        for s in 1..=p {
            let exhaustive = enumerate_class_one_exhaustive(s, p)?;
            if exhaustive != enumerate_class_one(s, p)? {
                count_errs.push(format!("s={s}: pruned enumeration differs from exhaustive filter"));
            }
            let n = exhaustive.len();
            total += n;
            class_one_counts.push((p, s, n));
            let want = narayana(p as u64, s as u64);
            if num_bigint::BigUint::from(n) != want {
                count_errs.push(format!("s={s}: {n} vs {want}"));
            }
        }
        checks.push(check("class-one count", p, count_errs));
        let cat = catalan(p as u64);
        let cat_errs = if num_bigint::BigUint::from(total) == cat { vec![] } else { vec![format!("{total} vs {cat}")] };
        checks.push(check("catalan sum", p, cat_errs));

        // uniqueness and witness agreement
        let uniq: Vec<String> = all
            .par_iter()
            .filter_map(|a| {
                let brute = count_delta1_bruteforce(a);
                let fast = class_one_witness(a).is_some() as usize;
                (brute > 1 || brute != fast).then(|| format!("{a}: brute {brute}, witness {fast}"))
            })
            .collect();
        checks.push(check("witness uniqueness", p, uniq));

        let crossing: Vec<String> = all
            .par_iter()
            .filter(|a| has_crossing_pattern(a) && class_one_witness(a).is_some())
            .map(|a| a.to_string())
            .collect();
        checks.push(check("crossing exclusion", p, crossing));

        let class_one: Vec<CanonicalSequence> =
            all.iter().filter(|a| class_one_witness(a).is_some()).cloned().collect();
        let d34: Vec<String> = class_one
            .par_iter()
            .filter_map(|a| {
                let (b3, b4) = (count_delta3_bruteforce(a), count_delta4_bruteforce(a));
                let f3 = delta3_count_formula(a).ok()? as usize;
                let f4 = delta4_count_formula(a).ok()? as usize;
                (b3 != f3 || b4 != f4).then(|| format!("{a}: Δ3 {b3} vs {f3}, Δ4 {b4} vs {f4}"))
            })
            .collect();
        checks.push(check("Δ3/Δ4 closed forms", p, d34));
    }
    Ok(VerificationReport { p_max, checks, class_one_counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_passes_to_five() {
        let r = verify_lemmas(5).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{} at p = {}: {}", c.name, c.p, c.detail);
        }
        assert_eq!(r.class_one_count(4, 2), Some(6));
    }

    #[test]
    fn cap_is_enforced() {
        let err = verify_lemmas(8).unwrap_err();
        assert!(err.is_resource_cap());
        assert!(verify_lemmas(0).is_err());
        assert!(verify_lemmas(1).unwrap().all_passed());
    }
}
