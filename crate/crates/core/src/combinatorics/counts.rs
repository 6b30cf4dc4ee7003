use super::characteristic::class_one_witness;
use super::sequence::{degree_profile, enumerate_all_canonical, enumerate_canonical, CanonicalSequence};
use super::walk::{classify_raw, DeltaClass};
use crate::error::{Error, Result};
use crate::numeric::binomial;

/// True iff two distinct values interleave as `t1 .. t2 .. t1 .. t2`.
pub fn has_crossing_pattern(alpha: &CanonicalSequence) -> bool {
    let a = alpha.entries();
    let p = a.len();
    for j1 in 0..p {
        for j2 in j1 + 1..p {
            if a[j2] == a[j1] {
                continue;
            }
            for j1b in j2 + 1..p {
                if a[j1b] != a[j1] {
                    continue;
                }
                if a[j1b + 1..].contains(&a[j2]) {
                    return true;
                }
            }
        }
    }
    false
}

fn count_class(alpha: &CanonicalSequence, rows: &[CanonicalSequence], class: DeltaClass) -> usize {
    rows.iter().filter(|i| classify_raw(i.entries(), alpha.entries()) == class).count()
}

/// Number of canonical `i ∈ C_{p+1-s,p}` with `g(i, α)` a paired tree.
pub fn count_delta1_bruteforce(alpha: &CanonicalSequence) -> usize {
    let p = alpha.len();
    let r = p + 1 - alpha.distinct();
    let rows = enumerate_canonical(r, p).expect("1 <= r <= p");
    count_class(alpha, &rows, DeltaClass::Delta1)
}

/// Number of canonical row sequences (any `r`) with `g(i, α) ∈ Δ3`.
pub fn count_delta3_bruteforce(alpha: &CanonicalSequence) -> usize {
    let rows = enumerate_all_canonical(alpha.len()).expect("p >= 1");
    count_class(alpha, &rows, DeltaClass::Delta3)
}

/// Number of canonical row sequences (any `r`) with `g(i, α) ∈ Δ4`.
pub fn count_delta4_bruteforce(alpha: &CanonicalSequence) -> usize {
    let rows = enumerate_all_canonical(alpha.len()).expect("p >= 1");
    count_class(alpha, &rows, DeltaClass::Delta4)
}

fn require_class_one(alpha: &CanonicalSequence) -> Result<()> {
    if class_one_witness(alpha).is_none() {
        return Err(Error::Domain(format!("{alpha} has no paired-tree witness")));
    }
    Ok(())
}

/// `Σ_t C(deg_t, 2)`; defined only on class-one sequences.
pub fn delta4_count_formula(alpha: &CanonicalSequence) -> Result<u64> {
    require_class_one(alpha)?;
    Ok(degree_profile(alpha).pair_count())
}

/// `C(p+1-s, 2) − Σ_t C(deg_t, 2)`; defined only on class-one sequences.
pub fn delta3_count_formula(alpha: &CanonicalSequence) -> Result<u64> {
    require_class_one(alpha)?;
    let rows = (alpha.len() + 1 - alpha.distinct()) as u64;
    let glue_all = binomial(rows, 2);
    let glue_same = degree_profile(alpha).pair_count();
    glue_all.checked_sub(glue_same).ok_or_else(|| Error::Domain(format!("negative Δ3 count for {alpha}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_class_one;

    fn seq(v: &[u32]) -> CanonicalSequence {
        CanonicalSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn crossing_examples() {
        assert!(has_crossing_pattern(&seq(&[1, 2, 1, 2])));
        assert!(!has_crossing_pattern(&seq(&[1, 2, 2, 1])));
        assert!(!has_crossing_pattern(&seq(&[1, 1, 1])));
        assert!(has_crossing_pattern(&seq(&[1, 2, 3, 1, 3])));
    }

    #[test]
    fn delta_counts_on_short_sequences() {
        assert_eq!(count_delta4_bruteforce(&seq(&[1, 1])), 1);
        assert_eq!(delta4_count_formula(&seq(&[1, 1])).unwrap(), 1);
        assert_eq!(count_delta4_bruteforce(&seq(&[1, 2])), 0);
        assert_eq!(delta4_count_formula(&seq(&[1, 2])).unwrap(), 0);
        assert_eq!(count_delta3_bruteforce(&seq(&[1, 1])), 0);
        assert_eq!(delta3_count_formula(&seq(&[1, 1])).unwrap(), 0);
    }

    #[test]
    fn single_step_has_no_delta3_or_delta4() {
        let a = seq(&[1]);
        assert_eq!(count_delta1_bruteforce(&a), 1);
        assert_eq!(count_delta3_bruteforce(&a), 0);
        assert_eq!(count_delta4_bruteforce(&a), 0);
        assert_eq!(delta3_count_formula(&a).unwrap(), 0);
        assert_eq!(delta4_count_formula(&a).unwrap(), 0);
    }

    #[test]
    fn formulas_refuse_non_class_one() {
        assert!(matches!(delta3_count_formula(&seq(&[1, 2, 1, 2])), Err(Error::Domain(_))));
        assert!(matches!(delta4_count_formula(&seq(&[1, 2, 1, 2])), Err(Error::Domain(_))));
    }

    #[test]
    fn crossing_excludes_class_one() {
        for p in 1..=7 {
            for s in 1..=p {
                for a in enumerate_class_one(s, p).unwrap() {
                    assert!(!has_crossing_pattern(&a), "{a}");
                }
            }
        }
    }
}
