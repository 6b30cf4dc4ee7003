use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A canonical `s`-sequence of length `p`: `entries[0] = 1` and every entry is
/// at most one above the maximum of the entries before it. Values are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct CanonicalSequence {
    entries: Vec<u32>,
    distinct: u32,
}

impl CanonicalSequence {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("canonical sequence must be nonempty".into()));
        }
        let mut max = 0u32;
        for (u, &v) in entries.iter().enumerate() {
            if v == 0 || v > max + 1 {
                return Err(Error::Domain(format!("entry {v} at position {} breaks the prefix-max rule", u + 1)));
            }
            max = max.max(v);
        }
        Ok(Self { entries, distinct: max })
    }

    /// Canonical representative of an arbitrary sequence (first occurrences
    /// are relabeled 1, 2, ... in order of appearance).
    pub fn canonicalize<T: Eq + Copy>(seq: &[T]) -> Result<Self> {
        let mut seen: Vec<T> = Vec::new();
        let entries = seq
            .iter()
            .map(|x| match seen.iter().position(|y| y == x) {
                Some(j) => j as u32 + 1,
                None => {
                    seen.push(*x);
                    seen.len() as u32
                }
            })
            .collect();
        Self::new(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Length `p`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct values `s`; they are exactly `1..=s`.
    pub fn distinct(&self) -> usize {
        self.distinct as usize
    }
}

impl TryFrom<Vec<u32>> for CanonicalSequence {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CanonicalSequence> for Vec<u32> {
    fn from(c: CanonicalSequence) -> Self {
        c.entries
    }
}

impl fmt::Display for CanonicalSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, v) in self.entries.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Every canonical `s`-sequence of length `p`, in lexicographic order.
pub fn enumerate_canonical(s: usize, p: usize) -> Result<Vec<CanonicalSequence>> {
    if s < 1 || s > p {
        return Err(Error::Domain(format!("need 1 <= s <= p, got s = {s}, p = {p}")));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(p);
    prefix.push(1u32);
    extend(&mut prefix, 1, s as u32, p, &mut out);
    Ok(out)
}

fn extend(prefix: &mut Vec<u32>, max: u32, s: u32, p: usize, out: &mut Vec<CanonicalSequence>) {
    let remaining = p - prefix.len();
    if remaining == 0 {
        if max == s {
            out.push(CanonicalSequence { entries: prefix.clone(), distinct: s });
        }
        return;
    }
    // values still to be introduced must fit in the remaining slots
    if s - max > remaining as u32 {
        return;
    }
    for v in 1..=(max + 1).min(s) {
        prefix.push(v);
        extend(prefix, max.max(v), s, p, out);
        prefix.pop();
    }
}

/// Canonical `s`-sequences of length `p` without a `t1 t2 t1 t2` interleaving,
/// in lexicographic order.
///
/// Blocks are kept on a stack in order of opening; reusing a value closes
/// every block opened after it, so closed blocks can never reappear.
pub fn enumerate_noncrossing(s: usize, p: usize) -> Result<Vec<CanonicalSequence>> {
    if s < 1 || s > p {
        return Err(Error::Domain(format!("need 1 <= s <= p, got s = {s}, p = {p}")));
    }
    let mut out = Vec::new();
    let mut prefix = vec![1u32];
    let mut stack = vec![1u32];
    extend_noncrossing(&mut prefix, &mut stack, 1, s as u32, p, &mut out);
    Ok(out)
}

fn extend_noncrossing(
    prefix: &mut Vec<u32>,
    stack: &mut Vec<u32>,
    max: u32,
    s: u32,
    p: usize,
    out: &mut Vec<CanonicalSequence>,
) {
    let remaining = p - prefix.len();
    if remaining == 0 {
        if max == s {
            out.push(CanonicalSequence { entries: prefix.clone(), distinct: s });
        }
        return;
    }
    if s - max > remaining as u32 {
        return;
    }
    for v in 1..=(max + 1).min(s) {
        let saved = stack.clone();
        if v <= max {
            match stack.iter().rposition(|&b| b == v) {
                Some(pos) => stack.truncate(pos + 1),
                None => continue,
            }
        } else {
            stack.push(v);
        }
        prefix.push(v);
        extend_noncrossing(prefix, stack, max.max(v), s, p, out);
        prefix.pop();
        *stack = saved;
    }
}

/// All canonical sequences of length `p`, grouped by increasing `s`.
pub fn enumerate_all_canonical(p: usize) -> Result<Vec<CanonicalSequence>> {
    if p == 0 {
        return Err(Error::Domain("sequence length must be positive".into()));
    }
    let mut out = Vec::new();
    for s in 1..=p {
        out.extend(enumerate_canonical(s, p)?);
    }
    Ok(out)
}

/// Value frequencies `deg_t(α)` for `t = 1..=s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    counts: BTreeMap<u32, usize>,
}

impl DegreeProfile {
    pub fn get(&self, t: u32) -> usize {
        self.counts.get(&t).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.counts.iter().map(|(&t, &d)| (t, d))
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Degrees sorted in decreasing order; the multiset that keys moment terms.
    pub fn sorted_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.counts.values().copied().collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// `Σ_t C(deg_t, 2)`.
    pub fn pair_count(&self) -> u64 {
        self.counts.values().map(|&d| crate::numeric::binomial(d as u64, 2)).sum()
    }
}

pub fn degree_profile(alpha: &CanonicalSequence) -> DegreeProfile {
    let mut counts = BTreeMap::new();
    for &v in alpha.entries() {
        *counts.entry(v).or_insert(0) += 1;
    }
    DegreeProfile { counts }
}
