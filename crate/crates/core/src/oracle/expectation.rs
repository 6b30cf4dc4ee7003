use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::distribution::BaseDistribution;
use crate::combinatorics::walk::{tally_edges, EdgeTally};
use crate::error::{Error, Result};

/// `E(i, α) = value · n^{scale_exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkExpectation {
    pub value: Complex64,
    pub scale_exponent: i32,
}

impl WalkExpectation {
    pub fn scaled(&self, n: usize) -> Complex64 {
        self.value * (n as f64).powi(self.scale_exponent)
    }
}

fn check_rows(seq: &[u32], n: usize) -> Result<()> {
    if let Some(&v) = seq.iter().find(|&&v| v == 0 || v as usize > n) {
        return Err(Error::Invalid(format!("row index {v} outside 1..={n}")));
    }
    Ok(())
}

fn product(tallies: &[EdgeTally], dist: &BaseDistribution) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for t in tallies {
        acc *= dist.mixed_moment(t.down, t.up);
        if acc.re == 0.0 && acc.im == 0.0 {
            break;
        }
    }
    acc
}

/// Expectation of one walk term. Down steps `(α_u, i_u)` contribute an entry,
/// up steps `(α_{u+1}, i_u)` a conjugated entry; distinct entries are
/// independent, so the term factorizes over glued edges.
pub(crate) fn walk_value(i_seq: &[u32], alpha: &[u32], dist: &BaseDistribution) -> Complex64 {
    product(&tally_edges(i_seq, alpha), dist)
}

pub fn expectation_walk(i_seq: &[u32], alpha: &[u32], dist: &BaseDistribution, n: usize) -> Result<WalkExpectation> {
    if i_seq.len() != alpha.len() {
        return Err(Error::LengthMismatch { i_len: i_seq.len(), alpha_len: alpha.len() });
    }
    check_rows(i_seq, n)?;
    Ok(WalkExpectation { value: walk_value(i_seq, alpha, dist), scale_exponent: -(alpha.len() as i32) })
}

pub(crate) fn merge_tallies(mut a: Vec<EdgeTally>, b: Vec<EdgeTally>) -> Vec<EdgeTally> {
    for t in b {
        match a.iter_mut().find(|x| x.alpha == t.alpha && x.i == t.i) {
            Some(x) => {
                x.down += t.down;
                x.up += t.up;
            }
            None => a.push(t),
        }
    }
    a
}

pub(crate) fn pair_walk_value(
    i_seq: &[u32],
    alpha: &[u32],
    j_seq: &[u32],
    beta: &[u32],
    dist: &BaseDistribution,
) -> Complex64 {
    product(&merge_tallies(tally_edges(i_seq, alpha), tally_edges(j_seq, beta)), dist)
}

/// Expectation of the product of two walk terms sharing the same columns.
pub fn expectation_pair_walk(
    i_seq: &[u32],
    alpha: &[u32],
    j_seq: &[u32],
    beta: &[u32],
    dist: &BaseDistribution,
    n: usize,
) -> Result<WalkExpectation> {
    if i_seq.len() != alpha.len() {
        return Err(Error::LengthMismatch { i_len: i_seq.len(), alpha_len: alpha.len() });
    }
    if j_seq.len() != beta.len() {
        return Err(Error::LengthMismatch { i_len: j_seq.len(), alpha_len: beta.len() });
    }
    check_rows(i_seq, n)?;
    check_rows(j_seq, n)?;
    Ok(WalkExpectation {
        value: pair_walk_value(i_seq, alpha, j_seq, beta, dist),
        scale_exponent: -((alpha.len() + beta.len()) as i32),
    })
}
