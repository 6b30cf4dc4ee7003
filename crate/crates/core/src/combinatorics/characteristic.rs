use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sequence::{enumerate_canonical, enumerate_noncrossing, CanonicalSequence};
use crate::error::{Error, Result};

/// Up-innovation indicators `u` (0/1) and last-visit indicators `d` (0/−1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicPair {
    pub u: Vec<u8>,
    pub d: Vec<i8>,
}

impl CharacteristicPair {
    pub fn new(u: Vec<u8>, d: Vec<i8>) -> Result<Self> {
        if u.len() != d.len() || u.is_empty() {
            return Err(Error::Invalid("u and d must be nonempty and of equal length".into()));
        }
        if u.iter().any(|&x| x > 1) || d.iter().any(|&x| x != 0 && x != -1) {
            return Err(Error::Invalid("u must be 0/1 and d must be 0/-1".into()));
        }
        if *u.last().unwrap() != 0 || d[0] != 0 {
            return Err(Error::Invalid("u_p and d_1 must be zero".into()));
        }
        let ups = u.iter().filter(|&&x| x == 1).count();
        let lasts = d.iter().filter(|&&x| x == -1).count();
        if ups != lasts {
            return Err(Error::Invalid(format!("u has {ups} ones but d has {lasts} minus-ones")));
        }
        Ok(Self { u, d })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

pub fn characteristic_pair(alpha: &CanonicalSequence) -> CharacteristicPair {
    let a = alpha.entries();
    let p = a.len();
    let mut u = vec![0u8; p];
    let mut d = vec![0i8; p];
    let mut max = 0;
    for l in 0..p {
        max = max.max(a[l]);
        if l + 1 < p && a[l + 1] == max + 1 {
            u[l] = 1;
        }
        if a[l] != 1 && !a[l + 1..].contains(&a[l]) {
            d[l] = -1;
        }
    }
    CharacteristicPair { u, d }
}

/// `u_1 + ... + u_{l-1} + d_2 + ... + d_l >= 0` for every `2 <= l <= p`.
pub fn ballot_condition(pair: &CharacteristicPair) -> bool {
    let mut partial: i64 = 0;
    for l in 1..pair.len() {
        partial += pair.u[l - 1] as i64 + pair.d[l] as i64;
        if partial < 0 {
            return false;
        }
    }
    true
}

/// Rebuilds the paired-tree walk encoded by a characteristic pair.
///
/// The walk is grown one (down, up) step at a time while tracking unmatched
/// edges. A zero `d` entry opens a fresh row vertex; a `-1` entry walks back
/// down the unmatched up edge that first reached the current column. A one in
/// `u` opens a fresh column; a zero closes the unmatched down edge at the
/// current row. Returns `(α, i)`.
pub fn reconstruct_delta1(pair: &CharacteristicPair) -> Result<(CanonicalSequence, Vec<u32>)> {
    if !ballot_condition(pair) {
        return Err(Error::Reconstruction("ballot condition fails".into()));
    }
    let p = pair.len();
    let mut alpha = Vec::with_capacity(p + 1);
    let mut rows = Vec::with_capacity(p);
    alpha.push(1u32);
    let (mut next_row, mut next_col) = (1u32, 2u32);
    // unmatched (column, row) edges
    let mut open_down: Vec<(u32, u32)> = Vec::new();
    let mut open_up: Vec<(u32, u32)> = Vec::new();

    for l in 0..p {
        let col = alpha[l];
        let row = if pair.d[l] == 0 {
            let row = next_row;
            next_row += 1;
            open_down.push((col, row));
            row
        } else {
            let pos = open_up
                .iter()
                .rposition(|&(c, _)| c == col)
                .ok_or_else(|| Error::Reconstruction(format!("no open up edge into column {col} at step {}", l + 1)))?;
            open_up.remove(pos).1
        };
        rows.push(row);

        let next = if pair.u[l] == 1 {
            let c = next_col;
            next_col += 1;
            open_up.push((c, row));
            c
        } else {
            let pos = open_down
                .iter()
                .rposition(|&(_, r)| r == row)
                .ok_or_else(|| Error::Reconstruction(format!("no open down edge at row {row} at step {}", l + 1)))?;
            open_down.remove(pos).0
        };
        alpha.push(next);
    }

    if alpha[p] != 1 || !open_down.is_empty() || !open_up.is_empty() {
        return Err(Error::Reconstruction("walk does not close at the first column".into()));
    }
    alpha.pop();
    Ok((CanonicalSequence::new(alpha)?, rows))
}

/// The unique canonical row sequence making `g(i, α)` a paired tree, if any.
pub fn class_one_witness(alpha: &CanonicalSequence) -> Option<Vec<u32>> {
    let pair = characteristic_pair(alpha);
    if !ballot_condition(&pair) {
        return None;
    }
    let (rebuilt, rows) = reconstruct_delta1(&pair).ok()?;
    (rebuilt == *alpha).then_some(rows)
}

/// All canonical `s`-sequences of length `p` that admit a paired-tree witness.
///
/// Candidates are restricted to crossing-free sequences (an interleaving
/// `t1 t2 t1 t2` rules out a witness); each candidate is still decided by
/// [`class_one_witness`].
pub fn enumerate_class_one(s: usize, p: usize) -> Result<Vec<CanonicalSequence>> {
    Ok(enumerate_noncrossing(s, p)?.into_par_iter().filter(|a| class_one_witness(a).is_some()).collect())
}

/// Same set as [`enumerate_class_one`], filtering every canonical sequence.
pub fn enumerate_class_one_exhaustive(s: usize, p: usize) -> Result<Vec<CanonicalSequence>> {
    Ok(enumerate_canonical(s, p)?.into_par_iter().filter(|a| class_one_witness(a).is_some()).collect())
}
