use std::fmt;

use serde::{Deserialize, Serialize};

use super::sequence::CanonicalSequence;
use crate::error::{Error, Result};

/// The five walk-graph categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DeltaClass {
    /// Every down edge paired with exactly one up edge; glued graph is a tree.
    Delta1,
    /// At least one single (unpaired) edge; the expectation vanishes.
    Delta2,
    /// Every glued edge has multiplicity two; glued graph has one cycle.
    Delta3,
    /// One site with two down and two up edges, all others paired; tree.
    Delta4,
    /// Everything else.
    Delta5,
}

impl fmt::Display for DeltaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = match self {
            DeltaClass::Delta1 => 1,
            DeltaClass::Delta2 => 2,
            DeltaClass::Delta3 => 3,
            DeltaClass::Delta4 => 4,
            DeltaClass::Delta5 => 5,
        };
        write!(f, "Δ{j}")
    }
}

/// One directed step of the walk, stored as its (α-vertex, i-vertex) endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkEdge {
    pub alpha: u32,
    pub i: u32,
    pub innovation: bool,
}

/// Multiplicity of one glued edge, split by direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct EdgeTally {
    pub alpha: u32,
    pub i: u32,
    pub down: u32,
    pub up: u32,
}

/// Glued edges of the closed walk `α_1 → i_1 → α_2 → ... → i_p → α_1`.
/// Down step `u` is `(α_u, i_u)`, up step `u` is `(α_{u+1}, i_u)`.
pub(crate) fn tally_edges(i_seq: &[u32], alpha: &[u32]) -> Vec<EdgeTally> {
    let p = alpha.len();
    let mut tallies: Vec<EdgeTally> = Vec::with_capacity(2 * p);
    let mut bump = |a: u32, i: u32, down: bool| match tallies.iter_mut().find(|t| t.alpha == a && t.i == i) {
        Some(t) => {
            if down {
                t.down += 1
            } else {
                t.up += 1
            }
        }
        None => tallies.push(EdgeTally { alpha: a, i, down: down as u32, up: (!down) as u32 }),
    };
    for u in 0..p {
        bump(alpha[u], i_seq[u], true);
        bump(alpha[(u + 1) % p], i_seq[u], false);
    }
    tallies
}

fn distinct_count(seq: &[u32]) -> usize {
    let mut seen: Vec<u32> = Vec::with_capacity(seq.len());
    for &v in seq {
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    seen.len()
}

/// Classification on raw sequences; used by the brute-force counters.
pub(crate) fn classify_raw(i_seq: &[u32], alpha: &[u32]) -> DeltaClass {
    let tallies = tally_edges(i_seq, alpha);
    if tallies.iter().any(|t| t.down + t.up == 1) {
        return DeltaClass::Delta2;
    }
    let vertices = distinct_count(i_seq) + distinct_count(alpha);
    let edges = tallies.len();
    let all_paired = tallies.iter().all(|t| t.down == 1 && t.up == 1);
    if all_paired && edges + 1 == vertices {
        return DeltaClass::Delta1;
    }
    if tallies.iter().all(|t| t.down + t.up == 2) && edges == vertices {
        return DeltaClass::Delta3;
    }
    let doubled = tallies.iter().filter(|t| t.down == 2 && t.up == 2).count();
    let simple = tallies.iter().filter(|t| t.down == 1 && t.up == 1).count();
    if doubled == 1 && doubled + simple == edges && edges + 1 == vertices {
        return DeltaClass::Delta4;
    }
    DeltaClass::Delta5
}

/// The bipartite multigraph `g(i, α)` with innovation flags and its class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkGraph {
    alpha: CanonicalSequence,
    i_seq: Vec<u32>,
    down_edges: Vec<WalkEdge>,
    up_edges: Vec<WalkEdge>,
    delta_class: DeltaClass,
    r: usize,
}

impl WalkGraph {
    pub fn alpha(&self) -> &CanonicalSequence {
        &self.alpha
    }
    pub fn i_seq(&self) -> &[u32] {
        &self.i_seq
    }
    pub fn down_edges(&self) -> &[WalkEdge] {
        &self.down_edges
    }
    pub fn up_edges(&self) -> &[WalkEdge] {
        &self.up_edges
    }
    pub fn delta_class(&self) -> DeltaClass {
        self.delta_class
    }
    /// Number of distinct i-vertices.
    pub fn r(&self) -> usize {
        self.r
    }
    /// Number of distinct α-vertices.
    pub fn s(&self) -> usize {
        self.alpha.distinct()
    }
    pub fn p(&self) -> usize {
        self.alpha.len()
    }

    /// True when every glued edge carries as many down steps as up steps.
    pub fn is_balanced(&self) -> bool {
        tally_edges(&self.i_seq, self.alpha.entries()).iter().all(|t| t.down == t.up)
    }

    /// Number of distinct glued edges.
    pub fn glued_edge_count(&self) -> usize {
        tally_edges(&self.i_seq, self.alpha.entries()).len()
    }
}

pub fn build_walk_graph(i_seq: &[u32], alpha: &CanonicalSequence) -> Result<WalkGraph> {
    let p = alpha.len();
    if i_seq.len() != p {
        return Err(Error::LengthMismatch { i_len: i_seq.len(), alpha_len: p });
    }
    let a = alpha.entries();
    let mut down_edges = Vec::with_capacity(p);
    let mut up_edges = Vec::with_capacity(p);
    for u in 0..p {
        let new_i = !i_seq[..u].contains(&i_seq[u]);
        down_edges.push(WalkEdge { alpha: a[u], i: i_seq[u], innovation: new_i });
        let next = a[(u + 1) % p];
        let new_alpha = u + 1 < p && !a[..=u].contains(&next);
        up_edges.push(WalkEdge { alpha: next, i: i_seq[u], innovation: new_alpha });
    }
    Ok(WalkGraph {
        alpha: alpha.clone(),
        i_seq: i_seq.to_vec(),
        down_edges,
        up_edges,
        delta_class: classify_raw(i_seq, a),
        r: distinct_count(i_seq),
    })
}

pub fn classify(graph: &WalkGraph) -> DeltaClass {
    graph.delta_class
}
