//! Canonical sequences, walk graphs and the counting identities behind the
//! limiting moments.
//!
//! A term of `Tr M^p` is indexed by a column sequence `α ∈ [m]^p` and a row
//! sequence `i ∈ [n]^p`. Both only matter up to relabeling, so everything here
//! works with canonical representatives (first entry 1, each new value one
//! above the running maximum). The pair `(i, α)` defines a bipartite closed
//! walk, [`WalkGraph`], whose shape decides the order of the term.

mod characteristic;
mod counts;
mod sequence;
pub(crate) mod walk;

pub use characteristic::{
    ballot_condition, characteristic_pair, class_one_witness, enumerate_class_one, enumerate_class_one_exhaustive,
    reconstruct_delta1, CharacteristicPair,
};
pub use counts::{
    count_delta1_bruteforce, count_delta3_bruteforce, count_delta4_bruteforce, delta3_count_formula,
    delta4_count_formula, has_crossing_pattern,
};
pub use sequence::{
    degree_profile, enumerate_all_canonical, enumerate_canonical, enumerate_noncrossing, CanonicalSequence,
    DegreeProfile,
};
pub use walk::{build_walk_graph, classify, DeltaClass, WalkEdge, WalkGraph};
