//! Set functions over a ground set `{1, .., n}` and their value oracles.

mod graph;
mod oracle;
mod subset;
mod synth;
mod verify;

pub use graph::{random_digraph, CutFunction, DirectedGraph, Edge};
pub use oracle::{Constant, FnSet, Modular, Oracle, SetFunction};
pub use subset::{GroundSet, Subset, SubsetIter};
pub use synth::{synth_sequence, Family, RandomCut};
pub use verify::{
    verify_submodularity, verify_submodularity_sampled, Verdict, Witness, EXHAUSTIVE_MAX_N,
};

/// Largest `n` for which operations enumerate all `2^n` subsets.
pub const ENUMERATION_MAX_N: u32 = 30;
