//! Direct lower-bound constructions: the permutation family with its `2n`
//! adversary, and the cost-based pair family with its `C(n,2)` adversary.

pub mod cost_based;
pub mod permutation;

pub use cost_based::{
    adversary_pairs, co_pair, make_pair_family, pairs, CostBasedInstance, FamilyMember,
    FoolingInstance, PairFamily,
};
pub use permutation::{
    solve_permutation_family, Adversary2n, FinalizedGame, PermutationInstance, QueryClass, Verdict,
};
