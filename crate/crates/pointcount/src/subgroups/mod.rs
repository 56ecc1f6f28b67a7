//! Finite-group engine: admissible-partition bookkeeping, Goursat-closure
//! generation, and exhaustive intermediate-subgroup classification for
//! small simple groups.

mod closure;
mod group;
mod partition;

pub use closure::{
    central_closure_comparison, goursat_closure, intermediate_subgroups, rank, tuple_validity,
    CentralComparison, GroupTuple, IntermediateSubgroup, Subgroup,
};
pub use group::{
    alternating_5, psl_2_7, special_linear_2_5, FiniteGroup, GROUP_TABLE_FORMAT,
};
pub use partition::{admissible_subgroups, bell, Partition};
