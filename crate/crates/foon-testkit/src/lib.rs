//! Random instance generators and brute-force oracles used by the test
//! suites of the FOON crates.
//!
//! Everything here is deliberately naive: the oracles enumerate, scan, and
//! recompute from first principles so that they stay independent of the
//! engine code paths they are used to check.

pub mod conformance;
pub mod gen;
pub mod oracle;

pub use conformance::{
    admitted_candidates, all_policies, check_instance, expected_goal_node, run_policy,
};
pub use gen::{
    and_tree_instance, chain_instance, random_instance, random_single_producer_instance,
    random_units, Instance,
};
pub use oracle::{
    assignment_depth, assignment_units, enumerate_assignments, min_assignment_depth,
    subtree_feasible, Assignment, Choice,
};
