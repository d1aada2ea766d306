//! Functional object-oriented networks (FOON): a graph model of how motions
//! transform input objects into output objects.
//!
//! The crate covers the full pipeline:
//!
//! * [`model`] — object/motion nodes, functional units, kitchens, goals.
//! * [`parser`] / [`serialize`] — the text interchange format.
//! * [`merge`] — deduplicating union of subgraphs into a universal graph.
//! * [`search`] — backward task-tree retrieval (BFS, iterative deepening,
//!   greedy best-first under two heuristics).
//! * [`metrics`] — per-query evaluation and comparison tables.
//! * [`dot`] — Graphviz export.

pub mod dot;
pub mod graph;
pub mod merge;
pub mod metrics;
pub mod model;
pub mod parser;
pub mod rates;
pub mod search;
pub mod serialize;

pub use graph::{FoonGraph, TaskTree, TreeInvariantError};
pub use merge::{merge_files, merge_units, MergeError, MergeReport};
pub use metrics::{avg_success_rate, compare, unit_count, ComparisonRow, ComparisonTable};
pub use model::{
    units_equal, FunctionalUnit, GoalSpec, Kitchen, ModelError, MotionNode, ObjectNode,
};
pub use parser::{parse_kitchen, parse_motion_rates, parse_subgraph, ParseError, ParseErrorKind};
pub use rates::{MotionRateTable, RateError};
pub use search::{
    goal_candidates, gbfs_score, heuristic_input_count, heuristic_success_rate, resolve,
    resolve_with_trace, Algorithm, Heuristic, Resolution, ResolutionTrace, SearchError,
    SearchPolicy, SearchReport,
};
pub use serialize::serialize_subgraph;
