//! Engine-vs-oracle conformance checks shared by the test suites.
//!
//! [`check_instance`] runs every policy against one instance and asserts,
//! via brute-force enumeration, that the engine agrees with the oracle on
//! satisfiability, returns only feasible trees, picks candidates in policy
//! order, and lands IDS on the minimum AND-OR depth.

use std::collections::{BTreeMap, BTreeSet};

use foon_core::graph::FoonGraph;
use foon_core::model::{GoalSpec, Kitchen, ObjectNode};
use foon_core::rates::MotionRateTable;
use foon_core::search::{
    gbfs_score, goal_candidates, resolve_with_trace, Heuristic, Resolution, ResolutionTrace,
    SearchError, SearchPolicy, SearchReport,
};

use crate::gen::Instance;
use crate::oracle::{
    assignment_depth, assignment_units, enumerate_assignments, min_assignment_depth, Assignment,
    Choice,
};

/// All four policy variants.
pub fn all_policies() -> [SearchPolicy; 4] {
    [
        SearchPolicy::Bfs,
        SearchPolicy::ids(),
        SearchPolicy::Gbfs {
            heuristic: Heuristic::SuccessRate,
        },
        SearchPolicy::Gbfs {
            heuristic: Heuristic::InputCount,
        },
    ]
}

pub fn trace_as_assignment(trace: &ResolutionTrace) -> Assignment {
    trace
        .choices
        .iter()
        .map(|(node, resolution)| {
            let choice = match resolution {
                Resolution::Kitchen => Choice::Kitchen,
                Resolution::Unit(index) => Choice::Unit(*index),
            };
            (node.clone(), choice)
        })
        .collect()
}

/// Goal candidates the way `resolve` admits them: graph matches plus
/// matching kitchen items, in canonical order.
pub fn admitted_candidates(
    graph: &FoonGraph,
    kitchen: &Kitchen,
    goal: &GoalSpec,
) -> Vec<ObjectNode> {
    let mut set: BTreeSet<ObjectNode> = goal_candidates(graph, goal).into_iter().collect();
    for item in kitchen.iter() {
        if goal.matches(item) {
            set.insert(item.clone());
        }
    }
    set.into_iter().collect()
}

/// The candidate the engine must settle on: the first (canonical order) with
/// any feasible assignment.
pub fn expected_goal_node(instance: &Instance) -> Option<ObjectNode> {
    admitted_candidates(&instance.graph, &instance.kitchen, &instance.goal)
        .into_iter()
        .find(|c| !enumerate_assignments(&instance.graph, &instance.kitchen, c).is_empty())
}

/// Derivation ancestors of each object under a trace: every object whose
/// subtree needs it. Computed by fixpoint; instances are tiny.
pub fn ancestors_by_object(
    graph: &FoonGraph,
    trace: &ResolutionTrace,
) -> BTreeMap<ObjectNode, BTreeSet<ObjectNode>> {
    let mut ancestors: BTreeMap<ObjectNode, BTreeSet<ObjectNode>> = BTreeMap::new();
    for node in trace.choices.keys() {
        ancestors.entry(node.clone()).or_default();
    }
    let mut changed = true;
    while changed {
        changed = false;
        for (node, resolution) in &trace.choices {
            let Resolution::Unit(unit) = resolution else {
                continue;
            };
            for input in graph.unit(*unit).inputs() {
                if !trace.choices.contains_key(input) {
                    continue;
                }
                let mut additions: BTreeSet<ObjectNode> =
                    ancestors.get(node).cloned().unwrap_or_default();
                additions.insert(node.clone());
                let entry = ancestors.entry(input.clone()).or_default();
                for addition in additions {
                    changed |= entry.insert(addition);
                }
            }
        }
    }
    ancestors
}

/// Candidate units for an object in the given policy's order.
pub fn policy_ordered_candidates(
    graph: &FoonGraph,
    rates: &MotionRateTable,
    node: &ObjectNode,
    policy: SearchPolicy,
) -> Vec<usize> {
    let mut candidates: Vec<usize> = graph.producers_of(node).to_vec();
    if let SearchPolicy::Gbfs { heuristic } = policy {
        let score = |index: usize| -> f64 {
            gbfs_score(graph.unit(index), heuristic, rates).unwrap_or(0.0)
        };
        candidates.sort_by(|&a, &b| score(b).partial_cmp(&score(a)).unwrap().then(a.cmp(&b)));
    }
    candidates
}

/// Whether `node` can be resolved through `unit` by some assignment whose
/// closure avoids every object in `forbidden`.
pub fn candidate_resolvable(
    graph: &FoonGraph,
    kitchen: &Kitchen,
    node: &ObjectNode,
    unit: usize,
    forbidden: &BTreeSet<ObjectNode>,
) -> bool {
    enumerate_assignments(graph, kitchen, node).iter().any(|a| {
        a.get(node) == Some(&Choice::Unit(unit))
            && a.keys().all(|needed| !forbidden.contains(needed))
    })
}

/// Asserts that every OR-choice recorded in the trace is the first candidate
/// in policy order that can be resolved under its ancestor set.
pub fn assert_policy_consistent(
    instance: &Instance,
    trace: &ResolutionTrace,
    policy: SearchPolicy,
) {
    let ancestors = ancestors_by_object(&instance.graph, trace);
    for (node, resolution) in &trace.choices {
        let Resolution::Unit(chosen) = resolution else {
            continue;
        };
        let forbidden = &ancestors[node];
        for candidate in policy_ordered_candidates(&instance.graph, &instance.rates, node, policy) {
            if candidate == *chosen {
                break;
            }
            assert!(
                !candidate_resolvable(&instance.graph, &instance.kitchen, node, candidate, forbidden),
                "object {node} chose unit {chosen} but earlier candidate {candidate} was resolvable"
            );
        }
    }
}

pub fn run_policy(
    instance: &Instance,
    policy: SearchPolicy,
) -> Result<(SearchReport, ResolutionTrace), SearchError> {
    resolve_with_trace(
        &instance.graph,
        &instance.goal,
        &instance.kitchen,
        &instance.rates,
        policy,
    )
}

/// Full conformance check of one instance across all policies.
pub fn check_instance(instance: &Instance) {
    let expected_goal = expected_goal_node(instance);
    let candidates = admitted_candidates(&instance.graph, &instance.kitchen, &instance.goal);

    for policy in all_policies() {
        match run_policy(instance, policy) {
            Ok((report, trace)) => {
                let expected = expected_goal
                    .as_ref()
                    .expect("engine found a tree the oracle says cannot exist");
                assert_eq!(report.tree.goal_node(), expected, "wrong goal candidate");

                report
                    .tree
                    .validate(&instance.graph, &instance.kitchen)
                    .expect("returned tree must be executable");
                let assignment = trace_as_assignment(&trace);
                let feasible = enumerate_assignments(&instance.graph, &instance.kitchen, expected);
                assert!(
                    feasible.contains(&assignment),
                    "trace is not a feasible assignment"
                );
                assert_eq!(
                    assignment_units(&assignment),
                    report.tree.units().iter().copied().collect::<BTreeSet<_>>(),
                    "tree units disagree with the trace"
                );
                assert_eq!(report.unit_count, report.tree.len());

                match policy {
                    SearchPolicy::Bfs | SearchPolicy::Gbfs { .. } => {
                        assert_policy_consistent(instance, &trace, policy);
                        assert_eq!(report.restarts, 0);
                        assert_eq!(report.final_depth_bound, None);
                    }
                    SearchPolicy::Ids { .. } => {
                        let min_depth =
                            min_assignment_depth(&instance.graph, &instance.kitchen, expected)
                                .expect("feasible candidate must have a depth");
                        assert_eq!(
                            report.final_depth_bound,
                            Some(min_depth),
                            "ids stopped at the wrong bound"
                        );
                        assert_eq!(
                            assignment_depth(&instance.graph, &assignment, expected),
                            min_depth,
                            "ids tree is not of minimum depth"
                        );
                    }
                }
            }
            Err(SearchError::GoalNotFound(_)) => {
                assert!(
                    candidates.is_empty(),
                    "goal candidates exist but engine says not found"
                );
            }
            Err(SearchError::Unsatisfiable(_)) => {
                assert!(!candidates.is_empty());
                assert_eq!(
                    expected_goal, None,
                    "engine says unsatisfiable but the oracle found a feasible assignment"
                );
            }
            Err(SearchError::Rate(_)) => {
                panic!("rate errors are impossible: generators rate every motion")
            }
        }
    }
}
