//! Brute-force enumeration of feasible task-tree assignments.
//!
//! An *assignment* maps every object identity a derivation needs to either
//! the kitchen or exactly one producing unit. Feasible assignments are the
//! acyclic ones; they correspond one-to-one with the task trees a memoizing
//! backward search can return. Everything is enumerated exhaustively, so
//! keep instances small (the test suites stay at or below 12 units).

use std::collections::{BTreeMap, BTreeSet};

use foon_core::graph::FoonGraph;
use foon_core::model::{Kitchen, ObjectNode};

/// How an assignment satisfies one object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Choice {
    Kitchen,
    Unit(usize),
}

/// One feasible resolution of a goal object: object identity to choice, for
/// exactly the objects the derivation touches.
pub type Assignment = BTreeMap<ObjectNode, Choice>;

/// Enumerates every feasible (acyclic) assignment for `start`.
pub fn enumerate_assignments(
    graph: &FoonGraph,
    kitchen: &Kitchen,
    start: &ObjectNode,
) -> Vec<Assignment> {
    let mut results = BTreeSet::new();
    let work = vec![start.clone()];
    extend(graph, kitchen, work, BTreeMap::new(), &mut results);
    results
        .into_iter()
        .filter(|a| is_acyclic(graph, a, start))
        .collect()
}

fn extend(
    graph: &FoonGraph,
    kitchen: &Kitchen,
    mut work: Vec<ObjectNode>,
    choices: Assignment,
    results: &mut BTreeSet<Assignment>,
) {
    let node = loop {
        match work.pop() {
            None => {
                results.insert(choices);
                return;
            }
            Some(node) if choices.contains_key(&node) => continue,
            Some(node) => break node,
        }
    };

    if kitchen.contains(&node) {
        let mut next = choices;
        next.insert(node, Choice::Kitchen);
        extend(graph, kitchen, work, next, results);
        return;
    }
    for &unit in graph.producers_of(&node) {
        let mut next = choices.clone();
        next.insert(node.clone(), Choice::Unit(unit));
        let mut next_work = work.clone();
        next_work.extend(graph.unit(unit).inputs().iter().cloned());
        extend(graph, kitchen, next_work, next, results);
    }
    // No kitchen entry and no producer: dead end, nothing recorded.
}

fn is_acyclic(graph: &FoonGraph, assignment: &Assignment, start: &ObjectNode) -> bool {
    depth_below(graph, assignment, start, &mut BTreeMap::new(), &mut BTreeSet::new()).is_some()
}

/// Number of units on the longest chain below `node`, or `None` on a cycle.
fn depth_below(
    graph: &FoonGraph,
    assignment: &Assignment,
    node: &ObjectNode,
    memo: &mut BTreeMap<ObjectNode, usize>,
    visiting: &mut BTreeSet<ObjectNode>,
) -> Option<usize> {
    if let Some(&depth) = memo.get(node) {
        return Some(depth);
    }
    if !visiting.insert(node.clone()) {
        return None;
    }
    let depth = match assignment.get(node) {
        Some(Choice::Unit(unit)) => {
            let mut deepest = 0;
            for input in graph.unit(*unit).inputs() {
                deepest = deepest.max(depth_below(graph, assignment, input, memo, visiting)?);
            }
            deepest + 1
        }
        Some(Choice::Kitchen) | None => 0,
    };
    visiting.remove(node);
    memo.insert(node.clone(), depth);
    Some(depth)
}

/// AND-OR depth of a feasible assignment: the longest unit chain from the
/// goal down to a kitchen leaf, counting shared subtrees at every use.
pub fn assignment_depth(graph: &FoonGraph, assignment: &Assignment, start: &ObjectNode) -> usize {
    depth_below(graph, assignment, start, &mut BTreeMap::new(), &mut BTreeSet::new())
        .expect("assignment must be acyclic")
}

/// The unit indices an assignment uses.
pub fn assignment_units(assignment: &Assignment) -> BTreeSet<usize> {
    assignment
        .values()
        .filter_map(|choice| match choice {
            Choice::Unit(unit) => Some(*unit),
            Choice::Kitchen => None,
        })
        .collect()
}

/// Minimum AND-OR depth over all feasible assignments, or `None` when the
/// goal object is unreachable.
pub fn min_assignment_depth(
    graph: &FoonGraph,
    kitchen: &Kitchen,
    start: &ObjectNode,
) -> Option<usize> {
    enumerate_assignments(graph, kitchen, start)
        .iter()
        .map(|a| assignment_depth(graph, a, start))
        .min()
}

/// Whether `start` has any feasible assignment whose closure avoids every
/// object in `forbidden`. Used to audit OR-choices: a candidate that cannot
/// be completed under its ancestor path must have no such assignment.
pub fn subtree_feasible(
    graph: &FoonGraph,
    kitchen: &Kitchen,
    start: &ObjectNode,
    forbidden: &BTreeSet<ObjectNode>,
) -> bool {
    if forbidden.contains(start) {
        return false;
    }
    enumerate_assignments(graph, kitchen, start)
        .iter()
        .any(|a| a.keys().all(|node| !forbidden.contains(node)))
}
