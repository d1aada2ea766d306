//! Backward task-tree retrieval.
//!
//! Retrieval runs over the AND-OR structure of the graph: a needed object is
//! an OR-choice among the units that produce it, and a chosen unit imposes
//! AND-requirements over its inputs. Search starts at the goal object and
//! concludes when every leaf of the derivation is kitchen-available.
//!
//! Three policies share one resolution engine and differ only in candidate
//! ordering, traversal discipline, and depth bounding:
//!
//! * `bfs` tries producer candidates in ascending unit index and expands
//!   pending objects in first-in-first-out level order.
//! * `ids` tries candidates in ascending index, expands depth-first, and
//!   prunes any unit whose backward-chain depth exceeds the current bound.
//!   If pruning caused the failure, the pass restarts with the bound raised
//!   by one.
//! * `gbfs` tries candidates in descending heuristic score (ties by
//!   ascending index) and always expands the most recently selected branch
//!   first.
//!
//! When a chosen unit cannot be completed — an input is unreachable, cyclic,
//! or beyond the depth bound — the engine backtracks to the most recent
//! choice point with untried candidates and continues from there. Within one
//! pass an object identity resolved once is reused, so a unit appears at
//! most once in the tree.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{FoonGraph, TaskTree};
use crate::model::{FunctionalUnit, GoalSpec, Kitchen, ObjectNode};
use crate::rates::{MotionRateTable, RateError};

/// Heuristic used by greedy best-first search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Heuristic {
    /// Prefer units whose motion has a high success rate.
    SuccessRate,
    /// Prefer units with few (ingredient-weighted) input objects.
    InputCount,
}

/// Search policy: which algorithm drives the shared resolution engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchPolicy {
    Bfs,
    Ids { initial_depth_bound: usize },
    Gbfs { heuristic: Heuristic },
}

impl SearchPolicy {
    /// The default iterative-deepening policy: depth bound starts at zero.
    pub fn ids() -> Self {
        SearchPolicy::Ids {
            initial_depth_bound: 0,
        }
    }

    pub fn algorithm(&self) -> Algorithm {
        match self {
            SearchPolicy::Bfs => Algorithm::Bfs,
            SearchPolicy::Ids { .. } => Algorithm::Ids,
            SearchPolicy::Gbfs {
                heuristic: Heuristic::SuccessRate,
            } => Algorithm::GbfsRate,
            SearchPolicy::Gbfs {
                heuristic: Heuristic::InputCount,
            } => Algorithm::GbfsCount,
        }
    }
}

/// Report label for the four algorithm variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Algorithm {
    #[serde(rename = "bfs")]
    Bfs,
    #[serde(rename = "ids")]
    Ids,
    #[serde(rename = "gbfs_rate")]
    GbfsRate,
    #[serde(rename = "gbfs_count")]
    GbfsCount,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Bfs => write!(f, "bfs"),
            Algorithm::Ids => write!(f, "ids"),
            Algorithm::GbfsRate => write!(f, "gbfs-rate"),
            Algorithm::GbfsCount => write!(f, "gbfs-count"),
        }
    }
}

/// Per-query metrics plus the retrieved tree.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub algorithm: Algorithm,
    pub goal: GoalSpec,
    pub tree: TaskTree,
    /// Number of units in the tree.
    pub unit_count: usize,
    /// Unweighted mean of per-unit motion rates; absent for empty trees and
    /// when any rate is unresolvable.
    pub avg_success_rate: Option<f64>,
    /// Object dequeues across all passes; restarts re-count their work.
    pub expansions: usize,
    /// Depth-bound restarts (IDS only, otherwise zero).
    pub restarts: usize,
    /// Peak pending-object count.
    pub max_frontier: usize,
    /// The depth bound under which IDS succeeded; absent otherwise.
    pub final_depth_bound: Option<usize>,
    /// Mean producer-candidate count over freshly expanded non-kitchen
    /// objects.
    pub mean_branching: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("goal \"{0}\" matches no object in the graph or kitchen")]
    GoalNotFound(GoalSpec),
    #[error("goal \"{0}\" matches objects but no task tree reaches the kitchen")]
    Unsatisfiable(GoalSpec),
    #[error(transparent)]
    Rate(#[from] RateError),
}

/// How the engine resolved one object identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    /// Available as-is in the kitchen.
    Kitchen,
    /// Produced by the unit at this graph index.
    Unit(usize),
}

/// The OR-choices behind a successful search, one entry per object identity
/// the derivation needed.
#[derive(Debug, Clone, Default)]
pub struct ResolutionTrace {
    pub choices: BTreeMap<ObjectNode, Resolution>,
}

/// All distinct object identities in the graph that satisfy the goal, in
/// canonical-key order.
pub fn goal_candidates(graph: &FoonGraph, goal: &GoalSpec) -> Vec<ObjectNode> {
    graph
        .objects()
        .filter(|node| goal.matches(node))
        .cloned()
        .collect()
}

/// Heuristic (success rate): the rate of the unit's motion. Errors when the
/// table cannot resolve the motion (strict mode, or no default configured).
pub fn heuristic_success_rate(
    unit: &FunctionalUnit,
    rates: &MotionRateTable,
) -> Result<f64, RateError> {
    match rates.rate(unit.motion())? {
        Some(rate) => Ok(rate),
        None => Err(RateError::UnknownMotion(unit.motion().name().to_string())),
    }
}

/// Heuristic (input count): ingredient-weighted size of the input set. An
/// object with ingredients counts as its ingredients; a bare object counts
/// as one.
pub fn heuristic_input_count(unit: &FunctionalUnit) -> usize {
    unit.inputs()
        .iter()
        .map(|node| node.ingredients().count().max(1))
        .sum()
}

/// Greedy best-first score for a candidate unit; higher is better. The
/// input-count heuristic is negated so that fewer inputs score higher under
/// max-selection.
pub fn gbfs_score(
    unit: &FunctionalUnit,
    heuristic: Heuristic,
    rates: &MotionRateTable,
) -> Result<f64, RateError> {
    match heuristic {
        Heuristic::SuccessRate => heuristic_success_rate(unit, rates),
        Heuristic::InputCount => Ok(-(heuristic_input_count(unit) as f64)),
    }
}

/// Runs the policy against the graph and returns the report.
pub fn resolve(
    graph: &FoonGraph,
    goal: &GoalSpec,
    kitchen: &Kitchen,
    rates: &MotionRateTable,
    policy: SearchPolicy,
) -> Result<SearchReport, SearchError> {
    resolve_with_trace(graph, goal, kitchen, rates, policy).map(|(report, _)| report)
}

/// Like [`resolve`] but also returns the OR-choices behind the tree, which
/// lets callers audit the engine's selections.
pub fn resolve_with_trace(
    graph: &FoonGraph,
    goal: &GoalSpec,
    kitchen: &Kitchen,
    rates: &MotionRateTable,
    policy: SearchPolicy,
) -> Result<(SearchReport, ResolutionTrace), SearchError> {
    // Goal candidates come from the graph; kitchen items matching the goal
    // are also admitted so that an already-available goal object resolves to
    // the empty tree even when no unit mentions it.
    let mut candidate_set: BTreeSet<ObjectNode> = goal_candidates(graph, goal).into_iter().collect();
    for item in kitchen.iter() {
        if goal.matches(item) {
            candidate_set.insert(item.clone());
        }
    }
    if candidate_set.is_empty() {
        return Err(SearchError::GoalNotFound(goal.clone()));
    }

    let mut engine = Engine {
        graph,
        kitchen,
        rates,
        policy,
        counters: Counters::default(),
    };

    for candidate in candidate_set {
        if let Some(resolved) = engine.resolve_candidate(&candidate)? {
            let units = build_tree_units(graph, &resolved, &candidate);
            let tree = TaskTree::new(units, candidate);
            let avg_success_rate = mean_motion_rate(graph, &tree, rates);
            let counters = engine.counters;
            let report = SearchReport {
                algorithm: policy.algorithm(),
                goal: goal.clone(),
                unit_count: tree.len(),
                avg_success_rate,
                expansions: counters.expansions,
                restarts: counters.restarts,
                max_frontier: counters.max_frontier,
                final_depth_bound: counters.final_depth_bound,
                mean_branching: counters.mean_branching(),
                tree,
            };
            return Ok((report, ResolutionTrace { choices: resolved }));
        }
    }
    Err(SearchError::Unsatisfiable(goal.clone()))
}

/// Unweighted mean of the tree's motion rates, or `None` when the tree is
/// empty or any rate is unresolvable.
fn mean_motion_rate(graph: &FoonGraph, tree: &TaskTree, rates: &MotionRateTable) -> Option<f64> {
    if tree.is_empty() {
        return None;
    }
    let mut sum = 0.0;
    for &index in tree.units() {
        match rates.rate(graph.unit(index).motion()) {
            Ok(Some(rate)) => sum += rate,
            _ => return None,
        }
    }
    Some(sum / tree.len() as f64)
}

/// Deterministic post-order walk of the final choices, yielding unit indices
/// in an executable order with the goal's producer last.
fn build_tree_units(
    graph: &FoonGraph,
    resolved: &BTreeMap<ObjectNode, Resolution>,
    goal_node: &ObjectNode,
) -> Vec<usize> {
    let mut order = Vec::new();
    let mut visited_objects = BTreeSet::new();
    let mut emitted_units = BTreeSet::new();
    visit(
        graph,
        resolved,
        goal_node,
        &mut visited_objects,
        &mut emitted_units,
        &mut order,
    );
    return order;

    fn visit(
        graph: &FoonGraph,
        resolved: &BTreeMap<ObjectNode, Resolution>,
        node: &ObjectNode,
        visited_objects: &mut BTreeSet<ObjectNode>,
        emitted_units: &mut BTreeSet<usize>,
        order: &mut Vec<usize>,
    ) {
        if !visited_objects.insert(node.clone()) {
            return;
        }
        match resolved.get(node) {
            Some(Resolution::Unit(index)) => {
                for input in graph.unit(*index).inputs() {
                    visit(graph, resolved, input, visited_objects, emitted_units, order);
                }
                if emitted_units.insert(*index) {
                    order.push(*index);
                }
            }
            Some(Resolution::Kitchen) | None => {}
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Counters {
    expansions: usize,
    restarts: usize,
    max_frontier: usize,
    final_depth_bound: Option<usize>,
    branching_sum: usize,
    branching_samples: usize,
}

impl Counters {
    fn mean_branching(&self) -> f64 {
        if self.branching_samples == 0 {
            0.0
        } else {
            self.branching_sum as f64 / self.branching_samples as f64
        }
    }
}

/// An object waiting to be resolved, together with the derivation chain that
/// requested it (cycle guard) and the depth a producing unit would have.
#[derive(Debug, Clone)]
struct Pending {
    node: ObjectNode,
    path: Vec<ObjectNode>,
    depth: usize,
}

/// A choice point: the state snapshot taken before the first candidate was
/// applied, plus the candidates still untried.
struct Frame {
    item: Pending,
    candidates: Vec<usize>,
    cursor: usize,
    saved_frontier: VecDeque<Pending>,
    saved_resolved: BTreeMap<ObjectNode, Resolution>,
}

enum PassOutcome {
    Solved(BTreeMap<ObjectNode, Resolution>),
    Exhausted { bound_blocked: bool },
}

struct Engine<'a> {
    graph: &'a FoonGraph,
    kitchen: &'a Kitchen,
    rates: &'a MotionRateTable,
    policy: SearchPolicy,
    counters: Counters,
}

impl<'a> Engine<'a> {
    /// Full resolution of one goal candidate, including the IDS restart
    /// schedule. Returns the final choices on success, `None` when the
    /// candidate is unsatisfiable.
    fn resolve_candidate(
        &mut self,
        start: &ObjectNode,
    ) -> Result<Option<BTreeMap<ObjectNode, Resolution>>, SearchError> {
        match self.policy {
            SearchPolicy::Bfs | SearchPolicy::Gbfs { .. } => {
                match self.run_pass(start, None)? {
                    PassOutcome::Solved(resolved) => Ok(Some(resolved)),
                    PassOutcome::Exhausted { .. } => Ok(None),
                }
            }
            SearchPolicy::Ids { initial_depth_bound } => {
                let mut bound = initial_depth_bound;
                // Chains cannot repeat objects, so no feasible derivation is
                // deeper than the number of distinct objects.
                let bound_cap = self.graph.objects().count() + 1;
                loop {
                    match self.run_pass(start, Some(bound))? {
                        PassOutcome::Solved(resolved) => {
                            self.counters.final_depth_bound = Some(bound);
                            return Ok(Some(resolved));
                        }
                        PassOutcome::Exhausted { bound_blocked: true } if bound < bound_cap => {
                            self.counters.restarts += 1;
                            bound += 1;
                        }
                        PassOutcome::Exhausted { .. } => return Ok(None),
                    }
                }
            }
        }
    }

    /// One resolution pass. `bound` is the IDS depth bound; `None` disables
    /// depth pruning.
    fn run_pass(
        &mut self,
        start: &ObjectNode,
        bound: Option<usize>,
    ) -> Result<PassOutcome, SearchError> {
        let mut frontier: VecDeque<Pending> = VecDeque::new();
        let mut resolved: BTreeMap<ObjectNode, Resolution> = BTreeMap::new();
        let mut frames: Vec<Frame> = Vec::new();
        let mut bound_blocked = false;

        frontier.push_back(Pending {
            node: start.clone(),
            path: Vec::new(),
            depth: 1,
        });
        self.note_frontier(frontier.len());

        loop {
            let item = match frontier.pop_front() {
                Some(item) => item,
                None => {
                    // All pending objects resolved: accept unless the final
                    // choices are cyclic or exceed the depth bound.
                    match check_final(self.graph, &resolved, start, bound) {
                        FinalCheck::Ok => return Ok(PassOutcome::Solved(resolved)),
                        FinalCheck::Cycle => {}
                        FinalCheck::TooDeep => bound_blocked = true,
                    }
                    if !self.backtrack(&mut frames, &mut frontier, &mut resolved) {
                        return Ok(PassOutcome::Exhausted { bound_blocked });
                    }
                    continue;
                }
            };
            self.counters.expansions += 1;

            if self.kitchen.contains(&item.node) {
                resolved.insert(item.node.clone(), Resolution::Kitchen);
                continue;
            }
            if resolved.contains_key(&item.node) {
                // Memoized within this pass: reuse the earlier choice.
                continue;
            }

            let producers = self.graph.producers_of(&item.node);
            self.counters.branching_sum += producers.len();
            self.counters.branching_samples += 1;

            // Cycle guard: skip units that need an object already on the
            // current resolution path.
            let mut candidates: Vec<usize> = producers
                .iter()
                .copied()
                .filter(|&u| {
                    self.graph
                        .unit(u)
                        .inputs()
                        .iter()
                        .all(|input| *input != item.node && !item.path.contains(input))
                })
                .collect();

            if let Some(limit) = bound {
                if item.depth > limit && !candidates.is_empty() {
                    // Every remaining candidate sits beyond the depth bound.
                    bound_blocked = true;
                    candidates.clear();
                }
            }
            self.order_candidates(&mut candidates)?;

            if candidates.is_empty() {
                if !self.backtrack(&mut frames, &mut frontier, &mut resolved) {
                    return Ok(PassOutcome::Exhausted { bound_blocked });
                }
                continue;
            }

            frames.push(Frame {
                saved_frontier: frontier.clone(),
                saved_resolved: resolved.clone(),
                item,
                candidates,
                cursor: 0,
            });
            let frame = frames.last_mut().expect("frame just pushed");
            Self::apply_choice(self.graph, frame, &mut frontier, &mut resolved, self.policy);
            self.note_frontier(frontier.len());
        }
    }

    /// Applies the frame's next candidate: records the choice and enqueues
    /// the unit's inputs under the policy's traversal discipline.
    fn apply_choice(
        graph: &FoonGraph,
        frame: &mut Frame,
        frontier: &mut VecDeque<Pending>,
        resolved: &mut BTreeMap<ObjectNode, Resolution>,
        policy: SearchPolicy,
    ) {
        let unit_index = frame.candidates[frame.cursor];
        frame.cursor += 1;
        resolved.insert(frame.item.node.clone(), Resolution::Unit(unit_index));

        let mut path = frame.item.path.clone();
        path.push(frame.item.node.clone());
        let inputs = graph.unit(unit_index).inputs();
        match policy {
            SearchPolicy::Bfs => {
                for input in inputs {
                    frontier.push_back(Pending {
                        node: input.clone(),
                        path: path.clone(),
                        depth: frame.item.depth + 1,
                    });
                }
            }
            // Depth-first disciplines: the selected branch is expanded next,
            // first input first.
            SearchPolicy::Ids { .. } | SearchPolicy::Gbfs { .. } => {
                for input in inputs.iter().rev() {
                    frontier.push_front(Pending {
                        node: input.clone(),
                        path: path.clone(),
                        depth: frame.item.depth + 1,
                    });
                }
            }
        }
    }

    /// Pops to the most recent choice point with untried candidates,
    /// restores its snapshot, and applies the next candidate. Returns false
    /// when no choice point remains.
    fn backtrack(
        &mut self,
        frames: &mut Vec<Frame>,
        frontier: &mut VecDeque<Pending>,
        resolved: &mut BTreeMap<ObjectNode, Resolution>,
    ) -> bool {
        loop {
            match frames.last_mut() {
                None => return false,
                Some(frame) => {
                    if frame.cursor < frame.candidates.len() {
                        *frontier = frame.saved_frontier.clone();
                        *resolved = frame.saved_resolved.clone();
                        Self::apply_choice(self.graph, frame, frontier, resolved, self.policy);
                        self.note_frontier(frontier.len());
                        return true;
                    }
                    frames.pop();
                }
            }
        }
    }

    /// Orders a candidate list in policy order: ascending unit index for bfs
    /// and ids, descending score (ties by ascending index) for gbfs.
    fn order_candidates(&self, candidates: &mut [usize]) -> Result<(), SearchError> {
        let heuristic = match self.policy {
            SearchPolicy::Gbfs { heuristic } => heuristic,
            // producers_of already yields ascending indices.
            SearchPolicy::Bfs | SearchPolicy::Ids { .. } => return Ok(()),
        };
        let mut scored: Vec<(f64, usize)> = Vec::with_capacity(candidates.len());
        for &index in candidates.iter() {
            let score = self.candidate_score(self.graph.unit(index), heuristic)?;
            scored.push((score, index));
        }
        scored.sort_by(|(score_a, index_a), (score_b, index_b)| {
            score_b
                .partial_cmp(score_a)
                .expect("scores are finite")
                .then(index_a.cmp(index_b))
        });
        for (slot, (_, index)) in candidates.iter_mut().zip(scored) {
            *slot = index;
        }
        Ok(())
    }

    /// Score used while searching. Strict-mode unknown motions are errors;
    /// in lenient mode without a default, an unknown motion scores 0.0
    /// (least preferred) so the search can still proceed.
    fn candidate_score(
        &self,
        unit: &FunctionalUnit,
        heuristic: Heuristic,
    ) -> Result<f64, SearchError> {
        match heuristic {
            Heuristic::SuccessRate => match self.rates.rate(unit.motion()) {
                Ok(Some(rate)) => Ok(rate),
                Ok(None) => Ok(0.0),
                Err(e) => Err(SearchError::Rate(e)),
            },
            Heuristic::InputCount => Ok(-(heuristic_input_count(unit) as f64)),
        }
    }

    fn note_frontier(&mut self, len: usize) {
        self.counters.max_frontier = self.counters.max_frontier.max(len);
    }
}

enum FinalCheck {
    Ok,
    Cycle,
    TooDeep,
}

/// Validates the completed choice map: the derivation reachable from `start`
/// must be acyclic and, under a depth bound, no unit chain may exceed it.
fn check_final(
    graph: &FoonGraph,
    resolved: &BTreeMap<ObjectNode, Resolution>,
    start: &ObjectNode,
    bound: Option<usize>,
) -> FinalCheck {
    // Height = number of units on the longest chain below an object.
    let mut heights: BTreeMap<ObjectNode, usize> = BTreeMap::new();
    let mut in_progress: BTreeSet<ObjectNode> = BTreeSet::new();
    match height_of(graph, resolved, start, &mut heights, &mut in_progress) {
        None => FinalCheck::Cycle,
        Some(height) => match bound {
            Some(limit) if height > limit => FinalCheck::TooDeep,
            _ => FinalCheck::Ok,
        },
    }
}

fn height_of(
    graph: &FoonGraph,
    resolved: &BTreeMap<ObjectNode, Resolution>,
    node: &ObjectNode,
    heights: &mut BTreeMap<ObjectNode, usize>,
    in_progress: &mut BTreeSet<ObjectNode>,
) -> Option<usize> {
    if let Some(&height) = heights.get(node) {
        return Some(height);
    }
    if !in_progress.insert(node.clone()) {
        return None;
    }
    let height = match resolved.get(node) {
        Some(Resolution::Unit(index)) => {
            let mut deepest = 0;
            for input in graph.unit(*index).inputs() {
                deepest = deepest.max(height_of(graph, resolved, input, heights, in_progress)?);
            }
            deepest + 1
        }
        Some(Resolution::Kitchen) | None => 0,
    };
    in_progress.remove(node);
    heights.insert(node.clone(), height);
    Some(height)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MotionNode;

    fn node(name: &str, states: &[&str]) -> ObjectNode {
        ObjectNode::new(name, states, [] as [&str; 0]).unwrap()
    }

    fn ing_node(name: &str, ingredients: &[&str]) -> ObjectNode {
        ObjectNode::new(name, [] as [&str; 0], ingredients).unwrap()
    }

    fn unit(inputs: &[ObjectNode], motion: &str, outputs: &[ObjectNode]) -> FunctionalUnit {
        FunctionalUnit::new(
            inputs.to_vec(),
            MotionNode::new(motion).unwrap(),
            outputs.to_vec(),
        )
        .unwrap()
    }

    fn graph_of(units: Vec<FunctionalUnit>) -> FoonGraph {
        let (graph, _) = crate::merge::merge_units(FoonGraph::new(), units);
        graph
    }

    fn rates_of(entries: &[(&str, f64)]) -> MotionRateTable {
        let mut table = MotionRateTable::new();
        for (name, rate) in entries {
            table.insert(&MotionNode::new(name).unwrap(), *rate).unwrap();
        }
        table
    }

    /// Two producers for ice: a low-rate one at index 0 and a high-rate one
    /// at index 1, both feeding from the kitchen.
    fn ice_instance() -> (FoonGraph, Kitchen, MotionRateTable) {
        let ice = node("ice", &[]);
        let graph = graph_of(vec![
            unit(&[node("water", &[])], "slow-freeze", &[ice.clone()]),
            unit(&[node("water", &["cold"])], "fast-freeze", &[ice.clone()]),
        ]);
        let kitchen = Kitchen::from_items([node("water", &[]), node("water", &["cold"])]);
        let rates = rates_of(&[("slow-freeze", 0.6), ("fast-freeze", 0.8)]);
        (graph, kitchen, rates)
    }

    #[test]
    fn goal_candidates_filter_and_order() {
        let graph = graph_of(vec![
            unit(&[node("water", &[])], "freeze", &[node("ice", &[])]),
            unit(&[node("ice", &[])], "crush", &[node("ice", &["crushed"])]),
        ]);
        let all: Vec<ObjectNode> = goal_candidates(&graph, &"ice".parse().unwrap());
        assert_eq!(all, vec![node("ice", &[]), node("ice", &["crushed"])]);

        let crushed = goal_candidates(&graph, &"ice|crushed".parse().unwrap());
        assert_eq!(crushed, vec![node("ice", &["crushed"])]);

        assert!(goal_candidates(&graph, &"snow".parse().unwrap()).is_empty());
    }

    #[test]
    fn input_count_weights_ingredients() {
        let bowl = ing_node("bowl", &["salt", "pepper"]);
        let knife = node("knife", &[]);
        let out = node("mix", &[]);
        assert_eq!(heuristic_input_count(&unit(&[bowl.clone()], "shake", &[out.clone()])), 2);
        assert_eq!(heuristic_input_count(&unit(&[knife.clone()], "cut", &[out.clone()])), 1);
        assert_eq!(heuristic_input_count(&unit(&[bowl, knife], "mix", &[out])), 3);
    }

    #[test]
    fn success_rate_heuristic_reads_table() {
        let rates = rates_of(&[("pour", 0.9), ("chop", 0.1)]);
        let pour = unit(&[node("water", &[])], "pour", &[node("cup", &["filled"])]);
        let chop = unit(&[node("onion", &[])], "chop", &[node("onion", &["chopped"])]);
        assert_eq!(heuristic_success_rate(&pour, &rates), Ok(0.9));
        assert_eq!(heuristic_success_rate(&chop, &rates), Ok(0.1));

        let whisk = unit(&[node("egg", &[])], "whisk", &[node("egg", &["beaten"])]);
        let strict = rates.clone().strict();
        assert!(matches!(
            heuristic_success_rate(&whisk, &strict),
            Err(RateError::UnknownMotion(_))
        ));
    }

    #[test]
    fn gbfs_scores_rank_as_specified() {
        let rates = rates_of(&[("pour", 0.9), ("chop", 0.1)]);
        let pour = unit(&[node("water", &[])], "pour", &[node("cup", &["filled"])]);
        let chop = unit(&[node("onion", &[])], "chop", &[node("onion", &["chopped"])]);
        let pour_score = gbfs_score(&pour, Heuristic::SuccessRate, &rates).unwrap();
        let chop_score = gbfs_score(&chop, Heuristic::SuccessRate, &rates).unwrap();
        assert!(pour_score > chop_score);

        let one_input = unit(&[node("a", &[])], "m", &[node("b", &[])]);
        let three_inputs = unit(
            &[node("a", &[]), node("b", &[]), node("c", &[])],
            "m",
            &[node("d", &[])],
        );
        let one = gbfs_score(&one_input, Heuristic::InputCount, &rates).unwrap();
        let three = gbfs_score(&three_inputs, Heuristic::InputCount, &rates).unwrap();
        assert!(one > three, "-1 beats -3 under max-selection");
    }

    #[test]
    fn goal_in_kitchen_resolves_to_empty_tree() {
        let (graph, _, rates) = ice_instance();
        let kitchen = Kitchen::from_items([node("ice", &[])]);
        let report = resolve(&graph, &"ice".parse().unwrap(), &kitchen, &rates, SearchPolicy::Bfs)
            .unwrap();
        assert!(report.tree.is_empty());
        assert_eq!(report.unit_count, 0);
        assert_eq!(report.expansions, 1);
        assert_eq!(report.avg_success_rate, None);
    }

    #[test]
    fn goal_only_in_kitchen_is_still_satisfiable() {
        let (graph, _, rates) = ice_instance();
        let kitchen = Kitchen::from_items([node("lemon", &[])]);
        let report = resolve(&graph, &"lemon".parse().unwrap(), &kitchen, &rates, SearchPolicy::Bfs)
            .unwrap();
        assert!(report.tree.is_empty());
    }

    #[test]
    fn bfs_and_gbfs_rate_pick_different_producers() {
        let (graph, kitchen, rates) = ice_instance();
        let goal: GoalSpec = "ice".parse().unwrap();

        let bfs = resolve(&graph, &goal, &kitchen, &rates, SearchPolicy::Bfs).unwrap();
        assert_eq!(bfs.tree.units(), &[0], "bfs takes the lowest index");
        assert_eq!(bfs.unit_count, 1);
        assert_eq!(bfs.avg_success_rate, Some(0.6));

        let gbfs = resolve(
            &graph,
            &goal,
            &kitchen,
            &rates,
            SearchPolicy::Gbfs {
                heuristic: Heuristic::SuccessRate,
            },
        )
        .unwrap();
        assert_eq!(gbfs.tree.units(), &[1], "gbfs-rate takes the better motion");
        assert_eq!(gbfs.avg_success_rate, Some(0.8));
    }

    #[test]
    fn missing_goal_reports_not_found() {
        let (graph, kitchen, rates) = ice_instance();
        let err = resolve(&graph, &"unicorn".parse().unwrap(), &kitchen, &rates, SearchPolicy::Bfs)
            .unwrap_err();
        assert!(matches!(err, SearchError::GoalNotFound(_)));
    }

    #[test]
    fn unreachable_goal_reports_unsatisfiable() {
        let graph = graph_of(vec![unit(
            &[node("water", &[])],
            "freeze",
            &[node("ice", &[])],
        )]);
        let kitchen = Kitchen::new(); // no water anywhere
        let err = resolve(
            &graph,
            &"ice".parse().unwrap(),
            &kitchen,
            &MotionRateTable::new(),
            SearchPolicy::Bfs,
        )
        .unwrap_err();
        assert!(matches!(err, SearchError::Unsatisfiable(_)));
    }

    #[test]
    fn chain_of_depth_three_restarts_three_times() {
        let graph = graph_of(vec![
            unit(&[node("grain", &[])], "mill", &[node("flour", &[])]),
            unit(&[node("flour", &[])], "knead", &[node("dough", &[])]),
            unit(&[node("dough", &[])], "bake", &[node("bread", &[])]),
        ]);
        let kitchen = Kitchen::from_items([node("grain", &[])]);
        let rates = MotionRateTable::new();
        let goal: GoalSpec = "bread".parse().unwrap();

        let bfs = resolve(&graph, &goal, &kitchen, &rates, SearchPolicy::Bfs).unwrap();
        let ids = resolve(&graph, &goal, &kitchen, &rates, SearchPolicy::ids()).unwrap();

        assert_eq!(bfs.tree, ids.tree);
        assert_eq!(ids.restarts, 3);
        assert_eq!(ids.final_depth_bound, Some(3));
        assert!(ids.expansions > bfs.expansions);
        assert_eq!(bfs.restarts, 0);
        assert_eq!(bfs.final_depth_bound, None);
    }

    #[test]
    fn backtracking_skips_dead_end_producer() {
        // Unit 0 produces the goal from an unreachable input; unit 1 from
        // the kitchen. All policies must fall through to unit 1.
        let goal_node = node("cake", &[]);
        let graph = graph_of(vec![
            unit(&[node("phantom", &[])], "conjure", &[goal_node.clone()]),
            unit(&[node("batter", &[])], "bake", &[goal_node.clone()]),
        ]);
        let kitchen = Kitchen::from_items([node("batter", &[])]);
        let rates = rates_of(&[("conjure", 0.99), ("bake", 0.5)]);

        for policy in [
            SearchPolicy::Bfs,
            SearchPolicy::ids(),
            SearchPolicy::Gbfs {
                heuristic: Heuristic::SuccessRate,
            },
            SearchPolicy::Gbfs {
                heuristic: Heuristic::InputCount,
            },
        ] {
            let report = resolve(&graph, &"cake".parse().unwrap(), &kitchen, &rates, policy)
                .unwrap();
            assert_eq!(report.tree.units(), &[1], "{:?}", policy);
            report.tree.validate(&graph, &kitchen).unwrap();
        }
    }

    #[test]
    fn cycle_guard_skips_circular_producers() {
        // water <-> ice cycle plus a kitchen escape for water.
        let graph = graph_of(vec![
            unit(&[node("ice", &[])], "melt", &[node("water", &[])]),
            unit(&[node("water", &[])], "freeze", &[node("ice", &[])]),
        ]);
        let kitchen = Kitchen::from_items([node("water", &[])]);
        let report = resolve(
            &graph,
            &"ice".parse().unwrap(),
            &kitchen,
            &MotionRateTable::new(),
            SearchPolicy::Bfs,
        )
        .unwrap();
        assert_eq!(report.tree.units(), &[1]);

        // Without the kitchen escape the goal is unsatisfiable, not a hang.
        let err = resolve(
            &graph,
            &"ice".parse().unwrap(),
            &Kitchen::new(),
            &MotionRateTable::new(),
            SearchPolicy::Bfs,
        )
        .unwrap_err();
        assert!(matches!(err, SearchError::Unsatisfiable(_)));
    }

    #[test]
    fn gbfs_count_prefers_fewer_weighted_inputs() {
        let goal_node = node("snack", &[]);
        let graph = graph_of(vec![
            unit(
                &[node("bread", &[]), node("cheese", &[]), node("ham", &[])],
                "assemble",
                &[goal_node.clone()],
            ),
            unit(&[node("apple", &[])], "slice", &[goal_node.clone()]),
        ]);
        let kitchen = Kitchen::from_items([
            node("bread", &[]),
            node("cheese", &[]),
            node("ham", &[]),
            node("apple", &[]),
        ]);
        let report = resolve(
            &graph,
            &"snack".parse().unwrap(),
            &kitchen,
            &MotionRateTable::new(),
            SearchPolicy::Gbfs {
                heuristic: Heuristic::InputCount,
            },
        )
        .unwrap();
        assert_eq!(report.tree.units(), &[1], "1-input producer beats 3-input one");
    }

    #[test]
    fn strict_mode_unknown_motion_errors_for_gbfs_rate() {
        let (graph, kitchen, _) = ice_instance();
        let strict = MotionRateTable::new().strict();
        let err = resolve(
            &graph,
            &"ice".parse().unwrap(),
            &kitchen,
            &strict,
            SearchPolicy::Gbfs {
                heuristic: Heuristic::SuccessRate,
            },
        )
        .unwrap_err();
        assert!(matches!(err, SearchError::Rate(RateError::UnknownMotion(_))));

        // The same strict table is fine for policies that never score.
        let report = resolve(&graph, &"ice".parse().unwrap(), &kitchen, &strict, SearchPolicy::Bfs)
            .unwrap();
        assert_eq!(report.avg_success_rate, None, "rates stay absent, not fabricated");
    }

    #[test]
    fn determinism_across_runs() {
        let (graph, kitchen, rates) = ice_instance();
        let goal: GoalSpec = "ice".parse().unwrap();
        for policy in [SearchPolicy::Bfs, SearchPolicy::ids()] {
            let a = resolve(&graph, &goal, &kitchen, &rates, policy).unwrap();
            let b = resolve(&graph, &goal, &kitchen, &rates, policy).unwrap();
            assert_eq!(a.tree, b.tree);
            assert_eq!(a.expansions, b.expansions);
            assert_eq!(a.max_frontier, b.max_frontier);
        }
    }

    #[test]
    fn deep_reuse_does_not_trap_ids_below_the_minimum_bound() {
        // The goal needs "sauce" twice, once directly and once deeper via
        // "glaze". Sauce has a deep producer at the lower index and a
        // shallow one behind it; IDS must still finish at the true minimum
        // depth by revisiting the sauce choice.
        let graph = graph_of(vec![
            // 0: deep sauce chain, part 3
            unit(&[node("reduction", &[])], "finish", &[node("sauce", &[])]),
            // 1: shallow sauce
            unit(&[node("stock", &[])], "season", &[node("sauce", &[])]),
            // 2: glaze needs sauce
            unit(&[node("sauce", &[])], "reduce", &[node("glaze", &[])]),
            // 3: goal needs sauce and glaze
            unit(
                &[node("sauce", &[]), node("glaze", &[])],
                "plate",
                &[node("dish", &[])],
            ),
            // 4, 5: the deep chain below "reduction"
            unit(&[node("wine", &[])], "simmer", &[node("base", &[])]),
            unit(&[node("base", &[])], "strain", &[node("reduction", &[])]),
        ]);
        let kitchen = Kitchen::from_items([node("stock", &[]), node("wine", &[])]);
        let report = resolve(
            &graph,
            &"dish".parse().unwrap(),
            &kitchen,
            &MotionRateTable::new(),
            SearchPolicy::ids(),
        )
        .unwrap();
        // Minimum AND-OR depth: plate(1) -> glaze(2) -> shallow sauce(3).
        assert_eq!(report.final_depth_bound, Some(3));
        report.tree.validate(&graph, &kitchen).unwrap();
    }

    #[test]
    fn frontier_discipline_separates_bfs_from_ids() {
        // A binary AND-tree of depth 3: BFS accumulates whole levels while
        // the depth-first policies keep siblings waiting.
        let leaf = |name: &str| node(name, &[]);
        let graph = graph_of(vec![
            unit(&[leaf("a1"), leaf("a2")], "m1", &[leaf("a")]),
            unit(&[leaf("b1"), leaf("b2")], "m2", &[leaf("b")]),
            unit(&[leaf("a"), leaf("b")], "m3", &[leaf("root")]),
        ]);
        let kitchen = Kitchen::from_items([leaf("a1"), leaf("a2"), leaf("b1"), leaf("b2")]);
        let goal: GoalSpec = "root".parse().unwrap();
        let rates = MotionRateTable::new();

        let bfs = resolve(&graph, &goal, &kitchen, &rates, SearchPolicy::Bfs).unwrap();
        let ids = resolve(&graph, &goal, &kitchen, &rates, SearchPolicy::ids()).unwrap();
        assert!(ids.max_frontier <= bfs.max_frontier);
    }
}
