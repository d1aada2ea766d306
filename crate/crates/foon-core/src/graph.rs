//! The deduplicated universal FOON graph, its producer index, and task
//! trees extracted from it.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{FunctionalUnit, Kitchen, ObjectNode};

/// A collection of functional units with no duplicates, indexed so that all
/// units producing a given object identity can be found in merge order.
///
/// Mutation is confined to the builder phase (merging); afterwards the graph
/// is read-only and safe to share across concurrent readers.
#[derive(Debug, Clone, Default)]
pub struct FoonGraph {
    units: Vec<FunctionalUnit>,
    producer_index: BTreeMap<ObjectNode, Vec<usize>>,
    objects: BTreeSet<ObjectNode>,
}

impl FoonGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn unit(&self, index: usize) -> &FunctionalUnit {
        &self.units[index]
    }

    pub fn units(&self) -> &[FunctionalUnit] {
        &self.units
    }

    /// Indices of the units whose outputs contain this identity, ascending.
    pub fn producers_of(&self, node: &ObjectNode) -> &[usize] {
        self.producer_index
            .get(node)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Every distinct object identity appearing anywhere (inputs or
    /// outputs), in canonical order.
    pub fn objects(&self) -> impl Iterator<Item = &ObjectNode> {
        self.objects.iter()
    }

    pub fn contains_object(&self, node: &ObjectNode) -> bool {
        self.objects.contains(node)
    }

    /// Distinct motion names, in lexicographic order.
    pub fn motions(&self) -> BTreeSet<&str> {
        self.units.iter().map(|u| u.motion().name()).collect()
    }

    /// Appends a unit without any duplicate check. Callers (the merge
    /// engine) are responsible for deduplication.
    pub(crate) fn push_unit(&mut self, unit: FunctionalUnit) {
        let index = self.units.len();
        for output in unit.outputs() {
            self.producer_index
                .entry(output.clone())
                .or_default()
                .push(index);
        }
        for node in unit.inputs().iter().chain(unit.outputs()) {
            self.objects.insert(node.clone());
        }
        self.units.push(unit);
    }

    /// Rebuilds the producer index from scratch. Used to verify that the
    /// incrementally maintained index is exactly consistent with `units`.
    pub fn rebuild_producer_index(&self) -> BTreeMap<ObjectNode, Vec<usize>> {
        let mut index: BTreeMap<ObjectNode, Vec<usize>> = BTreeMap::new();
        for (i, unit) in self.units.iter().enumerate() {
            for output in unit.outputs() {
                index.entry(output.clone()).or_default().push(i);
            }
        }
        index
    }

    /// Checks the graph invariants: the producer index matches a from-scratch
    /// rebuild and no two stored units are duplicates.
    pub fn check_invariants(&self) -> Result<(), GraphInvariantError> {
        if self.producer_index != self.rebuild_producer_index() {
            return Err(GraphInvariantError::StaleProducerIndex);
        }
        let mut seen = BTreeMap::new();
        for (i, unit) in self.units.iter().enumerate() {
            if let Some(&j) = seen.get(&unit.identity_key()) {
                return Err(GraphInvariantError::DuplicateUnits { first: j, second: i });
            }
            seen.insert(unit.identity_key(), i);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphInvariantError {
    #[error("producer index does not match a from-scratch rebuild")]
    StaleProducerIndex,
    #[error("units {first} and {second} are duplicates")]
    DuplicateUnits { first: usize, second: usize },
}

/// An executable sequence of functional units ending at the goal object.
///
/// Units are references (indices) into a [`FoonGraph`]. An empty unit list
/// is legal only when the goal object itself is kitchen-available.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskTree {
    units: Vec<usize>,
    goal_node: ObjectNode,
}

impl TaskTree {
    pub fn new(units: Vec<usize>, goal_node: ObjectNode) -> Self {
        TaskTree { units, goal_node }
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn goal_node(&self) -> &ObjectNode {
        &self.goal_node
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    /// Resolves the referenced units against their graph, in tree order.
    pub fn resolve_units<'g>(&self, graph: &'g FoonGraph) -> Vec<&'g FunctionalUnit> {
        self.units.iter().map(|&i| graph.unit(i)).collect()
    }

    /// Validates the executability invariants against a graph and kitchen.
    ///
    /// This walk is deliberately independent of the search engine: it checks
    /// the finished tree only, unit by unit, so engine bugs cannot hide
    /// behind shared code.
    pub fn validate(&self, graph: &FoonGraph, kitchen: &Kitchen) -> Result<(), TreeInvariantError> {
        let mut seen = BTreeSet::new();
        for &index in &self.units {
            if index >= graph.len() {
                return Err(TreeInvariantError::UnknownUnit { index });
            }
            if !seen.insert(index) {
                return Err(TreeInvariantError::RepeatedUnit { index });
            }
        }

        let mut produced: BTreeSet<&ObjectNode> = BTreeSet::new();
        for (position, &index) in self.units.iter().enumerate() {
            let unit = graph.unit(index);
            for input in unit.inputs() {
                if !kitchen.contains(input) && !produced.contains(input) {
                    return Err(TreeInvariantError::UnsatisfiedInput {
                        position,
                        unit: index,
                        input: input.to_string(),
                    });
                }
            }
            produced.extend(unit.outputs());
        }

        match self.units.last() {
            Some(&last) => {
                if !graph.unit(last).produces(&self.goal_node) {
                    return Err(TreeInvariantError::GoalNotLastOutput);
                }
            }
            None => {
                if !kitchen.contains(&self.goal_node) {
                    return Err(TreeInvariantError::EmptyTreeGoalNotAvailable);
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeInvariantError {
    #[error("unit index {index} is outside the graph")]
    UnknownUnit { index: usize },
    #[error("unit {index} referenced twice")]
    RepeatedUnit { index: usize },
    #[error("unit {unit} at position {position} needs \"{input}\" which is neither kitchen-available nor produced earlier")]
    UnsatisfiedInput {
        position: usize,
        unit: usize,
        input: String,
    },
    #[error("goal node is not among the outputs of the last unit")]
    GoalNotLastOutput,
    #[error("empty tree but the goal node is not kitchen-available")]
    EmptyTreeGoalNotAvailable,
}
