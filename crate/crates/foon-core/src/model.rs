//! Core FOON domain types: object nodes, motion nodes, functional units,
//! kitchens, and goal specs.
//!
//! Identity is structural everywhere. An object node is identified by its
//! case-folded name plus its state and ingredient sets; a motion node by its
//! name alone. Two functional units are the same action when their input and
//! output object sets and motion agree, regardless of list order.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Construction errors for the domain types.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("object name is empty")]
    EmptyObjectName,
    #[error("motion name is empty")]
    EmptyMotionName,
    #[error("state label is empty")]
    EmptyStateLabel,
    #[error("ingredient name is empty")]
    EmptyIngredientName,
    #[error("goal name is empty")]
    EmptyGoalName,
    #[error("functional unit has no input objects")]
    NoInputs,
    #[error("functional unit has no output objects")]
    NoOutputs,
    #[error("duplicate {side} object: {name}")]
    DuplicateObject { side: Side, name: String },
}

/// Which side of a functional unit an object sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Input,
    Output,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Input => write!(f, "input"),
            Side::Output => write!(f, "output"),
        }
    }
}

/// Case-folds and trims a token string, the normalization applied to every
/// name and label at construction time.
fn fold(raw: &str) -> String {
    raw.trim().to_lowercase()
}

/// An object node: a named object with a state set and an ingredient set.
///
/// States and ingredients are true sets; their stored order is always the
/// lexicographic one, so derived ordering and equality coincide with the
/// canonical identity `(name, states, ingredients)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectNode {
    name: String,
    states: BTreeSet<String>,
    ingredients: BTreeSet<String>,
}

impl ObjectNode {
    /// Builds a node, normalizing every token. Names that are empty after
    /// trimming are rejected; duplicate states or ingredients collapse
    /// silently since the fields are sets.
    pub fn new<S, I>(name: &str, states: S, ingredients: I) -> Result<Self, ModelError>
    where
        S: IntoIterator,
        S::Item: AsRef<str>,
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let name = fold(name);
        if name.is_empty() {
            return Err(ModelError::EmptyObjectName);
        }
        let mut state_set = BTreeSet::new();
        for s in states {
            let s = fold(s.as_ref());
            if s.is_empty() {
                return Err(ModelError::EmptyStateLabel);
            }
            state_set.insert(s);
        }
        let mut ingredient_set = BTreeSet::new();
        for i in ingredients {
            let i = fold(i.as_ref());
            if i.is_empty() {
                return Err(ModelError::EmptyIngredientName);
            }
            ingredient_set.insert(i);
        }
        Ok(ObjectNode {
            name,
            states: state_set,
            ingredients: ingredient_set,
        })
    }

    /// A bare object: no states, no ingredients.
    pub fn bare(name: &str) -> Result<Self, ModelError> {
        Self::new(name, [] as [&str; 0], [] as [&str; 0])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// States in lexicographic order.
    pub fn states(&self) -> impl Iterator<Item = &str> {
        self.states.iter().map(String::as_str)
    }

    /// Ingredients in lexicographic order.
    pub fn ingredients(&self) -> impl Iterator<Item = &str> {
        self.ingredients.iter().map(String::as_str)
    }

    pub fn has_state(&self, state: &str) -> bool {
        self.states.contains(&fold(state))
    }

    pub fn has_ingredients(&self) -> bool {
        !self.ingredients.is_empty()
    }

    /// The totally ordered identity key: name, then sorted states, then
    /// sorted ingredients. Equal identities produce equal keys and vice
    /// versa.
    pub fn canonical_key(&self) -> CanonicalKey {
        CanonicalKey {
            name: self.name.clone(),
            states: self.states.iter().cloned().collect(),
            ingredients: self.ingredients.iter().cloned().collect(),
        }
    }
}

impl fmt::Display for ObjectNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.states.is_empty() {
            let states: Vec<&str> = self.states().collect();
            write!(f, "/{}", states.join(","))?;
        }
        if !self.ingredients.is_empty() {
            let ingredients: Vec<&str> = self.ingredients().collect();
            write!(f, "{{{}}}", ingredients.join(","))?;
        }
        Ok(())
    }
}

/// Opaque ordered key for an object identity. Sorting nodes by key and
/// sorting them directly agree; the key exists so callers can store or
/// compare identities without holding the node itself.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    name: String,
    states: Vec<String>,
    ingredients: Vec<String>,
}

/// A motion node. Identity is the case-folded name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MotionNode {
    name: String,
}

impl MotionNode {
    pub fn new(name: &str) -> Result<Self, ModelError> {
        let name = fold(name);
        if name.is_empty() {
            return Err(ModelError::EmptyMotionName);
        }
        Ok(MotionNode { name })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Display for MotionNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// One action: input objects transformed into output objects through a
/// motion. Both sides are nonempty and hold no two objects of equal
/// identity; list order is preserved from the source but never significant
/// for identity.
#[derive(Debug, Clone)]
pub struct FunctionalUnit {
    inputs: Vec<ObjectNode>,
    motion: MotionNode,
    outputs: Vec<ObjectNode>,
}

impl FunctionalUnit {
    pub fn new(
        inputs: Vec<ObjectNode>,
        motion: MotionNode,
        outputs: Vec<ObjectNode>,
    ) -> Result<Self, ModelError> {
        if inputs.is_empty() {
            return Err(ModelError::NoInputs);
        }
        if outputs.is_empty() {
            return Err(ModelError::NoOutputs);
        }
        check_distinct(&inputs, Side::Input)?;
        check_distinct(&outputs, Side::Output)?;
        Ok(FunctionalUnit {
            inputs,
            motion,
            outputs,
        })
    }

    pub fn inputs(&self) -> &[ObjectNode] {
        &self.inputs
    }

    pub fn motion(&self) -> &MotionNode {
        &self.motion
    }

    pub fn outputs(&self) -> &[ObjectNode] {
        &self.outputs
    }

    pub fn produces(&self, node: &ObjectNode) -> bool {
        self.outputs.iter().any(|o| o == node)
    }

    /// Hashable set-semantics identity: sorted inputs, motion, sorted
    /// outputs. Two units are duplicates exactly when their keys are equal.
    pub fn identity_key(&self) -> UnitKey {
        let mut inputs: Vec<ObjectNode> = self.inputs.clone();
        inputs.sort();
        let mut outputs: Vec<ObjectNode> = self.outputs.clone();
        outputs.sort();
        UnitKey {
            inputs,
            motion: self.motion.clone(),
            outputs,
        }
    }
}

fn check_distinct(nodes: &[ObjectNode], side: Side) -> Result<(), ModelError> {
    let mut seen = BTreeSet::new();
    for node in nodes {
        if !seen.insert(node) {
            return Err(ModelError::DuplicateObject {
                side,
                name: node.to_string(),
            });
        }
    }
    Ok(())
}

/// Set-semantics identity of a functional unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitKey {
    inputs: Vec<ObjectNode>,
    motion: MotionNode,
    outputs: Vec<ObjectNode>,
}

/// True when the two units are the same action: equal input identity-sets,
/// equal output identity-sets, and the same motion. List order never
/// matters.
pub fn units_equal(a: &FunctionalUnit, b: &FunctionalUnit) -> bool {
    a.motion == b.motion
        && same_identity_set(&a.inputs, &b.inputs)
        && same_identity_set(&a.outputs, &b.outputs)
}

fn same_identity_set(xs: &[ObjectNode], ys: &[ObjectNode]) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let set: BTreeSet<&ObjectNode> = xs.iter().collect();
    ys.iter().all(|y| set.contains(y))
}

/// The set of object nodes available as-is, needing no further
/// modification. Membership is exact identity match on
/// (name, states, ingredients).
#[derive(Debug, Clone, Default)]
pub struct Kitchen {
    items: BTreeSet<ObjectNode>,
}

impl Kitchen {
    pub fn new() -> Self {
        Self::default()
    }

    /// Collects items into a kitchen; duplicate identities collapse.
    pub fn from_items<I: IntoIterator<Item = ObjectNode>>(items: I) -> Self {
        Kitchen {
            items: items.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, node: ObjectNode) {
        self.items.insert(node);
    }

    /// Exact-identity membership: the node counts as available only when an
    /// item with the same name, states, and ingredients is present.
    pub fn contains(&self, node: &ObjectNode) -> bool {
        self.items.contains(node)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ObjectNode> {
        self.items.iter()
    }
}

/// A retrieval goal: an object name plus the states it must carry.
/// An object identity satisfies the goal when its name matches and its
/// state set is a superset of `required_states`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoalSpec {
    name: String,
    required_states: BTreeSet<String>,
}

impl GoalSpec {
    pub fn new<S>(name: &str, required_states: S) -> Result<Self, ModelError>
    where
        S: IntoIterator,
        S::Item: AsRef<str>,
    {
        let name = fold(name);
        if name.is_empty() {
            return Err(ModelError::EmptyGoalName);
        }
        let mut set = BTreeSet::new();
        for s in required_states {
            let s = fold(s.as_ref());
            if s.is_empty() {
                return Err(ModelError::EmptyStateLabel);
            }
            set.insert(s);
        }
        Ok(GoalSpec {
            name,
            required_states: set,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn required_states(&self) -> impl Iterator<Item = &str> {
        self.required_states.iter().map(String::as_str)
    }

    /// Whether an object identity satisfies this goal.
    pub fn matches(&self, node: &ObjectNode) -> bool {
        node.name() == self.name
            && self
                .required_states
                .iter()
                .all(|s| node.has_state(s))
    }
}

impl FromStr for GoalSpec {
    type Err = ModelError;

    /// Parses the CLI goal syntax `name` or `name|state1,state2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('|') {
            Some((name, states)) => GoalSpec::new(
                name,
                states.split(',').filter(|p| !p.trim().is_empty()),
            ),
            None => GoalSpec::new(s, [] as [&str; 0]),
        }
    }
}

impl fmt::Display for GoalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.required_states.is_empty() {
            let states: Vec<&str> = self.required_states().collect();
            write!(f, "|{}", states.join(","))?;
        }
        Ok(())
    }
}
