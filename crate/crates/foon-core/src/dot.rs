//! Graphviz DOT rendering of functional units.
//!
//! Objects render as ellipses labeled with name, states, and ingredients;
//! motions as boxes, annotated with their success rate when a rate table is
//! supplied. Arrows run from input objects into the motion node and from the
//! motion node out to the output objects.
//!
//! Node identifiers are stable: object ids are positions in the
//! canonical-key order of the distinct identities present, motion ids are
//! unit positions. The same input always renders to byte-identical DOT.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::model::{FunctionalUnit, ObjectNode};
use crate::rates::MotionRateTable;

/// Renders a unit list (a subgraph, a whole graph, or a task tree) as DOT.
pub fn render_units(units: &[FunctionalUnit], rates: Option<&MotionRateTable>) -> String {
    let mut out = String::from("digraph foon {\n");
    if !units.is_empty() {
        let _ = writeln!(out, "  rankdir=LR;");

        let distinct: std::collections::BTreeSet<&ObjectNode> = units
            .iter()
            .flat_map(|u| u.inputs().iter().chain(u.outputs()))
            .collect();
        let object_ids: BTreeMap<&ObjectNode, usize> =
            distinct.iter().enumerate().map(|(i, n)| (*n, i)).collect();

        for (node, id) in &object_ids {
            let _ = writeln!(
                out,
                "  o{id} [shape=ellipse, label=\"{}\"];",
                object_label(node)
            );
        }
        for (index, unit) in units.iter().enumerate() {
            let _ = writeln!(
                out,
                "  m{index} [shape=box, label=\"{}\"];",
                motion_label(unit, rates)
            );
        }
        for (index, unit) in units.iter().enumerate() {
            for input in unit.inputs() {
                let _ = writeln!(out, "  o{} -> m{index};", object_ids[input]);
            }
            for output in unit.outputs() {
                let _ = writeln!(out, "  m{index} -> o{};", object_ids[output]);
            }
        }
    }
    out.push_str("}\n");
    out
}

fn object_label(node: &ObjectNode) -> String {
    let mut label = escape(node.name());
    let states: Vec<&str> = node.states().collect();
    if !states.is_empty() {
        label.push_str("\\n");
        label.push_str(&escape(&states.join(",")));
    }
    let ingredients: Vec<&str> = node.ingredients().collect();
    if !ingredients.is_empty() {
        label.push_str("\\n{");
        label.push_str(&escape(&ingredients.join(",")));
        label.push('}');
    }
    label
}

fn motion_label(unit: &FunctionalUnit, rates: Option<&MotionRateTable>) -> String {
    let name = escape(unit.motion().name());
    let rate = rates.and_then(|table| {
        table
            .stored_rate(unit.motion())
            .or_else(|| table.default_rate())
    });
    match rate {
        Some(rate) => format!("{name} ({rate:.2})"),
        None => name,
    }
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}
