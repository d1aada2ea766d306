//! Canonical writer for the subgraph text format.
//!
//! The canonical form uses uppercase tags, single TAB separators, LF line
//! endings, lexicographically sorted states and ingredients, and one `//`
//! line after every unit. Parsing the output reproduces the input exactly at
//! identity level, and serialization is a fixpoint: serializing a parsed
//! canonical file yields the same bytes.

use std::fmt::Write;

use crate::model::{FunctionalUnit, ObjectNode};

/// Renders a unit list in canonical form. An empty list renders as empty
/// text.
pub fn serialize_subgraph(units: &[FunctionalUnit]) -> String {
    let mut out = String::new();
    for unit in units {
        for node in unit.inputs() {
            write_object(&mut out, node);
        }
        writeln_tab(&mut out, "M", unit.motion().name());
        for node in unit.outputs() {
            write_object(&mut out, node);
        }
        out.push_str("//\n");
    }
    out
}

fn write_object(out: &mut String, node: &ObjectNode) {
    writeln_tab(out, "O", node.name());
    let ingredients: Vec<&str> = node.ingredients().collect();
    let ingredient_field = if ingredients.is_empty() {
        None
    } else {
        Some(format!("{{{}}}", ingredients.join(",")))
    };

    let states: Vec<&str> = node.states().collect();
    if states.is_empty() {
        // No state line to carry the ingredients: emit them standalone.
        if let Some(field) = ingredient_field {
            writeln_tab(out, "S", &field);
        }
        return;
    }
    for (i, state) in states.iter().enumerate() {
        match (i, &ingredient_field) {
            (0, Some(field)) => {
                let _ = writeln!(out, "S\t{state}\t{field}");
            }
            _ => writeln_tab(out, "S", state),
        }
    }
}

fn writeln_tab(out: &mut String, tag: &str, value: &str) {
    let _ = writeln!(out, "{tag}\t{value}");
}
