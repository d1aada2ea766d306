//! Merging subgraphs into a universal FOON without duplicate functional
//! units.
//!
//! Two units are duplicates when they have the same input and output object
//! sets and the same motion. The first occurrence wins; later copies are
//! dropped, which keeps producer-candidate ordering stable when the same
//! sources are merged again.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::graph::FoonGraph;
use crate::model::FunctionalUnit;
use crate::parser::{parse_subgraph, ParseError};

/// Counts for one merge run. When the run started from an empty graph,
/// `units_total = units_seen - duplicates_dropped`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MergeReport {
    pub files_read: usize,
    pub units_seen: usize,
    pub duplicates_dropped: usize,
    pub units_total: usize,
}

#[derive(Debug, Error)]
pub enum MergeError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Appends `new_units` to the graph in order, dropping any unit that equals
/// one already present (including duplicates among the new units).
pub fn merge_units(
    mut graph: FoonGraph,
    new_units: Vec<FunctionalUnit>,
) -> (FoonGraph, MergeReport) {
    let mut known: HashMap<_, usize> = graph
        .units()
        .iter()
        .enumerate()
        .map(|(i, u)| (u.identity_key(), i))
        .collect();

    let mut report = MergeReport {
        units_seen: new_units.len(),
        ..MergeReport::default()
    };
    for unit in new_units {
        let key = unit.identity_key();
        if known.contains_key(&key) {
            report.duplicates_dropped += 1;
            continue;
        }
        known.insert(key, graph.len());
        graph.push_unit(unit);
    }
    report.units_total = graph.len();
    (graph, report)
}

/// Parses each file in order and folds it into one graph. The first parse
/// or I/O error aborts the merge.
pub fn merge_files<P: AsRef<Path>>(paths: &[P]) -> Result<(FoonGraph, MergeReport), MergeError> {
    let mut graph = FoonGraph::new();
    let mut report = MergeReport::default();
    for path in paths {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| MergeError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let units = parse_subgraph(&text, &path.display().to_string())?;
        let (next, file_report) = merge_units(graph, units);
        graph = next;
        report.files_read += 1;
        report.units_seen += file_report.units_seen;
        report.duplicates_dropped += file_report.duplicates_dropped;
    }
    report.units_total = graph.len();
    Ok((graph, report))
}
