//! Evaluation quantities for task trees and side-by-side algorithm
//! comparison tables.

use serde::Serialize;

use crate::graph::{FoonGraph, TaskTree};
use crate::model::{GoalSpec, Kitchen};
use crate::rates::{MotionRateTable, RateError};
use crate::search::{resolve, Algorithm, SearchError, SearchPolicy, SearchReport};

/// Number of functional units in the tree, each counted once.
pub fn unit_count(tree: &TaskTree) -> usize {
    tree.len()
}

/// Unweighted arithmetic mean of the tree's per-unit motion rates.
///
/// `Ok(None)` for empty trees and for unresolvable rates in lenient mode;
/// `Err` for unknown motions in strict mode.
pub fn avg_success_rate(
    graph: &FoonGraph,
    tree: &TaskTree,
    rates: &MotionRateTable,
) -> Result<Option<f64>, RateError> {
    if tree.is_empty() {
        return Ok(None);
    }
    let mut sum = 0.0;
    for &index in tree.units() {
        match rates.rate(graph.unit(index).motion())? {
            Some(rate) => sum += rate,
            None => return Ok(None),
        }
    }
    Ok(Some(sum / tree.len() as f64))
}

/// Row outcome in a comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RowStatus {
    #[serde(rename = "ok")]
    Ok,
    #[serde(rename = "goal-not-found")]
    GoalNotFound,
    #[serde(rename = "unsatisfiable")]
    Unsatisfiable,
    #[serde(rename = "unknown-motion")]
    UnknownMotion,
}

impl std::fmt::Display for RowStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowStatus::Ok => write!(f, "ok"),
            RowStatus::GoalNotFound => write!(f, "goal-not-found"),
            RowStatus::Unsatisfiable => write!(f, "unsatisfiable"),
            RowStatus::UnknownMotion => write!(f, "unknown-motion"),
        }
    }
}

/// One algorithm's results. Metric fields are absent when the search failed.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub algorithm: Algorithm,
    pub unit_count: Option<usize>,
    pub avg_success_rate: Option<f64>,
    pub expansions: Option<usize>,
    pub restarts: Option<usize>,
    pub max_frontier: Option<usize>,
    pub final_depth_bound: Option<usize>,
    pub mean_branching: Option<f64>,
    pub status: RowStatus,
}

impl ComparisonRow {
    pub fn from_report(report: &SearchReport) -> Self {
        ComparisonRow {
            algorithm: report.algorithm,
            unit_count: Some(report.unit_count),
            avg_success_rate: report.avg_success_rate,
            expansions: Some(report.expansions),
            restarts: Some(report.restarts),
            max_frontier: Some(report.max_frontier),
            final_depth_bound: report.final_depth_bound,
            mean_branching: Some(report.mean_branching),
            status: RowStatus::Ok,
        }
    }

    pub fn from_error(algorithm: Algorithm, error: &SearchError) -> Self {
        let status = match error {
            SearchError::GoalNotFound(_) => RowStatus::GoalNotFound,
            SearchError::Unsatisfiable(_) => RowStatus::Unsatisfiable,
            SearchError::Rate(_) => RowStatus::UnknownMotion,
        };
        ComparisonRow {
            algorithm,
            unit_count: None,
            avg_success_rate: None,
            expansions: None,
            restarts: None,
            max_frontier: None,
            final_depth_bound: None,
            mean_branching: None,
            status,
        }
    }
}

/// Per-goal comparison across algorithms, one row per requested policy.
#[derive(Debug, Clone)]
pub struct ComparisonTable {
    pub goal: GoalSpec,
    pub rows: Vec<ComparisonRow>,
}

/// Runs every policy against the same query. A failing policy contributes an
/// error-marked row instead of aborting the table.
pub fn compare(
    graph: &FoonGraph,
    goal: &GoalSpec,
    kitchen: &Kitchen,
    rates: &MotionRateTable,
    policies: &[SearchPolicy],
) -> ComparisonTable {
    let rows = policies
        .iter()
        .map(|&policy| match resolve(graph, goal, kitchen, rates, policy) {
            Ok(report) => ComparisonRow::from_report(&report),
            Err(error) => ComparisonRow::from_error(policy.algorithm(), &error),
        })
        .collect();
    ComparisonTable {
        goal: goal.clone(),
        rows,
    }
}

fn fmt_opt_count(value: Option<usize>) -> String {
    value.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn fmt_opt_real(value: Option<f64>) -> String {
    value.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"))
}

impl ComparisonTable {
    /// Aligned plain-text rendering; rates shown to two decimal places.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("goal: {}\n", self.goal));
        out.push_str(&format!(
            "{:<12} {:>6} {:>9} {:>11} {:>9} {:>13} {:>12} {:>15}  {}\n",
            "algorithm",
            "units",
            "avg_rate",
            "expansions",
            "restarts",
            "max_frontier",
            "depth_bound",
            "mean_branching",
            "status",
        ));
        for row in &self.rows {
            out.push_str(&format!(
                "{:<12} {:>6} {:>9} {:>11} {:>9} {:>13} {:>12} {:>15}  {}\n",
                row.algorithm.to_string(),
                fmt_opt_count(row.unit_count),
                fmt_opt_real(row.avg_success_rate),
                fmt_opt_count(row.expansions),
                fmt_opt_count(row.restarts),
                fmt_opt_count(row.max_frontier),
                fmt_opt_count(row.final_depth_bound),
                fmt_opt_real(row.mean_branching),
                row.status,
            ));
        }
        out
    }

    /// JSON rendering: an array with one object per row, full precision.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize")
    }
}
