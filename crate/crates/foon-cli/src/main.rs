//! `foon` — build, inspect, and search universal FOONs from the command
//! line.
//!
//! Exit codes: 0 ok, 1 goal unsatisfiable or not found, 2 parse/validation
//! error, 3 argument error, 4 unknown motion in strict mode.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use foon_core::dot::render_units;
use foon_core::graph::FoonGraph;
use foon_core::merge::{merge_files, merge_units, MergeError};
use foon_core::metrics::{compare, ComparisonRow};
use foon_core::model::{FunctionalUnit, GoalSpec, Kitchen};
use foon_core::parser::{parse_kitchen, parse_motion_rates, parse_subgraph};
use foon_core::rates::MotionRateTable;
use foon_core::search::{resolve, Heuristic, SearchError, SearchPolicy, SearchReport};
use foon_core::serialize::serialize_subgraph;

const EXIT_GOAL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_ARGS: u8 = 3;
const EXIT_UNKNOWN_MOTION: u8 = 4;

#[derive(Parser)]
#[command(name = "foon", version, about = "Build, inspect, and search universal FOONs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Merge subgraph files (or directories of *.foon files) into one
    /// deduplicated universal FOON.
    Merge {
        /// Input files or directories; directories expand to their *.foon
        /// files in lexicographic order.
        #[arg(short = 'i', long = "input", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        /// Where to write the merged graph (canonical form).
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Retrieve a task tree for a goal object.
    Search {
        #[command(flatten)]
        query: QueryArgs,
        /// Search algorithm.
        #[arg(short = 'a', long = "algorithm")]
        algorithm: AlgorithmArg,
        /// Write the task tree as canonical FOON text.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Write the task tree as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the search report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Initial depth bound for ids.
        #[arg(long = "depth-start", default_value_t = 0)]
        depth_start: usize,
    },
    /// Run all four algorithms against one goal and print a comparison
    /// table.
    Compare {
        #[command(flatten)]
        query: QueryArgs,
        /// Also write the table as JSON (one object per row).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print unit, object, motion, and canonical line counts for a file.
    Stats {
        #[arg(short = 'f', long = "foon")]
        file: PathBuf,
    },
    /// Check that a file parses and satisfies the graph invariants.
    Validate {
        file: PathBuf,
    },
    /// Render a subgraph or task-tree file as Graphviz DOT.
    ExportDot {
        #[arg(short = 'f', long = "foon")]
        file: PathBuf,
        /// Motion rate file; rates annotate the motion boxes.
        #[arg(short = 'm', long = "motions")]
        motions: Option<PathBuf>,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

/// Arguments shared by `search` and `compare`.
#[derive(Args)]
struct QueryArgs {
    /// The universal FOON file.
    #[arg(short = 'f', long = "foon")]
    graph: PathBuf,
    /// The kitchen file (objects available as-is).
    #[arg(short = 'k', long = "kitchen")]
    kitchen: PathBuf,
    /// Motion success-rate file.
    #[arg(short = 'm', long = "motions")]
    motions: Option<PathBuf>,
    /// Goal object: `name` or `name|state1,state2`.
    #[arg(short = 'g', long = "goal")]
    goal: String,
    /// Treat motions missing from the rate table as errors.
    #[arg(long = "strict-rates", conflicts_with = "default_rate")]
    strict_rates: bool,
    /// Fallback success rate for motions missing from the table.
    #[arg(long = "default-rate")]
    default_rate: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Bfs,
    Ids,
    GbfsRate,
    GbfsCount,
}

/// A failure carrying its documented exit code.
struct CmdError {
    code: u8,
    message: String,
}

impl CmdError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CmdError {
            code,
            message: message.into(),
        }
    }
}

impl From<foon_core::parser::ParseError> for CmdError {
    fn from(e: foon_core::parser::ParseError) -> Self {
        CmdError::new(EXIT_PARSE, e.to_string())
    }
}

impl From<MergeError> for CmdError {
    fn from(e: MergeError) -> Self {
        match e {
            MergeError::Parse(parse) => parse.into(),
            MergeError::Io { .. } => CmdError::new(EXIT_ARGS, e.to_string()),
        }
    }
}

impl From<SearchError> for CmdError {
    fn from(e: SearchError) -> Self {
        let code = match e {
            SearchError::GoalNotFound(_) | SearchError::Unsatisfiable(_) => EXIT_GOAL,
            SearchError::Rate(_) => EXIT_UNKNOWN_MOTION,
        };
        CmdError::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_ARGS,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("foon: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CmdError> {
    match cli.command {
        Command::Merge { inputs, output } => cmd_merge(&inputs, &output),
        Command::Search {
            query,
            algorithm,
            output,
            dot,
            json,
            depth_start,
        } => cmd_search(&query, algorithm, output, dot, json, depth_start),
        Command::Compare { query, json } => cmd_compare(&query, json),
        Command::Stats { file } => cmd_stats(&file),
        Command::Validate { file } => cmd_validate(&file),
        Command::ExportDot {
            file,
            motions,
            output,
        } => cmd_export_dot(&file, motions.as_deref(), &output),
    }
}

/// Expands directory arguments to their `*.foon` files, sorted
/// lexicographically; plain files pass through.
fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, CmdError> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(input)
                .map_err(|e| CmdError::new(EXIT_ARGS, format!("cannot read {}: {e}", input.display())))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|path| path.extension().is_some_and(|ext| ext == "foon"))
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(input.clone());
        }
    }
    Ok(files)
}

fn cmd_merge(inputs: &[PathBuf], output: &Path) -> Result<(), CmdError> {
    let files = expand_inputs(inputs)?;
    let (graph, report) = merge_files(&files)?;
    write_file(output, &serialize_subgraph(graph.units()))?;
    println!(
        "files_read={} units_seen={} duplicates_dropped={} units_total={}",
        report.files_read, report.units_seen, report.duplicates_dropped, report.units_total
    );
    Ok(())
}

fn read_file(path: &Path) -> Result<String, CmdError> {
    std::fs::read_to_string(path)
        .map_err(|e| CmdError::new(EXIT_ARGS, format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CmdError> {
    std::fs::write(path, contents)
        .map_err(|e| CmdError::new(EXIT_ARGS, format!("cannot write {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<FoonGraph, CmdError> {
    let text = read_file(path)?;
    let units = parse_subgraph(&text, &path.display().to_string())?;
    let (graph, _) = merge_units(FoonGraph::new(), units);
    Ok(graph)
}

fn load_query(query: &QueryArgs) -> Result<(FoonGraph, Kitchen, MotionRateTable, GoalSpec), CmdError> {
    let graph = load_graph(&query.graph)?;
    let kitchen_text = read_file(&query.kitchen)?;
    let kitchen = parse_kitchen(&kitchen_text, &query.kitchen.display().to_string())?;

    let mut rates = match &query.motions {
        Some(path) => {
            let text = read_file(path)?;
            let (table, warnings) = parse_motion_rates(&text, &path.display().to_string())?;
            for warning in warnings {
                eprintln!("foon: {warning}");
            }
            table
        }
        None => MotionRateTable::new(),
    };
    if let Some(rate) = query.default_rate {
        rates = rates
            .with_default(rate)
            .map_err(|e| CmdError::new(EXIT_ARGS, e.to_string()))?;
    }
    if query.strict_rates {
        rates = rates.strict();
    }

    let goal: GoalSpec = query
        .goal
        .parse()
        .map_err(|e| CmdError::new(EXIT_ARGS, format!("bad goal \"{}\": {e}", query.goal)))?;
    Ok((graph, kitchen, rates, goal))
}

fn policy_of(algorithm: AlgorithmArg, depth_start: usize) -> SearchPolicy {
    match algorithm {
        AlgorithmArg::Bfs => SearchPolicy::Bfs,
        AlgorithmArg::Ids => SearchPolicy::Ids {
            initial_depth_bound: depth_start,
        },
        AlgorithmArg::GbfsRate => SearchPolicy::Gbfs {
            heuristic: Heuristic::SuccessRate,
        },
        AlgorithmArg::GbfsCount => SearchPolicy::Gbfs {
            heuristic: Heuristic::InputCount,
        },
    }
}

fn tree_units(graph: &FoonGraph, report: &SearchReport) -> Vec<FunctionalUnit> {
    report
        .tree
        .units()
        .iter()
        .map(|&index| graph.unit(index).clone())
        .collect()
}

fn cmd_search(
    query: &QueryArgs,
    algorithm: AlgorithmArg,
    output: Option<PathBuf>,
    dot: Option<PathBuf>,
    json: Option<PathBuf>,
    depth_start: usize,
) -> Result<(), CmdError> {
    if matches!(algorithm, AlgorithmArg::GbfsRate) && query.motions.is_none() {
        return Err(CmdError::new(
            EXIT_ARGS,
            "gbfs-rate needs a motion rate file (-m)",
        ));
    }
    let (graph, kitchen, rates, goal) = load_query(query)?;
    let policy = policy_of(algorithm, depth_start);
    let report = resolve(&graph, &goal, &kitchen, &rates, policy)?;

    let units = tree_units(&graph, &report);
    if let Some(path) = output {
        write_file(&path, &serialize_subgraph(&units))?;
    }
    if let Some(path) = dot {
        let rate_table = query.motions.as_ref().map(|_| &rates);
        write_file(&path, &render_units(&units, rate_table))?;
    }
    if let Some(path) = json {
        let row = ComparisonRow::from_report(&report);
        let text = serde_json::to_string_pretty(&row).expect("row serializes");
        write_file(&path, &format!("{text}\n"))?;
    }

    let avg = match report.avg_success_rate {
        Some(rate) => format!("{rate:.2}"),
        None => "n/a".to_string(),
    };
    println!(
        "{} {} units={} avg_rate={} expansions={}",
        report.algorithm, report.goal, report.unit_count, avg, report.expansions
    );
    Ok(())
}

fn cmd_compare(query: &QueryArgs, json: Option<PathBuf>) -> Result<(), CmdError> {
    let (graph, kitchen, rates, goal) = load_query(query)?;
    let policies = [
        SearchPolicy::Bfs,
        SearchPolicy::ids(),
        SearchPolicy::Gbfs {
            heuristic: Heuristic::SuccessRate,
        },
        SearchPolicy::Gbfs {
            heuristic: Heuristic::InputCount,
        },
    ];
    let table = compare(&graph, &goal, &kitchen, &rates, &policies);
    if let Some(path) = json {
        write_file(&path, &format!("{}\n", table.to_json()))?;
    }
    print!("{}", table.render_text());
    Ok(())
}

fn cmd_stats(file: &Path) -> Result<(), CmdError> {
    let text = read_file(file)?;
    let units = parse_subgraph(&text, &file.display().to_string())?;
    let objects: BTreeSet<_> = units
        .iter()
        .flat_map(|u| u.inputs().iter().chain(u.outputs()))
        .collect();
    let motions: BTreeSet<_> = units.iter().map(|u| u.motion().name()).collect();
    let lines = serialize_subgraph(&units).matches('\n').count();
    println!(
        "units={} objects={} motions={} lines={}",
        units.len(),
        objects.len(),
        motions.len(),
        lines
    );
    Ok(())
}

fn cmd_validate(file: &Path) -> Result<(), CmdError> {
    let text = read_file(file)?;
    let units = parse_subgraph(&text, &file.display().to_string())?;
    let seen = units.len();
    let (graph, report) = merge_units(FoonGraph::new(), units);
    if report.duplicates_dropped > 0 {
        return Err(CmdError::new(
            EXIT_PARSE,
            format!(
                "{}: {} duplicate functional unit(s)",
                file.display(),
                report.duplicates_dropped
            ),
        ));
    }
    graph
        .check_invariants()
        .map_err(|e| CmdError::new(EXIT_PARSE, format!("{}: {e}", file.display())))?;
    println!("ok: {} units", seen);
    Ok(())
}

fn cmd_export_dot(file: &Path, motions: Option<&Path>, output: &Path) -> Result<(), CmdError> {
    let text = read_file(file)?;
    let units = parse_subgraph(&text, &file.display().to_string())?;
    let rates = match motions {
        Some(path) => {
            let rate_text = read_file(path)?;
            let (table, warnings) = parse_motion_rates(&rate_text, &path.display().to_string())?;
            for warning in warnings {
                eprintln!("foon: {warning}");
            }
            Some(table)
        }
        None => None,
    };
    write_file(output, &render_units(&units, rates.as_ref()))?;
    Ok(())
}
