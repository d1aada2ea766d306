//! End-to-end tests of the `foon` binary: exit codes, output files, and
//! byte-for-byte determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn testdata(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../testdata")
        .join(rel)
}

fn foon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn merge_corpus(dir: &Path) -> PathBuf {
    let out = dir.join("universal.foon");
    let run = foon(&[
        "merge",
        "-i",
        testdata("subgraphs").to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr(&run));
    out
}

#[test]
fn merge_reports_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first_out = dir.path().join("a.foon");
    let second_out = dir.path().join("b.foon");

    let first = foon(&[
        "merge",
        "-i",
        testdata("subgraphs").to_str().unwrap(),
        "-o",
        first_out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(
        stdout(&first),
        "files_read=11 units_seen=45 duplicates_dropped=1 units_total=44\n"
    );

    let second = foon(&[
        "merge",
        "-i",
        testdata("subgraphs").to_str().unwrap(),
        "-o",
        second_out.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(
        std::fs::read(&first_out).unwrap(),
        std::fs::read(&second_out).unwrap(),
        "merged outputs must be byte-identical"
    );
}

#[test]
fn merging_same_file_twice_drops_all_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.foon");
    let tea = testdata("subgraphs/tea.foon");
    let run = foon(&[
        "merge",
        "-i",
        tea.to_str().unwrap(),
        tea.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0);
    assert_eq!(
        stdout(&run),
        "files_read=2 units_seen=6 duplicates_dropped=3 units_total=3\n"
    );
}

#[test]
fn search_writes_tree_dot_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let universal = merge_corpus(dir.path());
    let tree = dir.path().join("tree.foon");
    let dot = dir.path().join("tree.dot");
    let json = dir.path().join("report.json");

    let run = foon(&[
        "search",
        "-f",
        universal.to_str().unwrap(),
        "-k",
        testdata("kitchen.txt").to_str().unwrap(),
        "-m",
        testdata("motions.txt").to_str().unwrap(),
        "-g",
        "macaroni",
        "-a",
        "bfs",
        "-o",
        tree.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr(&run));
    let summary = stdout(&run);
    assert!(
        summary.starts_with("bfs macaroni units=7 avg_rate="),
        "unexpected summary: {summary}"
    );

    let tree_text = std::fs::read_to_string(&tree).unwrap();
    assert_eq!(tree_text.matches("//\n").count(), 7, "seven units in the tree");

    let dot_text = std::fs::read_to_string(&dot).unwrap();
    assert!(dot_text.starts_with("digraph foon {"));
    assert!(dot_text.contains("shape=box"));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["algorithm"], "bfs");
    assert_eq!(report["unit_count"], 7);
    assert_eq!(report["status"], "ok");
}

#[test]
fn search_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let universal = merge_corpus(dir.path());
    let mut outputs = Vec::new();
    for round in 0..2 {
        let tree = dir.path().join(format!("tree{round}.foon"));
        let dot = dir.path().join(format!("tree{round}.dot"));
        let run = foon(&[
            "search",
            "-f",
            universal.to_str().unwrap(),
            "-k",
            testdata("kitchen.txt").to_str().unwrap(),
            "-m",
            testdata("motions.txt").to_str().unwrap(),
            "-g",
            "greek salad",
            "-a",
            "gbfs-rate",
            "-o",
            tree.to_str().unwrap(),
            "--dot",
            dot.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&run), 0);
        outputs.push((
            stdout(&run),
            std::fs::read(&tree).unwrap(),
            std::fs::read(&dot).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn goal_in_kitchen_gives_empty_tree_file() {
    let dir = tempfile::tempdir().unwrap();
    let universal = merge_corpus(dir.path());
    let tree = dir.path().join("tree.foon");
    let run = foon(&[
        "search",
        "-f",
        universal.to_str().unwrap(),
        "-k",
        testdata("kitchen.txt").to_str().unwrap(),
        "-g",
        "butter",
        "-a",
        "bfs",
        "-o",
        tree.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr(&run));
    assert!(stdout(&run).contains("units=0 avg_rate=n/a"));
    assert_eq!(std::fs::read_to_string(&tree).unwrap(), "");
}

#[test]
fn unsatisfiable_and_missing_goals_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let universal = merge_corpus(dir.path());
    let empty_kitchen = dir.path().join("empty_kitchen.txt");
    std::fs::write(&empty_kitchen, "").unwrap();

    let unsat = foon(&[
        "search",
        "-f",
        universal.to_str().unwrap(),
        "-k",
        empty_kitchen.to_str().unwrap(),
        "-g",
        "macaroni",
        "-a",
        "bfs",
    ]);
    assert_eq!(exit_code(&unsat), 1, "{}", stderr(&unsat));

    let missing = foon(&[
        "search",
        "-f",
        universal.to_str().unwrap(),
        "-k",
        testdata("kitchen.txt").to_str().unwrap(),
        "-g",
        "unicorn",
        "-a",
        "bfs",
    ]);
    assert_eq!(exit_code(&missing), 1);
}

#[test]
fn parse_errors_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.foon");
    std::fs::write(&bad, "O\twater\nS\thot\nQ\tnope\n").unwrap();

    let merge = foon(&["merge", "-i", bad.to_str().unwrap(), "-o", dir.path().join("o.foon").to_str().unwrap()]);
    assert_eq!(exit_code(&merge), 2);
    assert!(stderr(&merge).contains("bad.foon:3"), "{}", stderr(&merge));

    let validate = foon(&["validate", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&validate), 2);
    assert!(stderr(&validate).contains(":3"), "diagnostic names the line");
}

#[test]
fn validate_accepts_corpus_and_rejects_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let universal = merge_corpus(dir.path());
    let ok = foon(&["validate", universal.to_str().unwrap()]);
    assert_eq!(exit_code(&ok), 0);

    let duplicated = dir.path().join("dup.foon");
    let tea = std::fs::read_to_string(testdata("subgraphs/tea.foon")).unwrap();
    std::fs::write(&duplicated, format!("{tea}{tea}")).unwrap();
    let dup = foon(&["validate", duplicated.to_str().unwrap()]);
    assert_eq!(exit_code(&dup), 2);
    assert!(stderr(&dup).contains("duplicate"));
}

#[test]
fn gbfs_rate_without_rates_file_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let universal = merge_corpus(dir.path());
    let run = foon(&[
        "search",
        "-f",
        universal.to_str().unwrap(),
        "-k",
        testdata("kitchen.txt").to_str().unwrap(),
        "-g",
        "macaroni",
        "-a",
        "gbfs-rate",
    ]);
    assert_eq!(exit_code(&run), 3, "{}", stderr(&run));
}

#[test]
fn conflicting_rate_flags_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let universal = merge_corpus(dir.path());
    let run = foon(&[
        "search",
        "-f",
        universal.to_str().unwrap(),
        "-k",
        testdata("kitchen.txt").to_str().unwrap(),
        "-m",
        testdata("motions.txt").to_str().unwrap(),
        "-g",
        "macaroni",
        "-a",
        "bfs",
        "--strict-rates",
        "--default-rate",
        "0.5",
    ]);
    assert_eq!(exit_code(&run), 3);
}

#[test]
fn strict_mode_unknown_motion_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let universal = merge_corpus(dir.path());
    let sparse = dir.path().join("sparse.txt");
    std::fs::write(&sparse, "pour\t0.9\n").unwrap();
    let run = foon(&[
        "search",
        "-f",
        universal.to_str().unwrap(),
        "-k",
        testdata("kitchen.txt").to_str().unwrap(),
        "-m",
        sparse.to_str().unwrap(),
        "-g",
        "macaroni",
        "-a",
        "gbfs-rate",
        "--strict-rates",
    ]);
    assert_eq!(exit_code(&run), 4, "{}", stderr(&run));
}

#[test]
fn default_rate_fills_gaps() {
    let dir = tempfile::tempdir().unwrap();
    let universal = merge_corpus(dir.path());
    let sparse = dir.path().join("sparse.txt");
    std::fs::write(&sparse, "pour\t0.9\n").unwrap();
    let run = foon(&[
        "search",
        "-f",
        universal.to_str().unwrap(),
        "-k",
        testdata("kitchen.txt").to_str().unwrap(),
        "-m",
        sparse.to_str().unwrap(),
        "-g",
        "ice",
        "-a",
        "gbfs-rate",
        "--default-rate",
        "0.5",
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr(&run));
    assert!(stdout(&run).contains("avg_rate=0.70"), "{}", stdout(&run));
}

#[test]
fn compare_prints_all_four_rows() {
    let dir = tempfile::tempdir().unwrap();
    let universal = merge_corpus(dir.path());
    let json = dir.path().join("table.json");
    let run = foon(&[
        "compare",
        "-f",
        universal.to_str().unwrap(),
        "-k",
        testdata("kitchen.txt").to_str().unwrap(),
        "-m",
        testdata("motions.txt").to_str().unwrap(),
        "-g",
        "ice",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&run), 0, "{}", stderr(&run));
    let text = stdout(&run);
    for algorithm in ["bfs", "ids", "gbfs-rate", "gbfs-count"] {
        assert!(text.contains(algorithm), "missing row {algorithm} in:\n{text}");
    }
    let rows: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 4);
}

#[test]
fn export_dot_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.dot");
    let second = dir.path().join("b.dot");
    for path in [&first, &second] {
        let run = foon(&[
            "export-dot",
            "-f",
            testdata("subgraphs/ice_cubes.foon").to_str().unwrap(),
            "-m",
            testdata("motions.txt").to_str().unwrap(),
            "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&run), 0);
    }
    let a = std::fs::read_to_string(&first).unwrap();
    assert_eq!(a, std::fs::read_to_string(&second).unwrap());
    assert!(a.contains("pour (0.90)"));
    assert!(a.contains("freeze (0.85)"));
}

#[test]
fn stats_match_known_corpus_counts() {
    let dir = tempfile::tempdir().unwrap();
    let universal = merge_corpus(dir.path());
    let run = foon(&["stats", "-f", universal.to_str().unwrap()]);
    assert_eq!(exit_code(&run), 0);
    let text = stdout(&run);
    assert!(text.starts_with("units=44 "), "unexpected stats: {text}");
    assert!(text.contains("motions=33"), "unexpected stats: {text}");
}

#[test]
fn missing_input_file_exits_three() {
    let run = foon(&["stats", "-f", "/nonexistent/nope.foon"]);
    assert_eq!(exit_code(&run), 3);
}
