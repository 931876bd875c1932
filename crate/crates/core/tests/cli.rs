//! End-to-end checks of the command-line interface: exit codes,
//! reproducibility of result files, and the plot-data reshaping.

use std::path::Path;
use std::process::{Command, Output};

fn randmatch(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_randmatch"))
        .args(args)
        .current_dir(dir)
        .env_remove("RANDMATCH_SEED")
        .env_remove("RANDMATCH_THREADS")
        .output()
        .expect("spawn randmatch")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn generate_is_deterministic_and_parsable() {
    let dir = tempfile::tempdir().unwrap();
    let a = randmatch(dir.path(), &["generate", "--model", "gnnp", "--n", "8", "--p", "0.7", "--seed", "42"]);
    let b = randmatch(dir.path(), &["generate", "--model", "gnnp", "--n", "8", "--p", "0.7", "--seed", "42"]);
    let c = randmatch(dir.path(), &["generate", "--model", "gnnp", "--n", "8", "--p", "0.7", "--seed", "43"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must reproduce the instance");
    assert_ne!(a.stdout, c.stdout, "different seed must change the instance");
    assert!(stdout(&a).starts_with("bipartite 8 8\n"));
}

#[test]
fn solve_modes_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let status = randmatch(
        dir.path(),
        &["generate", "--model", "complete_bipartite", "--n", "5", "--seed", "7", "--out", "g.txt"],
    );
    assert!(status.status.success());

    let solved = randmatch(dir.path(), &["solve", "g.txt", "--mode", "assignment"]);
    assert!(solved.status.success());
    let text = stdout(&solved);
    assert!(text.starts_with("cost "));
    assert!(text.contains("certificate ok"));

    let seq = randmatch(dir.path(), &["solve", "g.txt", "--mode", "sequence", "--rmax", "3"]);
    assert!(seq.status.success());
    assert_eq!(stdout(&seq).lines().count(), 3);

    // Wrong graph kind for the mode is a precondition violation.
    let wrong = randmatch(dir.path(), &["solve", "g.txt", "--mode", "general"]);
    assert_eq!(wrong.status.code(), Some(4));

    // Unparsable input.
    std::fs::write(dir.path().join("bad.txt"), "not a graph\n").unwrap();
    let bad = randmatch(dir.path(), &["solve", "bad.txt", "--mode", "assignment"]);
    assert_eq!(bad.status.code(), Some(3));

    // A graph too sparse for a perfect matching is infeasible, not an error.
    let sparse = randmatch(
        dir.path(),
        &["generate", "--model", "gnnp", "--n", "6", "--p", "0.05", "--seed", "1", "--out", "s.txt"],
    );
    assert!(sparse.status.success());
    let infeasible = randmatch(dir.path(), &["solve", "s.txt", "--mode", "assignment"]);
    assert_eq!(infeasible.status.code(), Some(2));

    let _ = g;
}

#[test]
fn general_solve_reports_certificate() {
    let dir = tempfile::tempdir().unwrap();
    randmatch(
        dir.path(),
        &["generate", "--model", "gnp", "--n", "10", "--p", "0.9", "--seed", "11", "--out", "g.txt"],
    );
    let solved = randmatch(dir.path(), &["solve", "g.txt", "--mode", "general"]);
    assert!(solved.status.success());
    assert!(stdout(&solved).contains("certificate ok"));
}

/// Re-running an experiment from the same configuration reproduces the
/// result file byte-identically once the timestamp line is dropped.
#[test]
fn experiment_rerun_is_reproducible_except_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "experiment", "parisi", "--n", "6", "--trials", "50", "--seed", "9", "--out", "run.jsonl",
    ];
    assert!(randmatch(dir.path(), &args).status.success());
    let first = std::fs::read_to_string(dir.path().join("run.jsonl")).unwrap();
    assert!(randmatch(dir.path(), &args).status.success());
    let second = std::fs::read_to_string(dir.path().join("run.jsonl")).unwrap();

    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.contains("\"timestamp\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_ne!(first, "");
    assert_eq!(strip(&first), strip(&second));
    assert!(first.lines().next().unwrap().contains("\"type\":\"config\""));
    assert!(first.lines().any(|l| l.contains("\"type\":\"summary\"")));
}

#[test]
fn experiment_env_seed_and_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_randmatch"))
        .args(["experiment", "parisi", "--n", "6", "--trials", "20", "--format", "csv", "--out", "run.csv"])
        .current_dir(dir.path())
        .env("RANDMATCH_SEED", "77")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("run.csv")).unwrap();
    assert!(text.contains("\"base_seed\":77"), "env seed must reach the config echo");
    assert!(text.lines().any(|l| l.starts_with("trial_index,stream_id,outcome,")));
}

#[test]
fn experiment_config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("cfg.toml"), "n = 5\ntrials = 30\nseed = 3\n").unwrap();
    let out = randmatch(
        dir.path(),
        &["experiment", "parisi", "--config", "cfg.toml", "--trials", "10", "--out", "run.jsonl"],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("run.jsonl")).unwrap();
    let config: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(config["config"]["model"]["n"], 5);
    assert_eq!(config["config"]["trials"], 10, "flag overrides the file");
    assert_eq!(config["config"]["base_seed"], 3);
}

#[test]
fn unknown_experiment_is_a_precondition_violation() {
    let dir = tempfile::tempdir().unwrap();
    let out = randmatch(dir.path(), &["experiment", "nonsense"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn plotdata_tables() {
    let dir = tempfile::tempdir().unwrap();
    // Empty input still yields a header and exit 0.
    let empty = randmatch(dir.path(), &["plotdata", "--kind", "convergence"]);
    assert!(empty.status.success());
    assert_eq!(stdout(&empty), "n,p,mean,p_mean,standard_error,theory,relative_deviation\n");

    for (n, name) in [("40", "a.jsonl"), ("80", "b.jsonl")] {
        let out = randmatch(
            dir.path(),
            &["experiment", "theorem1", "--n", n, "--p", "0.5", "--trials", "10", "--seed", "4", "--out", name],
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let table = randmatch(dir.path(), &["plotdata", "--kind", "convergence", "b.jsonl", "a.jsonl"]);
    assert!(table.status.success());
    let text = stdout(&table);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("40,"), "rows are sorted by n");
    assert!(rows[2].starts_with("80,"));

    let inc = randmatch(
        dir.path(),
        &["experiment", "increments", "--n", "4", "--trials", "50", "--seed", "2", "--out", "inc.jsonl"],
    );
    assert!(inc.status.success());
    let table = randmatch(dir.path(), &["plotdata", "--kind", "increments", "inc.jsonl"]);
    assert!(table.status.success());
    assert_eq!(stdout(&table).lines().count(), 5, "header plus one row per r");
}

#[test]
fn diagnose_emits_structure_report() {
    let dir = tempfile::tempdir().unwrap();
    randmatch(
        dir.path(),
        &["generate", "--model", "complete_bipartite", "--n", "30", "--seed", "5", "--out", "g.txt"],
    );
    let out = randmatch(dir.path(), &["diagnose", "g.txt", "--pairs", "20", "--seed", "6"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["graph"], "bipartite");
    assert_eq!(report["negative_alternating_cycle"], false);
    assert!(report["max_matching_edge_cost"].as_f64().unwrap() > 0.0);
}
