//! End-to-end CLI tests: pipeline wiring, exit codes, and byte-level
//! reproducibility of every artifact.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ed3(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ed3"))
        .args(args)
        .current_dir(dir)
        .env_remove("ED3_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn assert_success(output: &Output) {
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

/// Snapshot of every file under a directory.
fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                files.insert(
                    path.strip_prefix(root).unwrap().to_path_buf(),
                    fs::read(&path).unwrap(),
                );
            }
        }
    }
    files
}

fn simulate_pools(dir: &Path) {
    assert_success(&ed3(
        &[
            "simulate", "--state", "normal", "--n", "40", "--pairs", "250", "--seed", "7",
            "--out", "pools/normal",
        ],
        dir,
    ));
    assert_success(&ed3(
        &[
            "simulate", "--state", "erroneous", "--lambda", "0.1", "--n", "12", "--pairs",
            "250", "--seed", "1007", "--out", "pools/err",
        ],
        dir,
    ));
}

#[test]
fn simulate_writes_reproducible_pools() {
    let tmp = tempfile::tempdir().unwrap();
    simulate_pools(tmp.path());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("pools/normal/manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["state"], "normal");
    assert_eq!(manifest["n"], 40);
    assert_eq!(manifest["members"].as_array().unwrap().len(), 40);

    let first = tree(&tmp.path().join("pools"));
    fs::remove_dir_all(tmp.path().join("pools")).unwrap();
    simulate_pools(tmp.path());
    assert_eq!(first, tree(&tmp.path().join("pools")), "rerun changed pool bytes");
}

#[test]
fn detect_pipeline_end_to_end() {
    let tmp = tempfile::tempdir().unwrap();
    simulate_pools(tmp.path());
    assert_success(&ed3(
        &[
            "dataset", "--normal-pool", "pools/normal/manifest.json", "--erroneous-pool",
            "pools/err/manifest.json", "--n-normal", "25", "--n-erroneous", "5", "--seed",
            "3", "--out", "ds.json",
        ],
        tmp.path(),
    ));

    assert_success(&ed3(
        &[
            "detect", "--method", "both", "--gamma", "0.002", "--decomposition", "--in",
            "ds.json", "--out", "rep",
        ],
        tmp.path(),
    ));

    let naive: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("rep/scores_naive.json")).unwrap())
            .unwrap();
    assert_eq!(naive["method"], "naive");
    assert_eq!(naive["scores"].as_array().unwrap().len(), 30);
    assert_eq!(naive["labels"].as_array().unwrap().len(), 30);

    let ed3_scores: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("rep/scores_ed3.json")).unwrap())
            .unwrap();
    assert_eq!(ed3_scores["method"], "ed3");

    let decomposition: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(tmp.path().join("rep/decomposition.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(decomposition["omegas"].as_array().unwrap().len(), 30);

    let elements = fs::read_to_string(tmp.path().join("rep/elements.csv")).unwrap();
    let header = elements.lines().next().unwrap();
    assert_eq!(
        header,
        "k,label,raw_12,raw_14,raw_22,naive_score,est_12,est_14,est_22,ed3_score"
    );
    assert_eq!(elements.trim().lines().count(), 31);

    // Scores round-trip byte-identically through the typed schema.
    let raw = fs::read_to_string(tmp.path().join("rep/scores_naive.json")).unwrap();
    let reparsed: ed3::detector::ScoreReport = serde_json::from_str(&raw).unwrap();
    let mut rewritten = serde_json::to_string_pretty(&reparsed).unwrap();
    rewritten.push('\n');
    assert_eq!(raw, rewritten);
}

#[test]
fn detect_on_identical_matrices_scores_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let entries: Vec<Vec<f64>> = vec![
        vec![0.5, 0.0, 0.0, 0.5],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.5, 0.0, 0.0, 0.5],
    ];
    let matrix = serde_json::json!({"dim": 4, "re": entries});
    let dataset = serde_json::json!({"matrices": [matrix.clone(), matrix.clone(), matrix]});
    fs::write(tmp.path().join("ds.json"), dataset.to_string()).unwrap();
    assert_success(&ed3(
        &["detect", "--method", "naive", "--in", "ds.json", "--out", "rep"],
        tmp.path(),
    ));
    let naive: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("rep/scores_naive.json")).unwrap())
            .unwrap();
    assert!(naive["scores"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s.as_f64().unwrap() == 0.0));
}

#[test]
fn exit_codes_follow_the_contract() {
    let tmp = tempfile::tempdir().unwrap();

    // Missing gamma for the ed3 method: invalid arguments.
    fs::write(tmp.path().join("ds.json"), "{\"matrices\": []}").unwrap();
    let out = ed3(
        &["detect", "--method", "ed3", "--in", "ds.json", "--out", "rep"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    // Unknown flag: clap rejects with exit 2.
    let out = ed3(&["simulate", "--bogus"], tmp.path());
    assert_eq!(out.status.code(), Some(2));

    // Out-of-range dephasing: invalid argument from the library.
    let out = ed3(
        &[
            "simulate", "--state", "erroneous", "--lambda", "0.9", "--n", "2", "--out", "p",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    // Missing input file: I/O failure.
    let out = ed3(
        &["detect", "--method", "naive", "--in", "missing.json", "--out", "rep"],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(4));

    // Iteration-starved solver: convergence failure, partial results on disk.
    simulate_pools(tmp.path());
    assert_success(&ed3(
        &[
            "dataset", "--normal-pool", "pools/normal/manifest.json", "--erroneous-pool",
            "pools/err/manifest.json", "--n-normal", "10", "--n-erroneous", "2", "--seed",
            "1", "--out", "small.json",
        ],
        tmp.path(),
    ));
    let out = ed3(
        &[
            "detect", "--method", "ed3", "--gamma", "1e-7", "--in", "small.json", "--out",
            "starved",
        ],
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(tmp.path().join("starved/scores_ed3_partial.json").exists());
    assert!(tmp
        .path()
        .join("starved/decomposition_partial.json")
        .exists());
}

#[test]
fn evaluate_is_deterministic_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    simulate_pools(tmp.path());
    let run = |workers: &str, out: &str| {
        assert_success(&ed3(
            &[
                "evaluate", "--normal-pool", "pools/normal/manifest.json",
                "--erroneous-pool", "pools/err/manifest.json", "--n-datasets", "8",
                "--preliminary", "3", "--n-normal", "12", "--n-erroneous", "3", "--seed",
                "11", "--workers", workers, "--out", out,
            ],
            tmp.path(),
        ));
    };
    run("1", "eval_a");
    run("4", "eval_b");
    let a = tree(&tmp.path().join("eval_a"));
    let b = tree(&tmp.path().join("eval_b"));
    // run_config echoes the worker count; everything else must match.
    let scrub = |mut files: BTreeMap<PathBuf, Vec<u8>>| {
        files.remove(Path::new("run_config.json"));
        files
    };
    assert_eq!(scrub(a), scrub(b), "worker count changed evaluation output");

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("eval_a/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["n_datasets"], 8);
    assert!(report["naive"]["auc_values"].as_array().unwrap().len() == 8);
    assert!(tmp.path().join("eval_a/roc/ed3_007.csv").exists());
    assert!(tmp.path().join("eval_a/histogram.csv").exists());
}

#[test]
fn evaluate_self_test_oracle_hits_100() {
    let tmp = tempfile::tempdir().unwrap();
    simulate_pools(tmp.path());
    let out = ed3(
        &[
            "evaluate", "--normal-pool", "pools/normal/manifest.json", "--erroneous-pool",
            "pools/err/manifest.json", "--n-datasets", "5", "--n-normal", "10",
            "--n-erroneous", "2", "--seed", "2", "--self-test", "oracle", "--out", "st",
        ],
        tmp.path(),
    );
    assert_success(&out);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("st/selftest.json")).unwrap())
            .unwrap();
    assert_eq!(report["detector"], "oracle");
    assert_eq!(report["mean"].as_f64().unwrap(), 100.0);
}
