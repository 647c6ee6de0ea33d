//! End-to-end checks of the binary: exit codes, artifact emission, and
//! byte-identical reruns under a fixed configuration.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn varuq(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varuq"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("varuq-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_sample_csv(dir: &Path) -> PathBuf {
    let path = dir.join("preds.csv");
    let mut contents = String::from("id,label,member,p0,p1\n");
    for (i, (label, p0a, p0b)) in [
        (0usize, 0.9, 0.8),
        (1usize, 0.2, 0.3),
        (0usize, 0.6, 0.4),
        (1usize, 0.1, 0.2),
    ]
    .iter()
    .enumerate()
    {
        contents.push_str(&format!("x{i},{label},0,{p0a},{}\n", 1.0 - p0a));
        contents.push_str(&format!("x{i},{label},1,{p0b},{}\n", 1.0 - p0b));
    }
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn measure_writes_score_columns_and_manifest() {
    let dir = temp_dir("measure");
    write_sample_csv(&dir);
    let out = varuq(
        &[
            "measure",
            "--in",
            "preds.csv",
            "--measures",
            "tu_var,eu_ent",
            "--out",
            "artifacts",
        ],
        &dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let scores = fs::read_to_string(dir.join("artifacts/scores.csv")).unwrap();
    assert!(scores.starts_with("id,tu_var,eu_ent\n"));
    assert_eq!(scores.lines().count(), 5);
    // the variance family always carries its label-wise triples
    assert!(dir.join("artifacts/labelwise.csv").exists());
    let manifest = fs::read_to_string(dir.join("artifacts/run.json")).unwrap();
    assert!(manifest.contains("\"command\": \"measure\""));
    assert!(manifest.contains("\"measures\": \"tu_var,eu_ent\""));
}

#[test]
fn unknown_measure_is_a_usage_error() {
    let dir = temp_dir("unknown-measure");
    write_sample_csv(&dir);
    let out = varuq(
        &["measure", "--in", "preds.csv", "--measures", "tu_bogus"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn schema_violations_exit_two_with_the_line() {
    let dir = temp_dir("schema");
    fs::write(
        dir.join("bad.csv"),
        "id,label,member,p0,p1\na,0,0,0.5,0.4\n",
    )
    .unwrap();
    let out = varuq(&["measure", "--in", "bad.csv"], &dir);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bad.csv:2"), "stderr: {stderr}");
}

#[test]
fn weighted_scoring_accepts_matching_weights() {
    let dir = temp_dir("weights");
    let path = dir.join("k3.csv");
    fs::write(
        &path,
        "id,label,member,p0,p1,p2\na,0,0,0.7,0.2,0.1\na,0,1,0.5,0.3,0.2\n",
    )
    .unwrap();
    let ok = varuq(
        &[
            "measure",
            "--in",
            "k3.csv",
            "--measures",
            "tu_var",
            "--weights",
            "1,1,2",
        ],
        &dir,
    );
    assert!(ok.status.success());
    let bad = varuq(
        &[
            "measure",
            "--in",
            "k3.csv",
            "--measures",
            "tu_var",
            "--weights",
            "1,1",
        ],
        &dir,
    );
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn identical_configs_produce_byte_identical_artifacts() {
    let dir = temp_dir("determinism");
    for run in ["syn-one", "syn-two"] {
        let out = varuq(&["synth", "--seed", "9", "--out", run], &dir);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for run in ["arc-one", "arc-two"] {
        let arc = varuq(
            &[
                "arc",
                "--in",
                "syn-one/test.csv",
                "--out",
                run,
                "--seed",
                "9",
            ],
            &dir,
        );
        assert!(arc.status.success());
    }
    for file in ["train.csv", "test.csv", "ood.csv", "run.json"] {
        let a = fs::read(dir.join("syn-one").join(file)).unwrap();
        let b = fs::read(dir.join("syn-two").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
    }
    for file in ["arc.csv", "arc.svg", "run.json"] {
        let a = fs::read(dir.join("arc-one").join(file)).unwrap();
        let b = fs::read(dir.join("arc-two").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
    }
}

#[test]
fn axioms_gate_passes_for_the_variance_family() {
    let dir = temp_dir("axioms");
    let out = varuq(
        &[
            "axioms", "--family", "variance", "--cases", "120", "--seed", "5",
        ],
        &dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("axiom=A0 family=variance"));
    assert!(stdout.contains("violations=0"));
    assert!(stdout.contains("verdict: PASS"));
    assert!(dir.join("axioms.txt").exists());
}

#[test]
fn axioms_report_entropy_shift_violations_without_failing() {
    let dir = temp_dir("axioms-ent");
    let out = varuq(
        &[
            "axioms", "--family", "entropy", "--axioms", "A5", "--cases", "60", "--seed", "5",
        ],
        &dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    let a5 = stdout
        .lines()
        .find(|l| l.starts_with("axiom=A5 family=entropy"))
        .expect("A5 line");
    assert!(a5.contains("expected_clean=no"));
    let violations: usize = a5
        .split_whitespace()
        .find_map(|f| f.strip_prefix("violations="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(violations >= 1, "line: {a5}");
}

#[test]
fn config_file_values_are_overridden_by_flags() {
    let dir = temp_dir("config");
    write_sample_csv(&dir);
    fs::write(
        dir.join("cfg.json"),
        "{\"in\": \"preds.csv\", \"measures\": \"tu_ent\", \"out\": \"from-config\"}",
    )
    .unwrap();
    let out = varuq(
        &["measure", "--config", "cfg.json", "--measures", "eu_var"],
        &dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let scores = fs::read_to_string(dir.join("from-config/scores.csv")).unwrap();
    assert!(
        scores.starts_with("id,eu_var\n"),
        "flag should override the config"
    );
}

#[test]
fn figure1_emits_table_csv_and_panel_svgs() {
    let dir = temp_dir("fig1");
    let out = varuq(
        &["figure1", "--n", "2000", "--seed", "3", "--out", "fig"],
        &dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("panel"));
    assert!(stdout.contains("U[0.3,0.7]"));
    assert!(dir.join("fig/figure1.csv").exists());
    for panel in ["a", "b", "c", "d", "e", "f"] {
        assert!(dir.join(format!("fig/figure1_{panel}.svg")).exists());
    }
}

#[test]
fn hist_writes_paired_counts() {
    let dir = temp_dir("hist");
    write_sample_csv(&dir);
    let out = varuq(
        &[
            "hist",
            "--in",
            "preds.csv",
            "--measure",
            "tu_ent",
            "--bins",
            "4",
        ],
        &dir,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let hist = fs::read_to_string(dir.join("hist.csv")).unwrap();
    assert!(hist.starts_with("bin_lo,bin_hi,correct,incorrect\n"));
    assert_eq!(hist.lines().count(), 5);
}
