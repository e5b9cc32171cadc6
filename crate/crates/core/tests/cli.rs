use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn papertrail(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_papertrail"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Screens and resolves the committed fixture into `dir/profiles.json`.
fn profiles(dir: &Path) {
    let fx = fixture("case_study");
    let corpus = fx.join("corpus.csv");
    let merges = fx.join("merges.csv");
    let careers = fx.join("careers.csv");
    let o = papertrail(dir, &["screen", "--corpus", corpus.to_str().unwrap(), "--out", "included.csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = papertrail(
        dir,
        &[
            "resolve",
            "--corpus",
            "included.csv",
            "--merges",
            merges.to_str().unwrap(),
            "--careers",
            careers.to_str().unwrap(),
            "--out",
            "profiles.json",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

fn solution(dir: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(dir.join("solution.json")).unwrap()).unwrap()
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&papertrail(dir.path(), &[])), 2);
    assert_eq!(code(&papertrail(dir.path(), &["screen"])), 2);
    assert_eq!(code(&papertrail(dir.path(), &["cluster", "--profiles", "p.json", "--out", "s.json", "--linkage", "single"])), 2);
    assert_eq!(code(&papertrail(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&papertrail(dir.path(), &["--help"])), 0);
    assert_eq!(code(&papertrail(dir.path(), &["cluster", "--help"])), 0);
}

#[test]
fn data_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = papertrail(dir.path(), &["screen", "--corpus", "missing.csv", "--out", "x.csv"]);
    assert_eq!(code(&o), 1);
    assert!(!o.stderr.is_empty());
    std::fs::write(dir.path().join("bad.csv"), "publication_id,pub_year\nx,notayear\n").unwrap();
    assert_eq!(code(&papertrail(dir.path(), &["screen", "--corpus", "bad.csv", "--out", "x.csv"])), 1);
}

#[test]
fn bad_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "[cluster]\nlinkage = \"centroid\"\n").unwrap();
    std::fs::write(dir.path().join("unknown.toml"), "colour = \"blue\"\n").unwrap();
    for cfg in ["bad.toml", "unknown.toml", "absent.toml"] {
        let o = papertrail(dir.path(), &["--config", cfg, "synth", "--out", "s"]);
        assert_eq!(code(&o), 2, "{cfg}");
    }
}

#[test]
fn config_sets_defaults_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    profiles(dir.path());
    std::fs::write(
        dir.path().join("papertrail.toml"),
        "seed = 7\n\n[cluster]\nlinkage = \"average\"\nk_max = 6\ngap_iterations = 20\n",
    )
    .unwrap();
    let base = ["--config", "papertrail.toml", "cluster", "--profiles", "profiles.json", "--out", "solution.json"];
    let o = papertrail(dir.path(), &base);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = solution(dir.path());
    assert_eq!(s["config"]["linkage"], "average");
    assert_eq!(s["config"]["seed"], 7);
    assert_eq!(s["config"]["k_max"], 6);
    assert_eq!(s["gap"].as_array().unwrap().len(), 5);

    let mut args = base.to_vec();
    args.extend(["--linkage", "complete", "--seed", "9"]);
    assert_eq!(code(&papertrail(dir.path(), &args)), 0);
    let s = solution(dir.path());
    assert_eq!(s["config"]["linkage"], "complete");
    assert_eq!(s["config"]["seed"], 9);
    assert_eq!(s["config"]["k_max"], 6);
}

#[test]
fn sequential_flag_gives_the_same_solution() {
    let dir = tempfile::tempdir().unwrap();
    profiles(dir.path());
    let args = ["cluster", "--profiles", "profiles.json", "--gap-iters", "20", "--out", "solution.json"];
    assert_eq!(code(&papertrail(dir.path(), &args)), 0);
    let par = std::fs::read(dir.path().join("solution.json")).unwrap();
    let mut seq = vec!["--sequential"];
    seq.extend(args);
    assert_eq!(code(&papertrail(dir.path(), &seq)), 0);
    assert_eq!(par, std::fs::read(dir.path().join("solution.json")).unwrap());
}

#[test]
fn synth_writes_the_fixture_files() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&papertrail(dir.path(), &["synth", "--out", "s"])), 0);
    for f in papertrail::synth::SYNTH_FILES {
        assert_eq!(
            std::fs::read(dir.path().join("s").join(f)).unwrap(),
            std::fs::read(fixture("case_study").join(f)).unwrap(),
            "{f}"
        );
    }
}
