use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn specs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("invlab-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn invlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invlab"))
        .args(args)
        .env_remove("INVLAB_THREADS")
        .output()
        .unwrap()
}

fn text(o: &Output) -> String {
    format!(
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    )
}

fn spec(name: &str) -> String {
    specs().join(name).to_string_lossy().into_owned()
}

fn check_trailer(csv: &Path) {
    let body = fs::read_to_string(csv).unwrap();
    let last = body.lines().last().unwrap();
    assert!(
        last.starts_with("# invlab ") && last.contains("config_hash="),
        "{last}"
    );
    let hash = last.rsplit('=').next().unwrap();
    assert_eq!(hash.len(), 64);
}

#[test]
fn delta_is_invertible() {
    let out = scratch("delta");
    let o = invlab(&[
        "check-invertibility",
        "--function",
        &spec("delta.json"),
        "--A",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    assert!(text(&o).contains("PASS"));
    check_trailer(&out.join("check_invertibility.csv"));
    let header = fs::read_to_string(out.join("check_invertibility.csv")).unwrap();
    assert!(header.starts_with("xi_norm,ball_radius,best_abs_F,threshold,pass\n"));
    let verdict: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("verdict.json")).unwrap()).unwrap();
    assert_eq!(verdict["verdict"]["verdict"], "satisfied-at");
}

#[test]
fn super_decaying_symbol_is_violated() {
    let out = scratch("violated");
    let o = invlab(&[
        "check-invertibility",
        "--function",
        &spec("super_decaying.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", text(&o));
    assert!(text(&o).contains("violated"));
}

#[test]
fn malformed_spec_names_the_key() {
    let dir = scratch("malformed");
    let bad = dir.join("bad.json");
    fs::write(
        &bad,
        r#"{"dimension": 1, "atoms": [{"coeff": [1.0, 0.0], "derivs": [0], "point": [0.0]}]}"#,
    )
    .unwrap();
    let o = invlab(&[
        "check-invertibility",
        "--function",
        bad.to_str().unwrap(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", text(&o));
    assert!(text(&o).contains("derivs"), "{}", text(&o));
}

#[test]
fn config_with_unknown_key() {
    let dir = scratch("config");
    let cfg = dir.join("run.json");
    fs::write(&cfg, r#"{"scenario": "full-suite", "horizn": 10}"#).unwrap();
    let o = invlab(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("horizn"), "{}", text(&o));
}

#[test]
fn missing_file_and_bad_numbers_are_config_errors() {
    let o = invlab(&["check-invertibility", "--function", "/nonexistent/f.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = invlab(&[
        "check-invertibility",
        "--function",
        &spec("delta.json"),
        "--horizon=-3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("horizon"));
    let o = invlab(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_thread_variable_is_a_config_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_invlab"))
        .args(["rank-one", "verify", "--suite", "dual", "--out"])
        .arg(scratch("threads"))
        .env("INVLAB_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", text(&o));
}

#[test]
fn rank_one_suite_csv() {
    let out = scratch("rank-one");
    let o = invlab(&[
        "--threads",
        "1",
        "rank-one",
        "verify",
        "--suite",
        "radon",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    let path = out.join("rank_one_radon.csv");
    assert!(fs::read_to_string(&path)
        .unwrap()
        .starts_with("case,x,lhs,rhs,residual\n"));
    check_trailer(&path);
}

#[test]
fn fundamental_solution_artifacts() {
    let out = scratch("fundamental");
    let o = invlab(&[
        "fundamental-solution",
        "--mu",
        &spec("hyperbolic_laplacian.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("residuals.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["gate_a"], 2.0);
    let bin = fs::read(out.join("quotient.bin")).unwrap();
    // header: dimension, size, bounds; then 16 bytes per sample
    assert_eq!(bin.len(), 8 + 8 + 16 + 4096 * 16);
    check_trailer(&out.join("fundamental_solution.csv"));
}

#[test]
fn fundamental_solution_refuses_super_decaying() {
    let out = scratch("refuse");
    let o = invlab(&[
        "fundamental-solution",
        "--mu",
        &spec("super_decaying.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        text(&o).contains("refused") && text(&o).contains("violated"),
        "{}",
        text(&o)
    );
}

#[test]
fn witness_family_report() {
    let out = scratch("witness");
    let o = invlab(&[
        "witness-family",
        "--function",
        &spec("super_decaying.json"),
        "--group",
        "signs",
        "--jmax",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    let csv = fs::read_to_string(out.join("witness_family.csv")).unwrap();
    assert!(csv.starts_with("j,xi_j,k_j,F_at_xi,bound,pass\n"));
    assert_eq!(csv.lines().count(), 1 + 3 + 1);
    assert!(out.join("witness_properties.json").is_file());
}

#[test]
fn slowly_decreasing_symbol_has_no_witness_family() {
    let out = scratch("no-witness");
    let o = invlab(&[
        "witness-family",
        "--function",
        &spec("delta.json"),
        "--jmax",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", text(&o));
}

#[test]
fn identical_runs_give_identical_csvs() {
    let a = scratch("det-a");
    let b = scratch("det-b");
    for dir in [&a, &b] {
        let o = invlab(&[
            "rank-one",
            "verify",
            "--suite",
            "diagram",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(
        fs::read(a.join("rank_one_diagram.csv")).unwrap(),
        fs::read(b.join("rank_one_diagram.csv")).unwrap()
    );
}
