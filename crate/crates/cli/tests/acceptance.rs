//! Runs the full suite twice with the same seed. Criteria 1-8 are graded on
//! the first run, including their runtime budgets; criterion 9 compares the
//! CSVs of both runs byte for byte.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use invlab::config::{Scenario, ScenarioConfig};
use invlab::scenarios::run_full_suite;

const BUDGET_SECS: [u64; 8] = [30, 60, 60, 120, 120, 120, 5, 30];

fn csv_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .expect("output directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    v.sort();
    v
}

fn main() -> ExitCode {
    let root = std::env::temp_dir().join(format!("invlab-acceptance-{}", std::process::id()));
    let dirs = [root.join("first"), root.join("second")];
    let mut failures = 0;

    let cfg = |dir: &Path| ScenarioConfig {
        output_dir: dir.to_path_buf(),
        ..ScenarioConfig::new(Scenario::FullSuite)
    };
    let first = run_full_suite(&cfg(&dirs[0])).expect("first full-suite run");
    for (o, budget) in first.iter().zip(BUDGET_SECS) {
        let in_time = o.elapsed <= Duration::from_secs(budget);
        let pass = o.pass && in_time;
        failures += usize::from(!pass);
        println!(
            "{} criterion {} ({}): {}; {:.1} s of {} s budget",
            if pass { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.detail,
            o.elapsed.as_secs_f64(),
            budget
        );
    }

    run_full_suite(&cfg(&dirs[1])).expect("second full-suite run");
    let (a, b) = (csv_files(&dirs[0]), csv_files(&dirs[1]));
    let names = |v: &[PathBuf]| {
        v.iter()
            .map(|p| p.file_name().unwrap().to_owned())
            .collect::<Vec<_>>()
    };
    let mut differing = Vec::new();
    if names(&a) != names(&b) {
        differing.push("file sets differ".to_string());
    }
    for (pa, pb) in a.iter().zip(&b) {
        if fs::read(pa).unwrap() != fs::read(pb).unwrap() {
            differing.push(pa.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    let same = differing.is_empty() && !a.is_empty();
    failures += usize::from(!same);
    println!(
        "{} criterion 9 (determinism): {} CSVs compared, {}",
        if same { "PASS" } else { "FAIL" },
        a.len(),
        if same {
            "byte-identical".to_string()
        } else {
            format!("differing: {}", differing.join(", "))
        }
    );

    let _ = fs::remove_dir_all(&root);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
