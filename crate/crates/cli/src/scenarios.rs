//! Scenario dispatch. Each scenario writes its artifacts into the output
//! directory and returns the summary lines and exit code.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use invlab_core::division::{fundamental_solution, DivisionConfig, GateConfig};
use invlab_core::entire_fn::norm;
use invlab_core::search::BallSearch;
use invlab_core::slow_decrease::{check_slow_decrease, RadiusSchedule, SearchParams, Verdict};
use invlab_core::witness::{verify_family_properties, PropertySamples, WitnessFamily};
use invlab_core::Error;
use serde::Serialize;

use crate::config::{load_operator, GroupSpec, Scenario, ScenarioConfig};
use crate::report::{flag, num, vector, write_json, Csv};
use crate::suite::{self, Outcome, SuiteSettings, CRITERIA};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub code: i32,
    pub lines: Vec<String>,
}

impl RunOutcome {
    fn single(pass: bool, name: &str, detail: String) -> Self {
        let (code, word) = if pass {
            (EXIT_PASS, "PASS")
        } else {
            (EXIT_FAIL, "FAIL")
        };
        Self {
            code,
            lines: vec![format!("{word} {name}: {detail}")],
        }
    }
}

pub fn run(cfg: &ScenarioConfig) -> anyhow::Result<RunOutcome> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.output_dir)
        .with_context(|| format!("creating {}", cfg.output_dir.display()))?;
    match cfg.scenario {
        Scenario::CheckInvertibility => check_invertibility(cfg),
        Scenario::WitnessFamily => witness_family(cfg),
        Scenario::RankOne => rank_one(cfg),
        Scenario::FundamentalSolution => fundamental(cfg),
        Scenario::FullSuite => full_suite(cfg),
    }
}

fn out(cfg: &ScenarioConfig, name: &str) -> PathBuf {
    cfg.output_dir.join(name)
}

fn spec_path(p: &Option<PathBuf>) -> &Path {
    p.as_deref().expect("validated")
}

fn search_params(cfg: &ScenarioConfig) -> SearchParams {
    SearchParams {
        complex_search: cfg.complex_search,
        ..Default::default()
    }
}

#[derive(Serialize)]
struct VerdictSummary<'a> {
    verdict: &'a Verdict,
    a: f64,
    horizon: f64,
    balls: usize,
    failures: usize,
    complex_search: bool,
}

/// Exit codes follow the verdict: 0 satisfied, 1 violated, 2 inconclusive.
fn check_invertibility(cfg: &ScenarioConfig) -> anyhow::Result<RunOutcome> {
    let symbol = load_operator(spec_path(&cfg.function))?.symbol()?;
    let v = check_slow_decrease(&*symbol, cfg.a, cfg.horizon, &search_params(cfg))?;
    let mut csv = Csv::new(&["xi_norm", "ball_radius", "best_abs_F", "threshold", "pass"]);
    for r in &v.records {
        csv.push(vec![
            num(r.xi_norm),
            num(r.ball_radius),
            num(r.best_abs_f),
            num(r.threshold),
            flag(r.pass),
        ]);
    }
    let hash = cfg.hash();
    csv.write(&out(cfg, "check_invertibility.csv"), &hash)?;
    let failures = v.failures().count();
    write_json(
        &out(cfg, "verdict.json"),
        &VerdictSummary {
            verdict: &v.verdict,
            a: v.a,
            horizon: v.horizon,
            balls: v.records.len(),
            failures,
            complex_search: cfg.complex_search,
        },
    )?;
    let detail = format!("{} balls, {failures} below threshold", v.records.len());
    let (code, line) = match v.verdict {
        Verdict::SatisfiedAt { a } => (
            EXIT_PASS,
            format!("PASS check-invertibility: satisfied-at({a}), {detail}"),
        ),
        Verdict::Violated => (
            EXIT_FAIL,
            format!("FAIL check-invertibility: violated, {detail}"),
        ),
        Verdict::Inconclusive => (
            EXIT_CONFIG,
            format!("FAIL check-invertibility: inconclusive, {detail}"),
        ),
    };
    Ok(RunOutcome {
        code,
        lines: vec![line],
    })
}

fn witness_family(cfg: &ScenarioConfig) -> anyhow::Result<RunOutcome> {
    let symbol = load_operator(spec_path(&cfg.function))?.symbol()?;
    let group = cfg
        .group
        .clone()
        .unwrap_or(GroupSpec::Named("signs".into()))
        .build(symbol.dim())?;
    let order = group.order() as f64;
    let family = match WitnessFamily::from_symbol(
        &*symbol,
        group,
        cfg.jmax,
        RadiusSchedule::default(),
        BallSearch::default(),
    ) {
        Ok(f) => f,
        Err(Error::InvalidInput(msg)) if msg.contains("no violation point") => {
            return Ok(RunOutcome::single(false, "witness-family", msg));
        }
        Err(e) => return Err(e.into()),
    };
    let samples = PropertySamples {
        seed: cfg.seed,
        ..Default::default()
    };
    let report = verify_family_properties(&family, 1..=cfg.jmax, samples)?;
    let mut csv = Csv::new(&["j", "xi_j", "k_j", "F_at_xi", "bound", "pass"]);
    let mut pass = report.all_hold();
    for j in 1..=cfg.jmax {
        let xi = family.xi(j);
        let f = family.eval_f_real(j, xi);
        let bound = (2.0 * j as f64 * (2.0 + norm(xi)).ln() - 1.0).exp() / order;
        let ok = f >= bound && report.checks.iter().filter(|c| c.j == j).all(|c| c.holds());
        pass &= ok;
        csv.push(vec![
            j.to_string(),
            vector(xi),
            family.k(j).to_string(),
            num(f),
            num(bound),
            flag(ok),
        ]);
    }
    csv.write(&out(cfg, "witness_family.csv"), &cfg.hash())?;
    write_json(&out(cfg, "witness_properties.json"), &report)?;
    let failing = report.checks.iter().filter(|c| !c.holds()).count();
    let detail = format!(
        "j <= {}, |W| = {order}, {} checks, {failing} failing",
        cfg.jmax,
        report.checks.len()
    );
    Ok(RunOutcome::single(pass, "witness-family", detail))
}

fn suite_name(cfg: &ScenarioConfig) -> String {
    serde_json::to_value(cfg.suite.expect("validated"))
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

fn rank_one(cfg: &ScenarioConfig) -> anyhow::Result<RunOutcome> {
    let (pass, detail, csv) = suite::rank_one(cfg.suite.expect("validated"))?;
    let name = suite_name(cfg);
    csv.write(&out(cfg, &format!("rank_one_{name}.csv")), &cfg.hash())?;
    Ok(RunOutcome::single(
        pass,
        &format!("rank-one {name}"),
        detail,
    ))
}

fn fundamental(cfg: &ScenarioConfig) -> anyhow::Result<RunOutcome> {
    let op = load_operator(spec_path(&cfg.mu))?;
    let dcfg = DivisionConfig {
        epsilon: cfg.epsilon,
        points: cfg.grid,
        tolerance: cfg.tolerance,
        gate: GateConfig {
            horizon: cfg.horizon,
            search: search_params(cfg),
            ..Default::default()
        },
        ..Default::default()
    };
    let result = match fundamental_solution(&op, &dcfg) {
        Ok(r) => r,
        Err(Error::Refused(msg)) => {
            return Ok(RunOutcome::single(
                false,
                "fundamental-solution",
                format!("refused: {msg}"),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let path = out(cfg, "quotient.bin");
    let file = fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
    result
        .quotient
        .to_gridded()?
        .write_binary(std::io::BufWriter::new(file))?;
    let report = &result.report;
    write_json(&out(cfg, "residuals.json"), report)?;
    let mut csv = Csv::new(&["route", "test", "residual", "tolerance", "pass"]);
    for r in &report.residuals {
        csv.push(vec![
            r.route.clone(),
            r.test.clone(),
            num(r.value),
            num(report.tolerance),
            flag(r.value <= report.tolerance),
        ]);
    }
    csv.write(&out(cfg, "fundamental_solution.csv"), &cfg.hash())?;
    let worst = report.residuals.iter().map(|r| r.value).fold(0.0, f64::max);
    let detail = format!(
        "gate satisfied-at({}), {} residuals, worst {worst:.2e} (tol {:e})",
        report.gate_a,
        report.residuals.len(),
        report.tolerance
    );
    Ok(RunOutcome::single(
        report.passed,
        "fundamental-solution",
        detail,
    ))
}

/// Runs every criterion, writing one CSV each plus `summary.csv`.
pub fn run_full_suite(cfg: &ScenarioConfig) -> anyhow::Result<Vec<Outcome>> {
    fs::create_dir_all(&cfg.output_dir)
        .with_context(|| format!("creating {}", cfg.output_dir.display()))?;
    let settings = SuiteSettings {
        seed: cfg.seed,
        horizon: cfg.horizon,
    };
    let hash = cfg.hash();
    let mut summary = Csv::new(&["criterion", "name", "pass", "detail"]);
    let mut outcomes = Vec::new();
    for (id, _) in CRITERIA {
        let o = suite::run_criterion(id, &settings)?;
        o.csv.write(&out(cfg, &o.file_name()), &hash)?;
        summary.push(vec![
            o.id.to_string(),
            o.name.into(),
            flag(o.pass),
            o.detail.replace(',', ";"),
        ]);
        outcomes.push(o);
    }
    summary.write(&out(cfg, "summary.csv"), &hash)?;
    Ok(outcomes)
}

fn full_suite(cfg: &ScenarioConfig) -> anyhow::Result<RunOutcome> {
    let outcomes = run_full_suite(cfg)?;
    let all = outcomes.iter().all(|o| o.pass);
    let lines = outcomes.iter().map(Outcome::line).collect();
    Ok(RunOutcome {
        code: if all { EXIT_PASS } else { EXIT_FAIL },
        lines,
    })
}
