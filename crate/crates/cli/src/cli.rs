//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{config_error, ConfigError, GroupSpec, RankOneSuite, Scenario, ScenarioConfig};
use crate::scenarios::{run, RunOutcome, EXIT_CONFIG, EXIT_FAIL};

#[derive(Debug, Parser)]
#[command(
    name = "invlab",
    version,
    about = "Numerical experiments on invertibility of convolution operators"
)]
pub struct Cli {
    /// Worker threads (default: hardware count). INVLAB_THREADS takes precedence.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output directory for CSV/JSON artifacts.
    #[arg(long, default_value = "invlab-out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = invlab_core::group::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Slow-decrease check of a symbol on a finite horizon.
    CheckInvertibility {
        #[arg(long)]
        function: PathBuf,
        #[arg(long = "A", alias = "a", default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1e3)]
        horizon: f64,
        #[arg(long)]
        complex_search: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Witness family on a violation sequence of a symbol.
    WitnessFamily {
        #[arg(long)]
        function: PathBuf,
        #[arg(long, default_value = "signs")]
        group: String,
        #[arg(long, default_value_t = 6)]
        jmax: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Rank-one transform checks.
    RankOne {
        #[command(subcommand)]
        action: RankOneAction,
    },
    /// Regularized division and weak verification of a fundamental solution.
    FundamentalSolution {
        #[arg(long)]
        mu: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        /// Points per axis of the frequency grid.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 1e-5)]
        tolerance: f64,
        #[command(flatten)]
        common: Common,
    },
    /// All numerical criteria.
    FullSuite {
        #[command(flatten)]
        common: Common,
    },
    /// Runs a scenario described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum RankOneAction {
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum SuiteArg {
    ProjectionSlice,
    Diagram,
    Radon,
    Dual,
}

impl From<SuiteArg> for RankOneSuite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::ProjectionSlice => Self::ProjectionSlice,
            SuiteArg::Diagram => Self::Diagram,
            SuiteArg::Radon => Self::Radon,
            SuiteArg::Dual => Self::Dual,
        }
    }
}

fn with_common(scenario: Scenario, common: Common) -> ScenarioConfig {
    ScenarioConfig {
        output_dir: common.out,
        seed: common.seed,
        ..ScenarioConfig::new(scenario)
    }
}

pub fn to_config(command: Command) -> anyhow::Result<ScenarioConfig> {
    Ok(match command {
        Command::CheckInvertibility {
            function,
            a,
            horizon,
            complex_search,
            common,
        } => ScenarioConfig {
            function: Some(function),
            a,
            horizon,
            complex_search,
            ..with_common(Scenario::CheckInvertibility, common)
        },
        Command::WitnessFamily {
            function,
            group,
            jmax,
            common,
        } => ScenarioConfig {
            function: Some(function),
            group: Some(GroupSpec::Named(group)),
            jmax,
            ..with_common(Scenario::WitnessFamily, common)
        },
        Command::RankOne {
            action: RankOneAction::Verify { suite, common },
        } => ScenarioConfig {
            suite: Some(suite.into()),
            ..with_common(Scenario::RankOne, common)
        },
        Command::FundamentalSolution {
            mu,
            epsilon,
            grid,
            tolerance,
            common,
        } => ScenarioConfig {
            mu: Some(mu),
            epsilon,
            grid,
            tolerance,
            ..with_common(Scenario::FundamentalSolution, common)
        },
        Command::FullSuite { common } => with_common(Scenario::FullSuite, common),
        Command::Run { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| config_error(format!("{}: {e}", config.display())))?;
            let base = config.parent().map(PathBuf::from).unwrap_or_default();
            ScenarioConfig::from_json(&text, &base)?
        }
    })
}

/// `INVLAB_THREADS` wins over `--threads`; neither means the rayon default.
pub fn thread_count(flag: Option<usize>, env: Option<String>) -> anyhow::Result<Option<usize>> {
    let n = match env {
        Some(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| config_error(format!("INVLAB_THREADS: not a count: {v:?}")))?,
        ),
        None => flag,
    };
    match n {
        Some(0) => Err(config_error("thread count must be positive")),
        n => Ok(n),
    }
}

fn execute(cli: Cli) -> anyhow::Result<RunOutcome> {
    if let Some(n) = thread_count(cli.threads, std::env::var("INVLAB_THREADS").ok())? {
        // a pool may already exist when called more than once in-process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    run(&to_config(cli.command)?)
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match execute(cli) {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            outcome.code
        }
        Err(e) if e.downcast_ref::<ConfigError>().is_some() => {
            eprintln!("config error: {e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_FAIL
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_overrides_flag() {
        assert_eq!(thread_count(Some(4), Some("2".into())).unwrap(), Some(2));
        assert_eq!(thread_count(Some(4), None).unwrap(), Some(4));
        assert_eq!(thread_count(None, None).unwrap(), None);
        assert!(thread_count(None, Some("many".into())).is_err());
        assert!(thread_count(Some(0), None).is_err());
    }

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from([
            "invlab",
            "--threads",
            "2",
            "rank-one",
            "verify",
            "--suite",
            "projection-slice",
        ])
        .unwrap();
        let cfg = to_config(cli.command).unwrap();
        assert_eq!(cfg.suite, Some(RankOneSuite::ProjectionSlice));
        let cli = Cli::try_parse_from([
            "invlab",
            "check-invertibility",
            "--function",
            "f.json",
            "--A",
            "2",
        ])
        .unwrap();
        assert_eq!(to_config(cli.command).unwrap().a, 2.0);
    }

    #[test]
    fn usage_error_exit_code() {
        assert_eq!(main_with_args(["invlab", "no-such-command"]), EXIT_CONFIG);
    }
}
