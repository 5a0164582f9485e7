//! Scenario configuration: parsing, validation and hashing.

use std::fmt;
use std::path::{Path, PathBuf};

use invlab_core::distributions::PointMassDistribution;
use invlab_core::group::{FiniteOrthogonalGroup, Matrix};
use invlab_core::rank_one::RadialDistribution;
use invlab_core::symbols::{Operator, SymbolSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bad usage or configuration; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    CheckInvertibility,
    WitnessFamily,
    RankOne,
    FundamentalSolution,
    FullSuite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankOneSuite {
    ProjectionSlice,
    Diagram,
    Radon,
    Dual,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Named(String),
    Generators { generators: Vec<Matrix> },
}

impl GroupSpec {
    pub fn build(&self, dim: usize) -> anyhow::Result<FiniteOrthogonalGroup> {
        let g = match self {
            Self::Named(name) => FiniteOrthogonalGroup::named(name, dim),
            Self::Generators { generators } => FiniteOrthogonalGroup::generate(dim, generators),
        };
        g.map_err(|e| config_error(format!("group: {e}")))
    }
}

/// Everything a scenario needs. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// Symbol specification file (check-invertibility, witness-family).
    #[serde(default)]
    pub function: Option<PathBuf>,
    /// Distribution or symbol file (fundamental-solution).
    #[serde(default)]
    pub mu: Option<PathBuf>,
    #[serde(default)]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub suite: Option<RankOneSuite>,
    #[serde(default = "default_a")]
    pub a: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_jmax")]
    pub jmax: u32,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Residual tolerance for fundamental-solution checks.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub grid: Option<usize>,
    #[serde(default)]
    pub complex_search: bool,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_a() -> f64 {
    1.0
}
fn default_horizon() -> f64 {
    1e3
}
fn default_jmax() -> u32 {
    6
}
fn default_epsilon() -> f64 {
    1e-6
}
fn default_tolerance() -> f64 {
    1e-5
}
fn default_output() -> PathBuf {
    PathBuf::from("invlab-out")
}
fn default_seed() -> u64 {
    invlab_core::group::DEFAULT_SEED
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            function: None,
            mu: None,
            group: None,
            suite: None,
            a: default_a(),
            horizon: default_horizon(),
            jmax: default_jmax(),
            epsilon: default_epsilon(),
            tolerance: default_tolerance(),
            grid: None,
            complex_search: false,
            output_dir: default_output(),
            seed: default_seed(),
        }
    }

    /// Parses a config document. Relative spec paths resolve against `base`.
    pub fn from_json(text: &str, base: &Path) -> anyhow::Result<Self> {
        let mut cfg: Self =
            serde_json::from_str(text).map_err(|e| config_error(format!("config: {e}")))?;
        for p in [&mut cfg.function, &mut cfg.mu].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        let positive = [
            ("a", self.a),
            ("horizon", self.horizon),
            ("epsilon", self.epsilon),
            ("tolerance", self.tolerance),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(config_error(format!(
                    "{key} must be a positive number, got {v}"
                )));
            }
        }
        if self.jmax == 0 {
            return Err(config_error("jmax must be positive"));
        }
        if let Some(g) = self.grid {
            if g < 8 || !g.is_power_of_two() {
                return Err(config_error(format!(
                    "grid must be a power of two >= 8, got {g}"
                )));
            }
        }
        let need = |key: &str, v: &Option<PathBuf>| -> anyhow::Result<()> {
            match v {
                Some(p) if p.is_file() => Ok(()),
                Some(p) => Err(config_error(format!(
                    "{key}: file {} does not exist",
                    p.display()
                ))),
                None => Err(config_error(format!(
                    "scenario {:?} needs `{key}`",
                    self.scenario
                ))),
            }
        };
        match self.scenario {
            Scenario::CheckInvertibility | Scenario::WitnessFamily => {
                need("function", &self.function)?
            }
            Scenario::FundamentalSolution => need("mu", &self.mu)?,
            Scenario::RankOne => {
                if self.suite.is_none() {
                    return Err(config_error("scenario rank-one needs `suite`"));
                }
            }
            Scenario::FullSuite => {}
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form of the config. The output directory
    /// is left out so runs into different directories stay comparable.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(&Self {
            output_dir: PathBuf::new(),
            ..self.clone()
        })
        .expect("config serializes");
        let digest = Sha256::digest(&canonical);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))
}

pub fn load_symbol(path: &Path) -> anyhow::Result<SymbolSpec> {
    SymbolSpec::from_json(&read(path)?)
        .map_err(|e| config_error(format!("{}: {e}", path.display())))
}

/// A `mu` document is a symbol spec (has `kind`), a radial distribution
/// (has `radial`) or a point-mass distribution.
pub fn load_operator(path: &Path) -> anyhow::Result<Operator> {
    let text = read(path)?;
    let bad = |e: &dyn fmt::Display| config_error(format!("{}: {e}", path.display()));
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(&e))?;
    let op = if value.get("kind").is_some() {
        SymbolSpec::from_json(&text).and_then(|s| s.operator())
    } else if value.get("radial").is_some() {
        RadialDistribution::from_json(&text).map(Operator::Hyperbolic)
    } else {
        PointMassDistribution::from_json(&text).map(Operator::Euclidean)
    };
    op.map_err(|e| bad(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_key_rejected_by_name() {
        let err =
            ScenarioConfig::from_json(r#"{"scenario": "full-suite", "sed": 3}"#, Path::new("."))
                .unwrap_err();
        assert!(err.to_string().contains("sed"), "{err}");
        assert!(err.downcast_ref::<ConfigError>().is_some());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = ScenarioConfig::new(Scenario::FullSuite);
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.seed += 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        let c = ScenarioConfig {
            output_dir: PathBuf::from("elsewhere"),
            ..a.clone()
        };
        assert_eq!(a.hash(), c.hash());
    }

    #[test]
    fn validation() {
        let mut c = ScenarioConfig::new(Scenario::CheckInvertibility);
        assert!(c.validate().is_err());
        c.scenario = Scenario::FullSuite;
        c.validate().unwrap();
        c.horizon = -1.0;
        assert!(c.validate().unwrap_err().to_string().contains("horizon"));
    }

    #[test]
    fn group_specs() {
        let g: GroupSpec = serde_json::from_str(r#""B2""#).unwrap();
        assert_eq!(g.build(2).unwrap().order(), 8);
        let g: GroupSpec = serde_json::from_str(r#"{"generators": [[[-1.0]]]}"#).unwrap();
        assert_eq!(g.build(1).unwrap().order(), 2);
    }
}
