//! Experiment configuration: a TOML file with top-level keys and optional per-experiment
//! sections, overridden by command-line flags.
//!
//! ```toml
//! experiment = "upper-bound"
//! horizons = [64, 256, 1024]
//! dim = 1
//! beta = 0.0
//! d_beta = 1.0
//! seeds = 20
//!
//! [upper-bound]
//! d_beta = 4.0
//!
//! [shifting-regret]
//! dim = 2
//! shifts = 4
//! domain = { kind = "box", lower = -1.0, upper = 1.0 }
//! regularizer = { kind = "l1", weight = 0.1 }   # or "zero", "indicator"
//! ```
//!
//! A key in the section of the experiment being run beats the same key at top level; flags beat both.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dynreg::{DomainSpec, Regularizer};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    UpperBound,
    LowerBound,
    Lemmas,
    ShiftingRegret,
    OracleCheck,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::UpperBound => "upper-bound",
            Experiment::LowerBound => "lower-bound",
            Experiment::Lemmas => "lemmas",
            Experiment::ShiftingRegret => "shifting-regret",
            Experiment::OracleCheck => "oracle-check",
        }
    }

    /// Defaults for keys absent from file and flags.
    pub fn defaults(self) -> ExperimentConfig {
        let base = ExperimentConfig {
            experiment: self,
            horizons: vec![64, 256, 1024],
            dim: 1,
            beta: 0.0,
            d_beta: 1.0,
            gamma: None,
            shifts: 0,
            domain: DomainConfig::UnitBall,
            regularizer: RegularizerConfig::Zero,
            seeds: 20,
            seed_offset: 0,
            resolution: 0.01,
            out: PathBuf::from("out"),
            timing: false,
        };
        match self {
            Experiment::UpperBound | Experiment::Lemmas => base,
            Experiment::LowerBound => ExperimentConfig {
                horizons: vec![64, 256, 1024, 4096],
                d_beta: 4.0,
                seeds: 1000,
                ..base
            },
            Experiment::ShiftingRegret => ExperimentConfig {
                horizons: vec![1024],
                dim: 2,
                shifts: 1,
                seeds: 10,
                ..base
            },
            Experiment::OracleCheck => ExperimentConfig {
                horizons: vec![3],
                seeds: 50,
                ..base
            },
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        SECTIONS
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown experiment `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainConfig {
    /// Unit ball centred at the origin.
    UnitBall,
    /// Ball of the given radius centred at the origin.
    Ball { radius: f64 },
    /// The cube `[lower, upper]^d`.
    Box { lower: f64, upper: f64 },
}

impl DomainConfig {
    /// The domain in dimension `dim`; `G` is set later by the experiment.
    pub fn build(&self, dim: usize) -> dynreg::Result<DomainSpec<f64>> {
        match *self {
            DomainConfig::UnitBall => DomainSpec::unit_ball(dim, 1.0),
            DomainConfig::Ball { radius } => DomainSpec::ball(vec![0.0; dim], radius, 1.0),
            DomainConfig::Box { lower, upper } => DomainSpec::cube(dim, lower, upper, 1.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RegularizerConfig {
    Zero,
    L1 {
        weight: f64,
    },
    /// Indicator of the domain; zero on `X`.
    Indicator,
}

impl RegularizerConfig {
    pub fn build(&self) -> dynreg::Result<Regularizer<f64>> {
        match *self {
            RegularizerConfig::Zero => Ok(Regularizer::zero()),
            RegularizerConfig::L1 { weight } => Regularizer::l1(weight),
            RegularizerConfig::Indicator => Ok(Regularizer::indicator()),
        }
    }
}

/// A fully resolved experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub horizons: Vec<usize>,
    pub dim: usize,
    pub beta: f64,
    /// Path-length budget `D_beta`; ignored by `shifting-regret`, which uses `shifts`.
    pub d_beta: f64,
    /// Schedule exponent; `beta` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Number of comparator shifts `M` for `shifting-regret`.
    pub shifts: usize,
    pub domain: DomainConfig,
    pub regularizer: RegularizerConfig,
    pub seeds: usize,
    pub seed_offset: u64,
    /// Grid spacing for `oracle-check`.
    pub resolution: f64,
    pub out: PathBuf,
    /// Fill the `runtime_ms` column; off by default so reruns are byte-identical.
    pub timing: bool,
}

/// Keys allowed at top level and in every section.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub horizons: Option<Vec<usize>>,
    pub dim: Option<usize>,
    pub beta: Option<f64>,
    pub d_beta: Option<f64>,
    pub gamma: Option<f64>,
    pub shifts: Option<usize>,
    pub domain: Option<DomainConfig>,
    pub regularizer: Option<RegularizerConfig>,
    pub seeds: Option<usize>,
    pub seed_offset: Option<u64>,
    pub resolution: Option<f64>,
    pub out: Option<PathBuf>,
    pub timing: Option<bool>,
}

impl Layer {
    fn apply(&self, c: &mut ExperimentConfig) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field {
                    c.$field = v.clone();
                })*
            };
        }
        take!(
            horizons,
            dim,
            beta,
            d_beta,
            shifts,
            domain,
            regularizer,
            seeds,
            seed_offset,
            resolution,
            out,
            timing
        );
        if self.gamma.is_some() {
            c.gamma = self.gamma;
        }
    }
}

const SECTIONS: [Experiment; 5] = [
    Experiment::UpperBound,
    Experiment::LowerBound,
    Experiment::Lemmas,
    Experiment::ShiftingRegret,
    Experiment::OracleCheck,
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    pub experiment: Option<Experiment>,
    pub top: Layer,
    pub sections: Vec<(Experiment, Layer)>,
}

fn layer(table: toml::Table, context: &str) -> Result<Layer, CliError> {
    Layer::deserialize(toml::Value::Table(table))
        .map_err(|e| CliError::Usage(format!("config{context}: {}", e.message())))
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Usage(format!("config: {}", e.message())))?;
        let experiment = match table.remove("experiment") {
            Some(toml::Value::String(s)) => Some(s.parse()?),
            Some(v) => {
                return Err(CliError::Usage(format!(
                    "config: `experiment` must be a string, got {v}"
                )))
            }
            None => None,
        };
        let mut sections = Vec::new();
        for e in SECTIONS {
            match table.remove(e.name()) {
                Some(toml::Value::Table(t)) => sections.push((e, layer(t, &format!(" [{e}]"))?)),
                Some(_) => return Err(CliError::Usage(format!("config: `{e}` must be a section"))),
                None => {}
            }
        }
        let top = layer(table, "")?;
        Ok(Self {
            experiment,
            top,
            sections,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn section(&self, experiment: Experiment) -> Option<&Layer> {
        self.sections.iter().find(|(e, _)| *e == experiment).map(|(_, l)| l)
    }
}
/// Resolves `experiment` (or the file's `experiment` key) from defaults, file top level, the
/// file's section for that experiment, then `flags`, and validates the result.
pub fn parse_config(
    experiment: Option<Experiment>,
    file: Option<&ConfigFile>,
    flags: &Layer,
) -> Result<ExperimentConfig, CliError> {
    let experiment = experiment
        .or_else(|| file.and_then(|f| f.experiment))
        .ok_or_else(|| CliError::Usage("no experiment given: set `experiment` in the config file".into()))?;
    let mut config = experiment.defaults();
    if let Some(file) = file {
        file.top.apply(&mut config);
        if let Some(section) = file.section(experiment) {
            section.apply(&mut config);
        }
    }
    flags.apply(&mut config);
    config.validate()?;
    Ok(config)
}

fn check_exponent(name: &str, v: f64) -> Result<(), CliError> {
    if (0.0..1.0).contains(&v) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{name} = {v} is outside the valid interval [0, 1)"
        )))
    }
}

impl ExperimentConfig {
    pub fn gamma(&self) -> f64 {
        self.gamma.unwrap_or(self.beta)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        check_exponent("beta", self.beta)?;
        if let Some(g) = self.gamma {
            check_exponent("gamma", g)?;
        }
        if self.experiment == Experiment::Lemmas {
            return Ok(());
        }
        if self.horizons.is_empty() || self.horizons.contains(&0) {
            return usage("horizons must be a non-empty list of positive integers".into());
        }
        if self.dim == 0 {
            return usage("dim must be positive".into());
        }
        if self.seeds == 0 {
            return usage("seeds must be positive".into());
        }
        if !(self.d_beta >= 0.0 && self.d_beta.is_finite()) {
            return usage(format!("d_beta = {} must be finite and nonnegative", self.d_beta));
        }
        if self.seed_offset.checked_add(self.seeds as u64).is_none() {
            return usage("seed_offset + seeds overflows".into());
        }
        let domain = self
            .domain
            .build(self.dim)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        self.regularizer.build().map_err(|e| CliError::Usage(e.to_string()))?;
        match self.experiment {
            Experiment::UpperBound | Experiment::LowerBound => {
                if self.domain != DomainConfig::UnitBall || self.regularizer != RegularizerConfig::Zero {
                    return usage(format!(
                        "{} is played on the unit ball with no regularizer",
                        self.experiment
                    ));
                }
                if self.gamma() < self.beta {
                    return usage(format!(
                        "gamma = {} must be at least beta = {}",
                        self.gamma(),
                        self.beta
                    ));
                }
            }
            Experiment::ShiftingRegret => {
                if let Some(&t) = self.horizons.iter().find(|&&t| self.shifts >= t) {
                    return usage(format!(
                        "shifts = {} must be below every horizon, got T = {t}",
                        self.shifts
                    ));
                }
            }
            Experiment::OracleCheck => {
                if !(self.resolution > 0.0 && self.resolution.is_finite()) {
                    return usage(format!("resolution = {} must be positive", self.resolution));
                }
                if self.dim > dynreg::oracle::grid::GRID_MAX_DIMENSION {
                    return usage(format!(
                        "oracle-check needs dim <= {}",
                        dynreg::oracle::grid::GRID_MAX_DIMENSION
                    ));
                }
                if let Some(&t) = self
                    .horizons
                    .iter()
                    .find(|&&t| t > dynreg::oracle::grid::GRID_MAX_HORIZON)
                {
                    return usage(format!(
                        "oracle-check needs T <= {}, got {t}",
                        dynreg::oracle::grid::GRID_MAX_HORIZON
                    ));
                }
                let points = dynreg::oracle::grid::grid_points(&domain, self.resolution)
                    .map_err(|e| CliError::Usage(e.to_string()))?
                    .len();
                let t_max = *self.horizons.iter().max().unwrap_or(&1);
                let sequences = (points as f64).powi(t_max as i32);
                if sequences > dynreg::oracle::grid::GRID_MAX_SEQUENCES {
                    return usage(format!(
                        "grid of {points} points over T = {t_max} is too large; raise resolution"
                    ));
                }
            }
            Experiment::Lemmas => {}
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Hash of the serialized config, for the CSV header.
    pub fn hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.to_toml().hash(&mut h);
        h.finish()
    }
}

/// Parses `64,256,1024`.
pub fn parse_horizons(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("bad horizon `{p}`: {e}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
experiment = "upper-bound"
horizons = [16, 32]
dim = 1
beta = 0.0
d_beta = 2.0
seeds = 3

[upper-bound]
d_beta = 4.0

[shifting-regret]
shifts = 4
domain = { kind = "box", lower = -1.0, upper = 1.0 }
"#;

    #[test]
    fn file_values_without_flags() {
        let file = ConfigFile::parse(FULL).unwrap();
        let c = parse_config(None, Some(&file), &Layer::default()).unwrap();
        assert_eq!(c.experiment, Experiment::UpperBound);
        assert_eq!(c.horizons, vec![16, 32]);
        assert_eq!(c.seeds, 3);
        // the section beats the top level
        assert_eq!(c.d_beta, 4.0);
        let s = parse_config(Some(Experiment::ShiftingRegret), Some(&file), &Layer::default()).unwrap();
        assert_eq!(s.shifts, 4);
        assert_eq!(s.d_beta, 2.0);
        assert_eq!(
            s.domain,
            DomainConfig::Box {
                lower: -1.0,
                upper: 1.0
            }
        );
    }

    #[test]
    fn flags_override_file() {
        let file = ConfigFile::parse("beta = 0.0\n").unwrap();
        let flags = Layer {
            beta: Some(0.5),
            ..Default::default()
        };
        let c = parse_config(Some(Experiment::UpperBound), Some(&file), &flags).unwrap();
        assert_eq!(c.beta, 0.5);
    }

    #[test]
    fn exponents_must_lie_in_half_open_unit_interval() {
        for (beta, gamma) in [(Some(1.0), None), (Some(-0.1), None), (None, Some(1.0))] {
            let flags = Layer {
                beta,
                gamma,
                ..Default::default()
            };
            let err = parse_config(Some(Experiment::UpperBound), None, &flags).unwrap_err();
            assert!(err.to_string().contains("[0, 1)"), "{err}");
            assert_eq!(err.exit_code(), 1);
        }
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = ConfigFile::parse("betta = 0.3\n").unwrap_err();
        assert!(err.to_string().contains("betta"), "{err}");
        let err = ConfigFile::parse("[upper-bound]\nseedz = 3\n").unwrap_err();
        assert!(err.to_string().contains("seedz"), "{err}");
        let err = ConfigFile::parse("[mystery]\nseeds = 3\n").unwrap_err();
        assert!(err.to_string().contains("mystery"), "{err}");
    }

    #[test]
    fn resolved_config_round_trips() {
        let file = ConfigFile::parse(FULL).unwrap();
        let mut configs: Vec<ExperimentConfig> = [Experiment::UpperBound, Experiment::ShiftingRegret]
            .into_iter()
            .map(|e| parse_config(Some(e), Some(&file), &Layer::default()).unwrap())
            .collect();
        let mut oracle = Experiment::OracleCheck.defaults();
        oracle.regularizer = RegularizerConfig::L1 { weight: 0.25 };
        oracle.gamma = Some(0.3);
        oracle.beta = 0.1 + 0.2;
        configs.push(oracle);
        for c in configs {
            let back = parse_config(None, Some(&ConfigFile::parse(&c.to_toml()).unwrap()), &Layer::default()).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn experiment_specific_preconditions() {
        let flags = Layer {
            domain: Some(DomainConfig::Ball { radius: 2.0 }),
            ..Default::default()
        };
        assert!(parse_config(Some(Experiment::LowerBound), None, &flags).is_err());
        let flags = Layer {
            horizons: Some(vec![8]),
            ..Default::default()
        };
        assert!(parse_config(Some(Experiment::OracleCheck), None, &flags).is_err());
        let flags = Layer {
            beta: Some(0.5),
            gamma: Some(0.2),
            ..Default::default()
        };
        assert!(parse_config(Some(Experiment::UpperBound), None, &flags).is_err());
        assert!(parse_config(None, None, &Layer::default()).is_err());
        assert_eq!(parse_horizons("64, 256,1024").unwrap(), vec![64, 256, 1024]);
        assert!(parse_horizons("64,x").is_err());
    }
}
