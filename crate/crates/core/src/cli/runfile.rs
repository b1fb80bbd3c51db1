//! JSON run files.
//!
//! ```json
//! {
//!   "scenarios": [
//!     { "label": "null-cr", "n": 50, "p0": 0.2, "p1": 0.2, "rule": "cr" },
//!     { "label": "nac-r0", "n": 68, "p0": 0.635, "p1": 0.893,
//!       "rule": "rshir_score", "test": "score",
//!       "fallback": "equal_on_zero_variance", "erade_share": "lagged" }
//!   ]
//! }
//! ```
//!
//! Only `label`, `n`, `p0`, `p1` and `rule` are required. The rest default to
//! `burn_in_per_arm` 2, `alpha` 0.05, `erade_alpha` 0.5, `targeting` erade,
//! `test` wald, `fallback` none, `erade_share` allocated, `seed` 0xC0FFEE and
//! `reps` 10000. Unknown fields are rejected.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trial::{ConfigError, EradeShare, Fallback, Rule, Targeting, TestKind, TrialConfig};

pub const DEFAULT_REPS: usize = 10_000;

/// One labelled design scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub config: TrialConfig,
    pub reps: usize,
}

impl Scenario {
    pub fn new(label: impl Into<String>, config: TrialConfig) -> Self {
        Scenario {
            label: label.into(),
            config,
            reps: DEFAULT_REPS,
        }
    }

    pub fn with_reps(mut self, reps: usize) -> Self {
        self.reps = reps;
        self
    }
}

#[derive(Debug, Error)]
pub enum RunFileError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("run file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("duplicate scenario label {0:?}")]
    DuplicateLabel(String),
    #[error("scenario {label}: {source}")]
    Invalid { label: String, source: ConfigError },
    #[error("scenario {0}: reps must be positive")]
    ZeroReps(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunFile {
    scenarios: Vec<ScenarioSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioSpec {
    label: String,
    n: usize,
    p0: f64,
    p1: f64,
    rule: Rule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    targeting: Option<Targeting>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    test: Option<TestKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fallback: Option<Fallback>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    erade_share: Option<EradeShare>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    burn_in_per_arm: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    erade_alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reps: Option<usize>,
}

impl ScenarioSpec {
    fn into_scenario(self) -> Result<Scenario, RunFileError> {
        let mut config = TrialConfig::new(self.n, self.p0, self.p1).with_rule(self.rule);
        if let Some(v) = self.targeting {
            config.targeting = v;
        }
        if let Some(v) = self.test {
            config.test = v;
        }
        if let Some(v) = self.fallback {
            config.fallback = v;
        }
        if let Some(v) = self.erade_share {
            config.erade_share = v;
        }
        if let Some(v) = self.burn_in_per_arm {
            config.burn_in_per_arm = v;
        }
        if let Some(v) = self.alpha {
            config.alpha = v;
        }
        if let Some(v) = self.erade_alpha {
            config.erade_alpha = v;
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
        let reps = self.reps.unwrap_or(DEFAULT_REPS);
        if reps == 0 {
            return Err(RunFileError::ZeroReps(self.label));
        }
        let config = config.validate().map_err(|source| RunFileError::Invalid {
            label: self.label.clone(),
            source,
        })?;
        Ok(Scenario {
            label: self.label,
            config,
            reps,
        })
    }

    /// The sparse form: only fields that differ from the defaults.
    fn from_scenario(s: &Scenario) -> Self {
        let c = &s.config;
        let d = TrialConfig::new(c.n, c.p0, c.p1);
        fn differs<T: PartialEq>(value: T, default: T) -> Option<T> {
            (value != default).then_some(value)
        }
        ScenarioSpec {
            label: s.label.clone(),
            n: c.n,
            p0: c.p0,
            p1: c.p1,
            rule: c.rule,
            targeting: differs(c.targeting, d.targeting),
            test: differs(c.test, d.test),
            fallback: differs(c.fallback, d.fallback),
            erade_share: differs(c.erade_share, d.erade_share),
            burn_in_per_arm: differs(c.burn_in_per_arm, d.burn_in_per_arm),
            alpha: differs(c.alpha, d.alpha),
            erade_alpha: differs(c.erade_alpha, d.erade_alpha),
            seed: differs(c.seed, d.seed),
            reps: differs(s.reps, DEFAULT_REPS),
        }
    }
}

/// Parses and validates a run file held in memory.
pub fn parse_run_str(text: &str) -> Result<Vec<Scenario>, RunFileError> {
    let file: RunFile = serde_json::from_str(text)?;
    let mut seen = HashSet::new();
    let mut scenarios = Vec::with_capacity(file.scenarios.len());
    for spec in file.scenarios {
        if !seen.insert(spec.label.clone()) {
            return Err(RunFileError::DuplicateLabel(spec.label));
        }
        scenarios.push(spec.into_scenario()?);
    }
    Ok(scenarios)
}

pub fn parse_run_file(path: impl AsRef<Path>) -> Result<Vec<Scenario>, RunFileError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| RunFileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_run_str(&text)
}

/// Serializes scenarios as a run file, omitting default-valued fields.
pub fn to_run_file_json(scenarios: &[Scenario]) -> String {
    let file = RunFile {
        scenarios: scenarios.iter().map(ScenarioSpec::from_scenario).collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("run files always serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_filled() {
        let s = parse_run_str(r#"{"scenarios":[{"label":"a","n":50,"p0":0.2,"p1":0.2,"rule":"cr"}]}"#).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].reps, 10_000);
        assert_eq!(s[0].config, TrialConfig::new(50, 0.2, 0.2));
        assert_eq!(s[0].config.burn_in_per_arm, 2);
    }

    #[test]
    fn duplicate_label_is_named() {
        let text = r#"{"scenarios":[
            {"label":"x","n":50,"p0":0.2,"p1":0.2,"rule":"cr"},
            {"label":"x","n":50,"p0":0.2,"p1":0.5,"rule":"cr"}]}"#;
        let err = parse_run_str(text).unwrap_err();
        assert!(matches!(err, RunFileError::DuplicateLabel(ref l) if l == "x"));
        assert!(err.to_string().contains("\"x\""));
    }

    #[test]
    fn invalid_probability_names_field_and_label() {
        let text = r#"{"scenarios":[{"label":"bad","n":50,"p0":1.2,"p1":0.2,"rule":"cr"}]}"#;
        let msg = parse_run_str(text).unwrap_err().to_string();
        assert!(msg.contains("bad") && msg.contains("p0 out of (0,1)"), "{msg}");
    }

    #[test]
    fn parse_errors_carry_position() {
        let msg = parse_run_str("{\"scenarios\": [\n{\"label\": 3}]}").unwrap_err().to_string();
        assert!(msg.contains("line 2"), "{msg}");
        let msg = parse_run_str(r#"{"scenarios":[{"label":"a","n":50,"p0":0.2,"p1":0.2,"rule":"cr","colour":1}]}"#)
            .unwrap_err()
            .to_string();
        assert!(msg.contains("colour"), "{msg}");
    }

    #[test]
    fn sparse_serialization_round_trips() {
        let scenarios = vec![
            Scenario::new("plain", TrialConfig::new(50, 0.2, 0.5)),
            Scenario::new(
                "full",
                TrialConfig::new(200, 0.3, 0.4)
                    .with_rule(Rule::RshirScore)
                    .with_test(TestKind::Score)
                    .with_fallback(Fallback::EqualOnZeroVariance)
                    .with_erade_share(EradeShare::Lagged)
                    .with_burn_in_per_arm(60)
                    .with_seed(7),
            )
            .with_reps(2000),
        ];
        let json = to_run_file_json(&scenarios);
        assert!(!json.contains("\"alpha\""));
        assert_eq!(parse_run_str(&json).unwrap(), scenarios);
    }
}
