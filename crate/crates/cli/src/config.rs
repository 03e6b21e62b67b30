//! Flat `key = value` scenario files.
//!
//! Blank lines and `#` comments are ignored. Every key must belong to the
//! chosen scenario; anything else is rejected with its line number.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Game,
    XhogSpoof,
    Clifford,
    Maxcut,
    EntropySurvey,
    NoiseGrid,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Game,
        Scenario::XhogSpoof,
        Scenario::Clifford,
        Scenario::Maxcut,
        Scenario::EntropySurvey,
        Scenario::NoiseGrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Game => "game",
            Scenario::XhogSpoof => "xhog-spoof",
            Scenario::Clifford => "clifford",
            Scenario::Maxcut => "maxcut",
            Scenario::EntropySurvey => "entropy-survey",
            Scenario::NoiseGrid => "noise-grid",
        }
    }

    /// Scenario-specific keys, on top of [`COMMON_KEYS`].
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Scenario::Game => &[
                "n",
                "depth",
                "target",
                "noise_p",
                "alice",
                "bob",
                "referee",
                "round_cap",
                "schedule_constant",
                "trial_cap",
                "recheck_history",
                "max_rejections",
                "embed_samples",
            ],
            Scenario::XhogSpoof => &["n", "depth", "theta", "k", "b", "s", "reps", "trial_cap"],
            Scenario::Clifford => &["n", "circuits", "samples"],
            Scenario::Maxcut => &["n", "degree", "referee", "round_cap"],
            Scenario::EntropySurvey => &["n", "depth", "circuits", "deltas"],
            Scenario::NoiseGrid => &["n", "depths", "ps", "sdpi_width", "sdpi_states"],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Scenario::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ConfigError::UnknownScenario(s.to_string()))
    }
}

pub const COMMON_KEYS: &[&str] = &["scenario", "seed", "eps", "delta", "threads"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },

    #[error("line {line}: key `{key}` is set twice (first on line {first})")]
    Duplicate { line: usize, key: String, first: usize },

    #[error("line {line}: unknown key `{key}` for scenario {scenario}")]
    UnknownKey { line: usize, key: String, scenario: String },

    #[error("line {line}: cannot parse `{value}` for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
        reason: String,
    },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("line {line}: config names scenario `{found}` but `{requested}` was requested")]
    ScenarioMismatch {
        line: usize,
        found: String,
        requested: String,
    },

    #[error("cannot read config: {0}")]
    Io(String),
}

/// A parsed config: common settings plus the raw scenario keys.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub seed: u64,
    pub eps: f64,
    pub delta: f64,
    pub threads: Option<usize>,
    /// `key -> (value, line)`.
    params: BTreeMap<String, (String, usize)>,
}

impl ScenarioConfig {
    pub fn parse(text: &str, scenario: Scenario) -> Result<Self, ConfigError> {
        let mut entries: BTreeMap<String, (String, usize)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((k, v)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    text: content.to_string(),
                });
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    text: content.to_string(),
                });
            }
            if !COMMON_KEYS.contains(&k) && !scenario.keys().contains(&k) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: k.to_string(),
                    scenario: scenario.to_string(),
                });
            }
            if let Some((_, first)) = entries.get(k) {
                return Err(ConfigError::Duplicate {
                    line,
                    key: k.to_string(),
                    first: *first,
                });
            }
            entries.insert(k.to_string(), (v.to_string(), line));
        }
        if let Some((name, line)) = entries.get("scenario") {
            if name != scenario.name() {
                return Err(ConfigError::ScenarioMismatch {
                    line: *line,
                    found: name.clone(),
                    requested: scenario.to_string(),
                });
            }
        }
        let mut cfg = ScenarioConfig {
            scenario,
            seed: 0,
            eps: 0.3,
            delta: 0.1,
            threads: None,
            params: BTreeMap::new(),
        };
        cfg.params = entries;
        cfg.seed = cfg.get("seed", 0)?;
        cfg.eps = cfg.get("eps", 0.3)?;
        cfg.delta = cfg.get("delta", 0.1)?;
        cfg.threads = cfg.get_opt("threads")?;
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path, scenario: Scenario) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, scenario)
    }

    pub fn get_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.params.get(key) {
            None => Ok(None),
            Some((v, line)) => v.parse().map(Some).map_err(|e: T::Err| ConfigError::BadValue {
                line: *line,
                key: key.to_string(),
                value: v.clone(),
                reason: e.to_string(),
            }),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        Ok(self.get_opt(key)?.unwrap_or(default))
    }

    /// Comma-separated list.
    pub fn get_list<T: FromStr + Clone>(&self, key: &str, default: &[T]) -> Result<Vec<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.params.get(key) {
            None => Ok(default.to_vec()),
            Some((v, line)) => v
                .split(',')
                .map(|item| {
                    item.trim().parse().map_err(|e: T::Err| ConfigError::BadValue {
                        line: *line,
                        key: key.to_string(),
                        value: v.clone(),
                        reason: e.to_string(),
                    })
                })
                .collect(),
        }
    }

    /// A value restricted to `choices`.
    pub fn get_choice(&self, key: &str, choices: &[&'static str], default: &'static str) -> Result<&'static str, ConfigError> {
        match self.params.get(key) {
            None => Ok(default),
            Some((v, line)) => choices
                .iter()
                .find(|c| **c == v.as_str())
                .copied()
                .ok_or_else(|| ConfigError::BadValue {
                    line: *line,
                    key: key.to_string(),
                    value: v.clone(),
                    reason: format!("expected one of {}", choices.join(", ")),
                }),
        }
    }

    /// Line on which `key` was set, for diagnostics.
    pub fn line_of(&self, key: &str) -> Option<usize> {
        self.params.get(key).map(|(_, l)| *l)
    }
}
