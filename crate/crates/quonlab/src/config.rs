//! Run configuration and q-list resolution.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use quon_core::{JLevel, Rational};
use serde::{Deserialize, Serialize};

use crate::numeric::{format_rational, within_unit, BackendKind, LiteralError, NumberLiteral};

/// Named verification suites, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Positivity,
    Eq2,
    Eq6,
    Eq7,
    Eq8,
    Eq9,
    Eq10,
    Series,
    Coupling,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Positivity,
        Suite::Eq2,
        Suite::Eq6,
        Suite::Eq7,
        Suite::Eq8,
        Suite::Eq9,
        Suite::Eq10,
        Suite::Series,
        Suite::Coupling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Positivity => "positivity",
            Suite::Eq2 => "eq2",
            Suite::Eq6 => "eq6",
            Suite::Eq7 => "eq7",
            Suite::Eq8 => "eq8",
            Suite::Eq9 => "eq9",
            Suite::Eq10 => "eq10",
            Suite::Series => "series",
            Suite::Coupling => "coupling",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {:?}", s))
    }
}

/// A q value as written in the config: a JSON number or a string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QEntry {
    Number(serde_json::Number),
    Text(String),
}

impl QEntry {
    fn text(&self) -> String {
        match self {
            QEntry::Number(n) => n.to_string(),
            QEntry::Text(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<PathBuf>,
}

fn default_checks() -> Vec<Suite> {
    Suite::ALL.to_vec()
}

/// Mirrors the JSON config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub twice_j: u32,
    pub q_list: Vec<QEntry>,
    pub n_max: usize,
    #[serde(default)]
    pub series_order: usize,
    /// Inferred from the q literals when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<BackendKind>,
    #[serde(default = "default_checks")]
    pub checks: Vec<Suite>,
    /// Relative residual bound for the float backend.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub output: OutputPaths,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            twice_j: 2,
            q_list: ["-0.9", "0", "0.9"]
                .iter()
                .map(|s| QEntry::Number(s.parse().unwrap()))
                .collect(),
            n_max: 3,
            series_order: 1,
            backend: None,
            checks: default_checks(),
            tolerance: None,
            output: OutputPaths::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Literal(#[from] LiteralError),
    #[error("q_list is empty")]
    EmptyQList,
    #[error("q = {0} is outside [-1, 1]")]
    QOutOfRange(String),
    #[error("q_list mixes exact (p/q) and decimal literals; choose one backend per run")]
    MixedBackends,
    #[error("n_max must be at least 1")]
    NMax,
    #[error("tolerance must be positive and finite")]
    Tolerance,
    #[error("no checks selected")]
    NoChecks,
}

/// Resolved q values of one backend.
#[derive(Clone, Debug, PartialEq)]
pub enum QList {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl QList {
    pub fn backend(&self) -> BackendKind {
        match self {
            QList::Exact(_) => BackendKind::Exact,
            QList::Float(_) => BackendKind::Float,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            QList::Exact(v) => v.len(),
            QList::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Canonical text of each value, as used in reports.
    pub fn labels(&self) -> Vec<String> {
        match self {
            QList::Exact(v) => v.iter().map(format_rational).collect(),
            QList::Float(v) => v.iter().map(|x| format!("{:?}", x)).collect(),
        }
    }
}

/// Resolves literals to one backend. Fractions ask for the exact backend,
/// decimals for the float one, integers go either way; mixing fractions and
/// decimals is rejected. An explicit backend converts decimals exactly or
/// fractions to the nearest float.
pub fn resolve_q_list<S: AsRef<str>>(
    texts: &[S],
    backend: Option<BackendKind>,
) -> Result<QList, ConfigError> {
    if texts.is_empty() {
        return Err(ConfigError::EmptyQList);
    }
    let literals = texts
        .iter()
        .map(|t| t.as_ref().parse::<NumberLiteral>())
        .collect::<Result<Vec<_>, _>>()?;
    let wanted: Vec<BackendKind> = literals
        .iter()
        .filter_map(NumberLiteral::preferred_backend)
        .collect();
    if wanted.contains(&BackendKind::Exact) && wanted.contains(&BackendKind::Float) {
        return Err(ConfigError::MixedBackends);
    }
    let kind = backend
        .or_else(|| wanted.first().copied())
        .unwrap_or(BackendKind::Exact);
    for (lit, text) in literals.iter().zip(texts) {
        if !within_unit(&lit.to_rational()) {
            return Err(ConfigError::QOutOfRange(text.as_ref().to_string()));
        }
    }
    Ok(match kind {
        BackendKind::Exact => {
            QList::Exact(literals.iter().map(NumberLiteral::to_rational).collect())
        }
        BackendKind::Float => QList::Float(literals.iter().map(NumberLiteral::to_f64).collect()),
    })
}

/// A validated configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Plan {
    pub level: JLevel,
    pub q: QList,
    pub n_max: usize,
    pub series_order: usize,
    pub checks: Vec<Suite>,
    pub tolerance: f64,
    pub output: OutputPaths,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> Result<Plan, ConfigError> {
        if self.n_max < 1 {
            return Err(ConfigError::NMax);
        }
        let tolerance = self
            .tolerance
            .unwrap_or(quon_core::check::DEFAULT_FLOAT_TOLERANCE);
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(ConfigError::Tolerance);
        }
        if self.checks.is_empty() {
            return Err(ConfigError::NoChecks);
        }
        let texts: Vec<String> = self.q_list.iter().map(QEntry::text).collect();
        let q = resolve_q_list(&texts, self.backend)?;
        let mut checks = self.checks.clone();
        checks.sort();
        checks.dedup();
        Ok(Plan {
            level: JLevel::new(self.twice_j),
            q,
            n_max: self.n_max,
            series_order: self.series_order,
            checks,
            tolerance,
            output: self.output.clone(),
        })
    }
}
