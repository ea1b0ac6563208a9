//! Job documents and command payloads.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Decide,
    Arrangements,
    MpClassify,
    Partition,
    Hurwitz,
    Realize,
    Q4,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Decide => "decide",
            Self::Arrangements => "arrangements",
            Self::MpClassify => "mp-classify",
            Self::Partition => "partition",
            Self::Hurwitz => "hurwitz",
            Self::Realize => "realize",
            Self::Q4 => "q4",
            Self::Verify => "verify",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    /// Also examine non-reduced arrangements.
    pub exhaustive: bool,
    pub hurwitz_cap: usize,
    pub seed: u64,
    pub restarts: usize,
    /// Residual tolerance of numerical realizations.
    pub tol: f64,
    /// Numeric values of the formal transcendentals, `"t1=0.75,t2=0.41"`.
    pub basis: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Self { exhaustive: false, hurwitz_cap: 7, seed: 0, restarts: 64, tol: 1e-10, basis: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    pub payload: Value,
    #[serde(default)]
    pub options: Options,
}

/// An angle or residue given either as exact-real text or as a JSON number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Text(String),
    Number(serde_json::Number),
}

impl Scalar {
    pub fn text(&self) -> String {
        match self {
            Self::Text(s) => s.clone(),
            Self::Number(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnglesPayload {
    pub angles: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionPayload {
    pub residues: Vec<Scalar>,
    pub partition: Vec<u64>,
}

/// Either a residue vector with a partition, or explicit branch data.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HurwitzPayload {
    pub b: Option<Vec<i64>>,
    pub partition: Option<Vec<u64>>,
    pub degree: Option<usize>,
    pub zeros: Option<Vec<usize>>,
    pub poles: Option<Vec<usize>>,
    pub extras: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizePayload {
    pub residues: Vec<f64>,
    pub partition: Vec<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub restarts: Option<usize>,
    #[serde(default)]
    pub max_iterations: Option<usize>,
    #[serde(default)]
    pub residual_tol: Option<f64>,
    #[serde(default)]
    pub separation: Option<f64>,
    #[serde(default)]
    pub cluster_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Q4Payload {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// Also search for a configuration numerically.
    #[serde(default)]
    pub realize: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub message: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
}

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        Self { message: message.into(), line: None, column: None }
    }

    fn from_json(context: &str, e: serde_json::Error) -> Self {
        let text = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let text = text.strip_suffix(&suffix).unwrap_or(&text);
        let message = if context.is_empty() { text.to_string() } else { format!("{context}: {text}") };
        if e.line() == 0 {
            Self::new(message)
        } else {
            Self { message, line: Some(e.line()), column: Some(e.column()) }
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "input error at line {l}, column {c}: {}", self.message),
            _ => write!(f, "input error: {}", self.message),
        }
    }
}

impl std::error::Error for InputError {}

fn typed<T: DeserializeOwned>(text: &str) -> Result<(), InputError> {
    serde_json::from_str::<T>(text).map(drop).map_err(|e| InputError::from_json("", e))
}

/// Parses a payload document for `command`, reporting syntax and schema
/// errors with their line and column.
pub fn parse_payload(command: Command, text: &str) -> Result<Value, InputError> {
    match command {
        Command::Decide | Command::Arrangements | Command::MpClassify => typed::<AnglesPayload>(text)?,
        Command::Partition => typed::<PartitionPayload>(text)?,
        Command::Hurwitz => typed::<HurwitzPayload>(text)?,
        Command::Realize => typed::<RealizePayload>(text)?,
        Command::Q4 => typed::<Q4Payload>(text)?,
        Command::Verify => typed::<Report>(text)?,
    }
    serde_json::from_str(text).map_err(|e| InputError::from_json("", e))
}

pub fn parse_job(text: &str) -> Result<JobSpec, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::from_json("", e))
}

pub(crate) fn payload_as<T: DeserializeOwned>(payload: &Value) -> Result<T, InputError> {
    T::deserialize(payload).map_err(|e| InputError::from_json("payload", e))
}
