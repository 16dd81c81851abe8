use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use parrep::Error;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        Self {
            path: path.to_string(),
            sha256: format!("{:x}", Sha256::digest(bytes)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub results: serde_json::Value,
    /// Milliseconds per phase.
    pub timings: BTreeMap<String, f64>,
    pub toolkit_version: String,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Vec::new(),
            results: serde_json::Value::Null,
            timings: BTreeMap::new(),
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// Runs `f`, recording its wall time under `phase`.
    pub fn timed<R>(&mut self, phase: &str, f: impl FnOnce() -> R) -> R {
        let start = Instant::now();
        let out = f();
        *self.timings.entry(phase.to_string()).or_default() += start.elapsed().as_secs_f64() * 1e3;
        out
    }
}

/// A finished command: its report and the process exit code.
pub struct Outcome {
    pub report: RunReport,
    pub code: u8,
}

/// Why a command stopped without a report.
#[derive(Debug)]
pub enum Failure {
    /// Malformed or invalid input (exit 1).
    Input(String),
    /// The question asked has a negative answer (exit 2).
    Negative(String),
    /// The numerics broke down (exit 3).
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Negative(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Negative(m) | Failure::Numerical(m) => m,
        }
    }

    pub fn context(self, what: &str) -> Self {
        match self {
            Failure::Input(m) => Failure::Input(format!("{what}: {m}")),
            Failure::Negative(m) => Failure::Negative(format!("{what}: {m}")),
            Failure::Numerical(m) => Failure::Numerical(format!("{what}: {m}")),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::NonDiagonal(_) | Error::NonCommuting(_) | Error::InfeasibleWitness(_) | Error::ThresholdCondition { .. } => {
                Failure::Negative(m)
            }
            Error::EigenFailure | Error::WeakDualityViolated { .. } => Failure::Numerical(m),
            _ => Failure::Input(m),
        }
    }
}

/// Reads a UTF-8 input file and records its digest.
pub fn read_input(path: &Path, report: &mut RunReport) -> Result<String, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    report.inputs.push(InputDigest::of(&path.display().to_string(), &bytes));
    String::from_utf8(bytes).map_err(|e| Failure::Input(format!("{}: not UTF-8: {e}", path.display())))
}
