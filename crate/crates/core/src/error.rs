//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {n} outside supported range 1..={max}")]
    QubitCount { n: usize, max: usize },

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitIndex { index: usize, n: usize },

    #[error("qubit widths differ: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("requested zero items; count must be at least 1")]
    EmptyRequest,

    #[error("sample set is empty")]
    EmptySamples,

    #[error("{n} qubits need {needed_gib:.3} GiB of amplitudes, over the {cap_gib:.3} GiB cap")]
    ResourceCap { n: usize, needed_gib: f64, cap_gib: f64 },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("line {line}: {reason}")]
    SampleLine { line: usize, reason: String },

    #[error("impossible outcome: bin {bin} has zero null probability but {count} observations")]
    ImpossibleOutcome { bin: u64, count: u64 },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("dbm: {0}")]
    Dbm(String),

    #[error("dbm evaluation infeasible: {latent} latent units exceeds brute-force bound {bound}")]
    DbmInfeasible { latent: usize, bound: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
