//! Error types shared across the crate.

use thiserror::Error;

/// Reason code attached to a rejected input record.
///
/// The string form of each code is stable and appears verbatim in ingest
/// reports and CLI diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    /// The line is not syntactically valid JSON.
    BadJson,
    /// The line is valid JSON but does not have the expected record shape.
    BadRecord,
    /// Confidence vector length does not match the label space.
    WrongLength,
    /// A confidence entry is NaN or infinite.
    NonFinite,
    /// A confidence entry is below -1e-9.
    NegativeConfidence,
    /// Confidence sum deviates from 1 by more than the configured tolerance.
    SumOutOfTolerance,
    /// The oracle or predicted label is not in the label space.
    UnknownLabel,
    /// A `predicted_label` field disagrees with the argmax of the confidences.
    InconsistentPrediction,
}

impl RejectReason {
    pub fn code(&self) -> &'static str {
        match self {
            RejectReason::BadJson => "bad-json",
            RejectReason::BadRecord => "bad-record",
            RejectReason::WrongLength => "wrong-length",
            RejectReason::NonFinite => "non-finite",
            RejectReason::NegativeConfidence => "negative-confidence",
            RejectReason::SumOutOfTolerance => "sum-out-of-tolerance",
            RejectReason::UnknownLabel => "unknown-label",
            RejectReason::InconsistentPrediction => "inconsistent-prediction",
        }
    }
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("label index {index} out of range for {count} classes")]
    LabelOutOfRange { index: usize, count: usize },

    #[error("label map error at line {line}: {message}")]
    LabelMap { line: usize, message: String },

    #[error("line {line}: {reason}: {message}")]
    Rejected {
        line: usize,
        reason: RejectReason,
        message: String,
    },

    #[error("read failed at line {line}: {source}")]
    Read {
        line: usize,
        #[source]
        source: std::io::Error,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
