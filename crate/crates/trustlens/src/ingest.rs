//! Reading prediction dumps and label maps.
//!
//! Predictions arrive as JSON Lines: one object per line with an `id`, a
//! `confidences` array, a `true_label` (name or index), and optionally the
//! producer's own `predicted_label` for cross-checking. Blank lines and
//! lines starting with `#` are skipped. Every reported line number is the
//! 1-based physical line in the input, comments included.
//!
//! A malformed line never poisons the rest of the file: under the default
//! skip policy it is recorded in the ingest report and parsing continues.

use std::io::BufRead;

use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

use crate::core::{LabelSpace, PredictionRecord, CONFIDENCE_SLACK};
use crate::error::{Error, RejectReason, Result};
use crate::numeric;

/// Default bound on `|sum(confidences) - 1|` before a record is rejected.
pub const DEFAULT_SUM_TOLERANCE: f64 = 1e-4;

/// Renormalization threshold. Deviations at or below this are left alone,
/// which keeps parse -> write -> parse byte-stable.
const RENORMALIZE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorPolicy {
    /// Record the rejection and keep going.
    Skip,
    /// Fail on the first bad line.
    Abort,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IngestConfig {
    /// Accept records whose confidence sum is within this distance of 1.
    pub sum_tolerance: f64,
    /// Rescale near-miss sums back to exactly 1. When off, in-tolerance
    /// vectors are taken as-is.
    pub renormalize: bool,
    pub on_error: ErrorPolicy,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            sum_tolerance: DEFAULT_SUM_TOLERANCE,
            renormalize: true,
            on_error: ErrorPolicy::Skip,
        }
    }
}

impl IngestConfig {
    fn validate(&self) -> Result<()> {
        if !(self.sum_tolerance.is_finite()
            && self.sum_tolerance > 0.0
            && self.sum_tolerance <= 0.1)
        {
            return Err(Error::Config(format!(
                "sum tolerance must be in (0, 0.1], got {}",
                self.sum_tolerance
            )));
        }
        Ok(())
    }
}

/// One rejected input line.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Rejection {
    pub line: usize,
    pub reason: RejectReason,
    pub message: String,
}

/// What happened during a parse: how many records made it through, which
/// lines did not and why, and how many vectors were rescaled.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct IngestReport {
    pub accepted: u64,
    pub renormalized: u64,
    pub rejections: Vec<Rejection>,
}

impl IngestReport {
    pub fn rejected(&self) -> u64 {
        self.rejections.len() as u64
    }
}

/// A label reference in the wire format: either a class name or a
/// non-negative index into the label map.
#[derive(Debug, Clone, PartialEq, Eq)]
enum LabelRef {
    Index(usize),
    Name(String),
}

impl LabelRef {
    fn resolve(&self, labels: &LabelSpace) -> std::result::Result<usize, String> {
        match self {
            LabelRef::Index(i) => {
                if *i < labels.count() {
                    Ok(*i)
                } else {
                    Err(format!(
                        "label index {i} out of range for {} classes",
                        labels.count()
                    ))
                }
            }
            LabelRef::Name(name) => labels
                .index_of(name)
                .ok_or_else(|| format!("unknown label {name:?}")),
        }
    }
}

impl<'de> Deserialize<'de> for LabelRef {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct LabelRefVisitor;

        impl<'de> Visitor<'de> for LabelRefVisitor {
            type Value = LabelRef;

            fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str("a label name or a non-negative label index")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<LabelRef, E> {
                usize::try_from(v)
                    .map(LabelRef::Index)
                    .map_err(|_| E::custom(format!("label index {v} is too large")))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<LabelRef, E> {
                if v < 0 {
                    Err(E::custom(format!("label index {v} is negative")))
                } else {
                    self.visit_u64(v as u64)
                }
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<LabelRef, E> {
                Ok(LabelRef::Name(v.to_owned()))
            }
        }

        deserializer.deserialize_any(LabelRefVisitor)
    }
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    id: String,
    confidences: Vec<f64>,
    true_label: LabelRef,
    #[serde(default)]
    predicted_label: Option<LabelRef>,
}

/// Reads a label map: one class name per line, order defining the index.
/// Names are trimmed; empty or duplicate names are errors.
pub fn load_label_map<R: BufRead>(reader: R) -> Result<LabelSpace> {
    let mut names: Vec<String> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|source| Error::Read {
            line: line_no,
            source,
        })?;
        let name = line.trim();
        if name.is_empty() {
            return Err(Error::LabelMap {
                line: line_no,
                message: "empty label name".into(),
            });
        }
        if names.iter().any(|n| n == name) {
            return Err(Error::LabelMap {
                line: line_no,
                message: format!("duplicate label {name:?}"),
            });
        }
        names.push(name.to_owned());
    }
    LabelSpace::new(names)
}

struct LineError {
    reason: RejectReason,
    message: String,
}

impl LineError {
    fn new(reason: RejectReason, message: impl Into<String>) -> Self {
        LineError {
            reason,
            message: message.into(),
        }
    }
}

fn parse_line(
    line: &str,
    labels: &LabelSpace,
    config: &IngestConfig,
    renormalized: &mut bool,
) -> std::result::Result<PredictionRecord, LineError> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| {
        let reason = match e.classify() {
            serde_json::error::Category::Data => RejectReason::BadRecord,
            _ => RejectReason::BadJson,
        };
        LineError::new(reason, e.to_string())
    })?;

    if raw.confidences.len() != labels.count() {
        return Err(LineError::new(
            RejectReason::WrongLength,
            format!(
                "expected {} confidences, got {}",
                labels.count(),
                raw.confidences.len()
            ),
        ));
    }
    for (i, &c) in raw.confidences.iter().enumerate() {
        if !c.is_finite() {
            return Err(LineError::new(
                RejectReason::NonFinite,
                format!("confidence[{i}] is {c}"),
            ));
        }
        if c < -CONFIDENCE_SLACK {
            return Err(LineError::new(
                RejectReason::NegativeConfidence,
                format!("confidence[{i}] is {c}"),
            ));
        }
    }

    let sum = numeric::sum(&raw.confidences);
    let deviation = (sum - 1.0).abs();
    if deviation > config.sum_tolerance {
        return Err(LineError::new(
            RejectReason::SumOutOfTolerance,
            format!("confidences sum to {sum}"),
        ));
    }
    let mut confidences = raw.confidences;
    if config.renormalize && deviation > RENORMALIZE_THRESHOLD {
        for c in &mut confidences {
            *c /= sum;
        }
        *renormalized = true;
    }

    let oracle = raw
        .true_label
        .resolve(labels)
        .map_err(|m| LineError::new(RejectReason::UnknownLabel, m))?;

    let record = PredictionRecord::new(raw.id, confidences, oracle, labels)
        .map_err(|e| LineError::new(RejectReason::BadRecord, e.to_string()))?;

    if let Some(claimed) = raw.predicted_label {
        let claimed = claimed
            .resolve(labels)
            .map_err(|m| LineError::new(RejectReason::UnknownLabel, m))?;
        if claimed != record.actor_answer() {
            return Err(LineError::new(
                RejectReason::InconsistentPrediction,
                format!(
                    "predicted_label {:?} does not match argmax {:?}",
                    labels.name(claimed).unwrap_or("?"),
                    labels.name(record.actor_answer()).unwrap_or("?")
                ),
            ));
        }
    }

    Ok(record)
}

/// Streaming parse: accepted records are handed to `sink` one at a time.
/// Returns the ingest report, or the first rejection under the abort
/// policy.
pub fn stream_predictions<R, F>(
    reader: R,
    labels: &LabelSpace,
    config: &IngestConfig,
    mut sink: F,
) -> Result<IngestReport>
where
    R: BufRead,
    F: FnMut(PredictionRecord) -> Result<()>,
{
    config.validate()?;
    let mut report = IngestReport::default();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|source| Error::Read {
            line: line_no,
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut renormalized = false;
        match parse_line(trimmed, labels, config, &mut renormalized) {
            Ok(record) => {
                report.accepted += 1;
                if renormalized {
                    report.renormalized += 1;
                }
                sink(record)?;
            }
            Err(err) => match config.on_error {
                ErrorPolicy::Skip => report.rejections.push(Rejection {
                    line: line_no,
                    reason: err.reason,
                    message: err.message,
                }),
                ErrorPolicy::Abort => {
                    return Err(Error::Rejected {
                        line: line_no,
                        reason: err.reason,
                        message: err.message,
                    })
                }
            },
        }
    }
    Ok(report)
}

/// Parses a whole prediction dump into memory.
pub fn parse_predictions<R: BufRead>(
    reader: R,
    labels: &LabelSpace,
    config: &IngestConfig,
) -> Result<(Vec<PredictionRecord>, IngestReport)> {
    let mut records = Vec::new();
    let report = stream_predictions(reader, labels, config, |r| {
        records.push(r);
        Ok(())
    })?;
    Ok((records, report))
}

/// Writes records back out in the wire format, one JSON object per line.
/// Labels are written by name; confidence values round-trip exactly.
pub fn write_predictions<W: std::io::Write>(
    records: &[PredictionRecord],
    labels: &LabelSpace,
    mut writer: W,
) -> Result<()> {
    #[derive(serde::Serialize)]
    struct Out<'a> {
        id: &'a str,
        confidences: &'a [f64],
        true_label: &'a str,
    }
    for record in records {
        let out = Out {
            id: record.id(),
            confidences: record.confidences(),
            true_label: labels
                .name(record.oracle_answer())
                .ok_or_else(|| Error::invalid("record oracle answer outside label space"))?,
        };
        let json = serde_json::to_string(&out)
            .map_err(|e| Error::invalid(format!("serialize record {}: {e}", record.id())))?;
        writeln!(writer, "{json}").map_err(|source| Error::Io {
            path: "<writer>".into(),
            source,
        })?;
    }
    Ok(())
}
