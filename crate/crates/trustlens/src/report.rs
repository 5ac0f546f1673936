//! Machine-readable report emission.
//!
//! The JSON document is the canonical output: schema-versioned, carrying
//! the scoring parameters, label space, input digest, and every aggregate.
//! Numbers are serialized with shortest-round-trip formatting, so parsing
//! the document back recovers the exact f64 bits. The CSV views duplicate
//! the aggregate tables for spreadsheet use, printing floats with 17
//! significant digits.

use sha2::{Digest, Sha256};

use crate::density::{ConditionalDensityPair, Density, DensityKind};
use crate::error::{Error, Result};
use crate::ingest::IngestReport;
use crate::metrics::{ClassWeighting, TrustMatrix, TrustSpectrum, TrustSummary};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }
}

/// Where the numbers came from: digest of the raw input and the ingest
/// tallies, when the report was produced from a file.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_digest_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ingest: Option<IngestCounts>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct IngestCounts {
    pub accepted: u64,
    pub rejected: u64,
    pub renormalized: u64,
}

impl From<&IngestReport> for IngestCounts {
    fn from(report: &IngestReport) -> Self {
        IngestCounts {
            accepted: report.accepted,
            rejected: report.rejected(),
            renormalized: report.renormalized,
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ReportMetadata {
    pub alpha: f64,
    pub beta: f64,
    pub weighting: ClassWeighting,
    pub labels: Vec<String>,
    pub record_count: u64,
    #[serde(default)]
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SummarySection {
    /// NetTrustScore under the weighting named in the metadata.
    pub net_trust_score: f64,
    /// Mean trust over correct answers, absent when none were seen.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditional_correct: Option<f64>,
    /// Mean trust over incorrect answers, absent when none were seen.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditional_incorrect: Option<f64>,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectrumRow {
    pub label: String,
    /// Expected trust for this oracle class, null when unobserved.
    pub trust: Option<f64>,
    pub weight: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MatrixSection {
    /// `values[actor][oracle]`, null where the cell has no observations.
    pub values: Vec<Vec<Option<f64>>>,
    pub support: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DensitySection {
    pub kind: DensityKind,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub total_mass: f64,
    pub support: u64,
}

impl From<&Density> for DensitySection {
    fn from(d: &Density) -> Self {
        DensitySection {
            kind: d.kind(),
            grid: d.grid().to_vec(),
            values: d.values().to_vec(),
            total_mass: d.total_mass(),
            support: d.support(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ClassDensitySection {
    pub label: String,
    pub correct: DensitySection,
    pub incorrect: DensitySection,
    pub unconditional: DensitySection,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub metadata: ReportMetadata,
    pub summary: SummarySection,
    pub spectrum: Vec<SpectrumRow>,
    pub matrix: MatrixSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub densities: Option<Vec<ClassDensitySection>>,
}

/// Assembles the report document from computed aggregates. The summary's
/// NetTrustScore is re-derived from the spectrum when uniform weighting is
/// requested; the conditional terms and accuracy are always empirical.
pub fn build_report(
    matrix: &TrustMatrix,
    spectrum: &TrustSpectrum,
    summary: &TrustSummary,
    weighting: ClassWeighting,
    densities: Option<&[(String, ConditionalDensityPair)]>,
    provenance: Provenance,
) -> Result<ReportDocument> {
    let labels = matrix.label_space();
    let k = labels.count();
    if spectrum.class_count() != k {
        return Err(Error::invalid(format!(
            "matrix has {k} classes, spectrum has {}",
            spectrum.class_count()
        )));
    }

    let net_trust_score = match weighting {
        ClassWeighting::Empirical => summary.net_trust_score,
        ClassWeighting::Uniform => crate::metrics::net_trust_score_weighted(spectrum, weighting)?,
    };

    let spectrum_rows = spectrum
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| SpectrumRow {
            label: labels.name(i).unwrap_or("?").to_owned(),
            trust: e.trust,
            weight: e.weight,
            support: e.support,
        })
        .collect();

    let values = (0..k)
        .map(|actor| (0..k).map(|oracle| matrix.value(actor, oracle)).collect())
        .collect();
    let support = (0..k)
        .map(|actor| (0..k).map(|oracle| matrix.support(actor, oracle)).collect())
        .collect();

    let densities = densities.map(|pairs| {
        pairs
            .iter()
            .map(|(label, pair)| ClassDensitySection {
                label: label.clone(),
                correct: (&pair.correct).into(),
                incorrect: (&pair.incorrect).into(),
                unconditional: (&pair.unconditional).into(),
            })
            .collect()
    });

    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::default(),
        metadata: ReportMetadata {
            alpha: matrix.params().alpha(),
            beta: matrix.params().beta(),
            weighting,
            labels: labels.names().to_vec(),
            record_count: summary.record_count,
            provenance,
        },
        summary: SummarySection {
            net_trust_score,
            conditional_correct: summary.conditional_correct,
            conditional_incorrect: summary.conditional_incorrect,
            accuracy: summary.accuracy,
        },
        spectrum: spectrum_rows,
        matrix: MatrixSection { values, support },
        densities,
    })
}

pub fn to_json(report: &ReportDocument) -> Result<String> {
    let mut json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::invalid(format!("serialize report: {e}")))?;
    json.push('\n');
    Ok(json)
}

pub fn parse_report(json: &str) -> Result<ReportDocument> {
    serde_json::from_str(json).map_err(|e| Error::invalid(format!("parse report: {e}")))
}

/// Hex SHA-256 of raw input bytes, recorded in the report provenance.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

/// 17 significant digits: enough to reconstruct the exact f64.
fn csv_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_owned()
    }
}

/// Trust matrix cell means as CSV; undefined cells are empty fields.
pub fn matrix_values_csv(matrix: &TrustMatrix) -> String {
    let labels = matrix.label_space();
    let k = labels.count();
    let mut out = String::from("actor_answer");
    for oracle in 0..k {
        out.push(',');
        out.push_str(&csv_field(labels.name(oracle).unwrap_or("?")));
    }
    out.push('\n');
    for actor in 0..k {
        out.push_str(&csv_field(labels.name(actor).unwrap_or("?")));
        for oracle in 0..k {
            out.push(',');
            if let Some(v) = matrix.value(actor, oracle) {
                out.push_str(&csv_float(v));
            }
        }
        out.push('\n');
    }
    out
}

/// Trust matrix support counts as CSV.
pub fn matrix_support_csv(matrix: &TrustMatrix) -> String {
    let labels = matrix.label_space();
    let k = labels.count();
    let mut out = String::from("actor_answer");
    for oracle in 0..k {
        out.push(',');
        out.push_str(&csv_field(labels.name(oracle).unwrap_or("?")));
    }
    out.push('\n');
    for actor in 0..k {
        out.push_str(&csv_field(labels.name(actor).unwrap_or("?")));
        for oracle in 0..k {
            out.push(',');
            out.push_str(&matrix.support(actor, oracle).to_string());
        }
        out.push('\n');
    }
    out
}

pub fn spectrum_csv(spectrum: &TrustSpectrum, labels: &crate::core::LabelSpace) -> String {
    let mut out = String::from("label,trust,weight,support\n");
    for (i, e) in spectrum.entries().iter().enumerate() {
        out.push_str(&csv_field(labels.name(i).unwrap_or("?")));
        out.push(',');
        if let Some(t) = e.trust {
            out.push_str(&csv_float(t));
        }
        out.push(',');
        out.push_str(&csv_float(e.weight));
        out.push(',');
        out.push_str(&e.support.to_string());
        out.push('\n');
    }
    out
}

pub fn summary_csv(report: &ReportDocument) -> String {
    let mut out = String::from("metric,value\n");
    out.push_str(&format!(
        "net_trust_score,{}\n",
        csv_float(report.summary.net_trust_score)
    ));
    if let Some(v) = report.summary.conditional_correct {
        out.push_str(&format!("conditional_correct,{}\n", csv_float(v)));
    }
    if let Some(v) = report.summary.conditional_incorrect {
        out.push_str(&format!("conditional_incorrect,{}\n", csv_float(v)));
    }
    out.push_str(&format!("accuracy,{}\n", csv_float(report.summary.accuracy)));
    out.push_str(&format!("record_count,{}\n", report.metadata.record_count));
    out
}
