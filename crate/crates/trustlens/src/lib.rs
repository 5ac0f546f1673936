//! Trust quantification for classifiers from their prediction dumps.
//!
//! Given softmax vectors and ground-truth labels, this crate computes how
//! far each prediction deserves to be trusted and aggregates that into a
//! trust matrix over (actor answer, oracle answer) pairs, a per-class
//! trust spectrum, a scalar NetTrustScore with correct/incorrect
//! conditionals, and trust densities. Reports come out as JSON and CSV,
//! figures as SVG. The model itself is never consulted: everything derives
//! from the dump, so any classifier that can emit per-class confidences
//! can be analyzed.
//!
//! The per-record quantity is question-answer trust: confidence behind a
//! correct answer raises trust, confidence behind a wrong answer destroys
//! it, with exponents `alpha` and `beta` setting how sharply reward and
//! penalty scale. Everything else is an expectation of that quantity over
//! some slice of the records.

pub mod cli;
pub mod core;
pub mod density;
pub mod error;
pub mod fixtures;
pub mod ingest;
pub mod metrics;
pub mod numeric;
pub mod pipeline;
pub mod render;
pub mod report;

pub use core::{
    question_answer_trust, score_record, score_records, LabelSpace, PredictionRecord,
    ScoredRecord, TrustParams, CONFIDENCE_SLACK,
};
pub use density::{
    conditional_trust_densities, kde_curve, silverman_bandwidth, trust_density,
    ConditionalDensityPair, Density, DensityConfig, DensityKind,
};
pub use error::{Error, RejectReason, Result};
pub use ingest::{
    load_label_map, parse_predictions, write_predictions, ErrorPolicy, IngestConfig, IngestReport,
};
pub use metrics::{
    conditional_summary, confusion_counts, net_trust_score, net_trust_score_weighted,
    trust_matrix, trust_spectrum, ClassWeighting, TrustMatrix, TrustSpectrum, TrustSummary,
};
pub use pipeline::{analyze, Analysis};
pub use report::{build_report, parse_report, to_json, ReportDocument};
