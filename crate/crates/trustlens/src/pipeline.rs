//! One-pass analysis pipeline.
//!
//! Scoring is embarrassingly parallel and runs on the rayon pool; each
//! record's score depends only on that record, so the output order and
//! every bit of it are independent of thread count. Aggregation is a
//! single sequential fold over the scored records: the accumulators merge
//! associatively, but a fixed fold order keeps emitted reports
//! byte-identical from run to run, and folding a million records costs
//! far less than scoring them.

use rayon::prelude::*;

use crate::core::{score_record, LabelSpace, PredictionRecord, ScoredRecord, TrustParams};
use crate::error::{Error, Result};
use crate::metrics::{
    MatrixAccumulator, SpectrumAccumulator, SummaryAccumulator, TrustMatrix, TrustSpectrum,
    TrustSummary,
};

/// The three aggregate accumulators advanced together.
#[derive(Debug, Clone)]
pub struct AggregateSet {
    matrix: MatrixAccumulator,
    spectrum: SpectrumAccumulator,
    summary: SummaryAccumulator,
}

impl AggregateSet {
    pub fn new(class_count: usize) -> Self {
        AggregateSet {
            matrix: MatrixAccumulator::new(class_count),
            spectrum: SpectrumAccumulator::new(class_count),
            summary: SummaryAccumulator::new(),
        }
    }

    pub fn add(&mut self, scored: &ScoredRecord) -> Result<()> {
        self.matrix.add_record(scored)?;
        self.spectrum.add(scored.oracle_answer(), scored.trust)?;
        self.summary.add(scored.trust, scored.correct);
        Ok(())
    }

    pub fn add_all(&mut self, scored: &[ScoredRecord]) -> Result<()> {
        for record in scored {
            self.add(record)?;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &AggregateSet) {
        self.matrix.merge(&other.matrix);
        self.spectrum.merge(&other.spectrum);
        self.summary.merge(&other.summary);
    }

    pub fn record_count(&self) -> u64 {
        self.matrix.record_count()
    }

    pub fn finish(
        &self,
        labels: &LabelSpace,
        params: &TrustParams,
    ) -> Result<(TrustMatrix, TrustSpectrum, TrustSummary)> {
        Ok((
            self.matrix.finish(labels, params)?,
            self.spectrum.finish()?,
            self.summary.finish()?,
        ))
    }
}

/// Scores records on the rayon pool, preserving input order.
pub fn score_parallel(
    records: Vec<PredictionRecord>,
    params: &TrustParams,
) -> Result<Vec<ScoredRecord>> {
    records
        .into_par_iter()
        .map(|record| score_record(record, params))
        .collect()
}

/// Scored records plus every aggregate computed from them.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub scored: Vec<ScoredRecord>,
    pub matrix: TrustMatrix,
    pub spectrum: TrustSpectrum,
    pub summary: TrustSummary,
}

/// Scores and aggregates a full dataset.
pub fn analyze(
    records: Vec<PredictionRecord>,
    labels: &LabelSpace,
    params: &TrustParams,
) -> Result<Analysis> {
    if records.is_empty() {
        return Err(Error::EmptyInput("prediction records"));
    }
    let scored = score_parallel(records, params)?;
    let mut aggregates = AggregateSet::new(labels.count());
    aggregates.add_all(&scored)?;
    let (matrix, spectrum, summary) = aggregates.finish(labels, params)?;
    Ok(Analysis {
        scored,
        matrix,
        spectrum,
        summary,
    })
}
