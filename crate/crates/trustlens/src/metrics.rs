//! Aggregate trust quantities: trust matrix, trust spectrum, NetTrustScore,
//! conditional NetTrustScores, and confusion counts.
//!
//! Every aggregate is an associative reduction over immutable scored
//! records. The `*Accumulator` types expose that structure directly: feed
//! them `(actor, oracle, trust)` observations in any partitioning, merge,
//! and finish. The free functions are the slice-shaped front doors.
//!
//! A statistic over an empty subset is *undefined*, represented as `None`,
//! never zero; zero would read as "fully distrusted" rather than "never
//! observed".

use crate::core::{LabelSpace, ScoredRecord, TrustParams};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Expected question-answer trust for every actor-oracle answer pair,
/// with per-cell support counts. Rows index the actor answer, columns the
/// oracle answer.
#[derive(Debug, Clone)]
pub struct TrustMatrix {
    labels: LabelSpace,
    params: TrustParams,
    /// Row-major `[actor][oracle]`; `None` where support is zero.
    values: Vec<Option<f64>>,
    support: Vec<u64>,
}

impl TrustMatrix {
    pub fn label_space(&self) -> &LabelSpace {
        &self.labels
    }

    pub fn params(&self) -> &TrustParams {
        &self.params
    }

    pub fn class_count(&self) -> usize {
        self.labels.count()
    }

    /// Expected trust for the `(actor, oracle)` cell, `None` if unobserved.
    pub fn value(&self, actor: usize, oracle: usize) -> Option<f64> {
        self.values[actor * self.class_count() + oracle]
    }

    pub fn support(&self, actor: usize, oracle: usize) -> u64 {
        self.support[actor * self.class_count() + oracle]
    }

    pub fn total_support(&self) -> u64 {
        self.support.iter().sum()
    }

    /// Row-major cell values.
    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    /// Row-major support counts.
    pub fn supports(&self) -> &[u64] {
        &self.support
    }
}

/// Mergeable accumulator behind [`trust_matrix`].
#[derive(Debug, Clone)]
pub struct MatrixAccumulator {
    class_count: usize,
    sums: Vec<CompensatedSum>,
    counts: Vec<u64>,
}

impl MatrixAccumulator {
    pub fn new(class_count: usize) -> Self {
        MatrixAccumulator {
            class_count,
            sums: vec![CompensatedSum::new(); class_count * class_count],
            counts: vec![0; class_count * class_count],
        }
    }

    pub fn add(&mut self, actor: usize, oracle: usize, trust: f64) -> Result<()> {
        if actor >= self.class_count || oracle >= self.class_count {
            return Err(Error::LabelOutOfRange {
                index: actor.max(oracle),
                count: self.class_count,
            });
        }
        let cell = actor * self.class_count + oracle;
        self.sums[cell].add(trust);
        self.counts[cell] += 1;
        Ok(())
    }

    pub fn add_record(&mut self, record: &ScoredRecord) -> Result<()> {
        self.add(record.actor_answer(), record.oracle_answer(), record.trust)
    }

    pub fn merge(&mut self, other: &MatrixAccumulator) {
        assert_eq!(self.class_count, other.class_count);
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            a.merge(b);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += *b;
        }
    }

    pub fn record_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn finish(&self, labels: &LabelSpace, params: &TrustParams) -> Result<TrustMatrix> {
        if labels.count() != self.class_count {
            return Err(Error::invalid(format!(
                "accumulator built for {} classes, label space has {}",
                self.class_count,
                labels.count()
            )));
        }
        if self.record_count() == 0 {
            return Err(Error::EmptyInput("scored records"));
        }
        let values = self
            .sums
            .iter()
            .zip(&self.counts)
            .map(|(sum, &count)| cell_mean(sum, count))
            .collect();
        Ok(TrustMatrix {
            labels: labels.clone(),
            params: *params,
            values,
            support: self.counts.clone(),
        })
    }
}

fn cell_mean(sum: &CompensatedSum, count: u64) -> Option<f64> {
    if count == 0 {
        None
    } else {
        // The mean of values in [0,1] can drift past the boundary by an ulp.
        Some((sum.value() / count as f64).clamp(0.0, 1.0))
    }
}

/// Expected trust per oracle class, plus the empirical class weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    /// Expected trust over records whose oracle answer is this class.
    pub trust: Option<f64>,
    /// Fraction of all records whose oracle answer is this class.
    pub weight: f64,
    pub support: u64,
}

/// Per-oracle-class expected trust; integrates to NetTrustScore.
#[derive(Debug, Clone)]
pub struct TrustSpectrum {
    entries: Vec<SpectrumEntry>,
    record_count: u64,
}

impl TrustSpectrum {
    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn class_count(&self) -> usize {
        self.entries.len()
    }

    pub fn record_count(&self) -> u64 {
        self.record_count
    }

    pub fn entry(&self, oracle: usize) -> &SpectrumEntry {
        &self.entries[oracle]
    }
}

/// Mergeable accumulator behind [`trust_spectrum`].
#[derive(Debug, Clone)]
pub struct SpectrumAccumulator {
    sums: Vec<CompensatedSum>,
    counts: Vec<u64>,
}

impl SpectrumAccumulator {
    pub fn new(class_count: usize) -> Self {
        SpectrumAccumulator {
            sums: vec![CompensatedSum::new(); class_count],
            counts: vec![0; class_count],
        }
    }

    pub fn add(&mut self, oracle: usize, trust: f64) -> Result<()> {
        if oracle >= self.counts.len() {
            return Err(Error::LabelOutOfRange {
                index: oracle,
                count: self.counts.len(),
            });
        }
        self.sums[oracle].add(trust);
        self.counts[oracle] += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &SpectrumAccumulator) {
        assert_eq!(self.counts.len(), other.counts.len());
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            a.merge(b);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += *b;
        }
    }

    pub fn finish(&self) -> Result<TrustSpectrum> {
        let total: u64 = self.counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyInput("scored records"));
        }
        let entries = self
            .sums
            .iter()
            .zip(&self.counts)
            .map(|(sum, &count)| SpectrumEntry {
                trust: cell_mean(sum, count),
                weight: count as f64 / total as f64,
                support: count,
            })
            .collect();
        Ok(TrustSpectrum {
            entries,
            record_count: total,
        })
    }
}

/// How classes are weighted when integrating the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassWeighting {
    /// Weight each class by its share of the records. NetTrustScore then
    /// equals the grand mean of per-record trust.
    Empirical,
    /// Weight every observed class equally, for class-imbalanced analysis.
    Uniform,
}

/// Overall and conditional NetTrustScores plus accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct TrustSummary {
    pub net_trust_score: f64,
    /// Mean trust over correct answers; `None` when there are none.
    pub conditional_correct: Option<f64>,
    /// Mean trust over incorrect answers; `None` when there are none.
    pub conditional_incorrect: Option<f64>,
    pub accuracy: f64,
    pub record_count: u64,
}

/// Mergeable accumulator behind [`conditional_summary`].
#[derive(Debug, Clone, Default)]
pub struct SummaryAccumulator {
    correct_sum: CompensatedSum,
    correct_count: u64,
    incorrect_sum: CompensatedSum,
    incorrect_count: u64,
}

impl SummaryAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, trust: f64, correct: bool) {
        if correct {
            self.correct_sum.add(trust);
            self.correct_count += 1;
        } else {
            self.incorrect_sum.add(trust);
            self.incorrect_count += 1;
        }
    }

    pub fn merge(&mut self, other: &SummaryAccumulator) {
        self.correct_sum.merge(&other.correct_sum);
        self.correct_count += other.correct_count;
        self.incorrect_sum.merge(&other.incorrect_sum);
        self.incorrect_count += other.incorrect_count;
    }

    pub fn finish(&self) -> Result<TrustSummary> {
        let n = self.correct_count + self.incorrect_count;
        if n == 0 {
            return Err(Error::EmptyInput("scored records"));
        }
        let grand = (self.correct_sum.value() + self.incorrect_sum.value()) / n as f64;
        Ok(TrustSummary {
            net_trust_score: grand.clamp(0.0, 1.0),
            conditional_correct: cell_mean(&self.correct_sum, self.correct_count),
            conditional_incorrect: cell_mean(&self.incorrect_sum, self.incorrect_count),
            accuracy: self.correct_count as f64 / n as f64,
            record_count: n,
        })
    }
}

/// Expected question-answer trust for every actor-oracle cell: the
/// arithmetic mean over the records landing in that cell.
pub fn trust_matrix(
    scored: &[ScoredRecord],
    labels: &LabelSpace,
    params: &TrustParams,
) -> Result<TrustMatrix> {
    let mut acc = MatrixAccumulator::new(labels.count());
    for record in scored {
        acc.add_record(record)?;
    }
    acc.finish(labels, params)
}

/// Expected trust per oracle class, weighted by the empirical class
/// distribution.
pub fn trust_spectrum(scored: &[ScoredRecord], labels: &LabelSpace) -> Result<TrustSpectrum> {
    let mut acc = SpectrumAccumulator::new(labels.count());
    for record in scored {
        acc.add(record.oracle_answer(), record.trust)?;
    }
    acc.finish()
}

/// Integrates the spectrum against its empirical class weights. With
/// empirical weighting this equals the grand mean of per-record trust.
pub fn net_trust_score(spectrum: &TrustSpectrum) -> Result<f64> {
    net_trust_score_weighted(spectrum, ClassWeighting::Empirical)
}

/// Integrates the spectrum under the chosen class weighting.
pub fn net_trust_score_weighted(
    spectrum: &TrustSpectrum,
    weighting: ClassWeighting,
) -> Result<f64> {
    let mut sum = CompensatedSum::new();
    let mut defined = 0u64;
    for entry in spectrum.entries() {
        if let Some(trust) = entry.trust {
            match weighting {
                ClassWeighting::Empirical => sum.add(entry.weight * trust),
                ClassWeighting::Uniform => sum.add(trust),
            }
            defined += 1;
        }
    }
    if defined == 0 {
        return Err(Error::EmptyInput("trust spectrum has no defined classes"));
    }
    let score = match weighting {
        ClassWeighting::Empirical => sum.value(),
        ClassWeighting::Uniform => sum.value() / defined as f64,
    };
    Ok(score.clamp(0.0, 1.0))
}

/// NetTrustScore decomposed by correctness, plus accuracy. The terms obey
/// `net = accuracy * correct + (1 - accuracy) * incorrect`, with undefined
/// terms dropping out at zero weight.
pub fn conditional_summary(scored: &[ScoredRecord]) -> Result<TrustSummary> {
    let mut acc = SummaryAccumulator::new();
    for record in scored {
        acc.add(record.trust, record.correct);
    }
    acc.finish()
}

/// Plain per-cell sample counts, `[actor][oracle]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionCounts {
    class_count: usize,
    counts: Vec<u64>,
}

impl ConfusionCounts {
    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn count(&self, actor: usize, oracle: usize) -> u64 {
        self.counts[actor * self.class_count + oracle]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Tallies records per actor-oracle cell. Identical to the trust matrix
/// support grid, computed without touching trust values.
pub fn confusion_counts(scored: &[ScoredRecord], labels: &LabelSpace) -> Result<ConfusionCounts> {
    let k = labels.count();
    let mut counts = vec![0u64; k * k];
    for record in scored {
        let (y, z) = (record.actor_answer(), record.oracle_answer());
        if y >= k || z >= k {
            return Err(Error::LabelOutOfRange {
                index: y.max(z),
                count: k,
            });
        }
        counts[y * k + z] += 1;
    }
    Ok(ConfusionCounts {
        class_count: k,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{score_records, PredictionRecord};

    fn labels(k: usize) -> LabelSpace {
        LabelSpace::new((0..k).map(|i| format!("class_{i}"))).unwrap()
    }

    /// Builds a scored record landing in cell (actor, oracle) carrying the
    /// requested trust. The aggregates only read (actor, oracle, trust),
    /// so the trust value is attached directly.
    fn cell_record(actor: usize, oracle: usize, trust: f64, k: usize) -> ScoredRecord {
        let ls = labels(k);
        let mut confidences = vec![0.4 / (k as f64 - 1.0); k];
        confidences[actor] = 0.6;
        let record = PredictionRecord::new("t", confidences, oracle, &ls).unwrap();
        assert_eq!(record.actor_answer(), actor);
        ScoredRecord {
            record,
            trust,
            correct: actor == oracle,
        }
    }

    #[test]
    fn single_record_matrix() {
        let ls = labels(2);
        let scored = vec![cell_record(0, 0, 0.9, 2)];
        let m = trust_matrix(&scored, &ls, &TrustParams::default()).unwrap();
        assert!((m.value(0, 0).unwrap() - 0.9).abs() < 1e-12);
        assert_eq!(m.value(0, 1), None);
        assert_eq!(m.value(1, 0), None);
        assert_eq!(m.value(1, 1), None);
        assert_eq!(m.support(0, 0), 1);
        assert_eq!(m.total_support(), 1);
    }

    #[test]
    fn two_point_cell_mean() {
        let ls = labels(2);
        let scored = vec![cell_record(1, 0, 0.2, 2), cell_record(1, 0, 0.6, 2)];
        let m = trust_matrix(&scored, &ls, &TrustParams::default()).unwrap();
        assert!((m.value(1, 0).unwrap() - 0.4).abs() < 1e-12);
        assert_eq!(m.support(1, 0), 2);
    }

    #[test]
    fn empty_input_is_an_error() {
        let ls = labels(2);
        assert!(trust_matrix(&[], &ls, &TrustParams::default()).is_err());
        assert!(trust_spectrum(&[], &ls).is_err());
        assert!(conditional_summary(&[]).is_err());
    }

    #[test]
    fn out_of_range_label_is_an_error() {
        let scored = vec![cell_record(2, 2, 0.5, 3)];
        let small = labels(2);
        assert!(trust_matrix(&scored, &small, &TrustParams::default()).is_err());
        assert!(trust_spectrum(&scored, &small).is_err());
        assert!(confusion_counts(&scored, &small).is_err());
    }

    #[test]
    fn spectrum_single_class() {
        let ls = labels(3);
        let scored = vec![cell_record(0, 0, 0.5, 3), cell_record(1, 0, 0.7, 3)];
        let s = trust_spectrum(&scored, &ls).unwrap();
        assert!((s.entry(0).trust.unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(s.entry(0).weight, 1.0);
        assert_eq!(s.entry(1).trust, None);
        assert_eq!(s.entry(1).weight, 0.0);
        assert_eq!(s.entry(2).trust, None);
    }

    #[test]
    fn spectrum_one_record_per_class_is_uniform() {
        let ls = labels(4);
        let trusts = [0.11, 0.42, 0.73, 0.94];
        let scored: Vec<_> = (0..4).map(|z| cell_record(z, z, trusts[z], 4)).collect();
        let s = trust_spectrum(&scored, &ls).unwrap();
        for z in 0..4 {
            assert!((s.entry(z).trust.unwrap() - trusts[z]).abs() < 1e-12);
            assert!((s.entry(z).weight - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn net_trust_score_two_class_example() {
        let ls = labels(2);
        let scored = vec![cell_record(0, 0, 0.8, 2), cell_record(1, 1, 0.4, 2)];
        let s = trust_spectrum(&scored, &ls).unwrap();
        assert!((net_trust_score(&s).unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn net_trust_score_single_class_is_identity() {
        let ls = labels(2);
        let scored = vec![cell_record(0, 0, 0.35, 2)];
        let s = trust_spectrum(&scored, &ls).unwrap();
        assert!((net_trust_score(&s).unwrap() - 0.35).abs() < 1e-12);
    }

    #[test]
    fn uniform_weighting_averages_defined_classes() {
        let ls = labels(3);
        // Class 0: two records, class 1: one record, class 2: empty.
        let scored = vec![
            cell_record(0, 0, 0.9, 3),
            cell_record(0, 0, 0.7, 3),
            cell_record(1, 1, 0.2, 3),
        ];
        let s = trust_spectrum(&scored, &ls).unwrap();
        let uniform = net_trust_score_weighted(&s, ClassWeighting::Uniform).unwrap();
        assert!((uniform - (0.8 + 0.2) / 2.0).abs() < 1e-12);
        let empirical = net_trust_score(&s).unwrap();
        assert!((empirical - (0.9 + 0.7 + 0.2) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn summary_mixed_example() {
        let scored = vec![cell_record(0, 0, 0.9, 2), cell_record(0, 1, 0.3, 2)];
        let s = conditional_summary(&scored).unwrap();
        assert!((s.accuracy - 0.5).abs() < 1e-15);
        assert!((s.conditional_correct.unwrap() - 0.9).abs() < 1e-12);
        assert!((s.conditional_incorrect.unwrap() - 0.3).abs() < 1e-12);
        assert!((s.net_trust_score - 0.6).abs() < 1e-12);
        assert_eq!(s.record_count, 2);
    }

    #[test]
    fn summary_all_correct_degenerate_branch() {
        let scored = vec![cell_record(0, 0, 0.9, 2), cell_record(1, 1, 0.7, 2)];
        let s = conditional_summary(&scored).unwrap();
        assert_eq!(s.accuracy, 1.0);
        assert_eq!(s.conditional_incorrect, None);
        assert!((s.net_trust_score - s.conditional_correct.unwrap()).abs() < 1e-15);
    }

    #[test]
    fn confusion_counts_basics() {
        let ls = labels(3);
        let empty = confusion_counts(&[], &ls).unwrap();
        assert!(empty.counts().iter().all(|&c| c == 0));

        let scored = vec![cell_record(2, 1, 0.4, 3)];
        let counts = confusion_counts(&scored, &ls).unwrap();
        assert_eq!(counts.count(2, 1), 1);
        assert_eq!(counts.total(), 1);
    }

    #[test]
    fn support_matches_confusion_counts_on_random_data() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let k = 5;
        let ls = labels(k);
        let params = TrustParams::default();
        let mut records = Vec::new();
        for i in 0..200 {
            let raw: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
            let sum: f64 = raw.iter().sum();
            let conf: Vec<f64> = raw.iter().map(|x| x / sum).collect();
            records.push(
                PredictionRecord::new(format!("r{i}"), conf, rng.gen_range(0..k), &ls).unwrap(),
            );
        }
        let scored = score_records(records, &params).unwrap();
        let m = trust_matrix(&scored, &ls, &params).unwrap();
        let c = confusion_counts(&scored, &ls).unwrap();
        assert_eq!(m.supports(), c.counts());
        assert_eq!(m.total_support(), 200);
    }

    #[test]
    fn accumulator_merge_equals_single_pass() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let k = 4;
        let observations: Vec<(usize, usize, f64)> = (0..500)
            .map(|_| (rng.gen_range(0..k), rng.gen_range(0..k), rng.gen::<f64>()))
            .collect();

        let mut whole = MatrixAccumulator::new(k);
        for &(y, z, t) in &observations {
            whole.add(y, z, t).unwrap();
        }
        let mut left = MatrixAccumulator::new(k);
        let mut right = MatrixAccumulator::new(k);
        for &(y, z, t) in &observations[..250] {
            left.add(y, z, t).unwrap();
        }
        for &(y, z, t) in &observations[250..] {
            right.add(y, z, t).unwrap();
        }
        left.merge(&right);

        let ls = labels(k);
        let p = TrustParams::default();
        let a = whole.finish(&ls, &p).unwrap();
        let b = left.finish(&ls, &p).unwrap();
        for y in 0..k {
            for z in 0..k {
                match (a.value(y, z), b.value(y, z)) {
                    (Some(x), Some(w)) => assert!((x - w).abs() < 1e-12),
                    (None, None) => {}
                    other => panic!("merge changed cell definedness: {other:?}"),
                }
            }
        }
    }
}
