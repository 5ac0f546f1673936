//! Domain types and the per-sample question-answer trust function.
//!
//! An *actor* (the model) answers each question with the argmax class of its
//! confidence vector; the *oracle* holds the true class. Question-answer
//! trust rewards confidence on correct answers and penalizes confidence on
//! incorrect ones:
//!
//! ```text
//! trust = confidence^alpha        if actor answer == oracle answer
//! trust = (1 - confidence)^beta   otherwise
//! ```
//!
//! where `confidence` is always the actor's confidence in its *own* answer.
//! All functions here are pure and freely shareable across threads.

use crate::error::{Error, Result};

/// Confidences outside [0,1] by at most this much are clamped to the
/// boundary; larger violations are rejected. Real softmax dumps routinely
/// carry last-ulp noise from float32 exporters.
pub const CONFIDENCE_SLACK: f64 = 1e-9;

/// An ordered set of class labels. Index is identity; names are for humans.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LabelSpace {
    names: Vec<String>,
}

impl LabelSpace {
    /// Builds a label space from class names. Names must be unique and
    /// non-empty, and at least two classes are required.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(Error::invalid(format!(
                "label space needs at least 2 classes, got {}",
                names.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::invalid(format!("label {i} is empty")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::invalid(format!("duplicate label {name:?}")));
            }
        }
        Ok(LabelSpace { names })
    }

    pub fn count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, index: usize) -> Option<&str> {
        self.names.get(index).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Resolves a class name to its index.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Checks that `index` addresses a class in this space.
    pub fn check_index(&self, index: usize) -> Result<usize> {
        if index < self.names.len() {
            Ok(index)
        } else {
            Err(Error::LabelOutOfRange {
                index,
                count: self.names.len(),
            })
        }
    }
}

/// Reward and penalty relaxation exponents for the trust function.
///
/// `alpha` shapes how strongly confidence is rewarded on correct answers,
/// `beta` how strongly overconfidence is punished on incorrect ones. Both
/// must be strictly positive; zero would collapse trust to the constant 1.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TrustParams {
    alpha: f64,
    beta: f64,
}

impl TrustParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid(format!("alpha must be finite and > 0, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::invalid(format!("beta must be finite and > 0, got {beta}")));
        }
        Ok(TrustParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Equal reward and penalty: `alpha = beta = 1`.
impl Default for TrustParams {
    fn default() -> Self {
        TrustParams { alpha: 1.0, beta: 1.0 }
    }
}

/// One question: the actor's confidence vector plus both answers.
///
/// Construction validates everything except the confidence-sum policy,
/// which is configurable and enforced by the ingest layer.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRecord {
    id: String,
    confidences: Vec<f64>,
    oracle_answer: usize,
    actor_answer: usize,
}

impl PredictionRecord {
    /// Validates the confidence vector against `labels`, clamps boundary
    /// noise, and derives the actor answer by argmax.
    pub fn new(
        id: impl Into<String>,
        mut confidences: Vec<f64>,
        oracle_answer: usize,
        labels: &LabelSpace,
    ) -> Result<Self> {
        if confidences.len() != labels.count() {
            return Err(Error::invalid(format!(
                "confidence vector has {} entries, label space has {}",
                confidences.len(),
                labels.count()
            )));
        }
        for (i, c) in confidences.iter_mut().enumerate() {
            *c = clamp_confidence(*c)
                .map_err(|_| Error::invalid(format!("confidence[{i}] = {c} is not in [0,1]")))?;
        }
        labels.check_index(oracle_answer)?;
        let actor_answer = predicted_answer(&confidences)?;
        Ok(PredictionRecord {
            id: id.into(),
            confidences,
            oracle_answer,
            actor_answer,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn confidences(&self) -> &[f64] {
        &self.confidences
    }

    pub fn oracle_answer(&self) -> usize {
        self.oracle_answer
    }

    pub fn actor_answer(&self) -> usize {
        self.actor_answer
    }

    /// The actor's confidence in its own answer.
    pub fn actor_confidence(&self) -> f64 {
        self.confidences[self.actor_answer]
    }
}

/// A record with its trust score attached.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredRecord {
    pub record: PredictionRecord,
    pub trust: f64,
    pub correct: bool,
}

impl ScoredRecord {
    pub fn actor_answer(&self) -> usize {
        self.record.actor_answer()
    }

    pub fn oracle_answer(&self) -> usize {
        self.record.oracle_answer()
    }
}

fn clamp_confidence(c: f64) -> std::result::Result<f64, ()> {
    if !c.is_finite() {
        return Err(());
    }
    if c < 0.0 {
        if c >= -CONFIDENCE_SLACK {
            return Ok(0.0);
        }
        return Err(());
    }
    if c > 1.0 {
        if c <= 1.0 + CONFIDENCE_SLACK {
            return Ok(1.0);
        }
        return Err(());
    }
    Ok(c)
}

/// The actor's answer: index of the maximum confidence.
///
/// Ties break toward the lowest index, so reports are reproducible.
pub fn predicted_answer(confidences: &[f64]) -> Result<usize> {
    if confidences.is_empty() {
        return Err(Error::EmptyInput("confidence vector"));
    }
    let mut best = 0usize;
    let mut best_value = confidences[0];
    if best_value.is_nan() {
        return Err(Error::invalid("confidence[0] is NaN".to_string()));
    }
    for (i, &c) in confidences.iter().enumerate().skip(1) {
        if c.is_nan() {
            return Err(Error::invalid(format!("confidence[{i}] is NaN")));
        }
        if c > best_value {
            best = i;
            best_value = c;
        }
    }
    Ok(best)
}

/// Per-sample question-answer trust.
///
/// `confidence^alpha` when correct, `(1 - confidence)^beta` when incorrect;
/// the result always lies in [0,1]. Exponent 1 is evaluated without `powf`
/// so the identity cases are exact.
pub fn question_answer_trust(confidence: f64, correct: bool, params: &TrustParams) -> Result<f64> {
    let c = clamp_confidence(confidence)
        .map_err(|_| Error::invalid(format!("confidence {confidence} is not in [0,1]")))?;
    let (base, exponent) = if correct {
        (c, params.alpha())
    } else {
        (1.0 - c, params.beta())
    };
    Ok(pow_unit(base, exponent))
}

/// `base^exponent` for base in [0,1], exponent > 0.
#[inline]
fn pow_unit(base: f64, exponent: f64) -> f64 {
    if exponent == 1.0 {
        base
    } else {
        base.powf(exponent)
    }
}

/// Scores one record: correctness plus trust at the actor's own confidence.
pub fn score_record(record: PredictionRecord, params: &TrustParams) -> Result<ScoredRecord> {
    let correct = record.actor_answer() == record.oracle_answer();
    let trust = question_answer_trust(record.actor_confidence(), correct, params)?;
    Ok(ScoredRecord {
        record,
        trust,
        correct,
    })
}

/// Scores a batch, preserving input order.
pub fn score_records<I>(records: I, params: &TrustParams) -> Result<Vec<ScoredRecord>>
where
    I: IntoIterator<Item = PredictionRecord>,
{
    records
        .into_iter()
        .map(|r| score_record(r, params))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labels(k: usize) -> LabelSpace {
        LabelSpace::new((0..k).map(|i| format!("class_{i}"))).unwrap()
    }

    #[test]
    fn label_space_rejects_duplicates_and_empties() {
        assert!(LabelSpace::new(["cat", "cat"]).is_err());
        assert!(LabelSpace::new(["cat", ""]).is_err());
        assert!(LabelSpace::new(["only"]).is_err());
        let ls = LabelSpace::new(["cat", "dog"]).unwrap();
        assert_eq!(ls.count(), 2);
        assert_eq!(ls.index_of("dog"), Some(1));
        assert_eq!(ls.name(0), Some("cat"));
        assert!(ls.check_index(2).is_err());
    }

    #[test]
    fn trust_params_reject_degenerate_exponents() {
        assert!(TrustParams::new(0.0, 1.0).is_err());
        assert!(TrustParams::new(1.0, 0.0).is_err());
        assert!(TrustParams::new(-1.0, 1.0).is_err());
        assert!(TrustParams::new(f64::NAN, 1.0).is_err());
        assert!(TrustParams::new(f64::INFINITY, 1.0).is_err());
        let p = TrustParams::default();
        assert_eq!((p.alpha(), p.beta()), (1.0, 1.0));
    }

    #[test]
    fn argmax_basic() {
        assert_eq!(predicted_answer(&[0.1, 0.7, 0.2]).unwrap(), 1);
    }

    #[test]
    fn argmax_tie_breaks_to_lowest_index() {
        assert_eq!(predicted_answer(&[0.5, 0.5]).unwrap(), 0);
        assert_eq!(predicted_answer(&[0.2, 0.4, 0.4]).unwrap(), 1);
    }

    #[test]
    fn argmax_rejects_empty_and_nan() {
        assert!(predicted_answer(&[]).is_err());
        assert!(predicted_answer(&[0.5, f64::NAN]).is_err());
    }

    #[test]
    fn argmax_matches_linear_scan_on_large_vector() {
        // Independent brute-force scan over a 1000-entry simplex vector.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let raw: Vec<f64> = (0..1000).map(|_| rng.gen::<f64>()).collect();
        let sum: f64 = raw.iter().sum();
        let v: Vec<f64> = raw.iter().map(|x| x / sum).collect();

        let mut oracle = 0usize;
        for i in 0..v.len() {
            if v[i] > v[oracle] {
                oracle = i;
            }
        }
        assert_eq!(predicted_answer(&v).unwrap(), oracle);
    }

    #[test]
    fn trust_identity_cases() {
        let p = TrustParams::default();
        assert_eq!(question_answer_trust(0.8, true, &p).unwrap(), 0.8);
        assert_eq!(question_answer_trust(0.8, false, &p).unwrap(), 1.0 - 0.8);
    }

    #[test]
    fn trust_maximal_overconfidence_is_zero() {
        for beta in [0.5, 1.0, 2.0, 7.3] {
            let p = TrustParams::new(1.0, beta).unwrap();
            assert_eq!(question_answer_trust(1.0, false, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn trust_exponent_example() {
        let p = TrustParams::new(2.0, 1.0).unwrap();
        assert_eq!(question_answer_trust(0.8, true, &p).unwrap(), 0.8f64.powf(2.0));
        assert!((question_answer_trust(0.8, true, &p).unwrap() - 0.64).abs() < 1e-15);
    }

    #[test]
    fn trust_boundary_cases() {
        let p = TrustParams::new(2.0, 0.5).unwrap();
        assert_eq!(question_answer_trust(1.0, true, &p).unwrap(), 1.0);
        assert_eq!(question_answer_trust(1.0, false, &p).unwrap(), 0.0);
        assert_eq!(question_answer_trust(0.0, true, &p).unwrap(), 0.0);
        assert_eq!(question_answer_trust(0.0, false, &p).unwrap(), 1.0);
    }

    #[test]
    fn trust_clamps_boundary_noise_and_rejects_garbage() {
        let p = TrustParams::default();
        assert_eq!(question_answer_trust(1.0 + 5e-10, true, &p).unwrap(), 1.0);
        assert_eq!(question_answer_trust(-5e-10, true, &p).unwrap(), 0.0);
        assert!(question_answer_trust(1.1, true, &p).is_err());
        assert!(question_answer_trust(-0.1, true, &p).is_err());
        assert!(question_answer_trust(f64::NAN, true, &p).is_err());
        assert!(question_answer_trust(f64::INFINITY, false, &p).is_err());
    }

    #[test]
    fn record_derives_actor_answer_and_validates() {
        let ls = labels(2);
        let r = PredictionRecord::new("a", vec![0.9, 0.1], 0, &ls).unwrap();
        assert_eq!(r.actor_answer(), 0);
        assert_eq!(r.actor_confidence(), 0.9);

        assert!(PredictionRecord::new("b", vec![0.9], 0, &ls).is_err());
        assert!(PredictionRecord::new("c", vec![0.9, 0.1], 2, &ls).is_err());
        assert!(PredictionRecord::new("d", vec![0.9, f64::NAN], 0, &ls).is_err());
        assert!(PredictionRecord::new("e", vec![1.2, 0.1], 0, &ls).is_err());
    }

    #[test]
    fn score_record_examples() {
        let ls = labels(2);
        let p = TrustParams::default();

        let r = PredictionRecord::new("a", vec![0.9, 0.1], 0, &ls).unwrap();
        let s = score_record(r, &p).unwrap();
        assert!(s.correct);
        assert_eq!(s.trust, 0.9);

        let r = PredictionRecord::new("b", vec![0.9, 0.1], 1, &ls).unwrap();
        let s = score_record(r, &p).unwrap();
        assert!(!s.correct);
        assert!((s.trust - 0.1).abs() < 1e-15);
    }

    #[test]
    fn scoring_is_deterministic() {
        let ls = labels(3);
        let p = TrustParams::new(1.7, 0.4).unwrap();
        let r = PredictionRecord::new("a", vec![0.2, 0.5, 0.3], 2, &ls).unwrap();
        let a = score_record(r.clone(), &p).unwrap();
        let b = score_record(r, &p).unwrap();
        assert_eq!(a.trust.to_bits(), b.trust.to_bits());
    }

    #[test]
    fn batch_scoring_matches_standalone_reevaluation() {
        // Independent oracle: apply the trust definition directly to each
        // record's actor confidence.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let ls = labels(5);
        let p = TrustParams::new(1.5, 0.8).unwrap();

        let mut records = Vec::new();
        for i in 0..50 {
            let raw: Vec<f64> = (0..5).map(|_| rng.gen::<f64>()).collect();
            let sum: f64 = raw.iter().sum();
            let conf: Vec<f64> = raw.iter().map(|x| x / sum).collect();
            let oracle = rng.gen_range(0..5);
            records.push(PredictionRecord::new(format!("r{i}"), conf, oracle, &ls).unwrap());
        }

        let scored = score_records(records.clone(), &p).unwrap();
        for (r, s) in records.iter().zip(&scored) {
            let c = r.confidences()[r.actor_answer()];
            let expected = if r.actor_answer() == r.oracle_answer() {
                c.powf(1.5)
            } else {
                (1.0 - c).powf(0.8)
            };
            assert_eq!(s.trust.to_bits(), expected.to_bits());
        }
    }

    proptest! {
        #[test]
        fn trust_always_in_unit_range(
            c in 0.0f64..=1.0,
            correct in any::<bool>(),
            alpha in 0.01f64..8.0,
            beta in 0.01f64..8.0,
        ) {
            let p = TrustParams::new(alpha, beta).unwrap();
            let t = question_answer_trust(c, correct, &p).unwrap();
            prop_assert!((0.0..=1.0).contains(&t));
        }

        #[test]
        fn trust_monotone_in_confidence(
            c1 in 0.0f64..=1.0,
            c2 in 0.0f64..=1.0,
            alpha in 0.01f64..8.0,
            beta in 0.01f64..8.0,
        ) {
            let p = TrustParams::new(alpha, beta).unwrap();
            let (lo, hi) = if c1 <= c2 { (c1, c2) } else { (c2, c1) };
            // Non-decreasing when correct, non-increasing when incorrect.
            let t_lo = question_answer_trust(lo, true, &p).unwrap();
            let t_hi = question_answer_trust(hi, true, &p).unwrap();
            prop_assert!(t_lo <= t_hi);
            let u_lo = question_answer_trust(lo, false, &p).unwrap();
            let u_hi = question_answer_trust(hi, false, &p).unwrap();
            prop_assert!(u_lo >= u_hi);
        }

        #[test]
        fn larger_exponent_never_raises_trust(
            c in 0.0f64..=1.0,
            a1 in 0.01f64..4.0,
            delta in 0.0f64..4.0,
        ) {
            let a2 = a1 + delta;
            let p1 = TrustParams::new(a1, 1.0).unwrap();
            let p2 = TrustParams::new(a2, 1.0).unwrap();
            let t1 = question_answer_trust(c, true, &p1).unwrap();
            let t2 = question_answer_trust(c, true, &p2).unwrap();
            prop_assert!(t1 >= t2 - 1e-15);

            let q1 = TrustParams::new(1.0, a1).unwrap();
            let q2 = TrustParams::new(1.0, a2).unwrap();
            let u1 = question_answer_trust(c, false, &q1).unwrap();
            let u2 = question_answer_trust(c, false, &q2).unwrap();
            prop_assert!(u1 >= u2 - 1e-15);
        }
    }
}
