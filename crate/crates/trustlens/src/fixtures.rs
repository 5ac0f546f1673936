//! Seeded synthetic datasets.
//!
//! These generators build prediction dumps with known trust statistics, so
//! end-to-end behavior can be checked against closed-form expectations.
//! Every generator is deterministic in its seed. They also back the hidden
//! `fixtures generate` subcommand, which makes demo inputs reproducible.
//!
//! Construction invariant used throughout: with the default exponents, a
//! correct answer's trust equals the confidence at the true class, and an
//! incorrect answer's trust equals one minus the confidence at the chosen
//! class. Placing the chosen-class confidence accordingly pins each
//! record's trust, while the rest of the vector is spread over the other
//! classes without disturbing the argmax.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core::{LabelSpace, PredictionRecord};

#[derive(Debug, Clone)]
pub struct Dataset {
    pub labels: LabelSpace,
    pub records: Vec<PredictionRecord>,
}

/// Closed-form statistics a calibrated dataset is built to hit. The
/// dataset means land within a few 1e-15 of these; callers should compare
/// at 1e-3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationTargets {
    pub net_trust_score: f64,
    pub conditional_correct: f64,
    pub conditional_incorrect: f64,
    pub accuracy: f64,
}

/// Targets for [`calibrated_dataset_a`]: a strong classifier whose
/// mistakes still carry moderate confidence.
/// 1886 correct at mean trust 0.887 and 614 incorrect at mean trust 0.435
/// give (1886*0.887 + 614*0.435) / 2500 = 0.7759888.
pub const TARGETS_A: CalibrationTargets = CalibrationTargets {
    net_trust_score: 0.776,
    conditional_correct: 0.887,
    conditional_incorrect: 0.435,
    accuracy: 1886.0 / 2500.0,
};

/// Targets for [`calibrated_dataset_b`]: a weaker classifier that hedges
/// more when wrong. (1716*0.845 + 784*0.507) / 2500 = 0.7390032.
pub const TARGETS_B: CalibrationTargets = CalibrationTargets {
    net_trust_score: 0.739,
    conditional_correct: 0.845,
    conditional_incorrect: 0.507,
    accuracy: 1716.0 / 2500.0,
};

pub fn numbered_labels(k: usize) -> LabelSpace {
    let width = (k.max(2) - 1).to_string().len();
    LabelSpace::new((0..k).map(|i| format!("c{i:0width$}"))).unwrap()
}

/// Builds a record whose chosen class is `actor` with confidence `c`,
/// spreading the remaining mass unevenly over the other classes. `c` must
/// stay above the largest tail share, which holds for every caller here.
fn record_with(
    id: String,
    k: usize,
    actor: usize,
    oracle: usize,
    c: f64,
    rng: &mut ChaCha8Rng,
    labels: &LabelSpace,
) -> PredictionRecord {
    let mut conf = vec![0.0; k];
    let tail_total = 1.0 - c;
    let weights: Vec<f64> = (0..k - 1).map(|_| 1.0 + rng.gen::<f64>()).collect();
    let weight_sum: f64 = weights.iter().sum();
    let slots: Vec<usize> = (0..k).filter(|&j| j != actor).collect();
    let mut used = 0.0;
    for (i, &j) in slots.iter().enumerate() {
        if i + 1 == slots.len() {
            // Exact complement keeps the vector summing to 1 to the ulp.
            conf[j] = tail_total - used;
        } else {
            let v = tail_total * weights[i] / weight_sum;
            conf[j] = v;
            used += v;
        }
    }
    conf[actor] = c;
    let record = PredictionRecord::new(id, conf, oracle, labels).unwrap();
    assert_eq!(record.actor_answer(), actor, "tail share overtook the chosen class");
    record
}

/// Trust values in +-jitter pairs around `center`, so the sample mean is
/// `center` up to float noise. `count` must be even.
fn paired_trusts(rng: &mut ChaCha8Rng, center: f64, jitter: f64, count: usize) -> Vec<f64> {
    assert!(count % 2 == 0, "pair construction needs an even count");
    let mut out = Vec::with_capacity(count);
    for _ in 0..count / 2 {
        let d = jitter * (0.3 + 0.7 * rng.gen::<f64>());
        out.push(center - d);
        out.push(center + d);
    }
    out
}

fn calibrated(
    seed: u64,
    correct_n: usize,
    incorrect_n: usize,
    t_correct: f64,
    jitter_correct: f64,
    t_incorrect: f64,
    jitter_incorrect: f64,
) -> Dataset {
    let k = 10;
    let labels = numbered_labels(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut plan: Vec<(f64, bool)> = paired_trusts(&mut rng, t_correct, jitter_correct, correct_n)
        .into_iter()
        .map(|t| (t, true))
        .collect();
    plan.extend(
        paired_trusts(&mut rng, t_incorrect, jitter_incorrect, incorrect_n)
            .into_iter()
            .map(|t| (t, false)),
    );
    plan.shuffle(&mut rng);

    let records = plan
        .into_iter()
        .enumerate()
        .map(|(i, (trust, correct))| {
            let oracle = rng.gen_range(0..k);
            let (actor, c) = if correct {
                (oracle, trust)
            } else {
                let offset = rng.gen_range(1..k);
                ((oracle + offset) % k, 1.0 - trust)
            };
            record_with(format!("r{i:05}"), k, actor, oracle, c, &mut rng, &labels)
        })
        .collect();
    Dataset { labels, records }
}

/// 2500 records over 10 classes hitting [`TARGETS_A`].
pub fn calibrated_dataset_a(seed: u64) -> Dataset {
    calibrated(seed, 1886, 614, 0.887, 0.03, 0.435, 0.05)
}

/// 2500 records over 10 classes hitting [`TARGETS_B`].
pub fn calibrated_dataset_b(seed: u64) -> Dataset {
    calibrated(seed, 1716, 784, 0.845, 0.05, 0.507, 0.05)
}

/// A classifier that is confidently wrong: 90% incorrect answers, each
/// with chosen-class confidence above 0.951, so every incorrect answer's
/// trust falls strictly below 0.05. One oracle class, 5 classes total.
pub fn overconfident_dataset(seed: u64) -> Dataset {
    let k = 5;
    let labels = numbered_labels(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(400);
    for i in 0..400 {
        let id = format!("r{i:05}");
        let record = if i % 10 == 0 {
            let c = 0.90 + 0.09 * rng.gen::<f64>();
            record_with(id, k, 0, 0, c, &mut rng, &labels)
        } else {
            let actor = rng.gen_range(1..k);
            let c = 0.951 + 0.048 * rng.gen::<f64>();
            record_with(id, k, actor, 0, c, &mut rng, &labels)
        };
        records.push(record);
    }
    Dataset { labels, records }
}

/// Incorrect-answer trust concentrated in two separated clusters, one near
/// 0.08 and one near 0.5, plus a high-trust correct population. With a
/// kernel bandwidth well under the cluster gap, the incorrect conditional
/// density has exactly two modes.
pub fn bimodal_dataset(seed: u64) -> Dataset {
    let k = 5;
    let labels = numbered_labels(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(200);
    let push = |records: &mut Vec<PredictionRecord>,
                    rng: &mut ChaCha8Rng,
                    i: usize,
                    trust: f64,
                    correct: bool| {
        let id = format!("r{i:05}");
        let record = if correct {
            record_with(id, k, 0, 0, trust, rng, &labels)
        } else {
            let actor = rng.gen_range(1..k);
            record_with(id, k, actor, 0, 1.0 - trust, rng, &labels)
        };
        records.push(record);
    };
    for i in 0..80 {
        let t = 0.85 + 0.10 * rng.gen::<f64>();
        push(&mut records, &mut rng, i, t, true);
    }
    for i in 80..140 {
        let t = 0.06 + 0.04 * rng.gen::<f64>();
        push(&mut records, &mut rng, i, t, false);
    }
    for i in 140..200 {
        let t = 0.47 + 0.06 * rng.gen::<f64>();
        push(&mut records, &mut rng, i, t, false);
    }
    Dataset { labels, records }
}

/// A small mixed-quality dataset over 4 named classes, for demos and
/// frozen-output comparisons.
pub fn golden_dataset(seed: u64) -> Dataset {
    let labels = LabelSpace::new(["ash", "birch", "cedar", "fir"]).unwrap();
    let k = 4;
    let accuracy_by_class = [0.9, 0.7, 0.5, 0.8];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(60);
    for i in 0..60 {
        let oracle = i % k;
        let correct = rng.gen::<f64>() < accuracy_by_class[oracle];
        let record = if correct {
            let c = 0.55 + 0.43 * rng.gen::<f64>();
            record_with(format!("g{i:03}"), k, oracle, oracle, c, &mut rng, &labels)
        } else {
            let actor = (oracle + rng.gen_range(1..k)) % k;
            let c = 0.45 + 0.40 * rng.gen::<f64>();
            record_with(format!("g{i:03}"), k, actor, oracle, c, &mut rng, &labels)
        };
        records.push(record);
    }
    Dataset { labels, records }
}

/// Unstructured random prediction vectors on the simplex, for comparing
/// pipeline output against naive reimplementations.
pub fn random_dataset(seed: u64, n: usize, k: usize) -> Dataset {
    let labels = numbered_labels(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records = (0..n)
        .map(|i| {
            let mut conf: Vec<f64> = (0..k)
                .map(|_| -(1.0 - rng.gen::<f64>()).ln())
                .collect();
            let sum: f64 = conf.iter().sum();
            for c in &mut conf {
                *c /= sum;
            }
            let oracle = rng.gen_range(0..k);
            PredictionRecord::new(format!("x{i:06}"), conf, oracle, &labels).unwrap()
        })
        .collect();
    Dataset { labels, records }
}

/// Chunked generator for large-scale runs: `n` records over `k` classes,
/// produced `chunk_size` at a time so the whole dataset never sits in
/// memory at once. Three quarters of the answers are correct; chosen-class
/// confidence is uniform on [0.30, 0.99] and the remainder is spread
/// evenly, which keeps per-record work at O(k).
pub struct ScaleChunks {
    rng: ChaCha8Rng,
    labels: LabelSpace,
    k: usize,
    remaining: usize,
    chunk_size: usize,
    next_id: usize,
}

impl ScaleChunks {
    pub fn labels(&self) -> &LabelSpace {
        &self.labels
    }
}

pub fn scale_chunks(seed: u64, n: usize, k: usize, chunk_size: usize) -> ScaleChunks {
    assert!(chunk_size > 0);
    ScaleChunks {
        rng: ChaCha8Rng::seed_from_u64(seed),
        labels: numbered_labels(k),
        k,
        remaining: n,
        chunk_size,
        next_id: 0,
    }
}

impl Iterator for ScaleChunks {
    type Item = Vec<PredictionRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        let count = self.remaining.min(self.chunk_size);
        self.remaining -= count;
        let k = self.k;
        let mut chunk = Vec::with_capacity(count);
        for _ in 0..count {
            let oracle = self.rng.gen_range(0..k);
            let actor = if self.rng.gen::<f64>() < 0.75 {
                oracle
            } else {
                (oracle + self.rng.gen_range(1..k)) % k
            };
            let c = 0.30 + 0.69 * self.rng.gen::<f64>();
            let tail = (1.0 - c) / (k - 1) as f64;
            let mut conf = vec![tail; k];
            conf[actor] = c;
            let record = PredictionRecord::new(
                format!("s{:07}", self.next_id),
                conf,
                oracle,
                &self.labels,
            )
            .unwrap();
            debug_assert_eq!(record.actor_answer(), actor);
            self.next_id += 1;
            chunk.push(record);
        }
        Some(chunk)
    }
}
