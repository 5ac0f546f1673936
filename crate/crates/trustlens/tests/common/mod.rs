//! Shared helpers for the integration suites: independent naive oracles
//! (plain loops, plain f64 sums, no shared code with the library's
//! accumulators) and small measurement utilities.

#![allow(dead_code)]

use trustlens::ScoredRecord;

/// Distance in units in the last place between two finite non-negative
/// floats. Equal bits, including 0 vs -0, count as zero.
pub fn ulp_diff(a: f64, b: f64) -> u64 {
    if a == b {
        return 0;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    assert!(lo >= 0.0, "ulp_diff expects non-negative inputs");
    hi.to_bits() - lo.to_bits()
}

/// Group-by-cell mean via plain summation.
pub fn naive_matrix(scored: &[ScoredRecord], k: usize) -> (Vec<Vec<Option<f64>>>, Vec<Vec<u64>>) {
    let mut sums = vec![vec![0.0f64; k]; k];
    let mut counts = vec![vec![0u64; k]; k];
    for s in scored {
        sums[s.actor_answer()][s.oracle_answer()] += s.trust;
        counts[s.actor_answer()][s.oracle_answer()] += 1;
    }
    let means = (0..k)
        .map(|y| {
            (0..k)
                .map(|z| {
                    if counts[y][z] == 0 {
                        None
                    } else {
                        Some(sums[y][z] / counts[y][z] as f64)
                    }
                })
                .collect()
        })
        .collect();
    (means, counts)
}

/// Per-oracle-class (mean trust, weight, support) via plain summation.
pub fn naive_spectrum(scored: &[ScoredRecord], k: usize) -> Vec<(Option<f64>, f64, u64)> {
    let mut sums = vec![0.0f64; k];
    let mut counts = vec![0u64; k];
    for s in scored {
        sums[s.oracle_answer()] += s.trust;
        counts[s.oracle_answer()] += 1;
    }
    let n = scored.len() as f64;
    (0..k)
        .map(|z| {
            let mean = if counts[z] == 0 {
                None
            } else {
                Some(sums[z] / counts[z] as f64)
            };
            (mean, counts[z] as f64 / n, counts[z])
        })
        .collect()
}

/// Grand mean of per-record trust.
pub fn naive_net_trust(scored: &[ScoredRecord]) -> f64 {
    let sum: f64 = scored.iter().map(|s| s.trust).sum();
    sum / scored.len() as f64
}

/// (net, conditional correct, conditional incorrect, accuracy) via plain
/// summation.
pub fn naive_conditionals(scored: &[ScoredRecord]) -> (f64, Option<f64>, Option<f64>, f64) {
    let mut correct_sum = 0.0f64;
    let mut correct_n = 0u64;
    let mut incorrect_sum = 0.0f64;
    let mut incorrect_n = 0u64;
    for s in scored {
        if s.correct {
            correct_sum += s.trust;
            correct_n += 1;
        } else {
            incorrect_sum += s.trust;
            incorrect_n += 1;
        }
    }
    let n = (correct_n + incorrect_n) as f64;
    let net = (correct_sum + incorrect_sum) / n;
    let cc = (correct_n > 0).then(|| correct_sum / correct_n as f64);
    let ci = (incorrect_n > 0).then(|| incorrect_sum / incorrect_n as f64);
    (net, cc, ci, correct_n as f64 / n)
}

/// Histogram masses by scanning explicit bin edges; the last bin includes
/// its right edge. `denominator` is the mass base (total record count for
/// conditional partitions).
pub fn naive_histogram(trusts: &[f64], bins: usize, denominator: usize) -> Vec<f64> {
    let mut counts = vec![0u64; bins];
    'outer: for &t in trusts {
        for b in 0..bins {
            let hi = (b + 1) as f64 / bins as f64;
            if t < hi || b == bins - 1 {
                counts[b] += 1;
                continue 'outer;
            }
        }
    }
    counts
        .iter()
        .map(|&c| c as f64 / denominator as f64)
        .collect()
}

/// Strict interior local maxima of a sampled curve.
pub fn local_maxima_count(values: &[f64]) -> usize {
    let mut count = 0;
    for i in 1..values.len().saturating_sub(1) {
        if values[i] > values[i - 1] && values[i] > values[i + 1] {
            count += 1;
        }
    }
    count
}

/// Peak resident set size of this process in bytes, from /proc.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    for line in status.lines() {
        if let Some(rest) = line.strip_prefix("VmHWM:") {
            let kb: u64 = rest.trim().trim_end_matches(" kB").trim().parse().ok()?;
            return Some(kb * 1024);
        }
    }
    None
}

/// Absolute difference that treats two `None`s as equal and a mixed pair
/// as infinitely far apart.
pub fn opt_abs_diff(a: Option<f64>, b: Option<f64>) -> f64 {
    match (a, b) {
        (Some(x), Some(y)) => (x - y).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    }
}
