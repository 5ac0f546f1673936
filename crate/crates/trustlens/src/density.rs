//! Trust density estimation: exact histograms as the canonical testable
//! representation, Gaussian KDE with boundary reflection as the smoother.
//!
//! Trust is hard-bounded to [0,1] and real trust distributions pile mass at
//! the extremes, so the kernel estimate folds mass back at both boundaries
//! instead of letting it leak outside the interval.
//!
//! Conditional densities split a class's records by correctness and scale
//! each partition by its empirical prior, so the two conditional curves sum
//! to the unconditional density.

use crate::core::ScoredRecord;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Default histogram resolution: bin width 0.04, fine enough to keep
/// single-sample cells visible at tens of samples per class.
pub const DEFAULT_BINS: usize = 25;
/// Default kernel evaluation grid over [0,1], endpoints included.
pub const DEFAULT_GRID_SIZE: usize = 512;
/// Bandwidth floor, so constant data does not degenerate into a spike.
pub const MIN_BANDWIDTH: f64 = 0.01;

const SQRT_TWO_PI: f64 = 2.506628274631000502415765284811;

/// How a trust density is estimated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityConfig {
    /// Equal-width bins on [0,1]; the last bin is closed on the right so
    /// trust 1.0 is countable.
    Histogram { bins: usize },
    /// Gaussian kernel on a uniform grid, reflection-corrected at 0 and 1.
    /// `bandwidth: None` selects Silverman's rule of thumb.
    Kernel {
        bandwidth: Option<f64>,
        grid_size: usize,
    },
}

impl Default for DensityConfig {
    fn default() -> Self {
        DensityConfig::Histogram { bins: DEFAULT_BINS }
    }
}

impl DensityConfig {
    pub fn kernel_default() -> Self {
        DensityConfig::Kernel {
            bandwidth: None,
            grid_size: DEFAULT_GRID_SIZE,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            DensityConfig::Histogram { bins } => {
                if bins < 2 {
                    return Err(Error::Config(format!("need at least 2 bins, got {bins}")));
                }
            }
            DensityConfig::Kernel {
                bandwidth,
                grid_size,
            } => {
                if let Some(h) = bandwidth {
                    if !(h.is_finite() && h > 0.0) {
                        return Err(Error::Config(format!("bandwidth must be > 0, got {h}")));
                    }
                }
                if grid_size < 16 {
                    return Err(Error::Config(format!(
                        "kernel grid needs at least 16 points, got {grid_size}"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityKind {
    Histogram,
    Kernel,
}

/// A binned or kernel-smoothed distribution of per-sample trust scores.
///
/// For histograms, `grid` holds bin centers and `values` probability mass
/// per bin. For kernel estimates, `grid` holds evaluation points (including
/// both endpoints) and `values` density heights. `total_mass` is 1 for an
/// unconditional density and the partition's empirical prior for a scaled
/// conditional one.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    kind: DensityKind,
    grid: Vec<f64>,
    values: Vec<f64>,
    total_mass: f64,
    support: u64,
}

impl Density {
    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn support(&self) -> u64 {
        self.support
    }

    /// Mass actually carried by the representation: the bin-mass sum for a
    /// histogram, the trapezoidal integral over [0,1] for a kernel curve.
    pub fn integrated_mass(&self) -> f64 {
        match self.kind {
            DensityKind::Histogram => crate::numeric::sum(&self.values),
            DensityKind::Kernel => trapezoid(&self.grid, &self.values),
        }
    }
}

fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for i in 1..grid.len() {
        acc.add((grid[i] - grid[i - 1]) * (values[i] + values[i - 1]) * 0.5);
    }
    acc.value()
}

/// Conditional trust densities for one oracle class, scaled by their
/// empirical priors, together with the unconditional density they sum to.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalDensityPair {
    pub correct: Density,
    pub incorrect: Density,
    pub unconditional: Density,
}

fn check_trusts(trusts: &[f64]) -> Result<()> {
    if trusts.is_empty() {
        return Err(Error::EmptyInput("trust values"));
    }
    for &t in trusts {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::invalid(format!("trust {t} is not in [0,1]")));
        }
    }
    Ok(())
}

/// Bin index for a trust value: bins are [lo, hi) except the last, which
/// is [lo, 1].
#[inline]
fn bin_index(t: f64, bins: usize) -> usize {
    ((t * bins as f64).floor() as usize).min(bins - 1)
}

fn bin_centers(bins: usize) -> Vec<f64> {
    (0..bins).map(|i| (i as f64 + 0.5) / bins as f64).collect()
}

fn histogram_counts(trusts: &[f64], bins: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bins];
    for &t in trusts {
        counts[bin_index(t, bins)] += 1;
    }
    counts
}

fn histogram_density(trusts: &[f64], bins: usize, denominator: u64) -> Density {
    let counts = histogram_counts(trusts, bins);
    let values = counts
        .iter()
        .map(|&c| c as f64 / denominator as f64)
        .collect();
    Density {
        kind: DensityKind::Histogram,
        grid: bin_centers(bins),
        values,
        total_mass: trusts.len() as f64 / denominator as f64,
        support: trusts.len() as u64,
    }
}

fn uniform_grid(grid_size: usize) -> Vec<f64> {
    let step = 1.0 / (grid_size - 1) as f64;
    (0..grid_size).map(|i| i as f64 * step).collect()
}

/// Silverman's rule of thumb from the sample standard deviation, floored
/// at [`MIN_BANDWIDTH`].
pub fn silverman_bandwidth(trusts: &[f64]) -> f64 {
    let n = trusts.len();
    if n < 2 {
        return MIN_BANDWIDTH;
    }
    let nf = n as f64;
    let mean = crate::numeric::sum(trusts) / nf;
    let mut sq = CompensatedSum::new();
    for &t in trusts {
        let d = t - mean;
        sq.add(d * d);
    }
    let sd = (sq.value() / (nf - 1.0)).max(0.0).sqrt();
    (0.9 * sd * nf.powf(-0.2)).max(MIN_BANDWIDTH)
}

/// Sum of boundary-reflected Gaussian kernels on the grid, divided by
/// `denominator * h * sqrt(2*pi)`. Reflection is applied at every integer
/// so no mass leaks outside [0,1] even at large bandwidths.
fn kernel_heights(trusts: &[f64], bandwidth: f64, grid: &[f64], denominator: u64) -> Vec<f64> {
    // Contributions beyond 10 bandwidths are below 1e-20 of the peak.
    let cutoff = 10.0 * bandwidth;
    let reflections = ((1.0 + cutoff) / 2.0).ceil() as i64;
    let mut points = Vec::with_capacity(trusts.len() * (2 * reflections as usize + 2));
    for &x in trusts {
        for k in -reflections..=reflections {
            let base = 2.0 * k as f64;
            for p in [base + x, base - x] {
                if p >= -cutoff && p <= 1.0 + cutoff {
                    points.push(p);
                }
            }
        }
    }
    let norm = 1.0 / (denominator as f64 * bandwidth * SQRT_TWO_PI);
    grid.iter()
        .map(|&t| {
            let mut acc = CompensatedSum::new();
            for &p in &points {
                let u = (t - p) / bandwidth;
                acc.add((-0.5 * u * u).exp());
            }
            acc.value() * norm
        })
        .collect()
}

fn kernel_density(
    trusts: &[f64],
    bandwidth: f64,
    grid: &[f64],
    denominator: u64,
) -> Density {
    let values = if trusts.is_empty() {
        vec![0.0; grid.len()]
    } else {
        kernel_heights(trusts, bandwidth, grid, denominator)
    };
    Density {
        kind: DensityKind::Kernel,
        grid: grid.to_vec(),
        values,
        total_mass: trusts.len() as f64 / denominator as f64,
        support: trusts.len() as u64,
    }
}

/// Unconditional trust density of a sample of trust scores.
pub fn trust_density(trusts: &[f64], config: &DensityConfig) -> Result<Density> {
    config.validate()?;
    check_trusts(trusts)?;
    let n = trusts.len() as u64;
    match *config {
        DensityConfig::Histogram { bins } => Ok(histogram_density(trusts, bins, n)),
        DensityConfig::Kernel {
            bandwidth,
            grid_size,
        } => {
            let h = bandwidth.unwrap_or_else(|| silverman_bandwidth(trusts));
            Ok(kernel_density(trusts, h, &uniform_grid(grid_size), n))
        }
    }
}

/// Gaussian kernel estimate with an explicit bandwidth, evaluated on a
/// uniform grid over [0,1].
pub fn kde_curve(trusts: &[f64], bandwidth: f64, grid_size: usize) -> Result<Density> {
    let config = DensityConfig::Kernel {
        bandwidth: Some(bandwidth),
        grid_size,
    };
    trust_density(trusts, &config)
}

/// Conditional trust densities from pre-partitioned trust values. The
/// partitions share one grid (and, for kernel estimates, one bandwidth
/// derived from the union), and each is scaled by its share of the total,
/// so the conditional curves sum to the unconditional density.
pub fn conditional_densities_from_parts(
    correct_trusts: &[f64],
    incorrect_trusts: &[f64],
    config: &DensityConfig,
) -> Result<ConditionalDensityPair> {
    config.validate()?;
    if correct_trusts.is_empty() && incorrect_trusts.is_empty() {
        return Err(Error::EmptyInput("trust values"));
    }
    if !correct_trusts.is_empty() {
        check_trusts(correct_trusts)?;
    }
    if !incorrect_trusts.is_empty() {
        check_trusts(incorrect_trusts)?;
    }
    let total = (correct_trusts.len() + incorrect_trusts.len()) as u64;

    let (correct, incorrect) = match *config {
        DensityConfig::Histogram { bins } => (
            histogram_density(correct_trusts, bins, total),
            histogram_density(incorrect_trusts, bins, total),
        ),
        DensityConfig::Kernel {
            bandwidth,
            grid_size,
        } => {
            let h = bandwidth.unwrap_or_else(|| {
                let mut union = correct_trusts.to_vec();
                union.extend_from_slice(incorrect_trusts);
                silverman_bandwidth(&union)
            });
            let grid = uniform_grid(grid_size);
            (
                kernel_density(correct_trusts, h, &grid, total),
                kernel_density(incorrect_trusts, h, &grid, total),
            )
        }
    };

    // The unconditional density is assembled as the pointwise sum, which
    // makes the sum identity hold bit-for-bit.
    let unconditional = Density {
        kind: correct.kind,
        grid: correct.grid.clone(),
        values: correct
            .values
            .iter()
            .zip(&incorrect.values)
            .map(|(a, b)| a + b)
            .collect(),
        total_mass: 1.0,
        support: total,
    };

    Ok(ConditionalDensityPair {
        correct,
        incorrect,
        unconditional,
    })
}

/// Conditional trust densities for one oracle class. All records must share
/// the same oracle answer; the caller filters, this validates.
pub fn conditional_trust_densities(
    scored: &[ScoredRecord],
    config: &DensityConfig,
) -> Result<ConditionalDensityPair> {
    if scored.is_empty() {
        return Err(Error::EmptyInput("scored records"));
    }
    let class = scored[0].oracle_answer();
    let mut correct = Vec::new();
    let mut incorrect = Vec::new();
    for record in scored {
        if record.oracle_answer() != class {
            return Err(Error::invalid(format!(
                "mixed oracle classes: expected {class}, found {}",
                record.oracle_answer()
            )));
        }
        if record.correct {
            correct.push(record.trust);
        } else {
            incorrect.push(record.trust);
        }
    }
    conditional_densities_from_parts(&correct, &incorrect, config)
}
