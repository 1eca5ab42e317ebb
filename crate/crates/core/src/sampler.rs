//! The vertex-sampling estimator for the locally-superior count.
//!
//! One repetition samples `s` vertices without replacement, counts the
//! locally superior ones among them, and scales by `n/s`; the estimate is
//! the average of `r` independent repetitions, `r = ceil(8 / epsilon^2)` by
//! default. Repetitions draw from independent substreams of the master seed
//! indexed by repetition, so they can run in parallel (and do, under the
//! `parallel` feature) without changing the output.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::par;
use crate::report::{ConfigEcho, EstimateReport};
use crate::rng::{substream, Domain};
use crate::{Error, Result};

/// Configuration of the sampling estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Vertices sampled per repetition; clamped to the vertex count when it
    /// exceeds it (a full sample returns the exact count, which only helps).
    pub sample_size: usize,
    /// Relative accuracy target.
    pub epsilon: f64,
    /// Repetition count.
    pub repetitions: usize,
    pub seed: u64,
    /// Optional median-of-groups amplification: repetition values are split
    /// into this many groups by index, averaged within each group, and the
    /// group medians' midpoint is reported. Off by default.
    pub median_groups: Option<usize>,
}

impl SamplerConfig {
    /// Default repetition count for a given accuracy target.
    pub fn default_repetitions(epsilon: f64) -> usize {
        (8.0 / (epsilon * epsilon)).ceil() as usize
    }

    /// A config with the default `ceil(8 / epsilon^2)` repetitions.
    pub fn new(sample_size: usize, epsilon: f64, seed: u64) -> Self {
        assert!(epsilon > 0.0, "epsilon must be positive");
        SamplerConfig {
            sample_size: sample_size.max(1),
            epsilon,
            repetitions: Self::default_repetitions(epsilon),
            seed,
            median_groups: None,
        }
    }

    pub fn with_repetitions(mut self, repetitions: usize) -> Self {
        assert!(repetitions >= 1);
        self.repetitions = repetitions;
        self
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            epsilon: Some(self.epsilon),
            sample_size: Some(self.sample_size),
            repetitions: Some(self.repetitions),
            median_groups: self.median_groups,
            ..ConfigEcho::default()
        }
    }
}

/// Samples exactly `s` distinct ids from `0..n`, uniform over all
/// `s`-subsets, by a partial Fisher-Yates shuffle. The result is sorted.
pub fn sample_without_replacement<R: Rng>(n: usize, s: usize, rng: &mut R) -> Result<Vec<usize>> {
    if s == 0 || s > n {
        return Err(Error::InvalidInput(format!(
            "sample size {s} must be in 1..={n}"
        )));
    }
    let mut ids: Vec<usize> = (0..n).collect();
    for i in 0..s {
        let j = rng.gen_range(i..n);
        ids.swap(i, j);
    }
    ids.truncate(s);
    ids.sort_unstable();
    Ok(ids)
}

/// One repetition's value: `(n / |sample|) * #{v in sample : v locally
/// superior}`.
pub fn single_shot_estimate(g: &Graph, sample: &[usize]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InvalidInput("empty sample".into()));
    }
    let mut superior = 0usize;
    for &v in sample {
        if g.is_locally_superior(v)? {
            superior += 1;
        }
    }
    Ok(g.vertex_count() as f64 / sample.len() as f64 * superior as f64)
}

/// Draws the per-repetition sample sets for a config, clamping the sample
/// size to `n`. Shared by the offline estimator, the streaming engine, and
/// the protocol simulator so that all three see identical samples for a
/// given seed. Returns an empty list of samples when `n = 0`.
pub fn draw_samples(n: usize, cfg: &SamplerConfig) -> Vec<Vec<usize>> {
    let s = cfg.sample_size.min(n);
    if s == 0 {
        return vec![Vec::new(); cfg.repetitions];
    }
    (0..cfg.repetitions)
        .map(|rep| {
            let mut rng = substream(cfg.seed, Domain::LsSample, rep as u64, 0);
            sample_without_replacement(n, s, &mut rng).expect("clamped sample size is valid")
        })
        .collect()
}

/// Combines per-repetition values into the reported estimate: plain mean,
/// or median of group means when `median_groups` is set. Summation is in
/// repetition order, so the combination is independent of execution order.
pub fn combine_repetitions(values: &[f64], cfg: &SamplerConfig) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    match cfg.median_groups {
        None => values.iter().sum::<f64>() / values.len() as f64,
        Some(groups) => {
            let groups = groups.clamp(1, values.len());
            let mut means: Vec<f64> = (0..groups)
                .map(|gi| {
                    let chunk: Vec<f64> = values.iter().copied().skip(gi).step_by(groups).collect();
                    chunk.iter().sum::<f64>() / chunk.len() as f64
                })
                .collect();
            means.sort_by(f64::total_cmp);
            let mid = means.len() / 2;
            if means.len() % 2 == 1 {
                means[mid]
            } else {
                (means[mid - 1] + means[mid]) / 2.0
            }
        }
    }
}

/// The value of repetition `rep` under `cfg`, on its own substream.
pub fn ls_repetition_value(g: &Graph, cfg: &SamplerConfig, rep: usize) -> f64 {
    let n = g.vertex_count();
    let s = cfg.sample_size.min(n);
    if s == 0 {
        return 0.0;
    }
    let mut rng = substream(cfg.seed, Domain::LsSample, rep as u64, 0);
    let sample = sample_without_replacement(n, s, &mut rng).expect("clamped sample size is valid");
    single_shot_estimate(g, &sample).expect("sample ids are in range")
}

/// Runs the full estimator: `r` independent repetitions, combined into one
/// value. The report carries every repetition value, the configuration, and
/// the seed.
pub fn estimate_ls(g: &Graph, cfg: &SamplerConfig) -> EstimateReport {
    let values = par::indexed_map(cfg.repetitions, |rep| ls_repetition_value(g, cfg, rep));
    let value = combine_repetitions(&values, cfg);
    let mut report = EstimateReport::new(value, cfg.seed, cfg.echo());
    report.repetition_values = values;
    report
}
