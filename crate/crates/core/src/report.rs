//! Estimator output reports.
//!
//! Every estimator run, streamed or simulated, ends in an [`EstimateReport`]
//! that carries the value, enough configuration to regenerate the run, and
//! the resource accounting the run was instrumented with. Reports serialize
//! to JSON losslessly.

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::matching;

/// Echo of the configuration that produced a report. Fields are optional
/// because different estimators expose different knobs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repetitions: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median_groups: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub greedy_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub players: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colors: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub color_subset_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_repetitions: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<String>,
}

/// Resource accounting attached to a report: peak machine words of live
/// state for streaming runs, or per-player message bits for protocol runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ResourceAccounting {
    WordsStored { peak: usize },
    PlayerBits { per_player: Vec<u64>, max: u64 },
}

/// The common output of every estimator in this crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    /// The reported estimate.
    pub value: f64,
    /// Which path produced the value, for two-branch algorithms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    pub seed: u64,
    pub config: ConfigEcho,
    /// Per-repetition estimator outcomes, in repetition order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub repetition_values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z3: Option<f64>,
    /// Exact maximum-matching size, when an oracle run was attached.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_m: Option<usize>,
    /// Exact locally-superior count, when attached.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    /// `value / exact_m`, present whenever `exact_m` is present and nonzero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accounting: Option<ResourceAccounting>,
}

impl EstimateReport {
    pub fn new(value: f64, seed: u64, config: ConfigEcho) -> Self {
        EstimateReport {
            value,
            branch: None,
            seed,
            config,
            repetition_values: Vec::new(),
            z1: None,
            z2: None,
            z3: None,
            exact_m: None,
            ell: None,
            ratio: None,
            accounting: None,
        }
    }

    /// Runs the exact oracles on `g` and attaches `exact_m`, `ell`, and the
    /// value/m ratio.
    pub fn attach_oracles(&mut self, g: &Graph) {
        let m = matching::maximum_matching_size(g);
        self.exact_m = Some(m);
        self.ell = Some(g.locally_superior_count());
        if m > 0 {
            self.ratio = Some(self.value / m as f64);
        }
    }
}
