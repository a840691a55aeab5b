//! Experiment configuration: one JSON document per run, overridable from
//! the command line. Every numeric field is 64-bit.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use minorlab_core::markov::CyclicMarkovSpec;
use minorlab_core::sampling::validate_letter_probabilities;
use serde::{Deserialize, Serialize};

use crate::ConfigError;

/// Tolerance on `sum p = 1` for every probability vector in a config.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorem1,
    Prelimit,
    Corollary1,
    Corollary2,
    Markov,
    Oracles,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Theorem1,
        Suite::Prelimit,
        Suite::Corollary1,
        Suite::Corollary2,
        Suite::Markov,
        Suite::Oracles,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Prelimit => "prelimit",
            Suite::Corollary1 => "corollary1",
            Suite::Corollary2 => "corollary2",
            Suite::Markov => "markov",
            Suite::Oracles => "oracles",
        }
    }

    /// Threshold names that must be present for the suite's statistical rows.
    fn required_thresholds(self, cfg: &ExperimentConfig) -> Vec<&'static str> {
        let mut names = match self {
            Suite::Theorem1 => vec!["w1", "ks_p"],
            Suite::Prelimit => vec!["w1", "energy_p"],
            Suite::Corollary1 => vec!["w1", "ks_p"],
            Suite::Corollary2 => vec!["energy_p", "w1", "ks_p"],
            Suite::Markov => vec!["corr_abs", "w1"],
            Suite::Oracles => vec![],
        };
        if self == Suite::Theorem1 && cfg.null_runs > 0 {
            names.extend(["null_ks_p", "null_min_passing"]);
        }
        if self == Suite::Corollary1 && cfg.variant_samples > 0 {
            names.push("variant_ks_p");
        }
        if self == Suite::Markov && cfg.markov.word_samples > 0 {
            names.push("word_w1");
        }
        names
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A calibrated acceptance constant and the scale it was calibrated at.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Threshold {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<u64>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MarkovParams {
    /// Alphabet sizes for the covariance check.
    pub ks: Vec<u64>,
    /// Random specs drawn per alphabet size, on top of `specs`.
    pub specs_per_k: u64,
    /// Explicit step distributions `p(0), ..., p(k-1)`.
    pub specs: Vec<Vec<f64>>,
    pub cov_samples: u64,
    /// Spec for the `k = 3` distributional check.
    pub k3_spec: Vec<f64>,
    /// Random `k = 4` specs for the `Sigma_u` criterion.
    pub sigma_u_specs: u64,
    pub pathwise_ks: Vec<u64>,
    pub pathwise_paths: u64,
    pub literal_steps: u64,
    /// Diagnostic: Markov words against the limit functional (0 = off).
    pub word_samples: u64,
    pub word_length: u64,
    /// Normalizing constant for `(LI_N - N/k) / (sigma sqrt N)`; without it
    /// both sides are standardized empirically.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

impl Default for MarkovParams {
    fn default() -> Self {
        Self {
            ks: vec![3, 4, 5],
            specs_per_k: 5,
            specs: Vec::new(),
            cov_samples: 100_000,
            k3_spec: vec![0.5, 0.25, 0.25],
            sigma_u_specs: 1000,
            pathwise_ks: vec![2, 3, 4, 5, 6],
            pathwise_paths: 1000,
            literal_steps: 16,
            word_samples: 0,
            word_length: 10_000,
            sigma: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleParams {
    pub int_arrays: u64,
    pub real_arrays: u64,
    pub brute_max_n: u64,
    pub brute_max_k: u64,
    pub rsk_arrays: u64,
    pub rsk_max_n: u64,
    pub rsk_max_k: u64,
    pub rsk_q: f64,
    pub path_collections: u64,
    pub path_max: u64,
    pub gue_draws: u64,
    pub gue_max_m: u64,
    pub forced_grids: u64,
}

impl Default for OracleParams {
    fn default() -> Self {
        Self {
            int_arrays: 500,
            real_arrays: 200,
            brute_max_n: 4,
            brute_max_k: 3,
            rsk_arrays: 1000,
            rsk_max_n: 8,
            rsk_max_k: 5,
            rsk_q: 0.5,
            path_collections: 10_000,
            path_max: 6,
            gue_draws: 1000,
            gue_max_m: 6,
            forced_grids: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Suite,
    pub master_seed: u64,
    /// Worker threads; 0 uses every available core.
    #[serde(default)]
    pub workers: u64,
    #[serde(default = "defaults::n_samples")]
    pub n_samples: u64,
    #[serde(default = "defaults::n_steps")]
    pub n_steps: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    /// Matrix size / number of Brownian coordinates.
    #[serde(default = "defaults::m")]
    pub m: u64,
    #[serde(default = "defaults::m_cap")]
    pub m_cap: u64,
    /// Geometric parameter of the pre-limit arrays.
    #[serde(default = "defaults::q")]
    pub q: f64,
    /// Array rows (pre-limit) or word length (corollaries).
    #[serde(default = "defaults::n")]
    pub n: u64,
    /// Letter probabilities, nonincreasing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    /// Block sizes of equal probabilities; derived from `p` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<u64>>,
    #[serde(default = "defaults::n_permutations")]
    pub n_permutations: u64,
    /// Null-calibration repetitions of the GUE side (theorem1).
    #[serde(default)]
    pub null_runs: u64,
    /// Sample size of the variant (a) vs (b) comparison (corollary1).
    #[serde(default)]
    pub variant_samples: u64,
    #[serde(default)]
    pub markov: MarkovParams,
    #[serde(default)]
    pub oracles: OracleParams,
    #[serde(default)]
    pub thresholds: BTreeMap<String, Threshold>,
}

mod defaults {
    pub fn n_samples() -> u64 {
        20_000
    }
    pub fn n_steps() -> u64 {
        4096
    }
    pub fn m() -> u64 {
        3
    }
    pub fn m_cap() -> u64 {
        6
    }
    pub fn q() -> f64 {
        0.5
    }
    pub fn n() -> u64 {
        10_000
    }
    pub fn n_permutations() -> u64 {
        99
    }
}

/// Command-line overrides; `None` keeps the config value.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub steps: Option<u64>,
    pub workers: Option<u64>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.master_seed = s;
        }
        if let Some(n) = o.samples {
            self.n_samples = n;
        }
        if let Some(n) = o.steps {
            self.n_steps = n;
        }
        if let Some(w) = o.workers {
            self.workers = w;
        }
        if let Some(d) = &o.out {
            self.out_dir = Some(d.clone());
        }
    }

    pub fn threshold(&self, name: &str) -> Result<f64, ConfigError> {
        self.thresholds
            .get(name)
            .map(|t| t.value)
            .ok_or_else(|| ConfigError::Invalid(format!("missing threshold `{name}`")))
    }

    /// Letter probabilities, uniform on three letters when absent.
    pub fn letter_probabilities(&self) -> Vec<f64> {
        self.p.clone().unwrap_or_else(|| vec![1.0 / 3.0; 3])
    }

    /// Block sizes: configured, or maximal runs of equal probabilities.
    pub fn block_sizes(&self) -> Vec<usize> {
        if let Some(b) = &self.blocks {
            return b.iter().map(|&x| x as usize).collect();
        }
        let p = self.letter_probabilities();
        let mut sizes: Vec<usize> = Vec::new();
        for (i, x) in p.iter().enumerate() {
            if i > 0 && *x == p[i - 1] {
                *sizes.last_mut().unwrap() += 1;
            } else {
                sizes.push(1);
            }
        }
        sizes
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::Invalid(msg));
        if self.n_samples < 2 {
            return bad(format!("n_samples = {} (need >= 2)", self.n_samples));
        }
        if self.n_steps == 0 || !self.n_steps.is_power_of_two() {
            return bad(format!("n_steps = {} is not a power of two", self.n_steps));
        }
        if self.m == 0 || self.m > self.m_cap {
            return bad(format!("M = {} outside 1..={} (m_cap)", self.m, self.m_cap));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return bad(format!("q = {} not in (0, 1)", self.q));
        }
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if let Some(p) = &self.p {
            check_probability_vector("p", p)?;
            validate_letter_probabilities(p).map_err(|e| ConfigError::Invalid(format!("p: {e}")))?;
        }
        if let Some(b) = &self.blocks {
            let p = self.letter_probabilities();
            if b.contains(&0) || b.iter().sum::<u64>() as usize != p.len() {
                return bad(format!("blocks {b:?} do not partition {} letters", p.len()));
            }
            let mut offset = 0;
            for &size in b {
                let block = &p[offset..offset + size as usize];
                if block.iter().any(|&x| x != block[0]) {
                    return bad(format!("p is not constant on block {block:?}"));
                }
                offset += size as usize;
            }
        }
        if self.n_permutations == 0 {
            return bad("n_permutations must be positive".into());
        }
        self.validate_markov()?;
        for t in self.thresholds.values() {
            if !t.value.is_finite() {
                return bad("threshold values must be finite".into());
            }
        }
        for name in self.experiment.required_thresholds(self) {
            self.threshold(name)?;
        }
        Ok(())
    }

    fn validate_markov(&self) -> Result<(), ConfigError> {
        let mk = &self.markov;
        let spec = |p: &[f64]| -> Result<CyclicMarkovSpec, ConfigError> {
            check_probability_vector("markov spec", p)?;
            CyclicMarkovSpec::new(p.to_vec()).map_err(|e| ConfigError::Invalid(format!("markov spec {p:?}: {e}")))
        };
        for p in &mk.specs {
            spec(p)?;
        }
        if spec(&mk.k3_spec)?.k() != 3 {
            return Err(ConfigError::Invalid("k3_spec must have 3 entries".into()));
        }
        if mk.ks.iter().chain(&mk.pathwise_ks).any(|&k| !(2..=8).contains(&k)) {
            return Err(ConfigError::Invalid("markov alphabet sizes must lie in 2..=8".into()));
        }
        if mk.literal_steps == 0 || mk.cov_samples == 1 {
            return Err(ConfigError::Invalid("literal_steps must be positive and cov_samples >= 2".into()));
        }
        if let Some(s) = mk.sigma {
            if !(s > 0.0 && s.is_finite()) {
                return Err(ConfigError::Invalid(format!("sigma = {s} must be positive")));
            }
        }
        if mk.word_samples == 1 || (mk.word_samples > 0 && mk.word_length == 0) {
            return Err(ConfigError::Invalid("word diagnostic needs >= 2 samples of positive length".into()));
        }
        Ok(())
    }
}

fn check_probability_vector(what: &str, p: &[f64]) -> Result<(), ConfigError> {
    if p.is_empty() || p.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(ConfigError::Invalid(format!("{what}: entries must be finite and nonnegative")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
        return Err(ConfigError::Invalid(format!("{what}: sums to {sum}, not 1 within 1e-12")));
    }
    Ok(())
}
