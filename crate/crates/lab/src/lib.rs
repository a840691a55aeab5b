//! Verification harness for `minorlab-core`: seeded Monte Carlo suites for
//! the equalities in law, exact oracle suites for the combinatorial
//! identities, and CSV / JSON emission.
//!
//! Every replicate `i` of a sampling block draws from its own stream
//! `RngStream::new(seed, 0).derive(label).with_index(i)`, and results are
//! collected in index order, so the worker count never changes an output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use minorlab_core::sampling::RngStream;
use rayon::prelude::*;
use serde::Serialize;

pub mod config;
pub mod record;
mod suites;

pub use config::{ExperimentConfig, Overrides, Suite, Threshold};
pub use record::{CheckKind, ResultRecord, CSV_HEADER};

/// `git describe`-style version of the build.
pub const VERSION: &str = env!("MINORLAB_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("parameter rejected: {0}")]
    Core(#[from] minorlab_core::Error),
    #[error("cannot build worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Core(_) => 4,
            RunError::Pool(_) | RunError::Write { .. } => 1,
        }
    }
}

/// Seeded streams and the bounded worker pool of one run.
pub(crate) struct Harness {
    seed: u64,
    pool: rayon::ThreadPool,
}

impl Harness {
    fn new(seed: u64, workers: u64) -> Result<Self, RunError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers as usize)
            .build()?;
        Ok(Self { seed, pool })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Stream family for one purpose; replicate `i` uses `.with_index(i)`.
    pub fn stream(&self, label: u64) -> RngStream {
        RngStream::new(self.seed, 0).derive(label)
    }

    /// `f(0), ..., f(n - 1)` on the pool, in index order.
    pub fn par_map<T: Send>(&self, n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }

    /// As [`Harness::par_map`] for fallible replicates; the first error by
    /// index wins.
    pub fn try_par_map<T: Send>(
        &self,
        n: usize,
        f: impl Fn(usize) -> minorlab_core::Result<T> + Sync + Send,
    ) -> minorlab_core::Result<Vec<T>> {
        self.par_map(n, f).into_iter().collect()
    }
}

pub(crate) fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// Rows of one suite run plus its verdict.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub records: Vec<ResultRecord>,
    pub wall_ms: u64,
}

impl SuiteReport {
    pub fn exact_failures(&self) -> usize {
        self.failures(CheckKind::Exact)
    }

    pub fn statistical_failures(&self) -> usize {
        self.failures(CheckKind::Statistical)
    }

    fn failures(&self, kind: CheckKind) -> usize {
        self.records.iter().filter(|r| r.kind == kind && !r.pass).count()
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| !r.is_failure())
    }

    /// 0 all pass, 3 any exact failure, else 2 any statistical failure.
    pub fn exit_code(&self) -> i32 {
        if self.exact_failures() > 0 {
            3
        } else if self.statistical_failures() > 0 {
            2
        } else {
            0
        }
    }

    pub fn csv(&self, timings: bool) -> String {
        record::to_csv(&self.records, timings)
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed(),
            "exit_code": self.exit_code(),
            "rows": self.records.len(),
            "exact_failures": self.exact_failures(),
            "statistical_failures": self.statistical_failures(),
            "wall_ms": self.wall_ms,
            "records": self.records,
        })
    }
}

/// Validates `cfg` and runs its suite.
pub fn run(cfg: &ExperimentConfig) -> Result<SuiteReport, RunError> {
    cfg.validate()?;
    let h = Harness::new(cfg.master_seed, cfg.workers)?;
    let start = Instant::now();
    let records = match cfg.experiment {
        Suite::Theorem1 => suites::theorem1::run(&h, cfg)?,
        Suite::Prelimit => suites::prelimit::run(&h, cfg)?,
        Suite::Corollary1 => suites::corollary::run_corollary1(&h, cfg)?,
        Suite::Corollary2 => suites::corollary::run_corollary2(&h, cfg)?,
        Suite::Markov => suites::markov::run(&h, cfg)?,
        Suite::Oracles => suites::oracles::run(&h, cfg)?,
    };
    Ok(SuiteReport {
        suite: cfg.experiment,
        seed: cfg.master_seed,
        records,
        wall_ms: elapsed_ms(start),
    })
}

/// Files written by [`write_outputs`].
#[derive(Clone, Debug)]
pub struct OutputPaths {
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub manifest: PathBuf,
}

/// Writes `<suite>.csv`, `<suite>.summary.json` and `<suite>.manifest.json`
/// into `dir`.
pub fn write_outputs(
    dir: &Path,
    cfg: &ExperimentConfig,
    report: &SuiteReport,
    timings: bool,
) -> Result<OutputPaths, RunError> {
    let write = |path: PathBuf, text: String| -> Result<PathBuf, RunError> {
        std::fs::write(&path, text).map_err(|source| RunError::Write {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    };
    std::fs::create_dir_all(dir).map_err(|source| RunError::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    let name = report.suite.name();
    let manifest = serde_json::json!({
        "suite": report.suite,
        "version": VERSION,
        "master_seed": cfg.master_seed,
        "config": cfg,
    });
    let pretty = |v: &serde_json::Value| serde_json::to_string_pretty(v).expect("json values serialize") + "\n";
    Ok(OutputPaths {
        csv: write(dir.join(format!("{name}.csv")), report.csv(timings))?,
        summary: write(dir.join(format!("{name}.summary.json")), pretty(&report.summary_json()))?,
        manifest: write(dir.join(format!("{name}.manifest.json")), pretty(&manifest))?,
    })
}
