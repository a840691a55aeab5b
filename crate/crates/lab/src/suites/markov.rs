//! Cyclic symmetric Markov chains: covariance of the correlated motion,
//! the `k = 3` reduction to a traceless GUE, the `Sigma_u` criterion at
//! `k = 4`, and the pathwise identity between the literal breakpoint sum
//! and the optimized functional.

use std::time::Instant;

use minorlab_core::functionals::{
    markov_limit_functional, proposition_functional, proposition_functional_literal, traceless_gue_top,
};
use minorlab_core::markov::{build_eigenbasis, check_sigma_u, correlation_map, random_spec, CyclicMarkovSpec};
use minorlab_core::rsk::longest_nondecreasing_subsequence;
use minorlab_core::sampling::{sample_brownian_grid, sample_word_markov, CovarianceKind, RngStream};
use minorlab_core::stats::{empirical_covariance, VectorSample};
use rand::Rng;

use super::{compare_1d, standardize};
use crate::config::{ExperimentConfig, Suite};
use crate::record::{Bound, CheckKind, ResultRecord, RowContext};
use crate::{elapsed_ms, Harness, RunError};

const SPECS: u64 = 31;
const COV: u64 = 32;
const FUNCTIONAL: u64 = 33;
const TRACELESS: u64 = 34;
const SIGMA_U: u64 = 35;
const PATHWISE: u64 = 36;
const WORDS: u64 = 37;

/// Pathwise agreement required of the two functional evaluations.
pub const PATHWISE_TOLERANCE: f64 = 1e-10;

pub(crate) fn run(h: &Harness, cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>, RunError> {
    let mut out = covariance(h, cfg)?;
    out.extend(traceless_reduction(h, cfg)?);
    out.push(sigma_u_criterion(h, cfg)?);
    out.extend(pathwise(h, cfg)?);
    if cfg.markov.word_samples > 0 {
        out.push(word_diagnostic(h, cfg)?);
    }
    Ok(out)
}

/// Standard grid of `k - 1` coordinates mapped to the correlated motion.
fn correlated_grid(
    map: &[f64],
    k: usize,
    steps: usize,
    stream: &RngStream,
) -> minorlab_core::Result<minorlab_core::sampling::BrownianGrid> {
    sample_brownian_grid(k - 1, steps, &mut stream.rng())?.linear_map(k, map, CovarianceKind::Correlated)
}

/// Row `j` is spec `j` for alphabet size `k`: configured specs first, then
/// `specs_per_k` random ones.
fn specs_for(h: &Harness, cfg: &ExperimentConfig, k: usize) -> minorlab_core::Result<Vec<CyclicMarkovSpec>> {
    let mut specs: Vec<CyclicMarkovSpec> = cfg
        .markov
        .specs
        .iter()
        .filter(|p| p.len() == k)
        .map(|p| CyclicMarkovSpec::new(p.clone()))
        .collect::<minorlab_core::Result<_>>()?;
    let s = h.stream(SPECS).derive(k as u64);
    specs.extend((0..cfg.markov.specs_per_k).map(|j| random_spec(k, &mut s.with_index(j).rng())));
    Ok(specs)
}

/// Empirical correlation of `B~(1)` against the diagonal-normalized `Sigma`.
fn covariance(h: &Harness, cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>, RunError> {
    let tol = cfg.threshold("corr_abs")?;
    let n = cfg.markov.cov_samples as usize;
    let mut out = Vec::new();
    for &k in &cfg.markov.ks {
        let k = k as usize;
        for (j, spec) in specs_for(h, cfg, k)?.iter().enumerate() {
            let t = Instant::now();
            let data = build_eigenbasis(spec)?;
            let map = correlation_map(&data);
            let s = h.stream(COV).derive(k as u64).derive(j as u64);
            let rows = h.try_par_map(n, |i| {
                let g = correlated_grid(&map, k, 1, &s.with_index(i as u64))?;
                Ok((0..k).map(|d| g.at_one(d)).collect::<Vec<f64>>())
            })?;
            let cov = empirical_covariance(&VectorSample::from_rows(&rows)?)?;
            let target = data.normalized_sigma();
            let dev = (0..k * k)
                .map(|e| {
                    let (a, b) = (e / k, e % k);
                    (cov[e] / (cov[a * k + a] * cov[b * k + b]).sqrt() - target[e]).abs()
                })
                .fold(0.0f64, f64::max);
            let ctx = RowContext::new(Suite::Markov, h.seed()).sizes(n as u64, 1).time(elapsed_ms(t));
            out.push(ctx.row(
                CheckKind::Statistical,
                format!("corr_max_dev_spec{j}"),
                (None, Some(k)),
                dev,
                None,
                tol,
                Bound::Max,
            ));
        }
    }
    Ok(out)
}

/// `k = 3`: functional over `sqrt(Sigma_11)` against
/// `sqrt(3/2) lambda_max` of a traceless 3x3 GUE.
fn traceless_reduction(h: &Harness, cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>, RunError> {
    let t = Instant::now();
    let spec = CyclicMarkovSpec::new(cfg.markov.k3_spec.clone())?;
    let data = build_eigenbasis(&spec)?;
    let map = correlation_map(&data);
    let s11 = data.sigma[0].sqrt();
    let (n, steps) = (cfg.n_samples as usize, cfg.n_steps as usize);
    let fs = h.stream(FUNCTIONAL);
    let functional = h.try_par_map(n, |i| {
        let g = correlated_grid(&map, 3, steps, &fs.with_index(i as u64))?;
        Ok(markov_limit_functional(&g, 3)? / s11)
    })?;
    let ts = h.stream(TRACELESS);
    let scale = 1.5f64.sqrt();
    let gue = h.par_map(n, |i| scale * traceless_gue_top(3, &mut ts.with_index(i as u64).rng()));
    let cmp = compare_1d(functional, gue)?;
    let ctx = RowContext::new(Suite::Markov, h.seed())
        .sizes(cfg.n_samples, cfg.n_steps)
        .time(elapsed_ms(t));
    let mut out = vec![ctx.row(
        CheckKind::Statistical,
        "w1_k3_vs_traceless_gue",
        (Some(1), Some(3)),
        cmp.w1,
        None,
        cfg.threshold("w1")?,
        Bound::Max,
    )];
    if let Some(p) = cfg.thresholds.get("ks_p") {
        out.push(ctx.row(
            CheckKind::Diagnostic,
            "ks_k3_vs_traceless_gue",
            (Some(1), Some(3)),
            cmp.ks.statistic,
            Some(cmp.ks.p_value),
            p.value,
            Bound::MinP,
        ));
    }
    Ok(out)
}

/// Random `k = 4` specs, every other one from the `p_3 = p_2 = p_4` family
/// so both verdicts occur; counts disagreements between the matrix check
/// and the algebraic criterion.
fn sigma_u_criterion(h: &Harness, cfg: &ExperimentConfig) -> Result<ResultRecord, RunError> {
    let t = Instant::now();
    let s = h.stream(SIGMA_U);
    let n = cfg.markov.sigma_u_specs as usize;
    let verdicts = h.try_par_map(n, |i| {
        let mut rng = s.with_index(i as u64).rng();
        let spec = if i % 2 == 0 {
            random_spec(4, &mut rng)
        } else {
            let a = rng.random_range(0.02..0.32);
            CyclicMarkovSpec::new(vec![1.0 - 3.0 * a, a, a, a])?
        };
        let check = check_sigma_u(&spec)?;
        Ok(check.algebraic != Some(check.matches))
    })?;
    let disagreements = verdicts.iter().filter(|&&d| d).count() as u64;
    let ctx = RowContext::new(Suite::Markov, h.seed()).sizes(n as u64, 0).time(elapsed_ms(t));
    Ok(ctx.exact("sigma_u_disagreements", (None, Some(4)), disagreements))
}

/// Literal breakpoint sum against the optimized functional on the same
/// standard grid, one random spec per path.
fn pathwise(h: &Harness, cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>, RunError> {
    let steps = cfg.markov.literal_steps as usize;
    let n = cfg.markov.pathwise_paths as usize;
    let mut out = Vec::new();
    for &k in &cfg.markov.pathwise_ks {
        let t = Instant::now();
        let k = k as usize;
        let s = h.stream(PATHWISE).derive(k as u64);
        let residuals = h.try_par_map(n, |i| {
            let mut rng = s.with_index(i as u64).rng();
            let spec = random_spec(k, &mut rng);
            let grid = sample_brownian_grid(k - 1, steps, &mut rng)?;
            let literal = proposition_functional_literal(&grid, &spec)?;
            let fast = proposition_functional(&grid, &spec)?;
            Ok((literal - fast).abs())
        })?;
        // NaN-propagating max
        let worst = residuals.iter().fold(0.0f64, |m, &r| if r.is_nan() || m.is_nan() { f64::NAN } else { m.max(r) });
        let ctx = RowContext::new(Suite::Markov, h.seed())
            .sizes(n as u64, steps as u64)
            .time(elapsed_ms(t));
        out.push(ctx.residual("pathwise_residual", (Some(1), Some(k)), worst, PATHWISE_TOLERANCE));
    }
    Ok(out)
}

/// Markov words on the `k = 3` spec: `(LI_N - N/3) / (sigma sqrt N)` against
/// the functional. Without `sigma` both sides are standardized empirically.
fn word_diagnostic(h: &Harness, cfg: &ExperimentConfig) -> Result<ResultRecord, RunError> {
    let t = Instant::now();
    let mk = &cfg.markov;
    let spec = CyclicMarkovSpec::new(mk.k3_spec.clone())?;
    let map = correlation_map(&build_eigenbasis(&spec)?);
    let (n, len, steps) = (mk.word_samples as usize, mk.word_length as usize, cfg.n_steps as usize);
    let ws = h.stream(WORDS);
    let root_n = (len as f64).sqrt();
    let words = h.par_map(n, |i| {
        let w = sample_word_markov(len, &spec, &mut ws.with_index(i as u64).rng());
        (longest_nondecreasing_subsequence(&w) as f64 - len as f64 / 3.0) / root_n
    });
    let fs = h.stream(FUNCTIONAL).derive(1);
    let functional = h.try_par_map(n, |i| {
        let g = correlated_grid(&map, 3, steps, &fs.with_index(i as u64))?;
        markov_limit_functional(&g, 3)
    })?;
    let (a, b) = match mk.sigma {
        Some(sigma) => (words.iter().map(|x| x / sigma).collect(), functional),
        None => (standardize(&words), standardize(&functional)),
    };
    let cmp = compare_1d(a, b)?;
    let ctx = RowContext::new(Suite::Markov, h.seed()).sizes(n as u64, cfg.n_steps).time(elapsed_ms(t));
    Ok(ctx.row(
        CheckKind::Diagnostic,
        "w1_markov_words",
        (Some(1), Some(3)),
        cmp.w1,
        None,
        cfg.threshold("word_w1")?,
        Bound::Max,
    ))
}
