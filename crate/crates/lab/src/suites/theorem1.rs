//! Top-`l` eigenvalue sums of GUE minors against the maximal Brownian
//! functional, for every `1 <= l <= k <= M`.

use std::time::Instant;

use minorlab_core::functionals::max_functional;
use minorlab_core::sampling::{sample_brownian_grid, sample_gue, RngStream};
use minorlab_core::stats::{ks_two_sample, EmpiricalSample};

use super::{column, compare_1d};
use crate::config::{ExperimentConfig, Suite};
use crate::record::{Bound, CheckKind, ResultRecord, RowContext};
use crate::{elapsed_ms, Harness, RunError};

const GUE: u64 = 1;
const BROWNIAN: u64 = 2;
const NULL_A: u64 = 3;
const NULL_B: u64 = 4;

pub(crate) fn pairs(m: usize) -> Vec<(usize, usize)> {
    (1..=m).flat_map(|k| (1..=k).map(move |l| (l, k))).collect()
}

/// `lambda_1^k + ... + lambda_l^k` of one GUE draw, for every pair.
fn gue_row(m: usize, pairs: &[(usize, usize)], stream: &RngStream) -> minorlab_core::Result<Vec<f64>> {
    let pattern = sample_gue(m, &mut stream.rng()).minor_spectra();
    pairs.iter().map(|&(l, k)| pattern.partial_sum_top(l, k)).collect()
}

fn gue_side(h: &Harness, m: usize, pairs: &[(usize, usize)], n: usize, stream: &RngStream) -> minorlab_core::Result<Vec<Vec<f64>>> {
    h.try_par_map(n, |i| gue_row(m, pairs, &stream.with_index(i as u64)))
}

pub(crate) fn run(h: &Harness, cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>, RunError> {
    let (m, n, steps) = (cfg.m as usize, cfg.n_samples as usize, cfg.n_steps as usize);
    let pairs = pairs(m);
    let (w1_max, ks_min) = (cfg.threshold("w1")?, cfg.threshold("ks_p")?);

    let t = Instant::now();
    let gue = gue_side(h, m, &pairs, n, &h.stream(GUE))?;
    let bm_stream = h.stream(BROWNIAN);
    let bm = h.try_par_map(n, |i| {
        let grid = sample_brownian_grid(m, steps, &mut bm_stream.with_index(i as u64).rng())?;
        pairs.iter().map(|&(l, k)| max_functional(&grid, l, k)).collect()
    })?;
    let ctx = RowContext::new(Suite::Theorem1, h.seed())
        .sizes(cfg.n_samples, cfg.n_steps)
        .time(elapsed_ms(t));

    let mut rows = Vec::new();
    for (c, &(l, k)) in pairs.iter().enumerate() {
        let cmp = compare_1d(column(&gue, c), column(&bm, c))?;
        let lk = (Some(l), Some(k));
        rows.push(ctx.row(CheckKind::Statistical, "w1", lk, cmp.w1, None, w1_max, Bound::Max));
        rows.push(ctx.row(CheckKind::Statistical, "ks", lk, cmp.ks.statistic, Some(cmp.ks.p_value), ks_min, Bound::MinP));
    }

    if cfg.null_runs > 0 {
        rows.push(null_calibration(h, cfg, m, &pairs)?);
    }
    Ok(rows)
}

/// GUE side against an independently seeded GUE side, `null_runs` times; a
/// run passes when every pair's KS p-value clears `null_ks_p`. The row's
/// distance is the number of passing runs.
fn null_calibration(
    h: &Harness,
    cfg: &ExperimentConfig,
    m: usize,
    pairs: &[(usize, usize)],
) -> Result<ResultRecord, RunError> {
    let t = Instant::now();
    let p_min = cfg.threshold("null_ks_p")?;
    let need = cfg.threshold("null_min_passing")?;
    let n = cfg.n_samples as usize;
    let mut passing = 0u64;
    let mut worst = 1.0f64;
    for r in 0..cfg.null_runs {
        let a = gue_side(h, m, pairs, n, &h.stream(NULL_A).derive(r))?;
        let b = gue_side(h, m, pairs, n, &h.stream(NULL_B).derive(r))?;
        let mut run_min = 1.0f64;
        for c in 0..pairs.len() {
            let ks = ks_two_sample(&EmpiricalSample::new(column(&a, c))?, &EmpiricalSample::new(column(&b, c))?);
            run_min = run_min.min(ks.p_value);
        }
        worst = worst.min(run_min);
        passing += u64::from(run_min >= p_min);
    }
    let ctx = RowContext::new(Suite::Theorem1, h.seed())
        .sizes(cfg.n_samples, 0)
        .time(elapsed_ms(t));
    Ok(ctx.row(
        CheckKind::Statistical,
        format!("null_ks_runs_of_{}", cfg.null_runs),
        (None, None),
        passing as f64,
        Some(worst),
        need,
        Bound::Min,
    ))
}
