//! Rescaled RSK shape pattern of geometric arrays against the minor
//! spectra of GUE, coordinate by coordinate and jointly.

use std::time::Instant;

use minorlab_core::rsk::shape_pattern_from_array;
use minorlab_core::sampling::{sample_geometric_array, sample_gue, Geometric};

use super::{column, compare_1d, energy};
use crate::config::{ExperimentConfig, Suite};
use crate::record::{Bound, CheckKind, ResultRecord, RowContext};
use crate::{elapsed_ms, Harness, RunError};

const ARRAYS: u64 = 11;
const GUE: u64 = 12;
const PERMUTATIONS: u64 = 13;

pub(crate) fn run(h: &Harness, cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>, RunError> {
    let (m, n, rows) = (cfg.m as usize, cfg.n_samples as usize, cfg.n as usize);
    let (w1_max, energy_min) = (cfg.threshold("w1")?, cfg.threshold("energy_p")?);
    let geo = Geometric::new(cfg.q)?;
    let center = geo.mean() * rows as f64;
    let scale = (geo.variance() * rows as f64).sqrt();

    let t = Instant::now();
    let arrays = h.stream(ARRAYS);
    // (xi pattern flattened row by row, integer pattern interlaces)
    let sampled = h.try_par_map(n, |i| {
        let w = sample_geometric_array(rows, m, cfg.q, &mut arrays.with_index(i as u64).rng())?;
        let pattern = shape_pattern_from_array(&w);
        let xi: Vec<f64> = pattern.flatten().into_iter().map(|x| (x as f64 - center) / scale).collect();
        Ok((xi, pattern.interlaces()))
    })?;
    let gue_stream = h.stream(GUE);
    let gue: Vec<Vec<f64>> = h.par_map(n, |i| {
        sample_gue(m, &mut gue_stream.with_index(i as u64).rng())
            .minor_spectra()
            .flatten()
    });
    let ctx = RowContext::new(Suite::Prelimit, h.seed()).sizes(cfg.n_samples, 0).time(elapsed_ms(t));

    let violations = sampled.iter().filter(|(_, ok)| !ok).count() as u64;
    let xi: Vec<Vec<f64>> = sampled.into_iter().map(|(x, _)| x).collect();

    let mut out = vec![ctx.exact("interlacing_violations", (None, None), violations)];
    let coords: Vec<(usize, usize)> = (1..=m).flat_map(|k| (1..=k).map(move |i| (i, k))).collect();
    let ks_p = cfg.thresholds.get("ks_p").map(|t| t.value);
    for (c, &(i, k)) in coords.iter().enumerate() {
        let cmp = compare_1d(column(&xi, c), column(&gue, c))?;
        let lk = (Some(i), Some(k));
        out.push(ctx.row(CheckKind::Statistical, "w1_coord", lk, cmp.w1, None, w1_max, Bound::Max));
        if let Some(p) = ks_p {
            out.push(ctx.row(CheckKind::Diagnostic, "ks_coord", lk, cmp.ks.statistic, Some(cmp.ks.p_value), p, Bound::MinP));
        }
    }

    let t = Instant::now();
    let e = energy(h, &xi, &gue, cfg.n_permutations, &h.stream(PERMUTATIONS))?;
    let ctx = ctx.time(elapsed_ms(t));
    out.push(ctx.row(
        CheckKind::Statistical,
        "energy_joint",
        (None, Some(m)),
        e.statistic,
        Some(e.p_value),
        energy_min,
        Bound::MinP,
    ));
    Ok(out)
}
