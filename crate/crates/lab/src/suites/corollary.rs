//! Random words with i.i.d. letters: the rescaled longest nondecreasing
//! subsequence against the GUE limit laws, and the rescaled RSK shape
//! against the spectra of the weighted traceless block projection.

use std::time::Instant;

use minorlab_core::functionals::{block_limit_sample, gue_limit_sample, GueLimitVariant};
use minorlab_core::rsk::{longest_nondecreasing_subsequence, rescale_shape, rsk_word_shape};
use minorlab_core::sampling::sample_word_iid;

use super::{column, compare_1d, energy};
use crate::config::{ExperimentConfig, Suite};
use crate::record::{Bound, CheckKind, ResultRecord, RowContext};
use crate::{elapsed_ms, Harness, RunError};

const WORDS: u64 = 21;
const LIMIT_B: u64 = 22;
const VARIANT_A: u64 = 23;
const VARIANT_B: u64 = 24;
const SHAPES: u64 = 25;
const BLOCKS: u64 = 26;
const PERMUTATIONS: u64 = 27;

/// `p_max` and the number of letters attaining it.
fn top_letters(p: &[f64]) -> (f64, usize) {
    let p_max = p[0];
    (p_max, p.iter().filter(|&&x| x == p_max).count())
}

pub(crate) fn run_corollary1(h: &Harness, cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>, RunError> {
    let p = cfg.letter_probabilities();
    let (p_max, k1) = top_letters(&p);
    let (n, len) = (cfg.n_samples as usize, cfg.n as usize);
    let (w1_max, ks_min) = (cfg.threshold("w1")?, cfg.threshold("ks_p")?);
    let center = len as f64 * p_max;
    let scale = center.sqrt();

    let t = Instant::now();
    let words = h.stream(WORDS);
    let li = h.try_par_map(n, |i| {
        let w = sample_word_iid(len, &p, &mut words.with_index(i as u64).rng())?;
        Ok((longest_nondecreasing_subsequence(&w) as f64 - center) / scale)
    })?;
    let limit = h.stream(LIMIT_B);
    let lim = h.try_par_map(n, |i| {
        gue_limit_sample(k1, p_max, GueLimitVariant::IndependentNoise, &mut limit.with_index(i as u64).rng())
    })?;
    let ctx = RowContext::new(Suite::Corollary1, h.seed()).sizes(cfg.n_samples, 0).time(elapsed_ms(t));
    let cmp = compare_1d(li, lim)?;
    let lk = (Some(1), Some(k1));
    let mut out = vec![
        ctx.row(CheckKind::Statistical, "w1_li_vs_limit", lk, cmp.w1, None, w1_max, Bound::Max),
        ctx.row(CheckKind::Statistical, "ks_li_vs_limit", lk, cmp.ks.statistic, Some(cmp.ks.p_value), ks_min, Bound::MinP),
    ];

    if cfg.variant_samples > 0 {
        let t = Instant::now();
        let nv = cfg.variant_samples as usize;
        let draw = |label: u64, variant: GueLimitVariant| {
            let s = h.stream(label);
            h.try_par_map(nv, |i| gue_limit_sample(k1, p_max, variant, &mut s.with_index(i as u64).rng()))
        };
        let a = draw(VARIANT_A, GueLimitVariant::TraceCombination)?;
        let b = draw(VARIANT_B, GueLimitVariant::IndependentNoise)?;
        let cmp = compare_1d(a, b)?;
        let ctx = RowContext::new(Suite::Corollary1, h.seed())
            .sizes(cfg.variant_samples, 0)
            .time(elapsed_ms(t));
        out.push(ctx.row(
            CheckKind::Statistical,
            "ks_variant_a_vs_b",
            lk,
            cmp.ks.statistic,
            Some(cmp.ks.p_value),
            cfg.threshold("variant_ks_p")?,
            Bound::MinP,
        ));
    }
    Ok(out)
}

pub(crate) fn run_corollary2(h: &Harness, cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>, RunError> {
    let p = cfg.letter_probabilities();
    let blocks = cfg.block_sizes();
    let k = p.len();
    let (n, len) = (cfg.n_samples as usize, cfg.n as usize);
    let centers: Vec<f64> = p.iter().map(|&x| len as f64 * x).collect();
    let scales: Vec<f64> = centers.iter().map(|c| c.sqrt()).collect();

    let t = Instant::now();
    let words = h.stream(SHAPES);
    let xi = h.try_par_map(n, |i| {
        let w = sample_word_iid(len, &p, &mut words.with_index(i as u64).rng())?;
        Ok(rescale_shape(&rsk_word_shape(&w), &centers, &scales)?.xi)
    })?;
    let limit = h.stream(BLOCKS);
    let mu = h.try_par_map(n, |i| block_limit_sample(&blocks, &p, &mut limit.with_index(i as u64).rng()))?;
    let ctx = RowContext::new(Suite::Corollary2, h.seed()).sizes(cfg.n_samples, 0).time(elapsed_ms(t));

    let (w1_max, ks_min) = (cfg.threshold("w1")?, cfg.threshold("ks_p")?);
    let mut out = Vec::new();
    for c in 0..k {
        let cmp = compare_1d(column(&xi, c), column(&mu, c))?;
        let lk = (Some(c + 1), Some(k));
        out.push(ctx.row(CheckKind::Diagnostic, "w1_coord", lk, cmp.w1, None, w1_max, Bound::Max));
        out.push(ctx.row(CheckKind::Diagnostic, "ks_coord", lk, cmp.ks.statistic, Some(cmp.ks.p_value), ks_min, Bound::MinP));
    }
    let t = Instant::now();
    let e = energy(h, &xi, &mu, cfg.n_permutations, &h.stream(PERMUTATIONS))?;
    out.push(ctx.time(elapsed_ms(t)).row(
        CheckKind::Statistical,
        "energy_joint",
        (None, Some(k)),
        e.statistic,
        Some(e.p_value),
        cfg.threshold("energy_p")?,
        Bound::MinP,
    ));
    Ok(out)
}
