//! Exact identities: lattice DP against brute force and against RSK shape
//! sums, the path normalization postconditions, the forced collection,
//! and the eigenvalue pattern identities of GUE draws.

use std::time::Instant;

use minorlab_core::functionals::max_functional;
use minorlab_core::paths::{
    collection_weight, multipath_lpp_bruteforce, multipath_lpp_dp, normalize_ends, normalize_starts, order_paths,
    random_disjoint_collection, PathCollection, WeightArray,
};
use minorlab_core::rsk::rsk_array;
use minorlab_core::sampling::{sample_brownian_grid, sample_geometric_array, sample_gue, standard_normal};
use rand::Rng;

use crate::config::{ExperimentConfig, Suite};
use crate::record::{ResultRecord, RowContext};
use crate::{elapsed_ms, Harness, RunError};

const INT_ARRAYS: u64 = 41;
const REAL_ARRAYS: u64 = 42;
const RSK_ARRAYS: u64 = 43;
const COLLECTIONS: u64 = 44;
const GUE: u64 = 45;
const FORCED: u64 = 46;

/// Agreement required of real-valued DP and brute force.
pub const REAL_LPP_TOLERANCE: f64 = 1e-12;
/// Diagonal recovered from the minor spectra.
pub const DIAGONAL_TOLERANCE: f64 = 1e-8;
/// Interlacing slack for floating-point spectra.
pub const INTERLACING_TOLERANCE: f64 = 1e-9;
/// Forced collection against the summed endpoints.
pub const FORCED_TOLERANCE: f64 = 1e-10;
/// Steps of the grids used for the forced collection.
const FORCED_STEPS: usize = 64;

fn max_abs(x: impl IntoIterator<Item = f64>) -> f64 {
    x.into_iter().fold(0.0, |m, r| if r.is_nan() || m.is_nan() { f64::NAN } else { m.max(r) })
}

pub(crate) fn run(h: &Harness, cfg: &ExperimentConfig) -> Result<Vec<ResultRecord>, RunError> {
    let o = &cfg.oracles;
    let ctx = |n: u64, t: Instant| RowContext::new(Suite::Oracles, h.seed()).sizes(n, 0).time(elapsed_ms(t));
    let mut out = Vec::new();

    // DP against brute force, integer weights: one count per (array, l)
    let t = Instant::now();
    let s = h.stream(INT_ARRAYS);
    let counts = h.try_par_map(o.int_arrays as usize, |i| {
        let mut rng = s.with_index(i as u64).rng();
        let n = rng.random_range(1..=o.brute_max_n as usize);
        let k = rng.random_range(1..=o.brute_max_k as usize);
        let w = WeightArray::from_fn(n, k, |_, _| rng.random_range(0..10i64));
        let mut bad = 0u64;
        for l in 1..=k {
            bad += u64::from(multipath_lpp_dp(&w, l)? != multipath_lpp_bruteforce(&w, l)?);
        }
        Ok(bad)
    })?;
    out.push(ctx(o.int_arrays, t).exact("lpp_dp_vs_bruteforce_int", (None, None), counts.iter().sum()));

    let t = Instant::now();
    let s = h.stream(REAL_ARRAYS);
    let residuals = h.try_par_map(o.real_arrays as usize, |i| {
        let mut rng = s.with_index(i as u64).rng();
        let n = rng.random_range(1..=o.brute_max_n as usize);
        let k = rng.random_range(1..=o.brute_max_k as usize);
        let w = WeightArray::from_fn(n, k, |_, _| standard_normal(&mut rng));
        let mut worst = 0.0f64;
        for l in 1..=k {
            worst = max_abs([worst, (multipath_lpp_dp(&w, l)? - multipath_lpp_bruteforce(&w, l)?).abs()]);
        }
        Ok(worst)
    })?;
    out.push(ctx(o.real_arrays, t).residual("lpp_dp_vs_bruteforce_real", (None, None), max_abs(residuals), REAL_LPP_TOLERANCE));

    // DP against RSK partial sums on geometric arrays
    let t = Instant::now();
    let s = h.stream(RSK_ARRAYS);
    let counts = h.try_par_map(o.rsk_arrays as usize, |i| {
        let mut rng = s.with_index(i as u64).rng();
        let n = rng.random_range(1..=o.rsk_max_n as usize);
        let k = rng.random_range(1..=o.rsk_max_k as usize);
        let a = sample_geometric_array(n, k, o.rsk_q, &mut rng)?;
        let shape = rsk_array(&a);
        let w = WeightArray::from_integer_array(&a);
        let mut bad = 0u64;
        for l in 1..=k {
            bad += u64::from(multipath_lpp_dp(&w, l)? != shape.partial_sum(l));
        }
        Ok(bad)
    })?;
    out.push(ctx(o.rsk_arrays, t).exact("lpp_dp_vs_rsk_shape", (None, None), counts.iter().sum()));

    // path normalization postconditions
    let t = Instant::now();
    let s = h.stream(COLLECTIONS);
    let verdicts = h.par_map(o.path_collections as usize, |i| {
        let mut rng = s.with_index(i as u64).rng();
        let n = rng.random_range(1..=o.path_max as usize);
        let k = rng.random_range(1..=o.path_max as usize);
        let l = rng.random_range(1..=k);
        let c = random_disjoint_collection(n, k, l, &mut rng);
        let w = WeightArray::from_fn(n, k, |_, _| rng.random_range(0..5u64));
        normalization_holds(&c, &w)
    });
    let failures = verdicts.iter().filter(|&&ok| !ok).count() as u64;
    out.push(ctx(o.path_collections, t).exact("path_normalization_failures", (None, None), failures));

    // forced collection: l = k paths collect every increment
    let t = Instant::now();
    let s = h.stream(FORCED);
    let residuals = h.try_par_map(o.forced_grids as usize, |i| {
        let mut rng = s.with_index(i as u64).rng();
        let k = rng.random_range(1..=cfg.m_cap as usize);
        let grid = sample_brownian_grid(k, FORCED_STEPS, &mut rng)?;
        let sum: f64 = (0..k).map(|j| grid.at_one(j)).sum();
        Ok((max_functional(&grid, k, k)? - sum).abs())
    })?;
    out.push(
        ctx(o.forced_grids, t)
            .sizes(o.forced_grids, FORCED_STEPS as u64)
            .residual("forced_collection_residual", (None, None), max_abs(residuals), FORCED_TOLERANCE),
    );

    // GUE pattern identities
    let t = Instant::now();
    let s = h.stream(GUE);
    let stats = h.par_map(o.gue_draws as usize, |i| {
        let mut rng = s.with_index(i as u64).rng();
        let m = rng.random_range(1..=o.gue_max_m as usize);
        let hm = sample_gue(m, &mut rng);
        let pattern = hm.minor_spectra();
        let diag = max_abs(pattern.diagonal().iter().zip(hm.diagonal()).map(|(a, b)| (a - b).abs()));
        (diag, pattern.interlacing_defect())
    });
    let c = ctx(o.gue_draws, t);
    out.push(c.residual("diagonal_telescoping_residual", (None, None), max_abs(stats.iter().map(|s| s.0)), DIAGONAL_TOLERANCE));
    out.push(c.residual("interlacing_defect", (None, None), max_abs(stats.iter().map(|s| s.1)), INTERLACING_TOLERANCE));
    Ok(out)
}

/// Starts, then ends, then re-indexing: each stage keeps the path count and
/// grows the support, and the final collection is full-span and strictly
/// ordered with at least the original weight.
fn normalization_holds(c: &PathCollection, w: &WeightArray<u64>) -> bool {
    let covers = |outer: &PathCollection, inner: &PathCollection| {
        outer.support().iter().zip(inner.support()).all(|(&o, i)| o || !i)
    };
    let (Ok(starts), w0) = (normalize_starts(c), collection_weight(w, c)) else {
        return false;
    };
    let Ok(ends) = normalize_ends(&starts) else {
        return false;
    };
    let Ok(ordered) = order_paths(&ends) else {
        return false;
    };
    let weights = [w0, collection_weight(w, &starts), collection_weight(w, &ends), collection_weight(w, &ordered)];
    let Ok(weights) = weights.into_iter().collect::<Result<Vec<u64>, _>>() else {
        return false;
    };
    starts.len() == c.len()
        && ends.len() == c.len()
        && ordered.len() == c.len()
        && starts.starts_at_one()
        && ends.starts_at_one()
        && ends.ends_at_n()
        && ordered.satisfies_strict_order()
        && ordered.is_ordered()
        && covers(&starts, c)
        && covers(&ends, &starts)
        && covers(&ordered, c)
        && weights.windows(2).all(|p| p[0] <= p[1])
}
