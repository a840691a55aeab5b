//! Maximal Brownian functionals on a time grid.
//!
//! A nondecreasing càdlàg `pi: [0,1] -> {1..M}` with jump times
//! `0 = t_0 <= ... <= t_M = 1` collects
//! `Delta_pi(B) = sum_j B_j(t_j) - B_j(t_{j-1})`. All suprema here run over
//! grid-aligned jump times, so they sit slightly below their continuous
//! counterparts (the bias shrinks as the grid is refined).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use crate::hermitian::{traceless_block_projection, HermitianMatrix};
use crate::markov::{build_eigenbasis, correlated_from_standard, eta, CyclicMarkovSpec};
use crate::paths::increasing_tuples;
use crate::sampling::{sample_gue, standard_normal, BrownianGrid, CovarianceKind};
use crate::{Error, Result};

/// Largest number of jump-time vectors the literal evaluator will visit.
pub const LITERAL_BREAKPOINT_LIMIT: u64 = 5_000_000;

/// Jump times as grid indices `0 = s_0 <= ... <= s_M = n_steps`; level `j`
/// is held on `[s_{j-1}, s_j) / n_steps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTimePath {
    n_steps: usize,
    breakpoints: Vec<usize>,
}

impl StepTimePath {
    pub fn new(n_steps: usize, breakpoints: Vec<usize>) -> Result<Self> {
        let ok = breakpoints.len() >= 2
            && breakpoints[0] == 0
            && *breakpoints.last().unwrap() == n_steps
            && breakpoints.windows(2).all(|w| w[0] <= w[1]);
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "breakpoints {breakpoints:?} must run nondecreasingly from 0 to {n_steps}"
            )));
        }
        Ok(Self { n_steps, breakpoints })
    }

    /// From jump times in `[0, 1]`; each must be a multiple of `1/n_steps`.
    pub fn from_times(n_steps: usize, times: &[f64]) -> Result<Self> {
        let idx = times
            .iter()
            .map(|&t| {
                let s = t * n_steps as f64;
                let r = libm::round(s);
                if (s - r).abs() > 1e-9 || r < 0.0 {
                    Err(Error::InvalidParameter(format!("time {t} is not on the 1/{n_steps} grid")))
                } else {
                    Ok(r as usize)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_steps, idx)
    }

    /// Number of levels `M`.
    pub fn levels(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn breakpoints(&self) -> &[usize] {
        &self.breakpoints
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }
}

/// `sum_j B_j(t_j) - B_j(t_{j-1})`.
pub fn delta_functional(grid: &BrownianGrid, path: &StepTimePath) -> Result<f64> {
    if path.levels() > grid.n_dims() {
        return Err(Error::OutOfRange {
            what: "path levels",
            value: path.levels(),
            expected: format!("1..={}", grid.n_dims()),
        });
    }
    if path.n_steps() == 0 || !grid.n_steps().is_multiple_of(path.n_steps()) {
        return Err(Error::InvalidParameter(format!(
            "path grid 1/{} is not aligned with 1/{}",
            path.n_steps(),
            grid.n_steps()
        )));
    }
    let scale = grid.n_steps() / path.n_steps();
    let b = path.breakpoints();
    Ok((1..b.len())
        .map(|j| grid.value(j - 1, b[j] * scale) - grid.value(j - 1, b[j - 1] * scale))
        .sum())
}

fn check_levels(grid: &BrownianGrid, l: usize, k: usize) -> Result<()> {
    if k == 0 || k > grid.n_dims() {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            expected: format!("1..={}", grid.n_dims()),
        });
    }
    if l == 0 || l > k {
        return Err(Error::OutOfRange {
            what: "l",
            value: l,
            expected: format!("1..={k}"),
        });
    }
    Ok(())
}

/// `sup { sum_i Delta_{pi_i}(B) : pi_1 < ... < pi_l <= k }` over grid-aligned
/// jump times.
///
/// Time-step DP: during step `s` the paths sit on levels `a_1 < ... < a_l`
/// and collect `sum_r dB_{a_r}(s)`; between steps each level may only rise.
/// States are visited in lexicographic order so the best predecessor
/// `a' <= a` is a running max over the single-coordinate decrements of `a`.
pub fn max_functional(grid: &BrownianGrid, l: usize, k: usize) -> Result<f64> {
    check_levels(grid, l, k)?;
    let states = increasing_tuples(k, l);
    let pred: Vec<Vec<usize>> = states
        .iter()
        .map(|a| {
            (0..l)
                .filter_map(|r| {
                    let mut b = a.clone();
                    b[r] -= 1;
                    states.iter().position(|s| *s == b)
                })
                .collect()
        })
        .collect();
    let mut value = vec![0.0f64; states.len()];
    let mut step_inc = vec![0.0f64; k];
    for s in 0..grid.n_steps() {
        for (j, inc) in step_inc.iter_mut().enumerate() {
            *inc = grid.increment(j, s);
        }
        for i in 0..states.len() {
            let mut best = value[i];
            for &p in &pred[i] {
                // value[p] already holds the running max for p
                best = best.max(value[p]);
            }
            value[i] = best;
        }
        for (v, a) in value.iter_mut().zip(&states) {
            *v += a.iter().map(|&y| step_inc[y - 1]).sum::<f64>();
        }
    }
    Ok(value.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// `((sqrt(1 - k_1 p_max) - 1) / k_1) sum_{j <= k_1} B_j(1) + max_functional(B, 1, k_1)`.
pub fn hl1_limit_functional(grid: &BrownianGrid, p_max: f64, k1: usize) -> Result<f64> {
    let coef = trace_coefficient(p_max, k1)?;
    let top = max_functional(grid, 1, k1)?;
    let sum: f64 = (0..k1).map(|j| grid.at_one(j)).sum();
    Ok(coef * sum + top)
}

/// `1 - k_1 p_max`, with roundoff below zero snapped to zero.
fn radicand(p_max: f64, k1: usize) -> Result<f64> {
    if k1 == 0 || !(p_max > 0.0) {
        return Err(Error::InvalidParameter(format!("need k_1 >= 1 and p_max > 0 (got {k1}, {p_max})")));
    }
    let r = 1.0 - k1 as f64 * p_max;
    if r < -1e-12 {
        return Err(Error::InvalidParameter(format!("1 - k_1 p_max = {r} is negative")));
    }
    Ok(r.max(0.0))
}

fn trace_coefficient(p_max: f64, k1: usize) -> Result<f64> {
    Ok((libm::sqrt(radicand(p_max, k1)?) - 1.0) / k1 as f64)
}

/// The two equivalent forms of the i.i.d. word limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GueLimitVariant {
    /// `((sqrt(1 - k_1 p) - 1) / k_1) Tr H + lambda_max(H)`.
    TraceCombination,
    /// `lambda_max(H) - p Tr H - sqrt(p (1 - k_1 p)) Z`, `Z` independent.
    IndependentNoise,
}

/// One draw of the limit law, `H` a `k_1 x k_1` GUE matrix.
pub fn gue_limit_sample<R: Rng + ?Sized>(
    k1: usize,
    p_max: f64,
    variant: GueLimitVariant,
    rng: &mut R,
) -> Result<f64> {
    let rad = radicand(p_max, k1)?;
    let h = sample_gue(k1, rng);
    let top = h.eigenvalues().max();
    Ok(match variant {
        GueLimitVariant::TraceCombination => {
            (libm::sqrt(rad) - 1.0) / k1 as f64 * h.trace() + top
        }
        GueLimitVariant::IndependentNoise => {
            let z = standard_normal(rng);
            top - p_max * h.trace() - libm::sqrt(p_max * rad) * z
        }
    })
}

/// `lambda_max(H - (Tr H / k) I)` for a `k x k` GUE matrix.
pub fn traceless_gue_top<R: Rng + ?Sized>(k: usize, rng: &mut R) -> f64 {
    let h = sample_gue(k, rng);
    h.eigenvalues().max() - h.trace() / k as f64
}

/// Spectra of the weighted traceless projection of independent GUE blocks
/// of the given sizes, concatenated block by block (each block descending).
pub fn block_limit_sample<R: Rng + ?Sized>(block_sizes: &[usize], p: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    let blocks: Vec<HermitianMatrix> = block_sizes.iter().map(|&m| sample_gue(m, rng)).collect();
    Ok(traceless_block_projection(&blocks, p)?
        .iter()
        .flat_map(|b| b.eigenvalues().into_vec())
        .collect())
}

/// `sup { Delta_pi(B~) : pi <= k }` on a correlated grid of dimension `k`.
pub fn markov_limit_functional(grid: &BrownianGrid, k: usize) -> Result<f64> {
    if grid.kind() != CovarianceKind::Correlated {
        return Err(Error::Precondition("expected a correlated grid".into()));
    }
    if grid.n_dims() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: grid.n_dims(),
        });
    }
    max_functional(grid, 1, k)
}

/// The Markov limit functional driven by a standard grid carrying
/// `B_2, ..., B_k`: maps it to `B~` and maximizes.
pub fn proposition_functional(grid: &BrownianGrid, spec: &CyclicMarkovSpec) -> Result<f64> {
    let correlated = correlated_from_standard(grid, spec)?;
    markov_limit_functional(&correlated, spec.k())
}

/// Calls `f` on every `0 = s_0 <= s_1 <= ... <= s_levels = n`.
pub fn for_each_breakpoints(n: usize, levels: usize, mut f: impl FnMut(&[usize])) {
    fn go(cur: &mut Vec<usize>, n: usize, levels: usize, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == levels {
            cur.push(n);
            f(cur);
            cur.pop();
            return;
        }
        let lo = *cur.last().unwrap();
        for s in lo..=n {
            cur.push(s);
            go(cur, n, levels, f);
            cur.pop();
        }
    }
    if levels == 0 {
        return;
    }
    let mut cur = Vec::with_capacity(levels + 1);
    cur.push(0);
    go(&mut cur, n, levels, &mut f);
}

/// `C(n + levels - 1, levels - 1)`, saturating.
pub fn breakpoint_count(n: usize, levels: usize) -> u64 {
    let m = levels.saturating_sub(1) as u64;
    let mut c: u64 = 1;
    for i in 0..m {
        c = c.saturating_mul(n as u64 + m - i) / (i + 1);
    }
    c
}

/// Direct transcription of the Proposition's maximand, maximized by
/// visiting every grid jump-time vector. `grid` dimension `d` is `B_{d+2}`.
///
/// With `c_r = sqrt(eta(lambda_{r+1}))`, the maximand is
/// `sqrt(2/k) sum_j sum_r c_r [cos(2 pi r j / k) dB_{2r} + sin(2 pi r j / k) dB_{2r+1}]`
/// over `[t_{j-1}, t_j]`, plus for even `k`
/// `-(c_{k/2} / sqrt k) (B_k(1) + 2 sum_{j<k} (-1)^j B_k(t_j))`.
pub fn proposition_functional_literal(grid: &BrownianGrid, spec: &CyclicMarkovSpec) -> Result<f64> {
    let k = spec.k();
    if grid.n_dims() != k - 1 {
        return Err(Error::DimensionMismatch {
            expected: k - 1,
            found: grid.n_dims(),
        });
    }
    let count = breakpoint_count(grid.n_steps(), k);
    if count > LITERAL_BREAKPOINT_LIMIT {
        return Err(Error::TooLarge {
            what: "jump-time vectors for the literal evaluator",
            size: count as usize,
            limit: LITERAL_BREAKPOINT_LIMIT as usize,
        });
    }
    let data = build_eigenbasis(spec)?;
    let kf = k as f64;
    let pairs = (k - 1) / 2;
    let c: Vec<f64> = (1..=pairs).map(|r| libm::sqrt(eta(data.lambda[r]))).collect();
    let trig: Vec<(f64, f64)> = (1..=k)
        .flat_map(|j| {
            (1..=pairs).map(move |r| {
                let a = 2.0 * PI * (r * j) as f64 / kf;
                (libm::cos(a), libm::sin(a))
            })
        })
        .collect();
    let b = |m: usize, s: usize| grid.value(m - 2, s);
    let n = grid.n_steps();
    let root = libm::sqrt(2.0 / kf);
    let even = k.is_multiple_of(2).then(|| libm::sqrt(eta(data.lambda[k / 2])) / libm::sqrt(kf));
    let mut best = f64::NEG_INFINITY;
    for_each_breakpoints(n, k, |t| {
        let mut total = 0.0;
        for j in 1..=k {
            for r in 1..=pairs {
                let (cos, sin) = trig[(j - 1) * pairs + r - 1];
                let d_cos = b(2 * r, t[j]) - b(2 * r, t[j - 1]);
                let d_sin = b(2 * r + 1, t[j]) - b(2 * r + 1, t[j - 1]);
                total += root * c[r - 1] * (cos * d_cos + sin * d_sin);
            }
        }
        if let Some(ce) = even {
            let alternating: f64 = (1..k)
                .map(|j| if j % 2 == 0 { b(k, t[j]) } else { -b(k, t[j]) })
                .sum();
            total -= ce * (b(k, n) + 2.0 * alternating);
        }
        best = best.max(total);
    });
    Ok(best)
}
