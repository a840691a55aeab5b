//! Maximal total weight of `l` ordered full-span paths.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{PathCollection, UpRightPath, Weight, WeightArray, collection_weight};
use crate::{Error, Result};

/// Largest `N * k` accepted by [`multipath_lpp_bruteforce`].
pub const BRUTEFORCE_CELL_LIMIT: usize = 16;

fn check_l(l: usize, k: usize) -> Result<()> {
    if l == 0 || l > k {
        return Err(Error::OutOfRange {
            what: "l",
            value: l,
            expected: format!("1..={k}"),
        });
    }
    Ok(())
}

/// All up-right paths from abscissa 1 to abscissa `n` in `{1..n} x {1..k}`,
/// one per nondecreasing level sequence `y_0 <= ... <= y_n`.
pub fn enumerate_paths(n: usize, k: usize) -> Vec<UpRightPath> {
    fn go(levels: &mut Vec<usize>, n: usize, k: usize, out: &mut Vec<UpRightPath>) {
        if levels.len() == n + 1 {
            out.push(UpRightPath::from_levels(levels).expect("nondecreasing levels"));
            return;
        }
        let lo = levels.last().copied().unwrap_or(1);
        for y in lo..=k {
            levels.push(y);
            go(levels, n, k, out);
            levels.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 && k > 0 {
        go(&mut Vec::with_capacity(n + 1), n, k, &mut out);
    }
    out
}

fn strictly_below(a: &UpRightPath, b: &UpRightPath, n: usize) -> bool {
    (1..=n).all(|x| match (a.column_range(x), b.column_range(x)) {
        (Some((_, hi)), Some((lo, _))) => hi < lo,
        _ => true,
    })
}

/// Exhaustive maximum over ordered full-span collections `pi_1 < ... < pi_l`.
pub fn multipath_lpp_bruteforce<T: Weight>(w: &WeightArray<T>, l: usize) -> Result<T> {
    let (n, k) = (w.n(), w.k());
    check_l(l, k)?;
    if n * k > BRUTEFORCE_CELL_LIMIT {
        return Err(Error::TooLarge {
            what: "grid cells for exhaustive path search",
            size: n * k,
            limit: BRUTEFORCE_CELL_LIMIT,
        });
    }
    let all = enumerate_paths(n, k);
    let mut best: Option<T> = None;
    let mut chosen: Vec<usize> = Vec::with_capacity(l);
    fn go<T: Weight>(
        all: &[UpRightPath],
        w: &WeightArray<T>,
        l: usize,
        chosen: &mut Vec<usize>,
        best: &mut Option<T>,
    ) {
        if chosen.len() == l {
            let c = PathCollection::new(w.n(), w.k(), chosen.iter().map(|&i| all[i].clone()).collect())
                .expect("ordered paths are disjoint");
            let value = collection_weight(w, &c).expect("same grid");
            if best.is_none_or(|b| value > b) {
                *best = Some(value);
            }
            return;
        }
        for i in 0..all.len() {
            if chosen.last().is_none_or(|&prev| strictly_below(&all[prev], &all[i], w.n())) {
                chosen.push(i);
                go(all, w, l, chosen, best);
                chosen.pop();
            }
        }
    }
    go(&all, w, l, &mut chosen, &mut best);
    best.ok_or_else(|| Error::InvalidParameter("empty grid".into()))
}

/// Strictly increasing `l`-tuples from `1..=k` in lexicographic order.
pub(crate) fn increasing_tuples(k: usize, l: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, l: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for y in start..=k {
            cur.push(y);
            go(y + 1, k, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, k, l, &mut Vec::with_capacity(l), &mut out);
    out
}

/// Column-crossing DP. The state at boundary `x` is the tuple
/// `s_1 < ... < s_l` of ordinates where the paths cross from column `x` to
/// `x + 1` (`x = 0` is the entry ordinate). Path `r` collects
/// `w(x, s_r..=s'_r)` in column `x`, and strict order in that column is
/// `s'_r < s_{r+1}`.
pub fn multipath_lpp_dp<T: Weight>(w: &WeightArray<T>, l: usize) -> Result<T> {
    let (n, k) = (w.n(), w.k());
    check_l(l, k)?;
    if n == 0 {
        return Ok(T::ZERO);
    }
    let states = increasing_tuples(k, l);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, s) in states.iter().enumerate() {
        for (j, t) in states.iter().enumerate() {
            let ok = (0..l).all(|r| s[r] <= t[r] && (r + 1 == l || t[r] < s[r + 1]));
            if ok {
                pairs.push((i, j));
            }
        }
    }
    let mut value: Vec<Option<T>> = vec![Some(T::ZERO); states.len()];
    let mut next: Vec<Option<T>> = vec![None; states.len()];
    for x in 1..=n {
        next.iter_mut().for_each(|v| *v = None);
        for &(i, j) in &pairs {
            let Some(base) = value[i] else { continue };
            let (s, t) = (&states[i], &states[j]);
            let mut total = base;
            for r in 0..l {
                for y in s[r]..=t[r] {
                    total = total + w.get(x, y);
                }
            }
            if next[j].is_none_or(|v| total > v) {
                next[j] = Some(total);
            }
        }
        core::mem::swap(&mut value, &mut next);
    }
    Ok(value
        .into_iter()
        .flatten()
        .reduce(|a, b| if b > a { b } else { a })
        .expect("at least one state"))
}
