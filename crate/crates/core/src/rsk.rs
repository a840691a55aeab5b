//! Row insertion (RSK) for words and nonnegative integer arrays.
//!
//! Rows are weakly increasing, columns strictly increasing, so the top row
//! of a word's shape is its longest *nondecreasing* subsequence.
//!
//! Two representations are kept. [`SemistandardTableau`] stores explicit
//! rows and is used where `P` and `Q` themselves matter. The shape-only
//! kernels store each row as letter counts, which lets a whole array row
//! (letter `j` repeated `w_ij` times) be inserted in `O(k^2)` regardless of
//! its total.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::hermitian::GelfandTsetlinPattern;
use crate::sampling::{IntegerArray, Word};
use crate::{Error, Result};

/// Largest word accepted by [`greene_bruteforce_word`].
pub const GREENE_WORD_LIMIT: usize = 8;
/// Largest array total accepted by [`greene_bruteforce_array`].
pub const GREENE_ARRAY_LIMIT: u64 = 10;

/// Partition `lambda_1 >= lambda_2 >= ...`, trailing zeros dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct YoungShape {
    parts: Vec<u64>,
}

impl YoungShape {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter(format!("parts {parts:?} not nonincreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// `lambda_{i+1}`, zero past the last part.
    pub fn part(&self, i: usize) -> u64 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total number of boxes.
    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// `lambda_1 + ... + lambda_l`.
    pub fn partial_sum(&self, l: usize) -> u64 {
        self.parts.iter().take(l).sum()
    }

    /// Parts padded with zeros (or truncated) to length `n`.
    pub fn padded(&self, n: usize) -> Vec<u64> {
        (0..n).map(|i| self.part(i)).collect()
    }
}

/// Tableau with explicit rows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SemistandardTableau {
    rows: Vec<Vec<u32>>,
}

impl SemistandardTableau {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let t = Self { rows };
        if !t.is_semistandard() {
            return Err(Error::InvalidParameter("rows do not form a semistandard tableau".into()));
        }
        Ok(t)
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn shape(&self) -> YoungShape {
        YoungShape {
            parts: self.rows.iter().map(|r| r.len() as u64).collect(),
        }
    }

    /// Rows weakly increasing, columns strictly increasing, row lengths
    /// nonincreasing, no empty rows.
    pub fn is_semistandard(&self) -> bool {
        self.rows.iter().all(|r| !r.is_empty() && r.windows(2).all(|w| w[0] <= w[1]))
            && self.rows.windows(2).all(|pair| {
                pair[1].len() <= pair[0].len() && pair[1].iter().zip(&pair[0]).all(|(b, a)| a < b)
            })
    }

    /// Boxes holding letters `<= k`; a semistandard tableau stays one.
    pub fn restrict(&self, k: u32) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().copied().filter(|&x| x <= k).collect::<Vec<_>>())
            .filter(|r| !r.is_empty())
            .collect();
        Self { rows }
    }

    /// Inserts `x`, returning the index of the row that grew.
    pub fn insert(&mut self, mut x: u32) -> usize {
        for (r, row) in self.rows.iter_mut().enumerate() {
            let pos = row.partition_point(|&y| y <= x);
            if pos == row.len() {
                row.push(x);
                return r;
            }
            x = core::mem::replace(&mut row[pos], x);
        }
        self.rows.push(vec![x]);
        self.rows.len() - 1
    }

    fn add_box(&mut self, row: usize, x: u32) {
        if row == self.rows.len() {
            self.rows.push(Vec::new());
        }
        self.rows[row].push(x);
    }
}

/// Insertion tableau `P` (letters) and recording tableau `Q` (positions
/// `1..=N`).
pub fn rsk_word(word: &Word) -> (SemistandardTableau, SemistandardTableau) {
    let mut p = SemistandardTableau::default();
    let mut q = SemistandardTableau::default();
    for (pos, &x) in word.letters().iter().enumerate() {
        let r = p.insert(x);
        q.add_box(r, pos as u32 + 1);
    }
    (p, q)
}

/// `P` and `Q` of the array's biword: row `i` emits letter `j` repeated
/// `w_ij` times, in increasing `j`; `Q` records the row index `1..=N`.
pub fn rsk_array_tableaux(w: &IntegerArray) -> (SemistandardTableau, SemistandardTableau) {
    let mut p = SemistandardTableau::default();
    let mut q = SemistandardTableau::default();
    for i in 0..w.rows() {
        for (j, &m) in w.row(i).iter().enumerate() {
            for _ in 0..m {
                let r = p.insert(j as u32 + 1);
                q.add_box(r, i as u32 + 1);
            }
        }
    }
    (p, q)
}

/// Insertion tableau stored as `counts[row][letter - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTableau {
    k: usize,
    counts: Vec<Vec<u64>>,
    carry: Vec<u64>,
    bumped: Vec<u64>,
}

impl CountTableau {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            counts: Vec::new(),
            carry: vec![0; k],
            bumped: vec![0; k],
        }
    }

    /// Row-inserts the weakly increasing sequence with `batch[j]` copies of
    /// letter `j + 1`. Each copy of `v` bumps the leftmost entry `> v`, so
    /// per row the bumped entries are the smallest available ones above
    /// `v`, and they leave in increasing order.
    pub fn insert_batch(&mut self, batch: &[u64]) {
        debug_assert_eq!(batch.len(), self.k);
        self.carry.copy_from_slice(batch);
        let mut row = 0;
        while self.carry.iter().any(|&c| c > 0) {
            if row == self.counts.len() {
                self.counts.push(core::mem::replace(&mut self.carry, vec![0; self.k]));
                return;
            }
            let counts = &mut self.counts[row];
            self.bumped.iter_mut().for_each(|b| *b = 0);
            for v in 0..self.k {
                let mut need = self.carry[v];
                if need == 0 {
                    continue;
                }
                for y in v + 1..self.k {
                    if need == 0 {
                        break;
                    }
                    let t = need.min(counts[y]);
                    counts[y] -= t;
                    self.bumped[y] += t;
                    need -= t;
                }
                counts[v] += self.carry[v];
            }
            core::mem::swap(&mut self.carry, &mut self.bumped);
            row += 1;
        }
    }

    /// Single letter `x` in `1..=k`.
    pub fn insert(&mut self, x: u32) {
        let mut x = x as usize - 1;
        for counts in self.counts.iter_mut() {
            match (x + 1..self.k).find(|&y| counts[y] > 0) {
                Some(y) => {
                    counts[y] -= 1;
                    counts[x] += 1;
                    x = y;
                }
                None => {
                    counts[x] += 1;
                    return;
                }
            }
        }
        let mut fresh = vec![0; self.k];
        fresh[x] = 1;
        self.counts.push(fresh);
    }

    pub fn shape(&self) -> YoungShape {
        self.truncated_shape(self.k)
    }

    /// Shape of the boxes holding letters `<= k`.
    pub fn truncated_shape(&self, k: usize) -> YoungShape {
        let parts = self.counts.iter().map(|r| r[..k].iter().sum()).collect();
        YoungShape::new(parts).expect("row insertion keeps rows nonincreasing")
    }

    /// Explicit-row form.
    pub fn to_tableau(&self) -> SemistandardTableau {
        let rows = self
            .counts
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .flat_map(|(j, &c)| core::iter::repeat_n(j as u32 + 1, c as usize))
                    .collect()
            })
            .collect();
        SemistandardTableau { rows }
    }
}

/// Shape of `rsk_word(word)`, computed on letter counts with runs of equal
/// letters inserted as one batch.
pub fn rsk_word_shape(word: &Word) -> YoungShape {
    let k = word.alphabet_size() as usize;
    let mut t = CountTableau::new(k);
    let mut batch = vec![0u64; k];
    let letters = word.letters();
    let mut i = 0;
    while i < letters.len() {
        let x = letters[i];
        let mut j = i;
        while j < letters.len() && letters[j] == x {
            j += 1;
        }
        if j - i == 1 {
            t.insert(x);
        } else {
            batch[x as usize - 1] = (j - i) as u64;
            t.insert_batch(&batch);
            batch[x as usize - 1] = 0;
        }
        i = j;
    }
    t.shape()
}

fn array_tableau(w: &IntegerArray) -> CountTableau {
    let mut t = CountTableau::new(w.cols());
    for i in 0..w.rows() {
        t.insert_batch(w.row(i));
    }
    t
}

/// RSK shape of a nonnegative integer array (at most `cols` parts).
pub fn rsk_array(w: &IntegerArray) -> YoungShape {
    array_tableau(w).shape()
}

/// Row `k` is the shape of the first `k` columns, read off the full `P` by
/// dropping letters `> k`.
pub fn shape_pattern_from_array(w: &IntegerArray) -> GelfandTsetlinPattern<u64> {
    let t = array_tableau(w);
    let rows = (1..=w.cols()).map(|k| t.truncated_shape(k).padded(k)).collect();
    GelfandTsetlinPattern::new(rows).expect("truncated shapes have the right lengths")
}

/// Patience sorting on weak inequality: `tops[h]` is the smallest possible
/// last letter of a nondecreasing subsequence of length `h + 1`.
///
/// `tops` is nondecreasing, so for small alphabets it is kept as a count per
/// letter and "replace the first top `> x`" becomes a scan over `k` counts.
pub fn longest_nondecreasing_subsequence(word: &Word) -> usize {
    let k = word.alphabet_size() as usize;
    if k <= 16 {
        let mut tops = [0usize; 16];
        for &x in word.letters() {
            let x = x as usize - 1;
            if let Some(y) = (x + 1..k).find(|&y| tops[y] > 0) {
                tops[y] -= 1;
            }
            tops[x] += 1;
        }
        return tops.iter().sum();
    }
    let mut tops: Vec<u32> = Vec::new();
    for &x in word.letters() {
        let pos = tops.partition_point(|&y| y <= x);
        if pos == tops.len() {
            tops.push(x);
        } else {
            tops[pos] = x;
        }
    }
    tops.len()
}

/// Whether the letters can be dealt into at most `l` nondecreasing piles,
/// by exhaustive backtracking.
fn coverable(letters: &[u32], l: usize) -> bool {
    fn go(letters: &[u32], idx: usize, piles: &mut Vec<u32>, l: usize) -> bool {
        if idx == letters.len() {
            return true;
        }
        let x = letters[idx];
        for p in 0..piles.len() {
            if piles[p] <= x {
                let old = piles[p];
                piles[p] = x;
                if go(letters, idx + 1, piles, l) {
                    return true;
                }
                piles[p] = old;
            }
        }
        if piles.len() < l {
            piles.push(x);
            if go(letters, idx + 1, piles, l) {
                return true;
            }
            piles.pop();
        }
        false
    }
    go(letters, 0, &mut Vec::new(), l)
}

fn greene_letters(letters: &[u32], l: usize) -> usize {
    let n = letters.len();
    let mut best = 0;
    let mut chosen = Vec::with_capacity(n);
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        chosen.clear();
        chosen.extend((0..n).filter(|i| mask >> i & 1 == 1).map(|i| letters[i]));
        if coverable(&chosen, l) {
            best = size;
        }
    }
    best
}

/// Largest total size of `l` disjoint nondecreasing subsequences, by
/// enumerating every subset of positions.
pub fn greene_bruteforce_word(word: &Word, l: usize) -> Result<usize> {
    if word.len() > GREENE_WORD_LIMIT {
        return Err(Error::TooLarge {
            what: "word length for exhaustive search",
            size: word.len(),
            limit: GREENE_WORD_LIMIT,
        });
    }
    Ok(greene_letters(word.letters(), l))
}

/// As [`greene_bruteforce_word`] on the array's biword letters.
pub fn greene_bruteforce_array(w: &IntegerArray, l: usize) -> Result<u64> {
    let total = w.total();
    if total > GREENE_ARRAY_LIMIT {
        return Err(Error::TooLarge {
            what: "array total for exhaustive search",
            size: total as usize,
            limit: GREENE_ARRAY_LIMIT as usize,
        });
    }
    let letters: Vec<u32> = (0..w.rows())
        .flat_map(|i| {
            w.row(i)
                .iter()
                .enumerate()
                .flat_map(|(j, &m)| core::iter::repeat_n(j as u32 + 1, m as usize))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(greene_letters(&letters, l) as u64)
}

/// `xi_i = (lambda_i - center_i) / scale_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct RescaledShape {
    pub xi: Vec<f64>,
}

pub fn rescale_shape(shape: &YoungShape, centers: &[f64], scales: &[f64]) -> Result<RescaledShape> {
    if centers.len() != scales.len() {
        return Err(Error::DimensionMismatch {
            expected: centers.len(),
            found: scales.len(),
        });
    }
    if shape.len() > centers.len() {
        return Err(Error::DimensionMismatch {
            expected: centers.len(),
            found: shape.len(),
        });
    }
    if let Some(s) = scales.iter().find(|&&s| !(s > 0.0)) {
        return Err(Error::InvalidParameter(format!("scale {s} must be positive")));
    }
    let xi = centers
        .iter()
        .zip(scales)
        .enumerate()
        .map(|(i, (c, s))| (shape.part(i) as f64 - c) / s)
        .collect();
    Ok(RescaledShape { xi })
}
