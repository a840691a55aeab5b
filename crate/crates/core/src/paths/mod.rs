//! Up-right lattice paths on `{1..N} x {1..k}` and multi-path last passage
//! percolation.
//!
//! Coordinates are 1-based: abscissa `x` in `1..=N`, ordinate `y` in
//! `1..=k`. A path is stored as its point sequence so it can be split at a
//! point and spliced back together.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Add;

use crate::sampling::IntegerArray;
use crate::{Error, Result};

mod lpp;
mod normalize;

pub(crate) use lpp::increasing_tuples;
pub use lpp::{
    enumerate_paths, multipath_lpp_bruteforce, multipath_lpp_dp, BRUTEFORCE_CELL_LIMIT,
};
pub use normalize::{normalize_ends, normalize_starts, order_paths, random_disjoint_collection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub x: usize,
    pub y: usize,
}

impl Cell {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }
}

/// Consecutive points differ by `(1, 0)` or `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpRightPath {
    points: Vec<Cell>,
}

impl UpRightPath {
    pub fn new(points: Vec<Cell>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidPath("empty path".into()));
        }
        for w in points.windows(2) {
            let right = w[1].x == w[0].x + 1 && w[1].y == w[0].y;
            let up = w[1].x == w[0].x && w[1].y == w[0].y + 1;
            if !(right || up) {
                return Err(Error::InvalidPath(format!("{:?} -> {:?} is not a unit up/right step", w[0], w[1])));
            }
        }
        Ok(Self { points })
    }

    pub fn single(cell: Cell) -> Self {
        Self { points: vec![cell] }
    }

    /// Horizontal line at ordinate `y` over abscissas `1..=n`.
    pub fn horizontal(y: usize, n: usize) -> Self {
        Self {
            points: (1..=n).map(|x| Cell::new(x, y)).collect(),
        }
    }

    /// Full-span path from crossing ordinates `levels = (y_0, ..., y_N)`,
    /// nondecreasing: column `x` holds `y_{x-1}..=y_x`.
    pub fn from_levels(levels: &[usize]) -> Result<Self> {
        if levels.len() < 2 || levels.windows(2).any(|w| w[0] > w[1]) || levels[0] == 0 {
            return Err(Error::InvalidPath(format!("bad level sequence {levels:?}")));
        }
        let mut points = Vec::new();
        for x in 1..levels.len() {
            for y in levels[x - 1]..=levels[x] {
                points.push(Cell::new(x, y));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[Cell] {
        &self.points
    }

    pub fn start(&self) -> Cell {
        self.points[0]
    }

    pub fn end(&self) -> Cell {
        *self.points.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.position(c).is_some()
    }

    fn position(&self, c: Cell) -> Option<usize> {
        // points are sorted lexicographically by (x, y)
        self.points.binary_search(&c).ok()
    }

    /// `pi^{P]}`: the points up to and including `p`.
    pub fn up_to(&self, p: Cell) -> Option<Self> {
        self.position(p).map(|i| Self {
            points: self.points[..=i].to_vec(),
        })
    }

    /// `pi^{[P}`: the points from `p` on.
    pub fn from_point(&self, p: Cell) -> Option<Self> {
        self.position(p).map(|i| Self {
            points: self.points[i..].to_vec(),
        })
    }

    /// `self ∪ other`, valid when `other` starts one step after `self` ends.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points);
        Self::new(points)
    }

    /// Lowest and highest ordinate visited in column `x`.
    pub fn column_range(&self, x: usize) -> Option<(usize, usize)> {
        let mut it = self.points.iter().filter(|c| c.x == x).map(|c| c.y);
        let lo = it.next()?;
        Some((lo, it.next_back().unwrap_or(lo)))
    }
}

/// `l` pairwise disjoint paths inside `{1..n} x {1..k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCollection {
    n: usize,
    k: usize,
    paths: Vec<UpRightPath>,
    ordered: bool,
}

impl PathCollection {
    pub fn new(n: usize, k: usize, paths: Vec<UpRightPath>) -> Result<Self> {
        let mut seen = vec![false; n * k];
        for (r, path) in paths.iter().enumerate() {
            for c in path.points() {
                if c.x == 0 || c.x > n || c.y == 0 || c.y > k {
                    return Err(Error::InvalidPath(format!("{c:?} outside {n}x{k} grid")));
                }
                let idx = (c.x - 1) * k + c.y - 1;
                if seen[idx] {
                    return Err(Error::InvalidPath(format!("path {r} reuses occupied cell {c:?}")));
                }
                seen[idx] = true;
            }
        }
        Ok(Self {
            n,
            k,
            paths,
            ordered: false,
        })
    }

    pub fn empty(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            paths: Vec::new(),
            ordered: false,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn paths(&self) -> &[UpRightPath] {
        &self.paths
    }

    pub fn into_paths(self) -> Vec<UpRightPath> {
        self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Set by [`order_paths`] once the strict column order is verified.
    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    /// Occupancy grid, `support()[(x - 1) * k + y - 1]`.
    pub fn support(&self) -> Vec<bool> {
        let mut s = vec![false; self.n * self.k];
        for c in self.paths.iter().flat_map(|p| p.points()) {
            s[(c.x - 1) * self.k + c.y - 1] = true;
        }
        s
    }

    /// Index of the path through `c`, if any.
    pub fn owner(&self, c: Cell) -> Option<usize> {
        self.paths.iter().position(|p| p.contains(c))
    }

    pub fn starts_at_one(&self) -> bool {
        self.paths.iter().all(|p| p.start().x == 1)
    }

    pub fn ends_at_n(&self) -> bool {
        self.paths.iter().all(|p| p.end().x == self.n)
    }

    /// In every column, path `r` lies strictly below path `r + 1`.
    pub fn satisfies_strict_order(&self) -> bool {
        (1..=self.n).all(|x| {
            self.paths.windows(2).all(|w| match (w[0].column_range(x), w[1].column_range(x)) {
                (Some((_, hi)), Some((lo, _))) => hi < lo,
                _ => true,
            })
        })
    }

    pub(crate) fn with_ordered(mut self, ordered: bool) -> Self {
        self.ordered = ordered;
        self
    }
}

/// Additive weights: integers embed exactly, reals are summed as `f64`.
pub trait Weight: Copy + PartialOrd + Add<Output = Self> {
    const ZERO: Self;
}

impl Weight for i64 {
    const ZERO: Self = 0;
}

impl Weight for u64 {
    const ZERO: Self = 0;
}

impl Weight for f64 {
    const ZERO: Self = 0.0;
}

/// `N x k` weights `w(x, y)`, 1-based.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightArray<T> {
    n: usize,
    k: usize,
    data: Vec<T>,
}

impl<T: Weight> WeightArray<T> {
    /// `data[(x - 1) * k + (y - 1)]`.
    pub fn new(n: usize, k: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * k {
            return Err(Error::DimensionMismatch {
                expected: n * k,
                found: data.len(),
            });
        }
        Ok(Self { n, k, data })
    }

    pub fn from_fn(n: usize, k: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let data = (0..n * k).map(|i| f(i / k + 1, i % k + 1)).collect();
        Self { n, k, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[(x - 1) * self.k + y - 1]
    }

    pub fn total(&self) -> T {
        self.data.iter().fold(T::ZERO, |a, &b| a + b)
    }
}

impl WeightArray<u64> {
    /// Row `i` of the integer array is abscissa `i`, column `j` ordinate `j`.
    pub fn from_integer_array(w: &IntegerArray) -> Self {
        Self::from_fn(w.rows(), w.cols(), |x, y| w.get(x - 1, y - 1))
    }
}

/// Sum of `w` over the union of the supports.
pub fn collection_weight<T: Weight>(w: &WeightArray<T>, c: &PathCollection) -> Result<T> {
    if c.n() > w.n() || c.k() > w.k() {
        return Err(Error::DimensionMismatch {
            expected: w.n() * w.k(),
            found: c.n() * c.k(),
        });
    }
    Ok(c
        .paths()
        .iter()
        .flat_map(|p| p.points())
        .fold(T::ZERO, |acc, cell| acc + w.get(cell.x, cell.y)))
}
