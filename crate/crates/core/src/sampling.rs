//! Seeded generation of every random object used by the suites.
//!
//! A replicate is identified by `(master_seed, stream_index)`. The pair maps
//! to a ChaCha key (from the seed) and ChaCha stream id (from the index), so
//! replicates can be generated in any order, on any worker, and always
//! reproduce bit for bit.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::hermitian::HermitianMatrix;
use crate::markov::CyclicMarkovSpec;
use crate::{Error, Result};

/// Generator handed out by [`RngStream::rng`].
pub type StreamRng = ChaCha12Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Identifier of one reproducible random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> StreamRng {
        let mut state = self.master_seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha12Rng::from_seed(key);
        rng.set_stream(self.stream_index);
        rng
    }

    /// Same replicate index under an independent key, used to give each
    /// side of a comparison (or each sub-experiment) its own family of
    /// streams.
    pub fn derive(&self, label: u64) -> Self {
        let mut state = self.master_seed ^ label.rotate_left(32);
        let _ = splitmix64(&mut state);
        Self {
            master_seed: splitmix64(&mut state) ^ label,
            stream_index: self.stream_index,
        }
    }

    pub fn with_index(&self, stream_index: u64) -> Self {
        Self {
            master_seed: self.master_seed,
            stream_index,
        }
    }
}

pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Uniform on `(0, 1]`.
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// GUE matrix with density proportional to `exp(-Tr H^2 / 2)`: real
/// diagonal `N(0, 1)`, off-diagonal real and imaginary parts `N(0, 1/2)`.
pub fn sample_gue<R: Rng + ?Sized>(m: usize, rng: &mut R) -> HermitianMatrix {
    let half = core::f64::consts::FRAC_1_SQRT_2;
    let mut upper = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        upper[i * m + i] = Complex64::new(standard_normal(rng), 0.0);
        for j in i + 1..m {
            let re = standard_normal(rng) * half;
            let im = standard_normal(rng) * half;
            upper[i * m + j] = Complex64::new(re, im);
        }
    }
    HermitianMatrix::from_upper(m, |i, j| upper[i * m + j])
}

/// Nonnegative integer array with `rows x cols` entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerArray {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl IntegerArray {
    pub fn new(rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[&[u64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: r.len(),
            });
        }
        Self::new(rows.len(), cols, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn total(&self) -> u64 {
        self.data.iter().sum()
    }

    /// The array restricted to its first `k` columns.
    pub fn first_columns(&self, k: usize) -> Self {
        let k = k.min(self.cols);
        let data = (0..self.rows)
            .flat_map(|i| self.row(i)[..k].iter().copied())
            .collect();
        Self {
            rows: self.rows,
            cols: k,
            data,
        }
    }
}

/// Geometric law `P(w = j) = q^j (1 - q)`: mean `q/(1-q)`, variance `q/(1-q)^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geometric {
    q: f64,
    log_q: f64,
}

impl Geometric {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!("geometric q = {q} not in (0, 1)")));
        }
        Ok(Self {
            q,
            log_q: libm::log(q),
        })
    }

    pub fn mean(&self) -> f64 {
        self.q / (1.0 - self.q)
    }

    pub fn variance(&self) -> f64 {
        self.q / ((1.0 - self.q) * (1.0 - self.q))
    }

    /// Inverse CDF: `floor(ln U / ln q)` for `U` uniform on `(0, 1]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        libm::floor(libm::log(open_unit(rng)) / self.log_q) as u64
    }
}

pub fn sample_geometric_array<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    q: f64,
    rng: &mut R,
) -> Result<IntegerArray> {
    let law = Geometric::new(q)?;
    let data = (0..rows * cols).map(|_| law.sample(rng)).collect();
    IntegerArray::new(rows, cols, data)
}

/// Which law produced a [`BrownianGrid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CovarianceKind {
    Standard,
    Correlated,
}

/// Brownian path sampled on the uniform grid `s / n`, `s = 0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BrownianGrid {
    n_dims: usize,
    n_steps: usize,
    /// Dimension-major: `values[j * (n_steps + 1) + s] = B_j(s / n)`.
    values: Vec<f64>,
    kind: CovarianceKind,
}

impl BrownianGrid {
    /// Builds the path from its increments (`increments[j * n_steps + s]`).
    pub fn from_increments(
        n_dims: usize,
        n_steps: usize,
        increments: &[f64],
        kind: CovarianceKind,
    ) -> Result<Self> {
        if n_dims == 0 || n_steps == 0 {
            return Err(Error::InvalidParameter("grid needs n_dims >= 1 and n_steps >= 1".into()));
        }
        if increments.len() != n_dims * n_steps {
            return Err(Error::DimensionMismatch {
                expected: n_dims * n_steps,
                found: increments.len(),
            });
        }
        let mut values = Vec::with_capacity(n_dims * (n_steps + 1));
        for j in 0..n_dims {
            let mut acc = 0.0;
            values.push(0.0);
            for &dx in &increments[j * n_steps..(j + 1) * n_steps] {
                acc += dx;
                values.push(acc);
            }
        }
        Ok(Self {
            n_dims,
            n_steps,
            values,
            kind,
        })
    }

    pub fn n_dims(&self) -> usize {
        self.n_dims
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn kind(&self) -> CovarianceKind {
        self.kind
    }

    /// `B_j(s / n)` with `j` zero-based.
    pub fn value(&self, j: usize, s: usize) -> f64 {
        self.values[j * (self.n_steps + 1) + s]
    }

    pub fn path(&self, j: usize) -> &[f64] {
        &self.values[j * (self.n_steps + 1)..(j + 1) * (self.n_steps + 1)]
    }

    pub fn at_one(&self, j: usize) -> f64 {
        self.value(j, self.n_steps)
    }

    pub fn increment(&self, j: usize, s: usize) -> f64 {
        self.value(j, s + 1) - self.value(j, s)
    }

    /// Pathwise linear image: output dimension `r` is
    /// `sum_c matrix[r * n_dims + c] * B_c`.
    pub fn linear_map(&self, out_dims: usize, matrix: &[f64], kind: CovarianceKind) -> Result<Self> {
        if matrix.len() != out_dims * self.n_dims {
            return Err(Error::DimensionMismatch {
                expected: out_dims * self.n_dims,
                found: matrix.len(),
            });
        }
        let len = self.n_steps + 1;
        let mut values = vec![0.0; out_dims * len];
        for r in 0..out_dims {
            let out = &mut values[r * len..(r + 1) * len];
            for c in 0..self.n_dims {
                let coef = matrix[r * self.n_dims + c];
                if coef == 0.0 {
                    continue;
                }
                for (o, &x) in out.iter_mut().zip(self.path(c)) {
                    *o += coef * x;
                }
            }
        }
        Ok(Self {
            n_dims: out_dims,
            n_steps: self.n_steps,
            values,
            kind,
        })
    }

    /// The grid seen at every `factor`-th point (a coarsening that shares the
    /// same underlying path).
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 || !self.n_steps.is_multiple_of(factor) {
            return Err(Error::InvalidParameter(format!(
                "coarsening factor {factor} does not divide {}",
                self.n_steps
            )));
        }
        let n = self.n_steps / factor;
        let values = (0..self.n_dims)
            .flat_map(|j| (0..=n).map(move |s| (j, s * factor)))
            .map(|(j, s)| self.value(j, s))
            .collect();
        Ok(Self {
            n_dims: self.n_dims,
            n_steps: n,
            values,
            kind: self.kind,
        })
    }
}

/// Standard `n_dims`-dimensional Brownian motion on a grid of `n_steps`
/// steps: increments `N(0, 1 / n_steps)`, dimension-major draw order.
pub fn sample_brownian_grid<R: Rng + ?Sized>(
    n_dims: usize,
    n_steps: usize,
    rng: &mut R,
) -> Result<BrownianGrid> {
    if n_dims == 0 || n_steps == 0 {
        return Err(Error::InvalidParameter("grid needs n_dims >= 1 and n_steps >= 1".into()));
    }
    let scale = libm::sqrt(1.0 / n_steps as f64);
    let increments: Vec<f64> = (0..n_dims * n_steps)
        .map(|_| standard_normal(rng) * scale)
        .collect();
    BrownianGrid::from_increments(n_dims, n_steps, &increments, CovarianceKind::Standard)
}

/// Square-root factor `L = V sqrt(D)` of a PSD covariance, with eigenvalues
/// below a relative `1e-10` clamped to zero so null directions stay exact.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceFactor {
    dim: usize,
    factor: Vec<f64>,
}

impl CovarianceFactor {
    pub fn new(dim: usize, cov: &[f64]) -> Result<Self> {
        if cov.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: cov.len(),
            });
        }
        let scale = cov.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..dim {
            for j in i + 1..dim {
                if (cov[i * dim + j] - cov[j * dim + i]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidParameter("covariance is not symmetric".into()));
                }
            }
        }
        let dec = HermitianMatrix::from_real_symmetric(dim, cov)?.eigen_decomposition();
        let values = dec.values.values();
        let min = values[dim - 1];
        if min < -1e-10 {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        let cutoff = 1e-10 * values[0].abs().max(1.0);
        let mut factor = vec![0.0; dim * dim];
        for m in 0..dim {
            if values[m] <= cutoff {
                continue;
            }
            let root = libm::sqrt(values[m]);
            for r in 0..dim {
                factor[r * dim + m] = dec.vectors[r * dim + m].re * root;
            }
        }
        Ok(Self { dim, factor })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major `L` with `L Lᵀ = cov` (up to the clamped directions).
    pub fn matrix(&self) -> &[f64] {
        &self.factor
    }

    pub fn sample_grid<R: Rng + ?Sized>(&self, n_steps: usize, rng: &mut R) -> Result<BrownianGrid> {
        let standard = sample_brownian_grid(self.dim, n_steps, rng)?;
        standard.linear_map(self.dim, &self.factor, CovarianceKind::Correlated)
    }
}

/// Brownian motion with increment covariance `cov / n_steps` per step.
pub fn sample_correlated_brownian<R: Rng + ?Sized>(
    dim: usize,
    cov: &[f64],
    n_steps: usize,
    rng: &mut R,
) -> Result<BrownianGrid> {
    CovarianceFactor::new(dim, cov)?.sample_grid(n_steps, rng)
}

/// A word over the alphabet `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    k: u32,
    letters: Vec<u32>,
}

impl Word {
    pub fn new(k: u32, letters: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&x| x == 0 || x > k) {
            return Err(Error::OutOfRange {
                what: "letter",
                value: bad as usize,
                expected: format!("1..={k}"),
            });
        }
        Ok(Self { k, letters })
    }

    pub fn alphabet_size(&self) -> u32 {
        self.k
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Validates a letter distribution: nonnegative, summing to 1 within
/// `1e-12`, listed in nonincreasing order.
pub fn validate_letter_probabilities(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidProbability("empty vector".into()));
    }
    if p.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::InvalidProbability("negative or NaN entry".into()));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProbability(format!("sums to {sum}")));
    }
    if p.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidProbability("not sorted nonincreasing".into()));
    }
    Ok(())
}

/// Inverse-CDF sampler over `0..len` for a probability vector.
#[derive(Clone, Debug)]
struct Categorical {
    cumulative: Vec<f64>,
}

impl Categorical {
    fn new(p: &[f64]) -> Self {
        let mut acc = 0.0;
        let cumulative = p
            .iter()
            .map(|&x| {
                acc += x;
                acc
            })
            .collect();
        Self { cumulative }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.random::<f64>();
        let last = self.cumulative.len() - 1;
        self.cumulative[..last]
            .iter()
            .position(|&c| u < c)
            .unwrap_or(last)
    }
}

/// i.i.d. word with `P(letter = i) = p[i - 1]`.
pub fn sample_word_iid<R: Rng + ?Sized>(n: usize, p: &[f64], rng: &mut R) -> Result<Word> {
    validate_letter_probabilities(p)?;
    let law = Categorical::new(p);
    let letters = (0..n).map(|_| law.sample(rng) as u32 + 1).collect();
    Ok(Word {
        k: p.len() as u32,
        letters,
    })
}

/// Markov word with transition `i -> j` of probability `p((j - i) mod k)`,
/// started from the uniform (stationary) distribution.
pub fn sample_word_markov<R: Rng + ?Sized>(
    n: usize,
    spec: &CyclicMarkovSpec,
    rng: &mut R,
) -> Word {
    let k = spec.k();
    let steps = Categorical::new(spec.step_distribution());
    let mut letters = Vec::with_capacity(n);
    if n > 0 {
        let mut state = rng.random_range(0..k);
        letters.push(state as u32 + 1);
        for _ in 1..n {
            state = (state + steps.sample(rng)) % k;
            letters.push(state as u32 + 1);
        }
    }
    Word {
        k: k as u32,
        letters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn mean_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, v)
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a: Vec<u64> = (0..8).map(|_| RngStream::new(5, 3).rng().random()).collect();
        let mut r1 = RngStream::new(5, 3).rng();
        let mut r2 = RngStream::new(5, 3).rng();
        let mut r3 = RngStream::new(5, 4).rng();
        let x1: Vec<u64> = (0..16).map(|_| r1.random()).collect();
        let x2: Vec<u64> = (0..16).map(|_| r2.random()).collect();
        let x3: Vec<u64> = (0..16).map(|_| r3.random()).collect();
        assert_eq!(x1, x2);
        assert_ne!(x1, x3);
        assert!(a.iter().all(|&v| v == a[0]));
        assert_ne!(RngStream::new(5, 3).derive(1), RngStream::new(5, 3).derive(2));
        assert_eq!(RngStream::new(5, 3).derive(1).stream_index, 3);
    }

    #[test]
    fn stream_cross_correlation() {
        let n = 100_000;
        let mut ra = RngStream::new(99, 0).rng();
        let mut rb = RngStream::new(99, 1).rng();
        let a: Vec<f64> = (0..n).map(|_| standard_normal(&mut ra)).collect();
        let b: Vec<f64> = (0..n).map(|_| standard_normal(&mut rb)).collect();
        let (ma, va) = mean_var(&a);
        let (mb, vb) = mean_var(&b);
        let cov = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / n as f64;
        let corr = cov / (va * vb).sqrt();
        assert!(corr.abs() <= 3.0 / (n as f64).sqrt(), "corr {corr}");
    }

    #[test]
    fn gue_moments() {
        let n = 100_000;
        let mut rng = RngStream::new(1, 0).rng();
        let h11: Vec<f64> = (0..n).map(|_| sample_gue(1, &mut rng).get(0, 0).re).collect();
        let (m, v) = mean_var(&h11);
        assert!(m.abs() <= 0.02 && (v - 1.0).abs() <= 0.03, "{m} {v}");

        let mut rng = RngStream::new(1, 1).rng();
        let off: f64 = (0..n).map(|_| sample_gue(2, &mut rng).get(0, 1).norm_sqr()).sum::<f64>()
            / n as f64;
        assert!((off - 1.0).abs() <= 0.03, "{off}");

        let mut rng = RngStream::new(1, 2).rng();
        let tr2: f64 = (0..n)
            .map(|_| {
                let h = sample_gue(3, &mut rng);
                h.entries().iter().map(|z| z.norm_sqr()).sum::<f64>()
            })
            .sum::<f64>()
            / n as f64;
        assert!((tr2 - 9.0).abs() <= 0.15, "{tr2}");
    }

    #[test]
    fn gue_is_exactly_hermitian() {
        let h = sample_gue(5, &mut RngStream::new(2, 0).rng());
        for i in 0..5 {
            assert_eq!(h.get(i, i).im, 0.0);
            for j in 0..5 {
                assert_eq!(h.get(i, j), h.get(j, i).conj());
            }
        }
    }

    #[test]
    fn geometric_law() {
        let g = Geometric::new(0.5).unwrap();
        assert_eq!(g.mean(), 1.0);
        assert_eq!(g.variance(), 2.0);
        assert!(Geometric::new(0.0).is_err());
        assert!(Geometric::new(1.0).is_err());
        assert!(sample_geometric_array(2, 2, 1.5, &mut RngStream::new(0, 0).rng()).is_err());

        let mut rng = RngStream::new(3, 0).rng();
        let xs: Vec<f64> = (0..1_000_000).map(|_| g.sample(&mut rng) as f64).collect();
        let (m, v) = mean_var(&xs);
        assert!((0.99..=1.01).contains(&m), "mean {m}");
        assert!((1.97..=2.03).contains(&v), "var {v}");

        let g = Geometric::new(0.01).unwrap();
        let mut rng = RngStream::new(3, 1).rng();
        let zeros = (0..100_000).filter(|_| g.sample(&mut rng) == 0).count() as f64 / 1e5;
        assert!((zeros - 0.99).abs() < 0.002, "{zeros}");
    }

    #[test]
    fn brownian_grid_basics() {
        let mut rng = RngStream::new(4, 0).rng();
        let g = sample_brownian_grid(3, 1, &mut rng).unwrap();
        let mut rng = RngStream::new(4, 0).rng();
        for j in 0..3 {
            assert_eq!(g.value(j, 0), 0.0);
            assert_eq!(g.at_one(j), standard_normal(&mut rng));
        }
        assert!(sample_brownian_grid(0, 4, &mut rng).is_err());
        assert!(sample_brownian_grid(1, 0, &mut rng).is_err());
    }

    #[test]
    fn brownian_independent_dimensions() {
        let n = 100_000;
        let mut rng = RngStream::new(6, 0).rng();
        let (mut s1, mut s2, mut s12, mut q1) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let g = sample_brownian_grid(2, 4, &mut rng).unwrap();
            let (a, b) = (g.at_one(0), g.at_one(1));
            s1 += a;
            s2 += b;
            s12 += a * b;
            q1 += a * a;
        }
        let nf = n as f64;
        let cov = s12 / nf - (s1 / nf) * (s2 / nf);
        assert!(cov.abs() <= 0.01, "cov {cov}");
        assert!((q1 / nf - 1.0).abs() <= 0.02);
    }

    #[test]
    fn correlated_identity_is_standard_law() {
        let id = [1.0, 0.0, 0.0, 1.0];
        let f = CovarianceFactor::new(2, &id).unwrap();
        let m = f.matrix();
        assert_abs_diff_eq!(m[0].abs() + m[1].abs(), 1.0, epsilon = 1e-14);
        let g = f.sample_grid(8, &mut RngStream::new(0, 0).rng()).unwrap();
        assert_eq!(g.kind(), CovarianceKind::Correlated);
    }

    #[test]
    fn correlated_sigma_u_covariance() {
        let sigma_u = [1.0, -0.5, -0.5, -0.5, 1.0, -0.5, -0.5, -0.5, 1.0];
        let f = CovarianceFactor::new(3, &sigma_u).unwrap();
        let mut rng = RngStream::new(8, 0).rng();
        let n = 100_000;
        let (mut s1, mut s2, mut s12) = (0.0, 0.0, 0.0);
        for _ in 0..n {
            let g = f.sample_grid(2, &mut rng).unwrap();
            let (a, b) = (g.at_one(0), g.at_one(1));
            s1 += a;
            s2 += b;
            s12 += a * b;
            let total: f64 = (0..3).map(|j| g.at_one(j)).sum();
            assert!(total.abs() <= 1e-10);
            let mid: f64 = (0..3).map(|j| g.value(j, 1)).sum();
            assert!(mid.abs() <= 1e-10);
        }
        let nf = n as f64;
        let cov = s12 / nf - (s1 / nf) * (s2 / nf);
        assert!((cov + 0.5).abs() <= 0.02, "cov {cov}");
    }

    #[test]
    fn correlated_rejects_non_psd() {
        let bad = [1.0, 2.0, 2.0, 1.0];
        assert!(matches!(CovarianceFactor::new(2, &bad), Err(Error::NotPsd { .. })));
        let asym = [1.0, 0.5, 0.2, 1.0];
        assert!(CovarianceFactor::new(2, &asym).is_err());
    }

    #[test]
    fn iid_words() {
        let mut rng = RngStream::new(10, 0).rng();
        let w = sample_word_iid(50, &[1.0], &mut rng).unwrap();
        assert!(w.letters().iter().all(|&x| x == 1));

        for p in [vec![1.0 / 3.0; 3], vec![0.5, 0.3, 0.2]] {
            let w = sample_word_iid(1_000_000, &p, &mut rng).unwrap();
            for (i, &pi) in p.iter().enumerate() {
                let f = w.letters().iter().filter(|&&x| x as usize == i + 1).count() as f64 / 1e6;
                assert!((f - pi).abs() <= 0.002, "letter {} freq {f}", i + 1);
            }
        }
        assert!(sample_word_iid(5, &[0.2, 0.8], &mut rng).is_err());
        assert!(sample_word_iid(5, &[0.5, 0.4], &mut rng).is_err());
        assert!(sample_word_iid(5, &[1.5, -0.5], &mut rng).is_err());
    }

    #[test]
    fn word_validation() {
        assert!(Word::new(3, vec![1, 2, 3]).is_ok());
        assert!(Word::new(3, vec![0, 2]).is_err());
        assert!(Word::new(3, vec![4]).is_err());
    }

    #[test]
    fn markov_words() {
        assert!(CyclicMarkovSpec::new(vec![1.0, 0.0, 0.0]).is_err());

        let uniform = CyclicMarkovSpec::new(vec![1.0 / 3.0; 3]).unwrap();
        let w = sample_word_markov(1_000_000, &uniform, &mut RngStream::new(11, 0).rng());
        for i in 1..=3 {
            let f = w.letters().iter().filter(|&&x| x == i).count() as f64 / 1e6;
            assert!((f - 1.0 / 3.0).abs() <= 0.002, "{f}");
        }

        let spec = CyclicMarkovSpec::new(vec![0.5, 0.3, 0.2]).unwrap_err();
        assert!(matches!(spec, Error::InvalidMarkov(_)));
        let spec = CyclicMarkovSpec::new(vec![0.6, 0.2, 0.2]).unwrap();
        let w = sample_word_markov(1_000_000, &spec, &mut RngStream::new(11, 1).rng());
        let mut counts = [[0usize; 3]; 3];
        for pair in w.letters().windows(2) {
            counts[pair[0] as usize - 1][pair[1] as usize - 1] += 1;
        }
        for (i, row) in counts.iter().enumerate() {
            let total: usize = row.iter().sum();
            for (j, &c) in row.iter().enumerate() {
                let expected = spec.transition(i, j);
                let f = c as f64 / total as f64;
                assert!((f - expected).abs() <= 0.005, "({i},{j}) {f} vs {expected}");
            }
        }
    }
}
