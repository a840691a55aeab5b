//! Two-sample comparisons: Kolmogorov–Smirnov, Wasserstein-1, the energy
//! statistic with a permutation p-value, and sample covariance.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::sampling::RngStream;
use crate::{Error, Result};

/// Sorted one-dimensional sample.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalSample {
    values: Vec<f64>,
}

impl EmpiricalSample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if values.iter().any(|x| x.is_nan()) {
            return Err(Error::InvalidParameter("sample contains NaN".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// `Q(x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2)`, the Kolmogorov tail.
pub fn kolmogorov_q(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.18 {
        // Jacobi-transformed series converges fast for small x
        let y = -core::f64::consts::PI * core::f64::consts::PI / (8.0 * x * x);
        let s: f64 = (1..=20)
            .map(|j| libm::exp(((2 * j - 1) * (2 * j - 1)) as f64 * y))
            .sum();
        (1.0 - libm::sqrt(2.0 * core::f64::consts::PI) / x * s).clamp(0.0, 1.0)
    } else {
        let s: f64 = (1..=100)
            .map(|j| {
                let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                sign * libm::exp(-2.0 * (j * j) as f64 * x * x)
            })
            .sum();
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// Sup distance between the empirical CDFs; p-value from the asymptotic
/// Kolmogorov law at effective size `n_a n_b / (n_a + n_b)`.
pub fn ks_two_sample(a: &EmpiricalSample, b: &EmpiricalSample) -> TestResult {
    let (x, y) = (a.values(), b.values());
    let (na, nb) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    TestResult {
        statistic: d,
        p_value: kolmogorov_q(libm::sqrt(ne) * d),
    }
}

/// `∫ |F_a - F_b| dx`, exact for the two step functions.
pub fn wasserstein1(a: &EmpiricalSample, b: &EmpiricalSample) -> f64 {
    let (x, y) = (a.values(), b.values());
    let (na, nb) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut total = 0.0;
    let mut prev = x[0].min(y[0]);
    while i < x.len() || j < y.len() {
        let v = match (x.get(i), y.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        total += (i as f64 / na - j as f64 / nb).abs() * (v - prev);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        prev = v;
    }
    total
}

/// Rows of equal length, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSample {
    dim: usize,
    data: Vec<f64>,
}

impl VectorSample {
    pub fn new(dim: usize) -> Self {
        Self { dim, data: Vec::new() }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        let mut s = Self::new(dim);
        for r in rows {
            s.push(r)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: row.len(),
            });
        }
        self.data.extend_from_slice(row);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.data[i * self.dim + j]).collect()
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Energy statistic `T = (n m / (n + m)) (2 E|X - Y| - E|X - X'| - E|Y - Y'|)`
/// (V-statistic means) on the pooled sample, with cheap relabelled
/// recomputation for permutation tests.
///
/// With pooled row sums `r_i` and the total pair sum `D`, a labelling with
/// first group `A` needs only `S_AA`: `S_AB = sum_{i in A} r_i - 2 S_AA` and
/// `S_BB = D - S_AA - S_AB`.
#[derive(Clone, Debug)]
pub struct EnergyTest {
    pooled: VectorSample,
    n_a: usize,
    row_sums: Vec<f64>,
    total: f64,
    observed: f64,
}

impl EnergyTest {
    pub fn new(a: &VectorSample, b: &VectorSample) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut pooled = a.clone();
        pooled.data.extend_from_slice(&b.data);
        let n = pooled.len();
        let mut row_sums = vec![0.0; n];
        let mut total = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let d = euclid(pooled.row(i), pooled.row(j));
                row_sums[i] += d;
                row_sums[j] += d;
                total += d;
            }
        }
        let mut test = Self {
            pooled,
            n_a: a.len(),
            row_sums,
            total,
            observed: 0.0,
        };
        let first: Vec<usize> = (0..test.n_a).collect();
        test.observed = test.statistic_for(&first);
        Ok(test)
    }

    pub fn statistic(&self) -> f64 {
        self.observed
    }

    /// Statistic when `first` (of size `n_a`) is relabelled as the first sample.
    pub fn statistic_for(&self, first: &[usize]) -> f64 {
        let n = self.n_a as f64;
        let m = (self.pooled.len() - self.n_a) as f64;
        let mut s_aa = 0.0;
        for (x, &i) in first.iter().enumerate() {
            for &j in &first[x + 1..] {
                s_aa += euclid(self.pooled.row(i), self.pooled.row(j));
            }
        }
        let r_a: f64 = first.iter().map(|&i| self.row_sums[i]).sum();
        let s_ab = r_a - 2.0 * s_aa;
        let s_bb = self.total - s_aa - s_ab;
        let cross = s_ab / (n * m);
        let within_a = 2.0 * s_aa / (n * n);
        let within_b = 2.0 * s_bb / (m * m);
        n * m / (n + m) * (2.0 * cross - within_a - within_b)
    }

    /// Statistic under a uniformly random relabelling drawn from `stream`.
    pub fn permuted_statistic(&self, stream: &RngStream) -> f64 {
        let mut rng = stream.rng();
        let n = self.pooled.len();
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..self.n_a {
            let j = rng.random_range(i..n);
            idx.swap(i, j);
        }
        self.statistic_for(&idx[..self.n_a])
    }

    /// `(1 + #{T_perm >= T_obs}) / (1 + R)`.
    pub fn p_value(&self, permuted: &[f64]) -> f64 {
        let exceed = permuted.iter().filter(|&&t| t >= self.observed).count();
        (1 + exceed) as f64 / (1 + permuted.len()) as f64
    }
}

/// Energy statistic with a permutation p-value; permutation `r` draws its
/// labelling from `stream.with_index(r)`.
pub fn energy_distance(
    a: &VectorSample,
    b: &VectorSample,
    n_permutations: usize,
    stream: &RngStream,
) -> Result<TestResult> {
    let test = EnergyTest::new(a, b)?;
    let permuted: Vec<f64> = (0..n_permutations)
        .map(|r| test.permuted_statistic(&stream.with_index(r as u64)))
        .collect();
    Ok(TestResult {
        statistic: test.statistic(),
        p_value: test.p_value(&permuted),
    })
}

/// Unbiased sample covariance, `dim x dim` row-major.
pub fn empirical_covariance(v: &VectorSample) -> Result<Vec<f64>> {
    let (n, d) = (v.len(), v.dim());
    if n < 2 {
        return Err(Error::InvalidParameter("covariance needs at least two rows".into()));
    }
    let mut mean = vec![0.0; d];
    for i in 0..n {
        for (m, x) in mean.iter_mut().zip(v.row(i)) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut cov = vec![0.0; d * d];
    for i in 0..n {
        let row = v.row(i);
        for a in 0..d {
            for b in a..d {
                cov[a * d + b] += (row[a] - mean[a]) * (row[b] - mean[b]);
            }
        }
    }
    for a in 0..d {
        for b in a..d {
            cov[a * d + b] /= (n - 1) as f64;
            cov[b * d + a] = cov[a * d + b];
        }
    }
    Ok(cov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::standard_normal;
    use approx::assert_abs_diff_eq;

    fn normals(seed: u64, n: usize, shift: f64) -> EmpiricalSample {
        let mut rng = RngStream::new(seed, 0).rng();
        EmpiricalSample::new((0..n).map(|_| standard_normal(&mut rng) + shift).collect()).unwrap()
    }

    fn gaussian_vectors(seed: u64, n: usize, dim: usize, shift: f64) -> VectorSample {
        let mut rng = RngStream::new(seed, 0).rng();
        let mut v = VectorSample::new(dim);
        for _ in 0..n {
            let row: Vec<f64> = (0..dim).map(|_| standard_normal(&mut rng) + shift).collect();
            v.push(&row).unwrap();
        }
        v
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(EmpiricalSample::new(vec![]), Err(Error::EmptySample));
        let a = gaussian_vectors(1, 10, 2, 0.0);
        assert!(EnergyTest::new(&a, &VectorSample::new(2)).is_err());
        assert!(EnergyTest::new(&a, &gaussian_vectors(1, 10, 3, 0.0)).is_err());
        assert!(empirical_covariance(&gaussian_vectors(1, 1, 2, 0.0)).is_err());
    }

    #[test]
    fn kolmogorov_q_reference_values() {
        // both series agree at the switch point and match tabulated values
        assert_abs_diff_eq!(kolmogorov_q(1.36), 0.0494, epsilon = 2e-4);
        assert_abs_diff_eq!(kolmogorov_q(1.0), 0.2700, epsilon = 2e-4);
        assert_abs_diff_eq!(kolmogorov_q(0.5), 0.9639, epsilon = 2e-4);
        let y = -core::f64::consts::PI.powi(2) / (8.0 * 1.18 * 1.18);
        let small = 1.0 - (2.0 * core::f64::consts::PI).sqrt() / 1.18
            * (1..=20).map(|j| (((2 * j - 1) * (2 * j - 1)) as f64 * y).exp()).sum::<f64>();
        assert_abs_diff_eq!(small, kolmogorov_q(1.18), epsilon = 1e-12);
        assert_eq!(kolmogorov_q(0.0), 1.0);
    }

    #[test]
    fn ks_examples() {
        let a = normals(1, 10_000, 0.0);
        let same = ks_two_sample(&a, &a);
        assert_eq!((same.statistic, same.p_value), (0.0, 1.0));
        assert_eq!(ks_two_sample(&a, &normals(1, 10_000, 0.0)).statistic, 0.0);
        assert!(ks_two_sample(&a, &normals(2, 10_000, 0.5)).p_value < 1e-6);
        let x = EmpiricalSample::new(vec![1.0, 2.0, 2.0, 3.0]).unwrap();
        let y = EmpiricalSample::new(vec![2.0, 2.0]).unwrap();
        assert_abs_diff_eq!(ks_two_sample(&x, &y).statistic, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn ks_null_is_calibrated() {
        let low = (0..200)
            .filter(|&r| ks_two_sample(&normals(1000 + 2 * r, 1000, 0.0), &normals(1001 + 2 * r, 1000, 0.0)).p_value < 0.01)
            .count();
        assert!(low <= 7, "{low} of 200 null runs below 0.01");
    }

    #[test]
    fn wasserstein_examples() {
        let a = normals(3, 1000, 0.0);
        assert_eq!(wasserstein1(&a, &a), 0.0);
        let shifted = EmpiricalSample::new(a.values().iter().map(|x| x + 0.7).collect()).unwrap();
        assert_abs_diff_eq!(wasserstein1(&a, &shifted), 0.7, epsilon = 1e-12);
        assert!(wasserstein1(&normals(4, 10_000, 0.0), &normals(5, 10_000, 0.0)) <= 0.03);
        // unequal sizes: {0, 1} vs {0.5} gives 0.5
        let x = EmpiricalSample::new(vec![0.0, 1.0]).unwrap();
        let y = EmpiricalSample::new(vec![0.5]).unwrap();
        assert_abs_diff_eq!(wasserstein1(&x, &y), 0.5, epsilon = 1e-15);
    }

    /// Plain V-statistic form, all pairs recomputed.
    fn energy_direct(a: &VectorSample, b: &VectorSample) -> f64 {
        let mean = |x: &VectorSample, y: &VectorSample| {
            let mut s = 0.0;
            for i in 0..x.len() {
                for j in 0..y.len() {
                    s += euclid(x.row(i), y.row(j));
                }
            }
            s / (x.len() * y.len()) as f64
        };
        let (n, m) = (a.len() as f64, b.len() as f64);
        n * m / (n + m) * (2.0 * mean(a, b) - mean(a, a) - mean(b, b))
    }

    #[test]
    fn energy_matches_direct_formula() {
        let a = gaussian_vectors(6, 40, 3, 0.0);
        let b = gaussian_vectors(7, 25, 3, 0.3);
        let test = EnergyTest::new(&a, &b).unwrap();
        assert_abs_diff_eq!(test.statistic(), energy_direct(&a, &b), epsilon = 1e-10);
        // relabelling: swap a's first row with b's first row
        let mut first: Vec<usize> = (0..40).collect();
        first[0] = 40;
        let mut a2 = VectorSample::new(3);
        a2.push(b.row(0)).unwrap();
        for i in 1..40 {
            a2.push(a.row(i)).unwrap();
        }
        let mut b2 = VectorSample::new(3);
        b2.push(a.row(0)).unwrap();
        for i in 1..25 {
            b2.push(b.row(i)).unwrap();
        }
        assert_abs_diff_eq!(test.statistic_for(&first), energy_direct(&a2, &b2), epsilon = 1e-10);
    }

    #[test]
    fn energy_identical_and_power() {
        let a = gaussian_vectors(8, 300, 2, 0.0);
        let r = energy_distance(&a, &a, 99, &RngStream::new(9, 0)).unwrap();
        assert!(r.statistic.abs() < 1e-9 && r.p_value > 0.05);
        let x = gaussian_vectors(10, 5000, 2, 0.0);
        let y = gaussian_vectors(11, 5000, 2, 0.5);
        let r = energy_distance(&x, &y, 199, &RngStream::new(12, 0)).unwrap();
        assert!(r.p_value < 0.01);
    }

    #[test]
    fn energy_is_deterministic() {
        let x = gaussian_vectors(13, 200, 2, 0.0);
        let y = gaussian_vectors(14, 200, 2, 0.0);
        let s = RngStream::new(15, 0);
        assert_eq!(energy_distance(&x, &y, 50, &s).unwrap(), energy_distance(&x, &y, 50, &s).unwrap());
    }

    #[test]
    fn covariance_examples() {
        let constant = VectorSample::from_rows(&vec![vec![1.0, -2.0]; 10]).unwrap();
        assert_eq!(empirical_covariance(&constant).unwrap(), vec![0.0; 4]);
        let v = gaussian_vectors(16, 100_000, 2, 0.0);
        let c = empirical_covariance(&v).unwrap();
        for (x, e) in c.iter().zip([1.0, 0.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*x, e, epsilon = 0.02);
        }
        let small = VectorSample::from_rows(&[vec![1.0, 2.0], vec![3.0, 6.0]]).unwrap();
        assert_eq!(empirical_covariance(&small).unwrap(), vec![2.0, 4.0, 4.0, 8.0]);
    }
}
