//! Cyclic symmetric Markov chains on `Z_k`.
//!
//! The transition matrix is `P = (p(j - i))` with `p` even and
//! `k`-periodic. It is diagonalized by the real Fourier basis; the
//! covariance of the limiting correlated Brownian motion is
//! `Sigma = S Lambda_Sigma Sᵀ` with `Lambda_Sigma = diag(0, eta(lambda_2), ...)`
//! and `eta(x) = (1 + x) / (1 - x)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use crate::sampling::{BrownianGrid, CovarianceKind};
use crate::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;

/// Step distribution `p(0), ..., p(k-1)` of a cyclic symmetric chain that
/// is irreducible and aperiodic.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicMarkovSpec {
    p: Vec<f64>,
}

impl CyclicMarkovSpec {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        let k = p.len();
        if k < 2 {
            return Err(Error::InvalidMarkov(format!("alphabet size {k} < 2")));
        }
        if p.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::InvalidMarkov("negative or NaN step probability".into()));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidMarkov(format!("step probabilities sum to {sum}")));
        }
        for r in 1..k {
            if (p[r] - p[k - r]).abs() > SUM_TOLERANCE {
                return Err(Error::InvalidMarkov(format!("p({r}) != p({})", k - r)));
            }
        }
        let spec = Self { p };
        match spec.period() {
            None => Err(Error::InvalidMarkov("chain is not irreducible".into())),
            Some(d) if d != 1 => Err(Error::InvalidMarkov(format!("chain has period {d}"))),
            Some(_) => Ok(spec),
        }
    }

    /// Builds the spec from the first row `(p_1, ..., p_k)` of `P`, i.e.
    /// `p_{i+1} = p(i)`.
    pub fn from_first_row(row: &[f64]) -> Result<Self> {
        Self::new(row.to_vec())
    }

    pub fn k(&self) -> usize {
        self.p.len()
    }

    /// `p(r)` for `r = 0..k`.
    pub fn step_distribution(&self) -> &[f64] {
        &self.p
    }

    /// `p(r)` for any integer `r` (k-periodic).
    pub fn step(&self, r: i64) -> f64 {
        self.p[r.rem_euclid(self.k() as i64) as usize]
    }

    /// Matrix-display labels `(p_1, ..., p_k)`, the first row of `P`.
    pub fn first_row(&self) -> &[f64] {
        &self.p
    }

    pub fn transition(&self, i: usize, j: usize) -> f64 {
        self.step(j as i64 - i as i64)
    }

    pub fn transition_matrix(&self) -> Vec<f64> {
        let k = self.k();
        (0..k * k).map(|x| self.transition(x / k, x % k)).collect()
    }

    /// Period of the chain, or `None` when it is reducible.
    fn period(&self) -> Option<usize> {
        let k = self.k();
        let steps: Vec<usize> = (0..k).filter(|&r| self.p[r] > 0.0).collect();
        let mut level = vec![usize::MAX; k];
        level[0] = 0;
        let mut queue = alloc::collections::VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            for &r in &steps {
                let v = (u + r) % k;
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if level.contains(&usize::MAX) {
            return None;
        }
        let mut g = 0usize;
        for u in 0..k {
            for &r in &steps {
                let v = (u + r) % k;
                let diff = (level[u] + 1).abs_diff(level[v]);
                g = gcd(g, diff);
            }
        }
        Some(g)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Random valid spec: independent exponential weights on `p(0..=k/2)`,
/// mirrored and normalized; redrawn until irreducible and aperiodic.
pub fn random_spec<R: Rng + ?Sized>(k: usize, rng: &mut R) -> CyclicMarkovSpec {
    assert!(k >= 2, "alphabet size must be at least 2");
    loop {
        let half: Vec<f64> = (0..=k / 2)
            .map(|_| -libm::log(1.0 - rng.random::<f64>()))
            .collect();
        let mut p: Vec<f64> = (0..k).map(|r| half[r.min(k - r)]).collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        if let Ok(spec) = CyclicMarkovSpec::new(p) {
            return spec;
        }
    }
}

/// `lambda_l = sum_{r=1}^k p(r) cos(2 pi (l - 1) r / k)` for `l = 1..=k`.
pub fn markov_eigenvalues(spec: &CyclicMarkovSpec) -> Vec<f64> {
    let k = spec.k();
    (1..=k)
        .map(|l| {
            (1..=k)
                .map(|r| {
                    spec.step(r as i64)
                        * libm::cos(2.0 * PI * ((l - 1) * r) as f64 / k as f64)
                })
                .sum()
        })
        .collect()
}

/// `(1 + x) / (1 - x)`.
pub fn eta(x: f64) -> f64 {
    (1.0 + x) / (1.0 - x)
}

/// Eigen-structure of `P` and the limiting covariance.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovSpectralData {
    pub k: usize,
    /// `lambda_1, ..., lambda_k` in formula order.
    pub lambda: Vec<f64>,
    /// Orthogonal `k x k`, row-major; columns `(v_1, v_2, w_2, ..., [v_{k/2+1}])`.
    pub s: Vec<f64>,
    /// Eigenvalue of `P` carried by each column of `s`.
    pub column_eigenvalue: Vec<f64>,
    /// Diagonal of `Lambda_Sigma`, matched to the columns of `s`.
    pub lambda_sigma: Vec<f64>,
    /// `S Lambda_Sigma Sᵀ`, row-major.
    pub sigma: Vec<f64>,
}

impl MarkovSpectralData {
    /// Index `r + 1` of the eigenvalue carried by column `l` (1-based).
    fn column_frequency(l: usize) -> usize {
        l / 2
    }

    /// `Sigma` rescaled to unit diagonal.
    pub fn normalized_sigma(&self) -> Vec<f64> {
        normalize_diagonal(self.k, &self.sigma)
    }

    /// `eta_{l} = eta(lambda_l)` (1-based `l`).
    pub fn eta(&self, l: usize) -> f64 {
        eta(self.lambda[l - 1])
    }
}

/// `c_ij / sqrt(c_ii c_jj)`.
pub fn normalize_diagonal(k: usize, c: &[f64]) -> Vec<f64> {
    (0..k * k)
        .map(|x| {
            let (i, j) = (x / k, x % k);
            c[x] / libm::sqrt(c[i * k + i] * c[j * k + j])
        })
        .collect()
}

pub fn build_eigenbasis(spec: &CyclicMarkovSpec) -> Result<MarkovSpectralData> {
    let k = spec.k();
    let lambda = markov_eigenvalues(spec);
    for (idx, &l) in lambda.iter().enumerate().skip(1) {
        if !((1.0 - l).abs() > 1e-12) {
            return Err(Error::SingularSpec {
                index: idx + 1,
                lambda: l,
            });
        }
    }
    let kf = k as f64;
    let root_k = libm::sqrt(kf);
    let mut s = vec![0.0; k * k];
    let mut column_eigenvalue = vec![0.0; k];
    let mut lambda_sigma = vec![0.0; k];
    for l in 1..=k {
        let col = l - 1;
        let r = MarkovSpectralData::column_frequency(l);
        for j in 1..=k {
            let angle = 2.0 * PI * (r * j) as f64 / kf;
            s[(j - 1) * k + col] = if l == 1 {
                1.0 / root_k
            } else if k.is_multiple_of(2) && l == k {
                if j % 2 == 1 {
                    1.0 / root_k
                } else {
                    -1.0 / root_k
                }
            } else if l % 2 == 0 {
                core::f64::consts::SQRT_2 * libm::cos(angle) / root_k
            } else {
                core::f64::consts::SQRT_2 * libm::sin(angle) / root_k
            };
        }
        column_eigenvalue[col] = lambda[r];
        lambda_sigma[col] = if l == 1 { 0.0 } else { eta(lambda[r]) };
    }
    let mut sigma = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            sigma[i * k + j] = (0..k)
                .map(|c| s[i * k + c] * lambda_sigma[c] * s[j * k + c])
                .sum();
        }
    }
    Ok(MarkovSpectralData {
        k,
        lambda,
        s,
        column_eigenvalue,
        lambda_sigma,
        sigma,
    })
}

/// `Sigma = S Lambda_Sigma Sᵀ`, row-major `k x k`.
pub fn markov_sigma(spec: &CyclicMarkovSpec) -> Result<Vec<f64>> {
    Ok(build_eigenbasis(spec)?.sigma)
}

/// Matrix of the pathwise map `(B_2, ..., B_k) -> (B~_1, ..., B~_k)`,
/// `k x (k - 1)` row-major: `S sqrt(Lambda_Sigma)` without its first column.
pub fn correlation_map(data: &MarkovSpectralData) -> Vec<f64> {
    let k = data.k;
    let mut m = vec![0.0; k * (k - 1)];
    for j in 0..k {
        for c in 1..k {
            m[j * (k - 1) + c - 1] = data.s[j * k + c] * libm::sqrt(data.lambda_sigma[c]);
        }
    }
    m
}

/// Correlated motion `B~ = S sqrt(Lambda_Sigma) B` from a standard grid
/// carrying the coordinates `B_2, ..., B_k` (grid dimension `d` is `B_{d+2}`).
pub fn correlated_from_standard(grid: &BrownianGrid, spec: &CyclicMarkovSpec) -> Result<BrownianGrid> {
    let k = spec.k();
    if grid.n_dims() != k - 1 {
        return Err(Error::DimensionMismatch {
            expected: k - 1,
            found: grid.n_dims(),
        });
    }
    if grid.kind() != CovarianceKind::Standard {
        return Err(Error::Precondition("source grid must be standard".into()));
    }
    let data = build_eigenbasis(spec)?;
    grid.linear_map(k, &correlation_map(&data), CovarianceKind::Correlated)
}

/// The `k x k` matrix with unit diagonal and off-diagonal `-1/(k-1)`.
pub fn sigma_u(k: usize) -> Vec<f64> {
    (0..k * k)
        .map(|x| if x / k == x % k { 1.0 } else { -1.0 / (k as f64 - 1.0) })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaUCheck {
    /// Normalized `Sigma` equals `Sigma_u` entrywise within `1e-10`.
    pub matches: bool,
    pub max_deviation: f64,
    /// For `k = 4`: whether `p_3^2 = p_2 p_4` (first-row labels) within `1e-10`.
    pub algebraic: Option<bool>,
}

pub fn check_sigma_u(spec: &CyclicMarkovSpec) -> Result<SigmaUCheck> {
    let k = spec.k();
    let normalized = build_eigenbasis(spec)?.normalized_sigma();
    let target = sigma_u(k);
    let max_deviation = normalized
        .iter()
        .zip(&target)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let algebraic = (k == 4).then(|| {
        let row = spec.first_row();
        let (p2, p3, p4) = (row[1], row[2], row[3]);
        (p3 * p3 - p2 * p4).abs() <= 1e-10
    });
    Ok(SigmaUCheck {
        matches: max_deviation <= 1e-10,
        max_deviation,
        algebraic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::HermitianMatrix;
    use crate::sampling::{sample_brownian_grid, RngStream};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    /// `k = 4` family with `2 eta_2 = eta_3`.
    fn two_eta_family(p2: f64) -> CyclicMarkovSpec {
        let p3 = p2 * (3.0 - 2.0 * p2) / (1.0 + 2.0 * p2);
        CyclicMarkovSpec::new(vec![1.0 - 2.0 * p2 - p3, p2, p3, p2]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(CyclicMarkovSpec::new(vec![1.0]).is_err());
        assert!(CyclicMarkovSpec::new(vec![1.0, 0.0, 0.0]).is_err());
        assert!(CyclicMarkovSpec::new(vec![0.5, 0.3, 0.2]).is_err());
        assert!(CyclicMarkovSpec::new(vec![0.5, 0.25, 0.3]).is_err());
        // period 2: steps +-1 on Z_4
        assert!(CyclicMarkovSpec::new(vec![0.0, 0.5, 0.0, 0.5]).is_err());
        // p(2) = 1 on Z_4 is reducible
        assert!(CyclicMarkovSpec::new(vec![0.0, 0.0, 1.0, 0.0]).is_err());
        // p(0) = 0 but steps +-1 on Z_3 are aperiodic
        assert!(CyclicMarkovSpec::new(vec![0.0, 0.5, 0.5]).is_ok());
        // k = 2 flip chain is periodic
        assert!(CyclicMarkovSpec::new(vec![0.0, 1.0]).is_err());
        assert!(CyclicMarkovSpec::new(vec![0.3, 0.7]).is_ok());
    }

    #[test]
    fn uniform_eigenvalues() {
        for k in 2..8 {
            let spec = CyclicMarkovSpec::new(vec![1.0 / k as f64; k]).unwrap();
            let l = markov_eigenvalues(&spec);
            assert_abs_diff_eq!(l[0], 1.0, epsilon = 1e-12);
            for x in &l[1..] {
                assert_abs_diff_eq!(*x, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn k4_eigenvalues_in_row_labels() {
        let spec = CyclicMarkovSpec::new(vec![0.4, 0.2, 0.2, 0.2]).unwrap();
        let spec2 = CyclicMarkovSpec::new(vec![0.1, 0.3, 0.3, 0.3]).unwrap();
        for s in [spec, spec2, two_eta_family(0.15)] {
            let p = s.first_row();
            let l = markov_eigenvalues(&s);
            assert_abs_diff_eq!(l[1], p[0] - p[2], epsilon = 1e-12);
            assert_abs_diff_eq!(l[2], p[0] - 2.0 * p[1] + p[2], epsilon = 1e-12);
        }
    }

    #[test]
    fn eigenvalues_match_dense_solver() {
        let mut rng = RngStream::new(21, 0).rng();
        for k in 2..=7 {
            for _ in 0..20 {
                let spec = random_spec(k, &mut rng);
                let mut formula = markov_eigenvalues(&spec);
                formula.sort_by(|a, b| b.total_cmp(a));
                let dense = HermitianMatrix::from_real_symmetric(k, &spec.transition_matrix())
                    .unwrap()
                    .eigenvalues();
                for (a, b) in formula.iter().zip(dense.values()) {
                    assert_abs_diff_eq!(a, b, epsilon = 1e-10);
                }
                let l = markov_eigenvalues(&spec);
                assert_abs_diff_eq!(l[0], 1.0, epsilon = 1e-12);
                for idx in 2..=k {
                    assert_abs_diff_eq!(l[idx - 1], l[k - idx + 1], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn eigenbasis_k2() {
        let data = build_eigenbasis(&CyclicMarkovSpec::new(vec![0.3, 0.7]).unwrap()).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let expected = [h, h, h, -h];
        for (a, b) in data.s.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn eigenbasis_k4_last_column() {
        let data = build_eigenbasis(&two_eta_family(0.1)).unwrap();
        for j in 0..4 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            assert_abs_diff_eq!(data.s[j * 4 + 3], sign * 0.5, epsilon = 1e-15);
        }
    }

    fn check_orthogonal_diagonalizes(spec: &CyclicMarkovSpec, tol: f64) {
        let data = build_eigenbasis(spec).unwrap();
        let k = spec.k();
        let p = spec.transition_matrix();
        for i in 0..k {
            for j in 0..k {
                let gram: f64 = (0..k).map(|r| data.s[r * k + i] * data.s[r * k + j]).sum();
                assert_abs_diff_eq!(gram, if i == j { 1.0 } else { 0.0 }, epsilon = tol);
                let rebuilt: f64 = (0..k)
                    .map(|c| data.s[i * k + c] * data.column_eigenvalue[c] * data.s[j * k + c])
                    .sum();
                assert_abs_diff_eq!(rebuilt, p[i * k + j], epsilon = 1e-10);
            }
        }
        for j in 0..k {
            assert_abs_diff_eq!(data.s[j * k], 1.0 / (k as f64).sqrt(), epsilon = 1e-15);
        }
    }

    #[test]
    fn eigenbasis_orthogonal_and_diagonalizing() {
        check_orthogonal_diagonalizes(&CyclicMarkovSpec::new(vec![0.5, 0.25, 0.25]).unwrap(), 1e-12);
        let mut rng = RngStream::new(22, 0).rng();
        for k in 2..=8 {
            for _ in 0..10 {
                check_orthogonal_diagonalizes(&random_spec(k, &mut rng), 1e-10);
            }
        }
    }

    #[test]
    fn sigma_structure() {
        let mut rng = RngStream::new(23, 0).rng();
        for k in 2..=7 {
            for _ in 0..10 {
                let spec = random_spec(k, &mut rng);
                let sigma = markov_sigma(&spec).unwrap();
                for i in 0..k {
                    let row: f64 = sigma[i * k..(i + 1) * k].iter().sum();
                    assert_abs_diff_eq!(row, 0.0, epsilon = 1e-12);
                    for j in 0..k {
                        assert_abs_diff_eq!(sigma[i * k + j], sigma[j * k + i], epsilon = 1e-14);
                    }
                }
                let ev = HermitianMatrix::from_real_symmetric(k, &sigma).unwrap().eigenvalues();
                assert!(*ev.values().last().unwrap() >= -1e-10);
            }
        }
    }

    #[test]
    fn sigma_k3_is_sigma_u() {
        let spec = CyclicMarkovSpec::new(vec![1.0 / 3.0; 3]).unwrap();
        let n = build_eigenbasis(&spec).unwrap().normalized_sigma();
        let expected = [1.0, -0.5, -0.5, -0.5, 1.0, -0.5, -0.5, -0.5, 1.0];
        for (a, b) in n.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn sigma_k4_template() {
        let spec = CyclicMarkovSpec::new(vec![0.35, 0.25, 0.15, 0.25]).unwrap();
        let data = build_eigenbasis(&spec).unwrap();
        let (e2, e3) = (data.eta(2), data.eta(3));
        let d = 2.0 * e2 + e3;
        let template = [
            d, -e3, -2.0 * e2 + e3, -e3,
            -e3, d, -e3, -2.0 * e2 + e3,
            -2.0 * e2 + e3, -e3, d, -e3,
            -e3, -2.0 * e2 + e3, -e3, d,
        ];
        for (a, b) in data.sigma.iter().zip(template) {
            assert_abs_diff_eq!(*a, b / 4.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn sigma_k4_two_eta_family() {
        for p2 in [0.05, 0.1, 0.2] {
            let data = build_eigenbasis(&two_eta_family(p2)).unwrap();
            assert_abs_diff_eq!(2.0 * data.eta(2), data.eta(3), epsilon = 1e-12);
            let n = data.normalized_sigma();
            let first_row = [1.0, -0.5, 0.0, -0.5];
            for (a, b) in n[..4].iter().zip(first_row) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn singular_spec_rejected() {
        // reducible specs never get past validation; exercise the guard through
        // the eigen check on a hand-built chain with lambda_2 = 1
        let spec = CyclicMarkovSpec { p: vec![1.0, 0.0, 0.0, 0.0] };
        assert!(matches!(build_eigenbasis(&spec), Err(Error::SingularSpec { .. })));
    }

    /// Literal `B~_j` expression: cosine/sine pairs plus the k-even
    /// alternating term.
    fn conv3_literal(grid: &BrownianGrid, spec: &CyclicMarkovSpec, j: usize, s: usize) -> f64 {
        let k = spec.k();
        let kf = k as f64;
        let lambda = markov_eigenvalues(spec);
        let b = |idx: usize| grid.value(idx - 2, s);
        let mut total = 0.0;
        for r in 1..=(k - 1) / 2 {
            let c = eta(lambda[r]).sqrt();
            let angle = 2.0 * PI * (r * j) as f64 / kf;
            total += (2.0 / kf).sqrt() * c * (angle.cos() * b(2 * r) + angle.sin() * b(2 * r + 1));
        }
        if k.is_multiple_of(2) {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            total += sign / kf.sqrt() * eta(lambda[k / 2]).sqrt() * b(k);
        }
        total
    }

    #[test]
    fn correlated_matches_literal_formula() {
        let mut rng = RngStream::new(24, 0).rng();
        for k in 2..=7 {
            let spec = random_spec(k, &mut rng);
            let grid = sample_brownian_grid(k - 1, 16, &mut rng).unwrap();
            let out = correlated_from_standard(&grid, &spec).unwrap();
            for j in 1..=k {
                for s in 0..=16 {
                    assert_abs_diff_eq!(out.value(j - 1, s), conv3_literal(&grid, &spec, j, s), epsilon = 1e-14);
                }
            }
            for s in 0..=16 {
                let total: f64 = (0..k).map(|j| out.value(j, s)).sum();
                assert!(total.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn correlated_k2_antithetic() {
        let spec = CyclicMarkovSpec::new(vec![0.2, 0.8]).unwrap();
        let grid = sample_brownian_grid(1, 8, &mut RngStream::new(25, 0).rng()).unwrap();
        let out = correlated_from_standard(&grid, &spec).unwrap();
        let lambda2 = markov_eigenvalues(&spec)[1];
        for s in 0..=8 {
            let expected = eta(lambda2).sqrt() / 2f64.sqrt() * grid.value(0, s);
            assert_abs_diff_eq!(out.value(0, s), expected, epsilon = 1e-14);
            assert_abs_diff_eq!(out.value(1, s), -expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn correlated_requires_matching_dimension() {
        let spec = CyclicMarkovSpec::new(vec![1.0 / 3.0; 3]).unwrap();
        let grid = sample_brownian_grid(3, 8, &mut RngStream::new(25, 1).rng()).unwrap();
        assert!(correlated_from_standard(&grid, &spec).is_err());
    }

    #[test]
    fn trans1_agrees_with_sigma_in_law() {
        // B~_j = sqrt(2/3) B_j - sqrt(1/6) sum_{i != j} B_i has covariance A Aᵀ
        let a: Vec<f64> = (0..9)
            .map(|x| if x / 3 == x % 3 { (2.0f64 / 3.0).sqrt() } else { -(1.0f64 / 6.0).sqrt() })
            .collect();
        let aat: Vec<f64> = (0..9)
            .map(|x| (0..3).map(|c| a[(x / 3) * 3 + c] * a[(x % 3) * 3 + c]).sum())
            .collect();
        let spec = CyclicMarkovSpec::new(vec![0.5, 0.25, 0.25]).unwrap();
        let sigma = build_eigenbasis(&spec).unwrap().normalized_sigma();
        for (x, y) in normalize_diagonal(3, &aat).iter().zip(&sigma) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn sigma_u_checks() {
        let mut rng = RngStream::new(26, 0).rng();
        for _ in 0..20 {
            assert!(check_sigma_u(&random_spec(3, &mut rng)).unwrap().matches);
        }
        // the other family, p_3 = p_2 (1 - 2 p_2) / (1 + 2 p_2)
        let p2 = 0.2;
        let p3 = p2 * (1.0 - 2.0 * p2) / (1.0 + 2.0 * p2);
        let spec = CyclicMarkovSpec::new(vec![1.0 - 2.0 * p2 - p3, p2, p3, p2]).unwrap();
        let check = check_sigma_u(&spec).unwrap();
        assert!(!check.matches);
        assert_eq!(check.algebraic, Some(false));
        let check = check_sigma_u(&two_eta_family(0.2)).unwrap();
        assert!(!check.matches && check.algebraic == Some(false));
        let spec = CyclicMarkovSpec::new(vec![0.25, 0.25, 0.25, 0.25]).unwrap();
        let check = check_sigma_u(&spec).unwrap();
        assert!(check.matches && check.algebraic == Some(true));
        let spec = CyclicMarkovSpec::new(vec![0.55, 0.15, 0.15, 0.15]).unwrap();
        let check = check_sigma_u(&spec).unwrap();
        assert!(check.matches && check.algebraic == Some(true));
        assert_eq!(check_sigma_u(&random_spec(5, &mut rng)).unwrap().algebraic, None);
    }

    proptest! {
        #[test]
        fn k4_criterion_agrees(seed in any::<u64>(), equal in any::<bool>()) {
            let mut rng = RngStream::new(seed, 0).rng();
            let spec = if equal {
                let p1: f64 = rng.random_range(0.05..0.9);
                let q = (1.0 - p1) / 3.0;
                CyclicMarkovSpec::new(vec![p1, q, 1.0 - p1 - 2.0 * q, q]).unwrap()
            } else {
                random_spec(4, &mut rng)
            };
            let check = check_sigma_u(&spec).unwrap();
            prop_assert_eq!(Some(check.matches), check.algebraic);
        }
    }
}
