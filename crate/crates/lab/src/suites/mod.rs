pub(crate) mod corollary;
pub(crate) mod markov;
pub(crate) mod oracles;
pub(crate) mod prelimit;
pub(crate) mod theorem1;

use minorlab_core::sampling::RngStream;
use minorlab_core::stats::{ks_two_sample, wasserstein1, EmpiricalSample, EnergyTest, TestResult, VectorSample};
use minorlab_core::Result;

use crate::Harness;

/// Column `c` of a sample of equal-length rows.
pub(crate) fn column(rows: &[Vec<f64>], c: usize) -> Vec<f64> {
    rows.iter().map(|r| r[c]).collect()
}

pub(crate) struct OneDim {
    pub w1: f64,
    pub ks: TestResult,
}

pub(crate) fn compare_1d(a: Vec<f64>, b: Vec<f64>) -> Result<OneDim> {
    let a = EmpiricalSample::new(a)?;
    let b = EmpiricalSample::new(b)?;
    Ok(OneDim {
        w1: wasserstein1(&a, &b),
        ks: ks_two_sample(&a, &b),
    })
}

/// Energy statistic with permutations fanned out over the pool;
/// permutation `r` uses `stream.with_index(r)`.
pub(crate) fn energy(h: &Harness, a: &[Vec<f64>], b: &[Vec<f64>], n_perm: u64, stream: &RngStream) -> Result<TestResult> {
    let test = EnergyTest::new(&VectorSample::from_rows(a)?, &VectorSample::from_rows(b)?)?;
    let permuted = h.par_map(n_perm as usize, |r| test.permuted_statistic(&stream.with_index(r as u64)));
    Ok(TestResult {
        statistic: test.statistic(),
        p_value: test.p_value(&permuted),
    })
}

pub(crate) fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// `(x - mean) / sd` with the unbiased standard deviation.
pub(crate) fn standardize(x: &[f64]) -> Vec<f64> {
    let m = mean(x);
    let var = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64;
    let sd = var.sqrt();
    x.iter().map(|v| (v - m) / sd).collect()
}
