//! Complex Hermitian matrices, their principal-minor spectra and the
//! weighted traceless projection used for block limit laws.

mod eigen;

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

pub use num_complex::Complex64;

use crate::{Error, Result};

/// Maximum tolerated `|a_ij - conj(a_ji)|` when accepting raw entries.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Absolute tolerance for interlacing of floating-point patterns.
pub const INTERLACING_TOLERANCE: f64 = 1e-9;

/// A dense complex Hermitian matrix stored row-major.
///
/// The lower triangle is always the exact conjugate of the upper triangle
/// and the diagonal is exactly real.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Accepts row-major entries if they are Hermitian within
    /// [`HERMITIAN_TOLERANCE`]; the stored matrix is then made exactly
    /// Hermitian from the upper triangle.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let mut deviation: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                let d = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                deviation = deviation.max(d);
            }
        }
        if !(deviation <= HERMITIAN_TOLERANCE) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::from_upper(dim, |i, j| entries[i * dim + j]))
    }

    /// Builds a matrix from its upper triangle (`i <= j`); `f(i, i)` is
    /// truncated to its real part.
    pub fn from_upper(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        assert!(dim > 0, "dimension must be positive");
        let mut entries = alloc::vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(f(i, i).re, 0.0);
            for j in i + 1..dim {
                let z = f(i, j);
                entries[i * dim + j] = z;
                entries[j * dim + i] = z.conj();
            }
        }
        Self { dim, entries }
    }

    pub fn from_real_symmetric(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn diagonal_matrix(values: &[f64]) -> Self {
        Self::from_upper(values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.entries[i * self.dim + i].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|z| z.norm_sqr()).sum())
    }

    /// `self - shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.entries[i * self.dim + i].re -= shift;
        }
        out
    }

    /// Top-left `k x k` block, entries copied exactly.
    pub fn principal_minor(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.dim {
            return Err(Error::OutOfRange {
                what: "minor size",
                value: k,
                expected: format!("1..={}", self.dim),
            });
        }
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            entries.extend_from_slice(&self.entries[i * self.dim..i * self.dim + k]);
        }
        Ok(Self { dim: k, entries })
    }

    /// Eigenvalues sorted in descending order.
    pub fn eigenvalues(&self) -> Spectrum {
        let (values, _) = eigen::hermitian_eigen(self.dim, &self.entries, false);
        Spectrum(values)
    }

    /// Eigenvalues with a unitary matrix of eigenvectors.
    pub fn eigen_decomposition(&self) -> EigenDecomposition {
        let (values, vectors) = eigen::hermitian_eigen(self.dim, &self.entries, true);
        EigenDecomposition {
            values: Spectrum(values),
            vectors: vectors.unwrap_or_default(),
        }
    }

    /// Gelfand–Tsetlin pattern whose row `k` is the spectrum of the
    /// principal `k x k` minor.
    pub fn minor_spectra(&self) -> GelfandTsetlinPattern {
        let rows = (1..=self.dim)
            .map(|k| {
                let minor = self.principal_minor(k).expect("k within 1..=dim");
                minor.eigenvalues().0
            })
            .collect();
        GelfandTsetlinPattern { rows }
    }
}

/// A nonincreasing sequence of eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn max(&self) -> f64 {
        self.0[0]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Spectrum,
    /// Row-major; column `m` is the unit eigenvector for `values[m]`.
    pub vectors: Vec<Complex64>,
}

impl EigenDecomposition {
    /// `V diag(d) Vᴴ`, entry `(i, j)`.
    pub fn reconstruct(&self, i: usize, j: usize) -> Complex64 {
        let n = self.values.0.len();
        (0..n)
            .map(|m| self.vectors[i * n + m] * self.values.0[m] * self.vectors[j * n + m].conj())
            .sum()
    }
}

/// Triangular array of rows `row_1, ..., row_depth`, row `k` nonincreasing
/// with `k` entries. Integer patterns (RSK shapes) use `T = u64`.
#[derive(Clone, Debug, PartialEq)]
pub struct GelfandTsetlinPattern<T = f64> {
    rows: Vec<Vec<T>>,
}

impl<T: Copy + PartialOrd> GelfandTsetlinPattern<T> {
    /// Checks the triangular shape and that each row is nonincreasing.
    /// Interlacing is checked separately.
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidParameter("pattern depth must be positive".into()));
        }
        for (idx, row) in rows.iter().enumerate() {
            if row.len() != idx + 1 {
                return Err(Error::DimensionMismatch {
                    expected: idx + 1,
                    found: row.len(),
                });
            }
            if row.windows(2).any(|w| !(w[0] >= w[1])) {
                return Err(Error::InvalidParameter(format!(
                    "row {} is not nonincreasing",
                    idx + 1
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn depth(&self) -> usize {
        self.rows.len()
    }

    /// Row with `k` entries (`1 <= k <= depth`).
    pub fn row(&self, k: usize) -> &[T] {
        &self.rows[k - 1]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// Exact interlacing `row_k[i] >= row_{k-1}[i] >= row_k[i+1]`.
    pub fn interlaces(&self) -> bool {
        self.rows.windows(2).all(|w| {
            let (upper, lower) = (&w[0], &w[1]);
            upper
                .iter()
                .enumerate()
                .all(|(i, &u)| lower[i] >= u && u >= lower[i + 1])
        })
    }

    pub fn map<U>(&self, f: impl Fn(T) -> U) -> GelfandTsetlinPattern<U> {
        GelfandTsetlinPattern {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|&x| f(x)).collect())
                .collect(),
        }
    }

    /// Row-major flattening `row_1, row_2, ...`.
    pub fn flatten(&self) -> Vec<T> {
        self.rows.iter().flatten().copied().collect()
    }
}

impl GelfandTsetlinPattern<f64> {
    /// Largest interlacing violation (0 when the pattern interlaces).
    pub fn interlacing_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.rows.windows(2) {
            let (upper, lower) = (&w[0], &w[1]);
            for (i, &u) in upper.iter().enumerate() {
                worst = worst.max(u - lower[i]).max(lower[i + 1] - u);
            }
        }
        worst
    }

    pub fn interlaces_within(&self, tol: f64) -> bool {
        self.interlacing_defect() <= tol
    }

    /// `sum_{i <= l} row_k[i]`.
    pub fn partial_sum_top(&self, l: usize, k: usize) -> Result<f64> {
        if k == 0 || k > self.depth() {
            return Err(Error::OutOfRange {
                what: "k",
                value: k,
                expected: format!("1..={}", self.depth()),
            });
        }
        if l == 0 || l > k {
            return Err(Error::OutOfRange {
                what: "l",
                value: l,
                expected: format!("1..={k}"),
            });
        }
        Ok(self.rows[k - 1][..l].iter().sum())
    }

    /// Telescoping row sums: `out[j] = sum(row_{j+1}) - sum(row_j)`, which
    /// recovers the diagonal of the matrix whose minors produced the pattern.
    pub fn diagonal(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.rows
            .iter()
            .map(|r| {
                let s: f64 = r.iter().sum();
                let d = s - prev;
                prev = s;
                d
            })
            .collect()
    }
}

/// `H_i - (sqrt(p_(i)) * sum_j sqrt(p_(j)) Tr H_j) I` for each diagonal block,
/// i.e. the orthogonal projection of `diag(H_1, ..., H_n)` onto the
/// complement of `J = diag(sqrt(p_1), ..., sqrt(p_k))`.
pub fn traceless_block_projection(
    blocks: &[HermitianMatrix],
    p: &[f64],
) -> Result<Vec<HermitianMatrix>> {
    let total: usize = blocks.iter().map(HermitianMatrix::dim).sum();
    if total != p.len() {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: p.len(),
        });
    }
    let sum: f64 = p.iter().sum();
    if p.iter().any(|&x| !(x > 0.0)) || (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidProbability(format!(
            "entries must be positive and sum to 1 (sum = {sum})"
        )));
    }
    let mut weights = Vec::with_capacity(blocks.len());
    let mut offset = 0;
    for b in blocks {
        let block_p = &p[offset..offset + b.dim()];
        if block_p.iter().any(|&x| x != block_p[0]) {
            return Err(Error::InvalidProbability(
                "probabilities must be constant within each block".to_string(),
            ));
        }
        weights.push(libm::sqrt(block_p[0]));
        offset += b.dim();
    }
    let weighted_trace: f64 = blocks
        .iter()
        .zip(&weights)
        .map(|(b, w)| w * b.trace())
        .sum();
    Ok(blocks
        .iter()
        .zip(&weights)
        .map(|(b, w)| b.shifted(w * weighted_trace))
        .collect())
}
