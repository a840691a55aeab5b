//! Dense Hermitian eigensolver.
//!
//! Complex Householder reduction to Hermitian tridiagonal form, a diagonal
//! phase change that makes the off-diagonal real, then implicit-shift QL on
//! the real symmetric tridiagonal matrix (the classic `tql2` iteration).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

const EPS: f64 = f64::EPSILON;

/// Eigenvalues in descending order, plus the unitary eigenvector matrix
/// (row-major, column `m` is the eigenvector of `values[m]`) when requested.
pub(crate) fn hermitian_eigen(
    n: usize,
    entries: &[Complex64],
    want_vectors: bool,
) -> (Vec<f64>, Option<Vec<Complex64>>) {
    debug_assert_eq!(entries.len(), n * n);
    if n == 0 {
        return (Vec::new(), want_vectors.then(Vec::new));
    }
    if n == 1 {
        return (
            vec![entries[0].re],
            want_vectors.then(|| vec![Complex64::new(1.0, 0.0)]),
        );
    }

    let mut a = entries.to_vec();
    let mut q = want_vectors.then(|| identity(n));
    tridiagonalize(n, &mut a, q.as_mut());

    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let sub: Vec<Complex64> = (0..n - 1).map(|i| a[(i + 1) * n + i]).collect();

    // phase[i+1] = phase[i] * sub[i] / |sub[i]| turns the off-diagonal real
    let mut phase = vec![Complex64::new(1.0, 0.0); n];
    let mut e = vec![0.0; n];
    for i in 0..n - 1 {
        let mag = sub[i].norm();
        e[i] = mag;
        phase[i + 1] = if mag > 0.0 {
            phase[i] * (sub[i] / mag)
        } else {
            phase[i]
        };
    }

    let mut w = want_vectors.then(|| {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        z
    });
    tql2(n, &mut d, &mut e, w.as_mut());

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[y].total_cmp(&d[x]));
    let values: Vec<f64> = order.iter().map(|&m| d[m]).collect();

    let vectors = match (q, w) {
        (Some(q), Some(w)) => {
            let mut v = vec![Complex64::new(0.0, 0.0); n * n];
            for r in 0..n {
                for (col, &m) in order.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for c in 0..n {
                        acc += q[r * n + c] * phase[c] * w[c * n + m];
                    }
                    v[r * n + col] = acc;
                }
            }
            Some(v)
        }
        _ => None,
    };
    (values, vectors)
}

fn identity(n: usize) -> Vec<Complex64> {
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        m[i * n + i] = Complex64::new(1.0, 0.0);
    }
    m
}

/// In-place `A <- Hᴴ A H` with Householder reflectors, accumulating
/// `Q <- Q H` so that `A_in = Q A_out Qᴴ`.
fn tridiagonalize(n: usize, a: &mut [Complex64], mut q: Option<&mut Vec<Complex64>>) {
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    for j in 0..n.saturating_sub(2) {
        let norm = libm::sqrt((j + 1..n).map(|i| a[i * n + j].norm_sqr()).sum::<f64>());
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(j + 1) * n + j];
        let x0_abs = x0.norm();
        let unit = if x0_abs > 0.0 {
            x0 / x0_abs
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -unit * norm;

        v.iter_mut().for_each(|x| *x = zero);
        for i in j + 1..n {
            v[i] = a[i * n + j];
        }
        v[j + 1] -= alpha;
        let v_norm = libm::sqrt(v.iter().map(|x| x.norm_sqr()).sum::<f64>());
        if v_norm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= v_norm);

        // p = A v, K = vᴴ A v (real), q = p - K v
        for r in 0..n {
            let mut acc = zero;
            for c in j + 1..n {
                acc += a[r * n + c] * v[c];
            }
            p[r] = acc;
        }
        let k: f64 = (j + 1..n).map(|i| (v[i].conj() * p[i]).re).sum();
        for r in 0..n {
            p[r] -= v[r] * k;
        }
        for r in 0..n {
            for c in 0..n {
                a[r * n + c] -= (v[r] * p[c].conj() + p[r] * v[c].conj()) * 2.0;
            }
        }
        a[(j + 1) * n + j] = alpha;
        a[j * n + j + 1] = alpha.conj();
        for i in j + 2..n {
            a[i * n + j] = zero;
            a[j * n + i] = zero;
        }

        if let Some(q) = q.as_deref_mut() {
            for r in 0..n {
                let mut qv = zero;
                for c in j + 1..n {
                    qv += q[r * n + c] * v[c];
                }
                for c in j + 1..n {
                    q[r * n + c] -= qv * v[c].conj() * 2.0;
                }
            }
        }
    }
}

/// Implicit QL on the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples `i` and `i + 1`, `e[n - 1]` ignored).
/// On exit `d` holds the eigenvalues (unsorted) and `z`, if given, has been
/// right-multiplied by the accumulated rotations.
fn tql2(n: usize, d: &mut [f64], e: &mut [f64], mut z: Option<&mut Vec<f64>>) {
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > EPS * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                debug_assert!(iter < 100, "tql2 failed to converge");
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let h = z[k * n + i + 1];
                            z[k * n + i + 1] = s * z[k * n + i] + c * h;
                            z[k * n + i] = c * z[k * n + i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= EPS * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}
