//! Hermitian tridiagonalization and implicit QL on the real tridiagonal.

use num_complex::Complex64;

use super::general::householder;
use super::matrix::CMatrix;
use crate::error::{GapError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Reduces a Hermitian matrix to real symmetric tridiagonal form
/// `(diag, offdiag)`; `offdiag[i]` couples `i` and `i + 1`.
fn tridiagonalize(matrix: &CMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = matrix.rows();
    let mut a = matrix.as_slice().to_vec();
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut p = vec![ZERO; n];
    for k in 0..n.saturating_sub(1) {
        let col = &a[k * n + k + 1..(k + 1) * n];
        let Some((v, tau, alpha)) = householder(col) else {
            off[k] = col[0].norm();
            continue;
        };
        off[k] = alpha.norm();
        let m = v.len();
        let base = k + 1;
        // p = tau * B v for the trailing block B.
        let p = &mut p[..m];
        p.iter_mut().for_each(|z| *z = ZERO);
        for (j, vj) in v.iter().enumerate() {
            let c = &a[(base + j) * n + base..(base + j) * n + base + m];
            for (pi, ci) in p.iter_mut().zip(c) {
                *pi += ci * vj;
            }
        }
        p.iter_mut().for_each(|z| *z *= tau);
        let vp: Complex64 = v.iter().zip(p.iter()).map(|(vi, pi)| vi.conj() * pi).sum();
        let half = vp * (0.5 * tau);
        let w: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - half * vi).collect();
        for j in 0..m {
            let (vj, wj) = (v[j].conj(), w[j].conj());
            let c = &mut a[(base + j) * n + base..(base + j) * n + base + m];
            for i in 0..m {
                c[i] -= v[i] * wj + w[i] * vj;
            }
        }
    }
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    (diag, off)
}

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit QL with
/// Wilkinson-type shifts. Result is unsorted.
pub(crate) fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let cap = 30 * n.max(1);
    let mut sweeps = 0;

    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if sweeps >= cap {
                return Err(GapError::NoConvergence {
                    iterations: sweeps,
                    unconverged: n - l,
                    partial: d[..l].iter().map(|&x| Complex64::new(x, 0.0)).collect(),
                });
            }
            sweeps += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

pub(crate) fn eigenvalues(matrix: &CMatrix) -> Result<Vec<f64>> {
    let (d, e) = tridiagonalize(matrix);
    let mut values = tridiagonal_eigenvalues(&d, &e)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}
