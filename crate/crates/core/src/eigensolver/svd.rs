//! Singular values through Golub–Kahan bidiagonalization. The real
//! bidiagonal is embedded in the 2n×2n zero-diagonal tridiagonal whose
//! eigenvalues are ±σ.

use num_complex::Complex64;

use super::general::householder;
use super::hermitian::tridiagonal_eigenvalues;
use super::matrix::CMatrix;
use crate::error::Result;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn bidiagonalize(matrix: &CMatrix) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = (matrix.rows(), matrix.cols());
    let mut a = matrix.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut w = vec![ZERO; m];
    for k in 0..n {
        let col = &a[k * m + k..(k + 1) * m];
        match householder(col) {
            None => d[k] = col[0].norm(),
            Some((v, tau, alpha)) => {
                d[k] = alpha.norm();
                for j in k + 1..n {
                    let c = &mut a[j * m + k..(j + 1) * m];
                    let s: Complex64 = v.iter().zip(c.iter()).map(|(vi, ci)| vi.conj() * ci).sum::<Complex64>() * tau;
                    for (ci, vi) in c.iter_mut().zip(&v) {
                        *ci -= vi * s;
                    }
                }
            }
        }
        if k + 1 >= n {
            continue;
        }
        // Row k, columns k+1..: reflect conj(row) so that row * H = conj(alpha) e1.
        let row: Vec<Complex64> = (k + 1..n).map(|j| a[j * m + k].conj()).collect();
        match householder(&row) {
            None => e[k] = row[0].norm(),
            Some((v, tau, alpha)) => {
                e[k] = alpha.norm();
                let w = &mut w[k + 1..m];
                w.iter_mut().for_each(|z| *z = ZERO);
                for (j, vj) in v.iter().enumerate() {
                    let c = &a[(k + 1 + j) * m + k + 1..(k + 2 + j) * m];
                    for (wi, ci) in w.iter_mut().zip(c) {
                        *wi += ci * vj;
                    }
                }
                for (j, vj) in v.iter().enumerate() {
                    let f = vj.conj() * tau;
                    let c = &mut a[(k + 1 + j) * m + k + 1..(k + 2 + j) * m];
                    for (ci, wi) in c.iter_mut().zip(w.iter()) {
                        *ci -= wi * f;
                    }
                }
            }
        }
    }
    (d, e)
}

/// Singular values, descending.
pub(crate) fn singular_values(matrix: &CMatrix) -> Result<Vec<f64>> {
    let n = matrix.cols();
    let (d, e) = bidiagonalize(matrix);
    let mut off = Vec::with_capacity(2 * n);
    for k in 0..n {
        off.push(d[k]);
        if k + 1 < n {
            off.push(e[k]);
        }
    }
    let mut ev = tridiagonal_eigenvalues(&vec![0.0; 2 * n], &off)?;
    ev.sort_by(|a, b| b.total_cmp(a));
    ev.truncate(n);
    Ok(ev.into_iter().map(f64::abs).collect())
}
