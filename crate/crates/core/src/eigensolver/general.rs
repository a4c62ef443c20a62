//! Complex Hessenberg reduction followed by single-shift implicit QR.

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{GapError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Householder vector for `x`, returning `(v, tau, alpha)` with
/// `(I - tau v v*) x = alpha e1`. `None` when `x` is already a multiple of e1.
pub(crate) fn householder(x: &[Complex64]) -> Option<(Vec<Complex64>, f64, Complex64)> {
    let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    if tail == 0.0 {
        return None;
    }
    let norm = (x[0].norm_sqr() + tail).sqrt();
    let phase = if x[0] == ZERO {
        Complex64::new(1.0, 0.0)
    } else {
        x[0] / x[0].norm()
    };
    let alpha = -phase * norm;
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    Some((v, 2.0 / vnorm2, alpha))
}

/// Reduces `a` (column-major, n×n) to upper Hessenberg form in place.
fn hessenberg(a: &mut [Complex64], n: usize) {
    let mut w = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let col = &a[k * n + k + 1..(k + 1) * n];
        let Some((v, tau, alpha)) = householder(col) else {
            continue;
        };
        let len = v.len();
        // Left: rows k+1.., columns k+1.. (column k is set explicitly).
        for j in k + 1..n {
            let c = &mut a[j * n + k + 1..j * n + k + 1 + len];
            let s: Complex64 = v.iter().zip(c.iter()).map(|(vi, ci)| vi.conj() * ci).sum::<Complex64>() * tau;
            for (ci, vi) in c.iter_mut().zip(&v) {
                *ci -= vi * s;
            }
        }
        a[k * n + k + 1] = alpha;
        for z in &mut a[k * n + k + 2..(k + 1) * n] {
            *z = ZERO;
        }
        // Right: all rows, columns k+1..
        w.iter_mut().for_each(|z| *z = ZERO);
        for (j, vj) in v.iter().enumerate() {
            let c = &a[(k + 1 + j) * n..(k + 2 + j) * n];
            for (wi, ci) in w.iter_mut().zip(c) {
                *wi += ci * vj;
            }
        }
        for (j, vj) in v.iter().enumerate() {
            let f = vj.conj() * tau;
            let c = &mut a[(k + 1 + j) * n..(k + 2 + j) * n];
            for (ci, wi) in c.iter_mut().zip(&w) {
                *ci -= wi * f;
            }
        }
    }
}

/// Rotation with `[c s; -conj(s) c] [a; b] = [r; 0]`, c real.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO, a);
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn, Complex64::new(bn, 0.0));
    }
    let r = an.hypot(bn);
    let phase = a / an;
    let c = an / r;
    let s = phase * b.conj() / r;
    (c, s, phase * r)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let p = (a - d) * 0.5;
    let bc = b * c;
    let mut disc = (p * p + bc).sqrt();
    if (p + disc).norm() < (p - disc).norm() {
        disc = -disc;
    }
    let den = p + disc;
    if den == ZERO {
        d
    } else {
        d - bc / den
    }
}

pub(crate) struct GeneralOutcome {
    pub values: Vec<Complex64>,
    /// Frobenius norm of all subdiagonal entries dropped at deflation.
    pub dropped: f64,
}

/// Eigenvalues of a square complex matrix.
pub(crate) fn eigenvalues(matrix: &CMatrix) -> Result<GeneralOutcome> {
    let n = matrix.rows();
    let anorm = matrix.frobenius_norm();
    let mut h = matrix.as_slice().to_vec();
    hessenberg(&mut h, n);
    let idx = |i: usize, j: usize| i + j * n;

    let mut values = vec![ZERO; n];
    let mut done = vec![false; n];
    let mut dropped2 = 0.0;
    let cap = 30 * n.max(1);
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    let mut ihi = n;

    while ihi > 0 {
        let hi = ihi - 1;
        // Locate the start of the unreduced block ending at `hi`.
        let mut l = 0;
        for i in (1..=hi).rev() {
            let sub = h[idx(i, i - 1)].norm();
            let mut scale = h[idx(i - 1, i - 1)].norm() + h[idx(i, i)].norm();
            if scale == 0.0 {
                scale = anorm;
            }
            if sub <= f64::EPSILON * scale {
                dropped2 += sub * sub;
                h[idx(i, i - 1)] = ZERO;
                l = i;
                break;
            }
        }
        if l == hi {
            values[hi] = h[idx(hi, hi)];
            done[hi] = true;
            ihi -= 1;
            since_deflation = 0;
            continue;
        }
        if sweeps >= cap {
            let partial = (0..n).filter(|&i| done[i]).map(|i| values[i]).collect();
            return Err(GapError::NoConvergence {
                iterations: sweeps,
                unconverged: ihi,
                partial,
            });
        }
        sweeps += 1;
        since_deflation += 1;

        let mu = if since_deflation.is_multiple_of(10) {
            h[idx(hi, hi)] + h[idx(hi, hi - 1)].norm() * 1.5
        } else {
            wilkinson_shift(
                h[idx(hi - 1, hi - 1)],
                h[idx(hi - 1, hi)],
                h[idx(hi, hi - 1)],
                h[idx(hi, hi)],
            )
        };

        let mut x = h[idx(l, l)] - mu;
        let mut y = h[idx(l + 1, l)];
        for k in l..hi {
            if k > l {
                x = h[idx(k, k - 1)];
                y = h[idx(k + 1, k - 1)];
            }
            let (c, s, r) = givens(x, y);
            if k > l {
                h[idx(k, k - 1)] = r;
                h[idx(k + 1, k - 1)] = ZERO;
            }
            for j in k..=hi {
                let a = h[idx(k, j)];
                let b = h[idx(k + 1, j)];
                h[idx(k, j)] = a * c + s * b;
                h[idx(k + 1, j)] = b * c - s.conj() * a;
            }
            let sc = s.conj();
            let last = (k + 2).min(hi);
            for i in l..=last {
                let p = h[idx(i, k)];
                let q = h[idx(i, k + 1)];
                h[idx(i, k)] = p * c + q * sc;
                h[idx(i, k + 1)] = q * c - s * p;
            }
        }
    }

    Ok(GeneralOutcome {
        values,
        dropped: dropped2.sqrt(),
    })
}
