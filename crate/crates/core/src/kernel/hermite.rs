//! GUE kernel from normalized Hermite functions.
//!
//! With `V(x) = x^2 / 2` the weight `e^{-n x^2 / 2}` becomes `e^{-t^2}` at
//! `t = x sqrt(n/2)`, so `K_n(x, y) = sqrt(n/2) sum_{j<n} phi_j(t) phi_j(s)`.

use crate::error::{invalid, Result};

const RESCALE: f64 = 1e200;

/// Orthonormal Hermite functions `phi_0, ..., phi_jmax` at `t`.
pub fn hermite_functions(jmax: usize, t: f64) -> Vec<f64> {
    let mut log_scale = -0.25 * std::f64::consts::PI.ln() - 0.5 * t * t;
    let mut out = Vec::with_capacity(jmax + 1);
    let mut scales = Vec::with_capacity(jmax + 1);
    out.push(1.0);
    scales.push(log_scale);
    let (mut prev, mut cur) = (0.0, 1.0);
    for j in 0..jmax {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * t * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
        out.push(cur);
        scales.push(log_scale);
    }
    out.into_iter()
        .zip(scales)
        .map(|(v, ls)| {
            if v == 0.0 {
                0.0
            } else {
                v.signum() * (v.abs().ln() + ls).exp()
            }
        })
        .collect()
}

fn scale(n: usize) -> f64 {
    (n as f64 / 2.0).sqrt()
}

/// GUE kernel by Christoffel–Darboux, confluent form on the diagonal.
pub fn gue_kernel(x: f64, y: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    if !(x.is_finite() && y.is_finite()) {
        return invalid("kernel arguments must be finite");
    }
    let c = scale(n);
    let nf = n as f64;
    let (t, s) = (c * x, c * y);
    if (t - s).abs() < 1e-8 * t.abs().max(s.abs()).max(1.0) {
        let p = hermite_functions(n, 0.5 * (t + s));
        let prev2 = if n >= 2 { p[n - 2] } else { 0.0 };
        return Ok(c * (nf * p[n - 1] * p[n - 1] - (nf * (nf - 1.0)).sqrt() * prev2 * p[n]));
    }
    let pt = hermite_functions(n, t);
    let ps = hermite_functions(n, s);
    Ok(c * scale(n) * (pt[n] * ps[n - 1] - pt[n - 1] * ps[n]) / (t - s))
}

/// The same kernel as an explicit sum.
pub fn gue_kernel_direct(x: f64, y: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let c = scale(n);
    let pt = hermite_functions(n, c * x);
    let ps = hermite_functions(n, c * y);
    Ok(c * pt[..n].iter().zip(&ps[..n]).map(|(a, b)| a * b).sum::<f64>())
}
