//! Laguerre wave functions, the Wishart Christoffel–Darboux kernel and its
//! Plancherel–Rotach bulk approximation.

use serde::{Deserialize, Serialize};

use super::density::MarchenkoPastur;
use crate::error::{invalid, Result};
use crate::special::ln_gamma;

const RESCALE: f64 = 1e200;

/// `psi_0, ..., psi_lmax` at `x` for Laguerre parameter `alpha = m - n`.
pub fn laguerre_waves(lmax: usize, alpha: usize, x: f64) -> Result<Vec<f64>> {
    if !(x > 0.0) || !x.is_finite() {
        return invalid(format!("Laguerre wave functions need x > 0, got {x}"));
    }
    let a = alpha as f64;
    let mut log_scale = 0.5 * a * x.ln() - 0.5 * x - 0.5 * ln_gamma(a + 1.0);
    // Scaled values; true value is `s[l] * exp(log_scale_at[l])`.
    let mut s = Vec::with_capacity(lmax + 1);
    let mut scale_at = Vec::with_capacity(lmax + 1);
    s.push(1.0);
    scale_at.push(log_scale);
    let mut prev = 0.0;
    let mut cur = 1.0;
    for l in 0..lmax {
        let lf = l as f64;
        let next =
            ((2.0 * lf + 1.0 + a - x) * cur - (lf * (lf + a)).sqrt() * prev) / ((lf + 1.0) * (lf + 1.0 + a)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
        }
        s.push(cur);
        scale_at.push(log_scale);
    }
    Ok(s.into_iter()
        .zip(scale_at)
        .map(|(v, ls)| {
            if v == 0.0 {
                0.0
            } else {
                v.signum() * (v.abs().ln() + ls).exp()
            }
        })
        .collect())
}

/// `psi_l(x) = sqrt(l!/(l+m-n)!) L_l^{(m-n)}(x) x^{(m-n)/2} e^{-x/2}`.
pub fn laguerre_wave(l: usize, m: usize, n: usize, x: f64) -> Result<f64> {
    if m < n {
        return invalid(format!("need m >= n, got m={m}, n={n}"));
    }
    Ok(laguerre_waves(l, m - n, x)?[l])
}

/// `psi_l'(x)` from `psi_l` and `psi_{l-1}`.
pub fn laguerre_wave_derivative(l: usize, alpha: usize, x: f64, psi_l: f64, psi_lm1: f64) -> f64 {
    let (lf, a) = (l as f64, alpha as f64);
    -0.5 * psi_l + (a + 2.0 * lf) / (2.0 * x) * psi_l - (lf * (lf + a)).sqrt() / x * psi_lm1
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if n == 0 || m < n {
        return invalid(format!("Wishart kernel needs m >= n >= 1, got m={m}, n={n}"));
    }
    Ok(())
}

/// Wishart kernel
/// `sqrt(mn) (psi_{n-1}(mx) psi_n(my) - psi_n(mx) psi_{n-1}(my)) / (x - y)`,
/// switching to the confluent derivative form when `x` and `y` nearly agree.
pub fn wishart_kernel(x: f64, y: f64, m: usize, n: usize) -> Result<f64> {
    check_dims(m, n)?;
    if !(x > 0.0 && y > 0.0) {
        return invalid(format!("Wishart kernel needs x, y > 0, got ({x}, {y})"));
    }
    let (mf, nf) = (m as f64, n as f64);
    let alpha = m - n;
    let root = (mf * nf).sqrt();
    if (x - y).abs() < 1e-8 * x.max(y).max(1.0) {
        let t = mf * 0.5 * (x + y);
        let p = laguerre_waves(n, alpha, t)?;
        let d_nm1 = laguerre_wave_derivative(n - 1, alpha, t, p[n - 1], if n >= 2 { p[n - 2] } else { 0.0 });
        let d_n = laguerre_wave_derivative(n, alpha, t, p[n], p[n - 1]);
        return Ok(mf * root * (d_nm1 * p[n] - d_n * p[n - 1]));
    }
    let px = laguerre_waves(n, alpha, mf * x)?;
    let py = laguerre_waves(n, alpha, mf * y)?;
    Ok(root * (px[n - 1] * py[n] - px[n] * py[n - 1]) / (x - y))
}

/// `m sum_{j<n} psi_j(mx) psi_j(my)`, the same kernel summed term by term.
pub fn wishart_kernel_direct(x: f64, y: f64, m: usize, n: usize) -> Result<f64> {
    check_dims(m, n)?;
    let mf = m as f64;
    let px = laguerre_waves(n, m - n, mf * x)?;
    let py = laguerre_waves(n, m - n, mf * y)?;
    Ok(mf * px[..n].iter().zip(&py[..n]).map(|(a, b)| a * b).sum::<f64>())
}

/// Bulk angles at `x` for aspect ratio `beta`:
/// `cos(theta0) = (beta - 1 - beta x) / (2 sqrt(beta x))` and
/// `sin(theta1) = sin(theta0) / sqrt(beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleParams {
    pub theta0: f64,
    pub theta1: f64,
}

impl AngleParams {
    pub fn new(x: f64, beta: f64) -> Result<Self> {
        let mp = MarchenkoPastur::new(beta)?;
        let (a, b) = mp.support();
        if !(x > a && x < b) {
            return invalid(format!("x={x} is outside the open support ({a}, {b})"));
        }
        let cos0 = (beta - 1.0 - beta * x) / (2.0 * (beta * x).sqrt());
        let theta0 = cos0.clamp(-1.0, 1.0).acos();
        let theta1 = (theta0.sin() / beta.sqrt()).clamp(-1.0, 1.0).asin();
        Ok(Self { theta0, theta1 })
    }

    /// Residuals of the two defining relations.
    pub fn residuals(&self, x: f64, beta: f64) -> (f64, f64) {
        let cos0 = (beta - 1.0 - beta * x) / (2.0 * (beta * x).sqrt());
        (
            (self.theta0.cos() - cos0).abs(),
            (self.theta1.sin() - self.theta0.sin() / beta.sqrt()).abs(),
        )
    }

    /// Phase `M_+` (`sign = 1`) or `M_-` (`sign = -1`).
    pub fn phase(&self, n: usize, beta: f64, sign: f64) -> f64 {
        let nf = n as f64;
        let (t0, t1) = (self.theta0, self.theta1);
        (nf + 0.5 * sign) * t0 - 0.5 * nf * (2.0 * t0).sin() + 0.5 * nf * beta * (2.0 * t1).sin()
            - (nf * beta + 0.5 * sign) * t1
            + std::f64::consts::FRAC_PI_4
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticKernel {
    pub approximation: f64,
    pub exact: f64,
    pub relative_error: f64,
}

/// Plancherel–Rotach approximation of the Wishart kernel for `x != y` in
/// the bulk `(a + eps, b - eps)`, reported next to the exact value.
pub fn wishart_kernel_asymptotic(x: f64, y: f64, m: usize, n: usize, eps: f64) -> Result<AsymptoticKernel> {
    check_dims(m, n)?;
    let beta = m as f64 / n as f64;
    let (a, b) = MarchenkoPastur::new(beta)?.support();
    for v in [x, y] {
        if !(v > a + eps && v < b - eps) {
            return invalid(format!("{v} is outside the bulk ({}, {})", a + eps, b - eps));
        }
    }
    if x == y {
        return invalid("the asymptotic form needs x != y");
    }
    let th = AngleParams::new(x, beta)?;
    let ph = AngleParams::new(y, beta)?;
    let num = th.phase(n, beta, -1.0).sin() * ph.phase(n, beta, 1.0).sin()
        - th.phase(n, beta, 1.0).sin() * ph.phase(n, beta, -1.0).sin();
    let den = (x - y) * (x * y).powf(0.25) * std::f64::consts::PI * (th.theta0.sin() * ph.theta0.sin()).sqrt();
    let approximation = num / den;
    let exact = wishart_kernel(x, y, m, n)?;
    Ok(AsymptoticKernel {
        approximation,
        exact,
        relative_error: ((approximation - exact) / exact).abs(),
    })
}
