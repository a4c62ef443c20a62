//! Ginibre kernel `S_n(z, w)` and the remainder `R_n` of the truncated
//! exponential series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::logcomplex::{KernelValue, LogComplex};
use crate::error::{invalid, Result};
use crate::special::{ln_gamma, ln_gamma_p, ln_gamma_q};

const RESCALE: f64 = 1e200;
const TOL: f64 = 1e-17;

/// `exp(-n(|z|^2 + |w|^2)/2) * sum_{l<n} (n z conj(w))^l / l!`.
pub fn ginibre_kernel_scaled(z: Complex64, w: Complex64, n: usize) -> Result<KernelValue> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let nf = n as f64;
    let x = z * w.conj() * nf;
    let weight = -nf * (z.norm_sqr() + w.norm_sqr()) / 2.0;
    if !(x.re.is_finite() && x.im.is_finite() && weight.is_finite()) {
        return invalid("n z conj(w) is not finite");
    }
    let ax = x.norm();
    let mut log_scale = weight;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for l in 1..n {
        term *= x / l as f64;
        sum += term;
        let tn = term.norm();
        if tn > RESCALE {
            term /= RESCALE;
            sum /= RESCALE;
            log_scale += RESCALE.ln();
        } else {
            let ratio = ax / (l + 1) as f64;
            if ratio < 0.5 && tn < TOL * sum.norm() {
                break;
            }
        }
    }
    let log = LogComplex::from_complex(sum) * LogComplex::new(log_scale, 0.0);
    Ok(KernelValue::from_log(log))
}

fn neg(v: LogComplex) -> LogComplex {
    LogComplex::new(v.log_magnitude, v.phase + std::f64::consts::PI)
}

fn is_positive_real(z: Complex64) -> bool {
    z.im == 0.0 && z.re > 0.0
}

/// `R_n(z)` from the tail `exp(-nz) sum_{l>=n} (nz)^l / l!`, for |z| < 1.
fn tail_log(z: Complex64, n: usize) -> LogComplex {
    let nf = n as f64;
    let nz = z * nf;
    let log_first = Complex64::new(nf * nz.norm().ln(), nf * z.arg()) - ln_gamma(nf + 1.0) - nz;
    let mut r = Complex64::new(1.0, 0.0);
    let mut s = r;
    let cap = n + 1000 + 60 * (n as f64).sqrt() as usize;
    for j in n + 1..cap {
        r *= nz / j as f64;
        s += r;
        if r.norm() < TOL * s.norm() {
            break;
        }
    }
    LogComplex::exp(log_first) * LogComplex::from_complex(s)
}

/// `1 - R_n(z) = exp(-nz) K_n(z)` summed backwards from `l = n - 1`, for |z| >= 1.
fn head_log(z: Complex64, n: usize) -> LogComplex {
    let nf = n as f64;
    let nz = z * nf;
    let log_last = Complex64::new((nf - 1.0) * nz.norm().ln(), (nf - 1.0) * z.arg()) - ln_gamma(nf) - nz;
    let mut r = Complex64::new(1.0, 0.0);
    let mut s = r;
    for l in (1..n).rev() {
        r *= l as f64 / nz;
        s += r;
        if r.norm() < TOL * s.norm() {
            break;
        }
    }
    LogComplex::exp(log_last) * LogComplex::from_complex(s)
}

/// `R_n(z)` in log form.
pub fn remainder_log(z: Complex64, n: usize) -> LogComplex {
    let nf = n as f64;
    if z.norm() == 0.0 {
        return LogComplex::ZERO;
    }
    if is_positive_real(z) {
        return LogComplex::new(ln_gamma_p(nf, nf * z.re), 0.0);
    }
    if z.norm() < 1.0 {
        tail_log(z, n)
    } else {
        LogComplex::ONE + neg(head_log(z, n))
    }
}

/// `1 - R_n(z) = exp(-nz) K_n(z)` in log form.
pub fn complement_log(z: Complex64, n: usize) -> LogComplex {
    let nf = n as f64;
    if z.norm() == 0.0 {
        return LogComplex::ONE;
    }
    if is_positive_real(z) {
        return LogComplex::new(ln_gamma_q(nf, nf * z.re), 0.0);
    }
    if z.norm() < 1.0 {
        LogComplex::ONE + neg(tail_log(z, n))
    } else {
        head_log(z, n)
    }
}

/// `R_n(z) = 1 - exp(-nz) K_n(z)`.
pub fn ginibre_remainder(z: Complex64, n: usize) -> Result<Complex64> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return invalid("z is not finite");
    }
    remainder_log(z, n)
        .to_complex()
        .ok_or_else(|| crate::GapError::NumericalFailure(format!("R_n({z}) overflows for n={n}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// |z| <= 0.02: `|R| <= sqrt(n / 2 pi) 0.06^n`.
    Small,
    /// 0.01 < |z| <= 1: `|R| <= C sqrt(n) (|z| e^{1-|z|})^n`.
    Inner,
    /// |z| >= 1: `|1 - R| <= C (|z| e^{-(|z|-1)})^n`.
    Outer,
}

impl Regime {
    pub fn of(z: Complex64) -> Vec<Regime> {
        let r = z.norm();
        let mut out = Vec::new();
        if r <= 0.02 {
            out.push(Self::Small);
        }
        if r > 0.01 && r <= 1.0 {
            out.push(Self::Inner);
        }
        if r >= 1.0 {
            out.push(Self::Outer);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RegimeCheck {
    pub regime: Regime,
    /// ln of the bound without its constant (the full bound for `Small`).
    pub ln_envelope: f64,
    /// ln of the bounded quantity.
    pub ln_actual: f64,
    /// `actual / envelope`.
    pub ratio: f64,
    /// Only meaningful for `Small`; the other regimes are judged against a
    /// fitted constant.
    pub satisfied: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegimeReport {
    pub z: Complex64,
    pub n: usize,
    pub checks: Vec<RegimeCheck>,
}

/// Evaluates every remainder bound whose regime contains `z`.
pub fn check_remainder_regimes(z: Complex64, n: usize) -> RegimeReport {
    let nf = n as f64;
    let r = z.norm();
    let checks = Regime::of(z)
        .into_iter()
        .map(|regime| {
            let (ln_envelope, ln_actual) = match regime {
                Regime::Small => (
                    0.5 * (nf / std::f64::consts::TAU).ln() + nf * 0.06f64.ln(),
                    remainder_log(z, n).log_magnitude,
                ),
                Regime::Inner => (
                    0.5 * nf.ln() + nf * (r.ln() + 1.0 - r),
                    remainder_log(z, n).log_magnitude,
                ),
                Regime::Outer => (nf * (r.ln() - (r - 1.0)), complement_log(z, n).log_magnitude),
            };
            let ratio = (ln_actual - ln_envelope).exp();
            RegimeCheck {
                regime,
                ln_envelope,
                ln_actual,
                ratio,
                satisfied: regime != Regime::Small || ln_actual <= ln_envelope,
            }
        })
        .collect();
    RegimeReport { z, n, checks }
}

/// The deterministic grid of test points: magnitudes
/// {0.005, 0.015, 0.1, 0.5, 0.9, 1.0, 1.1, 1.5, 3} with imaginary parts
/// `c n^{-3/4} |z|` for c in {0, 0.5, 1}.
pub fn remainder_grid(n: usize) -> Vec<Complex64> {
    const MAGNITUDES: [f64; 9] = [0.005, 0.015, 0.1, 0.5, 0.9, 1.0, 1.1, 1.5, 3.0];
    let shrink = (n as f64).powf(-0.75);
    let mut out = Vec::new();
    for &r in &MAGNITUDES {
        for c in [0.0, 0.5, 1.0] {
            let im = c * shrink * r;
            out.push(Complex64::new((r * r - im * im).sqrt(), im));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RemainderSummary {
    pub ns: Vec<usize>,
    /// Whether every small-|z| bound held exactly.
    pub small_regime_holds: bool,
    /// Largest `actual / envelope` over the grid, per n, for the inner regime.
    pub inner_ratio: Vec<f64>,
    /// Same for the outer regime.
    pub outer_ratio: Vec<f64>,
    /// Constants fitted at the first n.
    pub inner_constant: f64,
    pub outer_constant: f64,
    /// Whether the frozen constants bound every later n.
    pub constants_hold: bool,
    /// Whether the per-n ratios themselves never increase with n.
    pub ratios_non_increasing: bool,
}

/// Runs the regime checks on the grid for each n, fits the inner/outer
/// constants at the first n and checks them at the rest.
pub fn verify_remainder_regimes(ns: &[usize]) -> RemainderSummary {
    let mut small_ok = true;
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    for &n in ns {
        let (mut mi, mut mo) = (0.0f64, 0.0f64);
        for z in remainder_grid(n) {
            for c in check_remainder_regimes(z, n).checks {
                match c.regime {
                    Regime::Small => small_ok &= c.satisfied,
                    Regime::Inner => mi = mi.max(c.ratio),
                    Regime::Outer => mo = mo.max(c.ratio),
                }
            }
        }
        inner.push(mi);
        outer.push(mo);
    }
    let ci = inner.first().copied().unwrap_or(0.0);
    let co = outer.first().copied().unwrap_or(0.0);
    let hold = inner.iter().all(|&v| v <= ci) && outer.iter().all(|&v| v <= co);
    RemainderSummary {
        ns: ns.to_vec(),
        small_regime_holds: small_ok,
        inner_constant: ci,
        outer_constant: co,
        constants_hold: hold,
        ratios_non_increasing: inner.windows(2).all(|w| w[1] <= w[0]) && outer.windows(2).all(|w| w[1] <= w[0]),
        inner_ratio: inner,
        outer_ratio: outer,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_term_kernel() {
        let (z, w) = (c(0.3, -0.7), c(-1.2, 0.4));
        let s = ginibre_kernel_scaled(z, w, 1).unwrap().get();
        let want = (-(z.norm_sqr() + w.norm_sqr()) / 2.0).exp();
        assert!((s - c(want, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_is_poisson_cdf() {
        let s = ginibre_kernel_scaled(c(1.0, 0.0), c(1.0, 0.0), 10).unwrap().get();
        let mut want = 0.0;
        let mut t = (-10.0f64).exp();
        for l in 0..10 {
            want += t;
            t *= 10.0 / (l + 1) as f64;
        }
        assert!((s.re - want).abs() < 1e-14 && s.im.abs() < 1e-15);
        assert!((s.re - 0.457_929_714_6).abs() < 1e-9);
    }

    #[test]
    fn large_n_does_not_overflow() {
        let s = ginibre_kernel_scaled(c(0.9, 0.1), c(0.85, 0.12), 2000).unwrap();
        let v = s.get();
        assert!(v.norm() <= 1.0 && v.norm() > 0.0);
    }

    #[test]
    fn remainder_special_points() {
        assert_eq!(ginibre_remainder(c(0.0, 0.0), 10).unwrap(), c(0.0, 0.0));
        let r = ginibre_remainder(c(0.02, 0.0), 100).unwrap();
        let bound = (100.0 / std::f64::consts::TAU).sqrt() * 0.06f64.powi(100);
        assert!(r.norm() <= bound);
        // |z| >= 1: 1 - R small when |z| > 1.
        let comp = complement_log(c(1.5, 0.0), 200).log_magnitude;
        assert!(comp < 200.0 * (1.5f64.ln() - 0.5));
    }

    #[test]
    fn remainder_branches_agree_with_direct_sum() {
        // Direct evaluation at small n where no precision is lost.
        let n = 12;
        for z in [
            c(0.3, 0.2),
            c(-0.4, 0.5),
            c(1.2, -0.3),
            c(-1.1, 0.2),
            c(0.7, 0.0),
            c(2.0, 0.0),
        ] {
            let nz = z * n as f64;
            let mut k = c(0.0, 0.0);
            let mut t = c(1.0, 0.0);
            for l in 0..n {
                k += t;
                t *= nz / (l + 1) as f64;
            }
            let direct = c(1.0, 0.0) - (-nz).exp() * k;
            let got = ginibre_remainder(z, n).unwrap();
            assert!(
                (got - direct).norm() < 1e-12 * (1.0 + direct.norm()),
                "z={z}: {got} vs {direct}"
            );
            let comp = complement_log(z, n).to_complex().unwrap();
            assert!((comp - (c(1.0, 0.0) - direct)).norm() < 1e-12 * (1.0 + comp.norm()));
        }
    }
}
