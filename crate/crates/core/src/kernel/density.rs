//! Limiting spectral densities and the sine kernel.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quadrature::GaussLegendre;

/// Marchenko–Pastur density for aspect ratio `beta = m/n >= 1`:
/// `g(x) = beta / (2 pi) * sqrt((b - x)(x - a)) / x` on
/// `[(1 - beta^{-1/2})^2, (1 + beta^{-1/2})^2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarchenkoPastur {
    pub beta: f64,
}

impl MarchenkoPastur {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta >= 1.0) || !beta.is_finite() {
            return invalid(format!("Marchenko–Pastur needs beta >= 1, got {beta}"));
        }
        Ok(Self { beta })
    }

    pub fn support(&self) -> (f64, f64) {
        let r = self.beta.powf(-0.5);
        ((1.0 - r).powi(2), (1.0 + r).powi(2))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        if !(x > a && x < b) {
            return 0.0;
        }
        self.beta / (2.0 * std::f64::consts::PI) * ((b - x) * (x - a)).sqrt() / x
    }
}

/// Density on `[lo, hi]` given by values on a uniform grid, interpolated
/// linearly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tabulated {
    pub support: (f64, f64),
    pub values: Vec<f64>,
}

impl Tabulated {
    pub fn new(support: (f64, f64), values: Vec<f64>) -> Result<Self> {
        let t = Self { support, values };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.support;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return invalid("tabulated density needs a finite support lo < hi");
        }
        if self.values.len() < 2 {
            return invalid("tabulated density needs at least two values");
        }
        if self.values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return invalid("tabulated density values must be finite and nonnegative");
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support;
        if !(x >= lo && x <= hi) {
            return 0.0;
        }
        let k = self.values.len() - 1;
        let pos = (x - lo) / (hi - lo) * k as f64;
        let i = (pos.floor() as usize).min(k - 1);
        let f = pos - i as f64;
        self.values[i] * (1.0 - f) + self.values[i + 1] * f
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityFn {
    MarchenkoPastur {
        beta: f64,
    },
    /// `2 / (pi R^2) sqrt(R^2 - x^2)`; the GUE here has `R = 2`.
    Semicircle {
        radius: f64,
    },
    /// Equilibrium density of an even polynomial potential supported on a
    /// single interval `[-radius, radius]`:
    /// `h(x) sqrt(radius^2 - x^2) / (2 pi)`, with `h` the polynomial part of
    /// `V'(x) / sqrt(x^2 - radius^2)`.
    OneCut {
        coeffs: Vec<f64>,
        radius: f64,
    },
    Tabulated(Tabulated),
}

/// Coefficients of `h` (ascending powers) for `V = sum coeffs[j] x^j`.
fn one_cut_h(coeffs: &[f64], radius: f64) -> Vec<f64> {
    let deg = coeffs.len();
    let mut h = vec![0.0; deg.saturating_sub(1).max(1)];
    let b2 = radius * radius / 4.0;
    for (j, &c) in coeffs.iter().enumerate().skip(1) {
        // V' term j c x^{j-1} times x^{-1} sum_k binom(2k, k) (b/2)^{2k} x^{-2k}.
        let mut a = 1.0;
        let mut k = 0usize;
        while j >= 2 + 2 * k {
            h[j - 2 - 2 * k] += j as f64 * c * a;
            k += 1;
            a *= (2 * k * (2 * k - 1)) as f64 / (k * k) as f64 * b2;
        }
    }
    h
}

/// `int_{-b}^{b} x^{2p} sqrt(b^2 - x^2) dx`.
fn semicircle_moment(p: usize, b: f64) -> f64 {
    let mut c = std::f64::consts::PI / 2.0;
    for i in 1..=p {
        c *= (2 * i - 1) as f64 / (2 * (i + 1)) as f64;
    }
    c * b.powi(2 * p as i32 + 2)
}

fn one_cut_mass(coeffs: &[f64], radius: f64) -> f64 {
    one_cut_h(coeffs, radius)
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 2 == 0)
        .map(|(i, &c)| c * semicircle_moment(i / 2, radius))
        .sum::<f64>()
        / (2.0 * std::f64::consts::PI)
}

impl DensityFn {
    pub fn marchenko_pastur(beta: f64) -> Result<Self> {
        MarchenkoPastur::new(beta)?;
        Ok(Self::MarchenkoPastur { beta })
    }

    /// Semicircle of radius 2, `sqrt(4 - x^2) / (2 pi)`.
    pub fn semicircle() -> Self {
        Self::Semicircle { radius: 2.0 }
    }

    /// Equilibrium density of `V(x) = c x^2`: semicircle of radius `sqrt(2/c)`.
    pub fn quadratic_equilibrium(c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return invalid("quadratic potential needs a positive coefficient");
        }
        Ok(Self::Semicircle {
            radius: (2.0 / c).sqrt(),
        })
    }

    /// One-cut equilibrium density of the even potential `V = sum coeffs[j] x^j`.
    /// Fails when the density would turn negative (the support splits).
    pub fn one_cut_equilibrium(coeffs: &[f64]) -> Result<Self> {
        let deg = coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0);
        if deg < 2 || deg % 2 == 1 || coeffs[deg] <= 0.0 || coeffs.iter().skip(1).step_by(2).any(|&c| c != 0.0) {
            return invalid("one-cut equilibrium needs an even potential with positive leading coefficient");
        }
        let coeffs = &coeffs[..=deg];
        let (mut lo, mut hi) = (0.0, 1.0);
        while one_cut_mass(coeffs, hi) < 1.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return invalid("cannot normalize the equilibrium density");
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if one_cut_mass(coeffs, mid) < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let d = Self::OneCut {
            coeffs: coeffs.to_vec(),
            radius: 0.5 * (lo + hi),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::OneCut { coeffs, radius } => {
                if !(*radius > 0.0) || !radius.is_finite() {
                    return invalid("one-cut radius must be positive");
                }
                let h = one_cut_h(coeffs, *radius);
                let neg = (0..=200).any(|i| {
                    let x = radius * i as f64 / 200.0;
                    h.iter().rev().fold(0.0, |acc, &c| acc * x + c) < 0.0
                });
                if neg {
                    return invalid("potential has no one-cut equilibrium; give a tabulated density");
                }
                if (one_cut_mass(coeffs, *radius) - 1.0).abs() > 1e-9 {
                    return invalid("one-cut radius does not normalize the density");
                }
                Ok(())
            }
            Self::MarchenkoPastur { beta } => MarchenkoPastur::new(*beta).map(|_| ()),
            Self::Semicircle { radius } if *radius > 0.0 && radius.is_finite() => Ok(()),
            Self::Semicircle { radius } => invalid(format!("semicircle radius must be positive, got {radius}")),
            Self::Tabulated(t) => t.validate(),
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::MarchenkoPastur { beta } => MarchenkoPastur { beta: *beta }.support(),
            Self::Semicircle { radius } | Self::OneCut { radius, .. } => (-radius, *radius),
            Self::Tabulated(t) => t.support,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::MarchenkoPastur { beta } => MarchenkoPastur { beta: *beta }.eval(x),
            Self::Semicircle { radius } => {
                let r2 = radius * radius;
                if x.abs() >= *radius {
                    0.0
                } else {
                    2.0 / (std::f64::consts::PI * r2) * (r2 - x * x).sqrt()
                }
            }
            Self::OneCut { coeffs, radius } => {
                if x.abs() >= *radius {
                    return 0.0;
                }
                let h = one_cut_h(coeffs, *radius);
                let hx = h.iter().rev().fold(0.0, |acc, &c| acc * x + c);
                (hx * (radius * radius - x * x).sqrt() / (2.0 * std::f64::consts::PI)).max(0.0)
            }
            Self::Tabulated(t) => t.eval(x),
        }
    }

    /// `int_lo^hi f(density(x)) dx` over the part of `[lo, hi]` inside the
    /// support.
    pub fn integrate<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        let (a, b) = self.support();
        let (lo, hi) = (lo.max(a), hi.min(b));
        if lo >= hi {
            return 0.0;
        }
        let gl = GaussLegendre::new(64);
        match self {
            Self::Tabulated(_) => gl.integrate_panels(lo, hi, 64, |x| f(self.eval(x))),
            // Square-root endpoints: the cosine map absorbs them.
            _ => gl.integrate_cosine_map(lo, hi, |x| f(self.eval(x))),
        }
    }

    pub fn total_mass(&self) -> f64 {
        let (a, b) = self.support();
        self.integrate(a, b, |d| d)
    }

    /// `int_I density^4`.
    pub fn fourth_power_integral(&self, lo: f64, hi: f64) -> f64 {
        self.integrate(lo, hi, |d| d.powi(4))
    }
}

/// `spectral_density(kind, x)`; zero off the support.
pub fn spectral_density(kind: &DensityFn, x: f64) -> Result<f64> {
    kind.validate()?;
    Ok(kind.eval(x))
}

/// `sin(pi s) / (pi s)`, with value 1 at 0.
pub fn sine_kernel(s: f64) -> f64 {
    if s.abs() < 1e-4 {
        let p = std::f64::consts::PI * s;
        let p2 = p * p;
        1.0 - p2 / 6.0 + p2 * p2 / 120.0
    } else {
        let p = std::f64::consts::PI * s;
        p.sin() / p
    }
}
