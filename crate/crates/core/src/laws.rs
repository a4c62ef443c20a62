//! Limiting Poisson intensities and the laws of the k-th smallest gap.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::kernel::DensityFn;
use crate::region::{LengthSet, Region};
use crate::special::{factorial, gamma_p, ln_factorial};

const PI: f64 = std::f64::consts::PI;

/// Law of the k-th smallest rescaled gap, with density
/// `q / (k-1)! x^{qk-1} exp(-x^q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitLaw {
    pub q: u32,
    pub k: u32,
}

impl LimitLaw {
    pub fn new(q: u32, k: u32) -> Result<Self> {
        if q == 0 || k == 0 {
            return invalid(format!("limit law needs q >= 1 and k >= 1, got q={q}, k={k}"));
        }
        Ok(Self { q, k })
    }

    pub fn normalization(&self) -> f64 {
        self.q as f64 / factorial(self.k as u64 - 1)
    }

    pub fn density(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let q = self.q as f64;
        let e = q * self.k as f64 - 1.0;
        let ln = q.ln() - ln_factorial(self.k as u64 - 1) + e * x.ln() - x.powf(q);
        ln.exp()
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        kth_gap_cdf(self, x)
    }
}

/// `P(tau_k <= x) = P(k, x^q)`.
pub fn kth_gap_cdf(law: &LimitLaw, x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return invalid(format!("gap law evaluated at x={x}"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(gamma_p(law.k as f64, x.powf(law.q as f64)))
}

/// `(exp(-x_k^q) - exp(-y_k^q)) prod_{l<k} (y_l^q - x_l^q)` for
/// `0 <= x_1 < y_1 < ... < x_k < y_k`, given as `[(x_1, y_1), ...]`.
pub fn joint_box_probability(boxes: &[(f64, f64)], q: u32) -> Result<f64> {
    if boxes.is_empty() {
        return invalid("joint box probability needs at least one box");
    }
    let mut prev = f64::NEG_INFINITY;
    for &(x, y) in boxes {
        if !(x >= 0.0 && x > prev && y > x) || !y.is_finite() {
            return invalid(format!("box endpoints must interleave strictly, got {boxes:?}"));
        }
        prev = y;
    }
    let qf = q as f64;
    let (xk, yk) = boxes[boxes.len() - 1];
    let tail = (-xk.powf(qf)).exp() - (-yk.powf(qf)).exp();
    let prod: f64 = boxes[..boxes.len() - 1]
        .iter()
        .map(|&(x, y)| y.powf(qf) - x.powf(qf))
        .product();
    Ok(tail * prod)
}

/// Which limit an intensity refers to. Lengths in `A` are in units
/// of `n^gamma t` (no rescaling constant).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "ensemble", rename_all = "snake_case")]
pub enum IntensityQuery {
    /// `|I cap D(0,1)| / pi * int_A r^3 dr`.
    Ginibre { a: LengthSet, region: Region },
    /// `|I cap D(0,1)| / pi * int_A r dr`.
    IidDisk { a: LengthSet, region: Region },
    /// `pi^2 / 3 * int_A u^2 du * int_I g^4` with `g` Marchenko–Pastur.
    Wishart {
        a: LengthSet,
        interval: (f64, f64),
        beta: f64,
        eps0: f64,
    },
    /// `pi^2 / 3 * int_A u^2 du * int_I Psi^4`.
    Unitary {
        a: LengthSet,
        interval: (f64, f64),
        density: DensityFn,
        eps0: f64,
    },
}

pub fn poisson_intensity(query: &IntensityQuery) -> Result<f64> {
    match query {
        IntensityQuery::Ginibre { a, region } => {
            a.validate()?;
            Ok(disk_overlap_area(region)? / PI * a.power_integral(3))
        }
        IntensityQuery::IidDisk { a, region } => {
            a.validate()?;
            Ok(disk_overlap_area(region)? / PI * a.power_integral(1))
        }
        IntensityQuery::Wishart {
            a,
            interval,
            beta,
            eps0,
        } => {
            a.validate()?;
            let d = DensityFn::marchenko_pastur(*beta)?;
            bulk_intensity(a, *interval, &d, *eps0)
        }
        IntensityQuery::Unitary {
            a,
            interval,
            density,
            eps0,
        } => {
            a.validate()?;
            density.validate()?;
            bulk_intensity(a, *interval, density, *eps0)
        }
    }
}

fn bulk_intensity(a: &LengthSet, (lo, hi): (f64, f64), d: &DensityFn, eps0: f64) -> Result<f64> {
    let (s_lo, s_hi) = d.support();
    if !(eps0 >= 0.0) || !(lo <= hi) || lo < s_lo + eps0 || hi > s_hi - eps0 {
        return invalid(format!(
            "interval ({lo}, {hi}) is not inside the bulk [{}, {}]",
            s_lo + eps0,
            s_hi - eps0
        ));
    }
    Ok(PI * PI / 3.0 * a.power_integral(2) * d.fourth_power_integral(lo, hi))
}

/// `|region cap D(0,1)|`.
pub fn disk_overlap_area(region: &Region) -> Result<f64> {
    region.validate()?;
    Ok(match *region {
        Region::Plane => PI,
        Region::Interval { .. } => 0.0,
        Region::Rect {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        } => rect_disk_area(re_lo, re_hi, im_lo, im_hi),
        Region::Disk { center, radius } => lens_area(center.norm(), radius, 1.0),
    })
}

/// `int_0^x sqrt(1 - t^2) dt`.
fn half_chord_antiderivative(x: f64) -> f64 {
    let x = x.clamp(-1.0, 1.0);
    (x * (1.0 - x * x).sqrt() + x.asin()) / 2.0
}

/// Area of `{t in [x0, x1]} x {0 <= y <= h}` inside the unit disk, for `h >= 0`.
fn column_area(x0: f64, x1: f64, h: f64) -> f64 {
    if h <= 0.0 || x1 <= x0 {
        return 0.0;
    }
    let (x0, x1) = (x0.max(-1.0), x1.min(1.0));
    if x1 <= x0 {
        return 0.0;
    }
    if h >= 1.0 {
        return half_chord_antiderivative(x1) - half_chord_antiderivative(x0);
    }
    // sqrt(1 - t^2) >= h exactly when |t| <= w.
    let w = (1.0 - h * h).sqrt();
    let mut area = 0.0;
    let lo = x0.max(-w);
    let hi = x1.min(w);
    if hi > lo {
        area += h * (hi - lo);
    }
    for (a, b) in [(x0, x1.min(-w)), (x0.max(w), x1)] {
        if b > a {
            area += half_chord_antiderivative(b) - half_chord_antiderivative(a);
        }
    }
    area
}

fn rect_disk_area(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> f64 {
    // Signed split at y = 0; the disk is symmetric in y.
    let part = |y: f64| {
        if y >= 0.0 {
            column_area(re_lo, re_hi, y)
        } else {
            -column_area(re_lo, re_hi, -y)
        }
    };
    part(im_hi) - part(im_lo)
}

/// Intersection area of disks of radii `r1`, `r2` with centers `d` apart.
fn lens_area(d: f64, r1: f64, r2: f64) -> f64 {
    if r1 == 0.0 || r2 == 0.0 {
        return 0.0;
    }
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        let r = r1.min(r2);
        return PI * r * r;
    }
    let a1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0).acos();
    let a2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0).acos();
    let k = ((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2))
        .max(0.0)
        .sqrt();
    r1 * r1 * a1 + r2 * r2 * a2 - k / 2.0
}
