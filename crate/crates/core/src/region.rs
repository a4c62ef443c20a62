//! Base-point regions `I` and length sets `A`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A subset of the plane (or of the real line) that base eigenvalues are
/// tested against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Region {
    Plane,
    /// Open real interval; only points with zero imaginary part belong.
    Interval {
        lo: f64,
        hi: f64,
    },
    /// Closed rectangle `[re_lo, re_hi] x [im_lo, im_hi]`.
    Rect {
        re_lo: f64,
        re_hi: f64,
        im_lo: f64,
        im_hi: f64,
    },
    /// Closed disk.
    Disk {
        center: Complex64,
        radius: f64,
    },
}

impl Region {
    pub fn disk(center: Complex64, radius: f64) -> Self {
        Self::Disk { center, radius }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self::Interval { lo, hi }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Plane => true,
            Self::Interval { lo, hi } => lo.is_finite() && hi.is_finite() && lo <= hi,
            Self::Rect {
                re_lo,
                re_hi,
                im_lo,
                im_hi,
            } => [re_lo, re_hi, im_lo, im_hi].iter().all(|v| v.is_finite()) && re_lo <= re_hi && im_lo <= im_hi,
            Self::Disk { center, radius } => center.re.is_finite() && center.im.is_finite() && radius >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            invalid(format!("malformed region {self:?}"))
        }
    }

    #[inline]
    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            Self::Plane => true,
            Self::Interval { lo, hi } => z.im == 0.0 && lo < z.re && z.re < hi,
            Self::Rect {
                re_lo,
                re_hi,
                im_lo,
                im_hi,
            } => re_lo <= z.re && z.re <= re_hi && im_lo <= z.im && z.im <= im_hi,
            Self::Disk { center, radius } => (z - center).norm() <= radius,
        }
    }

    /// Planar area; zero for intervals, infinite for the plane.
    pub fn area(&self) -> f64 {
        match *self {
            Self::Plane => f64::INFINITY,
            Self::Interval { .. } => 0.0,
            Self::Rect {
                re_lo,
                re_hi,
                im_lo,
                im_hi,
            } => (re_hi - re_lo) * (im_hi - im_lo),
            Self::Disk { radius, .. } => std::f64::consts::PI * radius * radius,
        }
    }
}

/// Finite union of intervals `(lo, hi]` of gap lengths.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LengthSet {
    pub intervals: Vec<(f64, f64)>,
}

impl LengthSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self {
            intervals: vec![(lo, hi)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for &(lo, hi) in &self.intervals {
            if !(lo >= 0.0 && lo <= hi && !hi.is_nan()) {
                return invalid(format!("malformed length interval ({lo}, {hi}]"));
            }
        }
        let mut sorted = self.intervals.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        if sorted.windows(2).any(|w| w[1].0 < w[0].1) {
            return invalid("length intervals overlap");
        }
        Ok(())
    }

    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo < t && t <= hi)
    }

    /// `sum over intervals of the integral of u^p`.
    pub fn power_integral(&self, p: i32) -> f64 {
        let q = (p + 1) as f64;
        self.intervals
            .iter()
            .map(|&(lo, hi)| (hi.powi(p + 1) - lo.powi(p + 1)) / q)
            .sum()
    }

    pub fn sup(&self) -> f64 {
        self.intervals.iter().map(|i| i.1).fold(0.0, f64::max)
    }
}
