use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `exp(log_magnitude) * exp(i phase)`. Zero is `log_magnitude = -inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_magnitude: f64,
    pub phase: f64,
}

/// Largest log-magnitude that materializes without overflow.
pub const MATERIALIZE_LIMIT: f64 = 709.0;

impl LogComplex {
    pub const ZERO: Self = Self {
        log_magnitude: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub const ONE: Self = Self {
        log_magnitude: 0.0,
        phase: 0.0,
    };

    pub fn new(log_magnitude: f64, phase: f64) -> Self {
        Self { log_magnitude, phase }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        Self {
            log_magnitude: z.norm().ln(),
            phase: z.arg(),
        }
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    /// `exp(w)` for complex `w`.
    pub fn exp(w: Complex64) -> Self {
        Self {
            log_magnitude: w.re,
            phase: w.im,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    pub fn norm(&self) -> f64 {
        self.log_magnitude.exp()
    }

    pub fn conj(self) -> Self {
        Self {
            phase: -self.phase,
            ..self
        }
    }

    /// Plain complex value, or `None` past the overflow threshold.
    pub fn to_complex(self) -> Option<Complex64> {
        if self.is_zero() {
            return Some(Complex64::new(0.0, 0.0));
        }
        (self.log_magnitude < MATERIALIZE_LIMIT).then(|| Complex64::from_polar(self.log_magnitude.exp(), self.phase))
    }
}

fn wrap(phase: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let p = phase.rem_euclid(TAU);
    if p > PI {
        p - TAU
    } else {
        p
    }
}

/// Kernel entry in log form, materialized when it fits in a double.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub log: LogComplex,
    pub value: Option<Complex64>,
}

impl KernelValue {
    pub fn from_log(log: LogComplex) -> Self {
        Self {
            log,
            value: log.to_complex(),
        }
    }

    /// Materialized value; kernel entries handled here are bounded so this
    /// always succeeds for them.
    pub fn get(&self) -> Complex64 {
        self.value.expect("kernel value exceeds the materialization threshold")
    }
}

impl std::ops::Mul for LogComplex {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self {
            log_magnitude: self.log_magnitude + other.log_magnitude,
            phase: wrap(self.phase + other.phase),
        }
    }
}

impl std::ops::Div for LogComplex {
    type Output = Self;

    fn div(self, other: Self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self {
            log_magnitude: self.log_magnitude - other.log_magnitude,
            phase: wrap(self.phase - other.phase),
        }
    }
}

impl std::ops::Add for LogComplex {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.log_magnitude >= other.log_magnitude {
            (self, other)
        } else {
            (other, self)
        };
        let rel = Complex64::from_polar((small.log_magnitude - big.log_magnitude).exp(), small.phase - big.phase);
        big * Self::from_complex(Complex64::new(1.0, 0.0) + rel)
    }
}
