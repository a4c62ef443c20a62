//! Eigenvalues and singular values with backward-error reporting.
//!
//! General matrices go through Hessenberg reduction and single-shift QR,
//! Hermitian matrices through tridiagonalization and implicit QL, and
//! rectangular factors through Golub–Kahan bidiagonalization. Only values are
//! computed, never vectors.

mod general;
mod hermitian;
mod matrix;
mod svd;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use matrix::CMatrix;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumKind {
    ComplexPlane,
    RealLine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<Complex64>,
    kind: SpectrumKind,
    /// Normwise relative backward error estimate of the producing solver.
    pub backward_error: f64,
}

impl Spectrum {
    pub fn complex(values: Vec<Complex64>) -> Self {
        Self {
            values,
            kind: SpectrumKind::ComplexPlane,
            backward_error: 0.0,
        }
    }

    /// Real spectrum; sorts ascending.
    pub fn real(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self {
            values: values.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
            kind: SpectrumKind::RealLine,
            backward_error: 0.0,
        }
    }

    pub fn with_backward_error(mut self, err: f64) -> Self {
        self.backward_error = err;
        self
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Real parts; for `RealLine` spectra these are the eigenvalues.
    pub fn reals(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }
}

/// Declared relative residual tolerance of [`eigvals_general`].
pub fn general_tolerance(n: usize) -> f64 {
    100.0 * n as f64 * f64::EPSILON
}

/// Declared relative residual tolerance of [`eigvals_hermitian`].
pub fn hermitian_tolerance(n: usize) -> f64 {
    50.0 * n as f64 * f64::EPSILON
}

pub fn eigvals_general(a: &CMatrix) -> Result<Spectrum> {
    if !a.is_square() {
        return invalid(format!("expected a square matrix, got {}x{}", a.rows(), a.cols()));
    }
    if !a.all_finite() {
        return invalid("matrix has non-finite entries");
    }
    let n = a.rows();
    let anorm = a.frobenius_norm();
    let out = general::eigenvalues(a)?;
    let rel = if anorm > 0.0 { out.dropped / anorm } else { 0.0 };
    Ok(Spectrum::complex(out.values).with_backward_error(rel + n as f64 * f64::EPSILON))
}

pub fn eigvals_hermitian(h: &CMatrix) -> Result<Spectrum> {
    if !h.is_square() {
        return invalid(format!("expected a square matrix, got {}x{}", h.rows(), h.cols()));
    }
    if !h.all_finite() {
        return invalid("matrix has non-finite entries");
    }
    let defect = h.hermitian_defect();
    if defect > 10.0 * f64::EPSILON {
        return invalid(format!("matrix is not Hermitian (relative defect {defect:.3e})"));
    }
    let n = h.rows();
    let values = hermitian::eigenvalues(h)?;
    Ok(Spectrum::real(values).with_backward_error(n as f64 * f64::EPSILON))
}

/// Singular values of an m×n matrix with m ≥ n, descending. The returned
/// spectrum is `RealLine` but ordered descending.
pub fn singular_values(x: &CMatrix) -> Result<Vec<f64>> {
    if x.rows() < x.cols() {
        return invalid(format!("singular_values needs m >= n, got {}x{}", x.rows(), x.cols()));
    }
    if !x.all_finite() {
        return invalid("matrix has non-finite entries");
    }
    svd::singular_values(x)
}

/// Eigenvalues of X*X/m from the factor, ascending.
pub fn wishart_eigenvalues(x: &CMatrix) -> Result<Spectrum> {
    let m = x.rows() as f64;
    let sv = singular_values(x)?;
    let n = sv.len();
    Ok(Spectrum::real(sv.into_iter().map(|s| s * s / m).collect()).with_backward_error(n as f64 * f64::EPSILON))
}
