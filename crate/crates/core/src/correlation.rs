//! Determinantal correlation functions and the integrals built from them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigensolver::{eigvals_hermitian, CMatrix};
use crate::error::{invalid, GapError, Result};
use crate::gaps::Neighborhood;
use crate::kernel::{ginibre_kernel_scaled, gue_kernel, wishart_kernel, DensityFn};
use crate::quadrature::GaussLegendre;
use crate::region::{LengthSet, Region};
use crate::rng::{trial_rng, uniform, TrialRng};

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CorrelationEnsemble {
    Ginibre,
    Wishart { m: usize },
    Gue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRequest {
    pub ensemble: CorrelationEnsemble,
    pub points: Vec<Complex64>,
    pub n: usize,
}

impl CorrelationRequest {
    pub fn ginibre(points: Vec<Complex64>, n: usize) -> Self {
        Self {
            ensemble: CorrelationEnsemble::Ginibre,
            points,
            n,
        }
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }
}

/// Kernel matrix without the `n / pi` prefactor (Ginibre) or with the
/// kernel's own normalization (Wishart, GUE). Hermitian by construction.
pub fn kernel_matrix(req: &CorrelationRequest) -> Result<CMatrix> {
    let k = req.k();
    let n = req.n;
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let real_points = || -> Result<Vec<f64>> {
        req.points
            .iter()
            .map(|z| {
                if z.im != 0.0 {
                    invalid(format!("point {z} is not real"))
                } else {
                    Ok(z.re)
                }
            })
            .collect()
    };
    let mut mat = CMatrix::zeros(k, k);
    match req.ensemble {
        CorrelationEnsemble::Ginibre => {
            for i in 0..k {
                for j in i..k {
                    let v = ginibre_kernel_scaled(req.points[i], req.points[j], n)?.get();
                    mat[(i, j)] = if i == j { Complex64::new(v.re, 0.0) } else { v };
                    mat[(j, i)] = mat[(i, j)].conj();
                }
            }
        }
        CorrelationEnsemble::Wishart { m } => {
            let x = real_points()?;
            for i in 0..k {
                for j in i..k {
                    let v = wishart_kernel(x[i], x[j], m, n)?;
                    mat[(i, j)] = Complex64::new(v, 0.0);
                    mat[(j, i)] = mat[(i, j)];
                }
            }
        }
        CorrelationEnsemble::Gue => {
            let x = real_points()?;
            for i in 0..k {
                for j in i..k {
                    let v = gue_kernel(x[i], x[j], n)?;
                    mat[(i, j)] = Complex64::new(v, 0.0);
                    mat[(j, i)] = mat[(i, j)];
                }
            }
        }
    }
    Ok(mat)
}

/// `det` of a PSD kernel matrix, with roundoff-level negatives clamped.
fn clamped_det(mat: &CMatrix) -> Result<f64> {
    let det = mat.determinant().re;
    if det >= 0.0 {
        return Ok(det);
    }
    let diag: f64 = (0..mat.rows()).map(|i| mat[(i, i)].re.abs()).product();
    if det >= -1e-10 * diag {
        Ok(0.0)
    } else {
        Err(GapError::NumericalFailure(format!(
            "kernel determinant {det:.3e} is negative beyond roundoff (diagonal product {diag:.3e})"
        )))
    }
}

/// `rho_k` at the requested points.
pub fn rho_k(req: &CorrelationRequest) -> Result<f64> {
    let k = req.k();
    if k == 0 {
        return invalid("rho_k needs at least one point");
    }
    if k > req.n {
        return Ok(0.0);
    }
    let det = clamped_det(&kernel_matrix(req)?)?;
    let pref = match req.ensemble {
        CorrelationEnsemble::Ginibre => (req.n as f64 / PI).powi(k as i32),
        _ => 1.0,
    };
    Ok(pref * det)
}

fn ginibre_rho(points: &[Complex64], n: usize) -> Result<f64> {
    rho_k(&CorrelationRequest::ginibre(points.to_vec(), n))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PairEnsemble {
    Gue,
    Wishart { m: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairDeterminant {
    pub exact: f64,
    pub leading: f64,
    /// `exact / leading`; NaN when both vanish.
    pub ratio: f64,
}

/// Exact 2×2 kernel determinant at `(x, x + u)` next to the leading term
/// `(pi^2 / 3) n^4 u^2 density(x)^4`.
pub fn pair_determinant_limit(x: f64, u: f64, n: usize, ensemble: PairEnsemble) -> Result<PairDeterminant> {
    let density = match ensemble {
        PairEnsemble::Gue => DensityFn::semicircle(),
        PairEnsemble::Wishart { m } => {
            if m < n {
                return invalid(format!("need m >= n, got m={m}, n={n}"));
            }
            DensityFn::marchenko_pastur(m as f64 / n as f64)?
        }
    };
    let (a, b) = density.support();
    if !(x > a && x < b) {
        return invalid(format!("x={x} is outside the bulk ({a}, {b})"));
    }
    let y = x + u;
    let k = |p: f64, q: f64| match ensemble {
        PairEnsemble::Gue => gue_kernel(p, q, n),
        PairEnsemble::Wishart { m } => wishart_kernel(p, q, m, n),
    };
    let (kxx, kyy, kxy) = (k(x, x)?, k(y, y)?, k(x, y)?);
    let exact = if u == 0.0 { 0.0 } else { kxx * kyy - kxy * kxy };
    let nf = n as f64;
    let leading = PI * PI / 3.0 * nf.powi(4) * u * u * density.eval(x).powi(4);
    Ok(PairDeterminant {
        exact,
        leading,
        ratio: exact / leading,
    })
}

/// Node count for tensor Gauss–Legendre (dimension <= 4), sample count and
/// seed for Monte Carlo (higher dimensions).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes: 24,
            samples: 200_000,
            seed: 0x5EED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    /// Zero for deterministic quadrature.
    pub std_error: f64,
}

/// Uniform point in the `neighborhood` of radius `r` around `c`, and the
/// neighborhood's area.
fn sample_neighborhood(rng: &mut TrialRng, c: Complex64, r: f64, nb: Neighborhood) -> Complex64 {
    let rho = r * uniform(rng).sqrt();
    let th = std::f64::consts::TAU * uniform(rng);
    let z = c + Complex64::from_polar(rho, th);
    if nb.contains(c, z, r) {
        z
    } else {
        c * 2.0 - z
    }
}

fn neighborhood_area(r: f64, nb: Neighborhood) -> f64 {
    match nb {
        Neighborhood::Disk => PI * r * r,
        Neighborhood::HalfDisk => PI * r * r / 2.0,
    }
}

fn sample_region(rng: &mut TrialRng, region: &Region) -> Result<Complex64> {
    match *region {
        Region::Disk { center, radius } => {
            let rho = radius * uniform(rng).sqrt();
            Ok(center + Complex64::from_polar(rho, std::f64::consts::TAU * uniform(rng)))
        }
        Region::Rect {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        } => Ok(Complex64::new(
            re_lo + (re_hi - re_lo) * uniform(rng),
            im_lo + (im_hi - im_lo) * uniform(rng),
        )),
        _ => invalid("integration region must be a bounded disk or rectangle"),
    }
}

/// Monte Carlo estimate of the expected number of ordered triples with the
/// first point in `region` and the other two in its neighborhood of radius
/// `c n^{-3/4}`.
pub fn triple_cluster_expectation(
    region: &Region,
    c: f64,
    n: usize,
    nb: Neighborhood,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    if quad.samples == 0 {
        return invalid("quadrature budget is zero");
    }
    region.validate()?;
    let area = region.area();
    if area == 0.0 {
        return Ok(Estimate {
            value: 0.0,
            std_error: 0.0,
        });
    }
    if !area.is_finite() {
        return invalid("region must be bounded");
    }
    let r = c * (n as f64).powf(-0.75);
    let vol = area * neighborhood_area(r, nb).powi(2);
    let mut rng = trial_rng(quad.seed);
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..quad.samples {
        let l = sample_region(&mut rng, region)?;
        let x1 = sample_neighborhood(&mut rng, l, r, nb);
        let x2 = sample_neighborhood(&mut rng, l, r, nb);
        let v = vol * ginibre_rho(&[l, x1, x2], n)?;
        s1 += v;
        s2 += v * v;
    }
    let m = quad.samples as f64;
    let mean = s1 / m;
    let var = (s2 / m - mean * mean).max(0.0);
    Ok(Estimate {
        value: mean,
        std_error: (var / m).sqrt(),
    })
}

/// One piece `{lo < |u| <= hi, u after 0}` of the half annulus `B_n`.
#[derive(Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
}

impl Piece {
    fn area(&self) -> f64 {
        PI * (self.hi * self.hi - self.lo * self.lo) / 2.0
    }
}

fn pieces(a: &LengthSet, n: usize) -> Vec<Piece> {
    let s = (n as f64).powf(-0.75);
    a.intervals
        .iter()
        .map(|&(lo, hi)| Piece { lo: lo * s, hi: hi * s })
        .filter(|p| p.hi > p.lo)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThinnedEstimate {
    /// Partial sums `S_0, ..., S_{M+1}` of the inclusion–exclusion series.
    pub partial_sums: Vec<f64>,
    /// Standard error of each partial sum (zero when deterministic).
    pub std_errors: Vec<f64>,
    /// `S_M`.
    pub value: f64,
    /// `(min, max)` of `S_M` and `S_{M+1}`.
    pub bracket: (f64, f64),
    /// `S_0 (exp(n |b_n| / pi) - 1)`, bounding every `m >= 1` term.
    pub envelope: f64,
}

/// Number of points used by the thinned-correlation series at most.
const MAX_POINTS: usize = 12;

/// Correlation of the thinned process (eigenvalues with exactly one
/// neighbor in `l + B_n`) by inclusion–exclusion truncated after `m = M`,
/// with the next partial sum reported as a bracket.
pub fn thinned_correlation(
    points: &[Complex64],
    n: usize,
    a: &LengthSet,
    truncation: usize,
    quad: &QuadratureSpec,
) -> Result<ThinnedEstimate> {
    let k = points.len();
    if k == 0 {
        return invalid("thinned correlation needs at least one point");
    }
    a.validate()?;
    if quad.nodes == 0 || quad.samples == 0 {
        return invalid("quadrature budget is zero");
    }
    let last = truncation + 1;
    if 2 * k + last > MAX_POINTS {
        return Err(GapError::Truncation(format!(
            "series up to m={last} needs rho_{} which exceeds the {MAX_POINTS}-point budget",
            2 * k + last
        )));
    }
    let parts = pieces(a, n);
    let reach = 2.0 * a.sup() * (n as f64).powf(-0.75);
    for i in 0..k {
        for j in i + 1..k {
            if (points[i] - points[j]).norm() <= reach {
                return invalid(format!(
                    "translates of B_n around {} and {} may overlap; the series needs them disjoint",
                    points[i], points[j]
                ));
            }
        }
    }
    let b_area: f64 = parts.iter().map(Piece::area).sum::<f64>() * k as f64;

    let mut sums = Vec::with_capacity(last + 1);
    let mut errs = Vec::with_capacity(last + 1);
    let (mut acc, mut acc_var) = (0.0, 0.0);
    let mut fact = 1.0;
    for m in 0..=last {
        if m > 0 {
            fact *= m as f64;
        }
        let term = if parts.is_empty() {
            Estimate {
                value: 0.0,
                std_error: 0.0,
            }
        } else {
            series_term(points, n, &parts, m, quad)?
        };
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * term.value / fact;
        acc_var += (term.std_error / fact).powi(2);
        sums.push(acc);
        errs.push(acc_var.sqrt());
    }
    let s0 = sums[0];
    let value = sums[truncation];
    let next = sums[last];
    Ok(ThinnedEstimate {
        value,
        bracket: (value.min(next), value.max(next)),
        envelope: s0 * ((n as f64 / PI * b_area).exp() - 1.0),
        partial_sums: sums,
        std_errors: errs,
    })
}

/// `int_{x_i in l_i + B_n} int_{y in b_n^m} rho_{2k+m}`.
fn series_term(points: &[Complex64], n: usize, parts: &[Piece], m: usize, quad: &QuadratureSpec) -> Result<Estimate> {
    let k = points.len();
    let total = 2 * k + m;
    if total > n {
        return Ok(Estimate {
            value: 0.0,
            std_error: 0.0,
        });
    }
    let dim = 2 * (k + m);
    if dim <= 4 {
        tensor_term(points, n, parts, m, quad.nodes)
    } else {
        mc_term(points, n, parts, m, quad)
    }
}

fn polar(c: Complex64, r: f64, th: f64) -> Complex64 {
    c + Complex64::from_polar(r, th)
}

/// Tensor Gauss–Legendre in polar coordinates on each half annulus piece.
fn tensor_term(points: &[Complex64], n: usize, parts: &[Piece], m: usize, nodes: usize) -> Result<Estimate> {
    let gl = GaussLegendre::new(nodes);
    // (offset, weight) nodes on B_n; the Jacobian r is folded into the weight.
    let mut offs: Vec<(f64, f64, f64)> = Vec::new();
    for p in parts {
        for (r, wr) in gl.mapped(p.lo, p.hi) {
            for (th, wt) in gl.mapped(0.0, PI) {
                offs.push((r, th, wr * wt * r));
            }
        }
    }
    let k = points.len();
    let mut buf = vec![Complex64::new(0.0, 0.0); 2 * k + m];
    let mut value = 0.0;
    match (k, m) {
        (1, 0) => {
            for &(r, th, w) in &offs {
                buf[0] = points[0];
                buf[1] = polar(points[0], r, th);
                value += w * ginibre_rho(&buf, n)?;
            }
        }
        (1, 1) => {
            for &(r, th, w) in &offs {
                for &(r2, th2, w2) in &offs {
                    buf[0] = points[0];
                    buf[1] = polar(points[0], r, th);
                    buf[2] = polar(points[0], r2, th2);
                    value += w * w2 * ginibre_rho(&buf, n)?;
                }
            }
        }
        (2, 0) => {
            for &(r, th, w) in &offs {
                for &(r2, th2, w2) in &offs {
                    buf[0] = points[0];
                    buf[1] = polar(points[0], r, th);
                    buf[2] = points[1];
                    buf[3] = polar(points[1], r2, th2);
                    value += w * w2 * ginibre_rho(&buf, n)?;
                }
            }
        }
        _ => unreachable!("dimension above 4 goes to Monte Carlo"),
    }
    Ok(Estimate { value, std_error: 0.0 })
}

fn sample_piece(rng: &mut TrialRng, parts: &[Piece], total_area: f64) -> (f64, f64) {
    let mut u = uniform(rng) * total_area;
    let mut chosen = parts[parts.len() - 1];
    for p in parts {
        if u < p.area() {
            chosen = *p;
            break;
        }
        u -= p.area();
    }
    let r2 = chosen.lo * chosen.lo + (chosen.hi * chosen.hi - chosen.lo * chosen.lo) * uniform(rng);
    (r2.sqrt(), PI * uniform(rng))
}

fn mc_term(points: &[Complex64], n: usize, parts: &[Piece], m: usize, quad: &QuadratureSpec) -> Result<Estimate> {
    let k = points.len();
    let piece_area: f64 = parts.iter().map(Piece::area).sum();
    let vol = piece_area.powi(k as i32) * (k as f64 * piece_area).powi(m as i32);
    let mut rng = trial_rng(quad.seed ^ (m as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut buf = vec![Complex64::new(0.0, 0.0); 2 * k + m];
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..quad.samples {
        for (i, &p) in points.iter().enumerate() {
            let (r, th) = sample_piece(&mut rng, parts, piece_area);
            buf[2 * i] = p;
            buf[2 * i + 1] = polar(p, r, th);
        }
        for j in 0..m {
            let which = ((uniform(&mut rng) * k as f64) as usize).min(k - 1);
            let (r, th) = sample_piece(&mut rng, parts, piece_area);
            buf[2 * k + j] = polar(points[which], r, th);
        }
        let v = vol * ginibre_rho(&buf, n)?;
        s1 += v;
        s2 += v * v;
    }
    let cnt = quad.samples as f64;
    let mean = s1 / cnt;
    Ok(Estimate {
        value: mean,
        std_error: ((s2 / cnt - mean * mean).max(0.0) / cnt).sqrt(),
    })
}

/// Limit of the single-point thinned correlation inside the unit disk:
/// `pi^{-2} int_B |u|^2 du = sum (hi^4 - lo^4) / (4 pi)`.
pub fn thinned_limit(a: &LengthSet) -> f64 {
    a.power_integral(3) / PI
}

/// `int_{region^k} rho_k` for Ginibre with k in {1, 2}, by tensor
/// Gauss–Legendre in polar coordinates (disk) or Cartesian (rectangle).
pub fn ginibre_factorial_moment(region: &Region, n: usize, k: usize, nodes: usize) -> Result<f64> {
    if !(1..=2).contains(&k) {
        return invalid("factorial moment quadrature supports k = 1 or 2");
    }
    let gl = GaussLegendre::new(nodes);
    let mut pts: Vec<(Complex64, f64)> = Vec::new();
    match *region {
        Region::Disk { center, radius } => {
            for (r, wr) in gl.mapped(0.0, radius) {
                for (th, wt) in gl.mapped(0.0, std::f64::consts::TAU) {
                    pts.push((polar(center, r, th), wr * wt * r));
                }
            }
        }
        Region::Rect {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        } => {
            for (x, wx) in gl.mapped(re_lo, re_hi) {
                for (y, wy) in gl.mapped(im_lo, im_hi) {
                    pts.push((Complex64::new(x, y), wx * wy));
                }
            }
        }
        _ => return invalid("factorial moment quadrature needs a disk or rectangle"),
    }
    let mut total = 0.0;
    if k == 1 {
        for &(z, w) in &pts {
            total += w * ginibre_rho(&[z], n)?;
        }
    } else {
        for &(z, w) in &pts {
            for &(y, w2) in &pts {
                total += w * w2 * ginibre_rho(&[z, y], n)?;
            }
        }
    }
    Ok(total)
}

/// Whether `det(M) <= det(M_w) det(M_wbar)` within `1e-10` relative slack.
pub fn fischer_check(m: &CMatrix, omega: &[usize]) -> Result<bool> {
    let k = m.rows();
    if !m.is_square() {
        return invalid("Fischer check needs a square matrix");
    }
    if omega.iter().any(|&i| i >= k) {
        return invalid("index subset out of range");
    }
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    for i in 0..k {
        for j in 0..k {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > 1e-12 * scale {
                return invalid("Fischer check needs a Hermitian matrix");
            }
        }
    }
    let sym = CMatrix::from_fn(k, k, |i, j| {
        if i == j {
            Complex64::new(m[(i, i)].re, 0.0)
        } else if i < j {
            m[(i, j)]
        } else {
            m[(j, i)].conj()
        }
    });
    let eig = eigvals_hermitian(&sym)?.reals();
    let top = eig.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if eig.first().is_some_and(|&e| e < -1e-10 * top.max(1.0)) {
        return invalid("Fischer check needs a positive semidefinite matrix");
    }
    let mut in_w = vec![false; k];
    for &i in omega {
        in_w[i] = true;
    }
    let w: Vec<usize> = (0..k).filter(|&i| in_w[i]).collect();
    let wbar: Vec<usize> = (0..k).filter(|&i| !in_w[i]).collect();
    let det = |idx: &[usize]| -> f64 {
        if idx.is_empty() {
            1.0
        } else {
            sym.principal_submatrix(idx).determinant().re
        }
    };
    let lhs = sym.determinant().re;
    let rhs = det(&w) * det(&wbar);
    let diag: f64 = (0..k).map(|i| sym[(i, i)].re.abs()).product();
    Ok(lhs <= rhs + 1e-10 * rhs.abs().max(diag))
}
