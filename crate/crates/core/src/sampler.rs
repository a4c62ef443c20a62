//! Matrix and eigenvalue samplers for the five ensembles.
//!
//! Normalizations:
//! - Ginibre: `A = X / sqrt(n)`, entries of X are `(u + i v) / sqrt(2)`.
//! - Wishart: the m×n factor X with the same entry law; eigenvalues of
//!   `X* X / m` are `sigma^2 / m`.
//! - GUE: density proportional to `exp(-(n/2) tr H^2)`, i.e. `V(x) = x^2/2`,
//!   whose spectrum fills [-2, 2] with the semicircle `sqrt(4 - x^2) / (2 pi)`.
//! - UUE: Metropolis–Hastings on the eigenvalue density
//!   `prod |l_i - l_j|^2 exp(-n sum V(l_j))`.
//! - IidDisk: `r = sqrt(u)`, uniform angle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigensolver::{self, CMatrix, Spectrum};
use crate::error::{invalid, Result};
use crate::rng::{normal, normal_pair, trial_rng, uniform, TrialRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnsembleKind {
    Ginibre,
    Wishart,
    #[serde(rename = "GUE", alias = "Gue")]
    Gue,
    #[serde(rename = "UUE", alias = "Uue")]
    Uue,
    IidDisk,
}

impl EnsembleKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Ginibre => "Ginibre",
            Self::Wishart => "Wishart",
            Self::Gue => "GUE",
            Self::Uue => "UUE",
            Self::IidDisk => "IidDisk",
        }
    }

    pub fn is_complex(self) -> bool {
        matches!(self, Self::Ginibre | Self::IidDisk)
    }
}

/// Even polynomial potential `V(x) = sum coeffs[j] x^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Potential {
    pub coeffs: Vec<f64>,
}

impl Potential {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        let p = Self { coeffs };
        p.validate()?;
        Ok(p)
    }

    /// `V(x) = x^2 / 2`, the GUE potential.
    pub fn gaussian() -> Self {
        Self {
            coeffs: vec![0.0, 0.0, 0.5],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let Some(deg) = self.coeffs.iter().rposition(|&c| c != 0.0) else {
            return invalid("potential is identically zero");
        };
        if self.coeffs.iter().any(|c| !c.is_finite()) {
            return invalid("potential has non-finite coefficients");
        }
        if deg < 2 || deg % 2 == 1 {
            return invalid(format!("potential must have even degree >= 2, got degree {deg}"));
        }
        if self.coeffs[deg] <= 0.0 {
            return invalid("potential must have a positive leading coefficient");
        }
        if self.coeffs.iter().skip(1).step_by(2).any(|&c| c != 0.0) {
            return invalid("potential must be even (odd coefficients must vanish)");
        }
        Ok(())
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Leading coefficient if `V = c x^2 + const`.
    pub fn quadratic_coefficient(&self) -> Option<f64> {
        let deg = self.coeffs.iter().rposition(|&c| c != 0.0)?;
        (deg == 2).then(|| self.coeffs[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McmcParams {
    /// Proposal standard deviation; `None` means `0.5 / sqrt(n)`.
    #[serde(default)]
    pub step_scale: Option<f64>,
    #[serde(default = "default_burn_in")]
    pub burn_in: i64,
    #[serde(default = "default_thinning")]
    pub thinning: i64,
}

fn default_burn_in() -> i64 {
    2000
}

fn default_thinning() -> i64 {
    50
}

impl Default for McmcParams {
    fn default() -> Self {
        Self {
            step_scale: None,
            burn_in: default_burn_in(),
            thinning: default_thinning(),
        }
    }
}

impl McmcParams {
    pub fn scale_for(&self, n: usize) -> f64 {
        self.step_scale.unwrap_or(0.5 / (n as f64).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<Potential>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mcmc: Option<McmcParams>,
}

impl EnsembleSpec {
    pub fn ginibre(n: usize) -> Self {
        Self::plain(EnsembleKind::Ginibre, n)
    }

    pub fn gue(n: usize) -> Self {
        Self::plain(EnsembleKind::Gue, n)
    }

    pub fn iid_disk(n: usize) -> Self {
        Self::plain(EnsembleKind::IidDisk, n)
    }

    pub fn wishart(m: usize, n: usize) -> Self {
        Self {
            m: Some(m),
            ..Self::plain(EnsembleKind::Wishart, n)
        }
    }

    pub fn uue(n: usize, potential: Potential, mcmc: McmcParams) -> Self {
        Self {
            potential: Some(potential),
            mcmc: Some(mcmc),
            ..Self::plain(EnsembleKind::Uue, n)
        }
    }

    fn plain(kind: EnsembleKind, n: usize) -> Self {
        Self {
            kind,
            n,
            m: None,
            potential: None,
            mcmc: None,
        }
    }

    /// Wishart aspect ratio `m / n`.
    pub fn beta(&self) -> Option<f64> {
        self.m.map(|m| m as f64 / self.n as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return invalid(format!("n must be at least 2, got {}", self.n));
        }
        match self.kind {
            EnsembleKind::Wishart => match self.m {
                None => invalid("Wishart ensemble needs m"),
                Some(m) if m < self.n => invalid(format!("Wishart needs m >= n, got m={m}, n={}", self.n)),
                Some(_) => Ok(()),
            },
            EnsembleKind::Uue => {
                self.potential
                    .as_ref()
                    .map_or_else(|| invalid("UUE ensemble needs a potential"), Potential::validate)?;
                let mcmc = self.mcmc.unwrap_or_default();
                if mcmc.scale_for(self.n).partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                    return invalid("MCMC step scale must be positive");
                }
                if mcmc.burn_in < 0 {
                    return invalid("MCMC burn-in must be nonnegative");
                }
                if mcmc.thinning < 1 {
                    return invalid("MCMC thinning must be at least 1");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SampleOutput {
    pub seed: u64,
    /// Sampled matrix (Ginibre, GUE, Wishart factor).
    pub matrix: Option<CMatrix>,
    /// Directly sampled eigenvalues (UUE, IidDisk).
    pub spectrum: Option<Spectrum>,
    pub acceptance_rate: Option<f64>,
    /// Set when the MCMC acceptance rate left [0.1, 0.7].
    pub acceptance_warning: bool,
}

impl SampleOutput {
    fn matrix(seed: u64, m: CMatrix) -> Self {
        Self {
            seed,
            matrix: Some(m),
            spectrum: None,
            acceptance_rate: None,
            acceptance_warning: false,
        }
    }

    fn points(seed: u64, s: Spectrum) -> Self {
        Self {
            seed,
            matrix: None,
            spectrum: Some(s),
            acceptance_rate: None,
            acceptance_warning: false,
        }
    }
}

fn gaussian_matrix(rng: &mut TrialRng, rows: usize, cols: usize, scale: f64) -> CMatrix {
    let s = scale * std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let (u, v) = normal_pair(rng);
        Complex64::new(u * s, v * s)
    })
}

pub fn sample_ginibre(n: usize, seed: u64) -> Result<SampleOutput> {
    if n < 2 {
        return invalid(format!("n must be at least 2, got {n}"));
    }
    let mut rng = trial_rng(seed);
    let a = gaussian_matrix(&mut rng, n, n, 1.0 / (n as f64).sqrt());
    Ok(SampleOutput::matrix(seed, a))
}

pub fn sample_wishart_factor(m: usize, n: usize, seed: u64) -> Result<SampleOutput> {
    if n < 2 || m < n {
        return invalid(format!("Wishart needs m >= n >= 2, got m={m}, n={n}"));
    }
    let mut rng = trial_rng(seed);
    Ok(SampleOutput::matrix(seed, gaussian_matrix(&mut rng, m, n, 1.0)))
}

pub fn sample_gue(n: usize, seed: u64) -> Result<SampleOutput> {
    if n < 2 {
        return invalid(format!("n must be at least 2, got {n}"));
    }
    let mut rng = trial_rng(seed);
    let mut h = CMatrix::zeros(n, n);
    let diag_sd = 1.0 / (n as f64).sqrt();
    let off_sd = 1.0 / (2.0 * n as f64).sqrt();
    for j in 0..n {
        h[(j, j)] = Complex64::new(normal(&mut rng) * diag_sd, 0.0);
        for i in 0..j {
            let (u, v) = normal_pair(&mut rng);
            let z = Complex64::new(u * off_sd, v * off_sd);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    Ok(SampleOutput::matrix(seed, h))
}

pub fn sample_iid_disk(n: usize, seed: u64) -> Result<SampleOutput> {
    if n < 2 {
        return invalid(format!("n must be at least 2, got {n}"));
    }
    let mut rng = trial_rng(seed);
    let pts = (0..n)
        .map(|_| {
            let r = uniform(&mut rng).sqrt();
            let t = std::f64::consts::TAU * uniform(&mut rng);
            Complex64::from_polar(r, t)
        })
        .collect();
    Ok(SampleOutput::points(seed, Spectrum::complex(pts)))
}

/// Log-gas energy `-log p` up to a constant.
pub fn log_gas_energy(lambdas: &[f64], potential: &Potential) -> f64 {
    let n = lambdas.len() as f64;
    let mut e = n * lambdas.iter().map(|&x| potential.eval(x)).sum::<f64>();
    for i in 0..lambdas.len() {
        for j in i + 1..lambdas.len() {
            e -= 2.0 * (lambdas[i] - lambdas[j]).abs().ln();
        }
    }
    e
}

/// Change in log density when coordinate `i` moves to `proposal`.
/// `-inf` if the proposal collides with another coordinate.
pub fn log_density_delta(lambdas: &[f64], i: usize, proposal: f64, potential: &Potential) -> f64 {
    let n = lambdas.len() as f64;
    let old = lambdas[i];
    let mut delta = -n * (potential.eval(proposal) - potential.eval(old));
    for (j, &x) in lambdas.iter().enumerate() {
        if j == i {
            continue;
        }
        let d_new = (proposal - x).abs();
        if d_new == 0.0 {
            return f64::NEG_INFINITY;
        }
        delta += 2.0 * (d_new.ln() - (old - x).abs().ln());
    }
    delta
}

#[derive(Debug, Clone)]
pub struct ChainOutput {
    /// One configuration per recorded sample, each sorted ascending.
    pub samples: Vec<Vec<f64>>,
    /// Energy of each recorded sample.
    pub energies: Vec<f64>,
    /// Acceptance rate after burn-in.
    pub acceptance_rate: f64,
}

/// Runs the log-gas chain and records `samples` configurations spaced by the
/// thinning interval after burn-in.
pub fn run_uue_chain(
    n: usize,
    potential: &Potential,
    mcmc: &McmcParams,
    samples: usize,
    seed: u64,
) -> Result<ChainOutput> {
    let spec = EnsembleSpec::uue(n, potential.clone(), *mcmc);
    spec.validate()?;
    let scale = mcmc.scale_for(n);
    let mut rng = trial_rng(seed);
    let mut lam: Vec<f64> = (0..n).map(|i| 3.0 * ((i as f64 + 0.5) / n as f64 - 0.5)).collect();
    let sweep = |lam: &mut Vec<f64>, rng: &mut TrialRng| -> usize {
        let mut acc = 0;
        for i in 0..n {
            let prop = lam[i] + scale * normal(rng);
            let d = log_density_delta(lam, i, prop, potential);
            if d >= 0.0 || uniform(rng) < d.exp() {
                lam[i] = prop;
                acc += 1;
            }
        }
        acc
    };
    for _ in 0..mcmc.burn_in {
        sweep(&mut lam, &mut rng);
    }
    let mut accepted = 0usize;
    let mut proposed = 0usize;
    let mut out = ChainOutput {
        samples: Vec::with_capacity(samples),
        energies: Vec::with_capacity(samples),
        acceptance_rate: 0.0,
    };
    for s in 0..samples {
        if s > 0 {
            for _ in 0..mcmc.thinning {
                accepted += sweep(&mut lam, &mut rng);
                proposed += n;
            }
        }
        let mut sorted = lam.clone();
        sorted.sort_by(f64::total_cmp);
        out.energies.push(log_gas_energy(&sorted, potential));
        out.samples.push(sorted);
    }
    if proposed == 0 {
        // Single sample: measure acceptance over one extra sweep.
        let mut probe = lam.clone();
        accepted = sweep(&mut probe, &mut rng);
        proposed = n;
    }
    out.acceptance_rate = accepted as f64 / proposed as f64;
    Ok(out)
}

pub fn sample_uue_eigenvalues(spec: &EnsembleSpec, seed: u64) -> Result<SampleOutput> {
    if spec.kind != EnsembleKind::Uue {
        return invalid("sample_uue_eigenvalues needs a UUE spec");
    }
    spec.validate()?;
    let potential = spec.potential.as_ref().expect("validated");
    let chain = run_uue_chain(spec.n, potential, &spec.mcmc.unwrap_or_default(), 1, seed)?;
    let rate = chain.acceptance_rate;
    let values = chain.samples.into_iter().next().unwrap_or_default();
    Ok(SampleOutput {
        acceptance_rate: Some(rate),
        acceptance_warning: !(0.1..=0.7).contains(&rate),
        ..SampleOutput::points(seed, Spectrum::real(values))
    })
}

pub fn sample(spec: &EnsembleSpec, seed: u64) -> Result<SampleOutput> {
    spec.validate()?;
    match spec.kind {
        EnsembleKind::Ginibre => sample_ginibre(spec.n, seed),
        EnsembleKind::Wishart => sample_wishart_factor(spec.m.expect("validated"), spec.n, seed),
        EnsembleKind::Gue => sample_gue(spec.n, seed),
        EnsembleKind::Uue => sample_uue_eigenvalues(spec, seed),
        EnsembleKind::IidDisk => sample_iid_disk(spec.n, seed),
    }
}

/// Samples and reduces to eigenvalues with the solver matching the ensemble.
pub fn sample_spectrum(spec: &EnsembleSpec, seed: u64) -> Result<(Spectrum, SampleOutput)> {
    let mut out = sample(spec, seed)?;
    let spectrum = match (spec.kind, out.matrix.as_ref()) {
        (EnsembleKind::Ginibre, Some(a)) => eigensolver::eigvals_general(a)?,
        (EnsembleKind::Gue, Some(h)) => eigensolver::eigvals_hermitian(h)?,
        (EnsembleKind::Wishart, Some(x)) => eigensolver::wishart_eigenvalues(x)?,
        _ => out.spectrum.take().expect("point ensembles return a spectrum"),
    };
    Ok((spectrum, out))
}
