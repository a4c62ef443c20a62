//! Goodness-of-fit and count tests.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::special::chi_square_cdf;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub name: String,
    /// Written as `null` when not finite.
    #[serde(deserialize_with = "null_as_nan")]
    pub statistic: f64,
    /// `None` when the test has no p-value (band tests) or is degenerate.
    pub p_value: Option<f64>,
    /// `None` when no verdict can be given.
    pub passed: Option<bool>,
    pub sample_size: usize,
    pub target: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<MomentCheck>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub k: usize,
    pub mean: f64,
    pub target: f64,
    pub std_error: f64,
    pub passed: bool,
}

fn null_as_nan<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// Sorted finite samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    values: Vec<f64>,
}

impl SampleSet {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("samples contain non-finite values");
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    /// Takes already sorted values; rejects unsorted or non-finite input.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("samples contain non-finite values");
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return invalid("samples are not sorted");
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for j in 1..=20 {
        let j = j as f64;
        let sign = if j as i64 % 2 == 1 { 1.0 } else { -1.0 };
        s += sign * (-2.0 * j * j * lambda * lambda).exp();
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// `sup |F_emp - F|` over sorted samples.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &SampleSet, cdf: F) -> f64 {
    let n = samples.len() as f64;
    let v = samples.values();
    let mut d = 0.0f64;
    let mut i = 0;
    while i < v.len() {
        // Ties jump together.
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[i] {
            j += 1;
        }
        let f = cdf(v[i]);
        d = d.max(f - i as f64 / n).max((j + 1) as f64 / n - f);
        i = j + 1;
    }
    d
}

pub const KS_MIN_SAMPLES: usize = 50;

pub fn ks_test<F: Fn(f64) -> f64>(samples: &SampleSet, cdf: F, target: &str) -> Result<TestReport> {
    if samples.len() < KS_MIN_SAMPLES {
        return invalid(format!(
            "KS test needs at least {KS_MIN_SAMPLES} samples, got {}",
            samples.len()
        ));
    }
    let d = ks_distance(samples, cdf);
    let n = samples.len();
    let p = kolmogorov_survival(d * (n as f64).sqrt());
    Ok(TestReport {
        name: "ks".into(),
        statistic: d,
        p_value: Some(p),
        passed: None,
        sample_size: n,
        target: target.into(),
        details: Vec::new(),
    })
}

/// Two-sample KS distance.
pub fn ks_two_sample(a: &SampleSet, b: &SampleSet) -> f64 {
    let (x, y) = (a.values(), b.values());
    let (na, nb) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < x.len() && j < y.len() {
        let t = x[i].min(y[j]);
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

fn falling(n: u64, k: usize) -> f64 {
    (0..k as u64).map(|i| n.saturating_sub(i) as f64).product()
}

/// Mean of the falling factorials `N (N-1) ... (N-k+1)` against `mu^k` for
/// `k = 1..=k_max`, each within `bands` jackknife standard errors.
pub fn factorial_moment_test(counts: &[u64], mu: f64, k_max: usize, bands: f64) -> Result<TestReport> {
    if counts.is_empty() {
        return invalid("factorial moment test needs counts");
    }
    if !(mu >= 0.0) || k_max == 0 {
        return invalid("factorial moment test needs mu >= 0 and k_max >= 1");
    }
    let n = counts.len() as f64;
    let mut details = Vec::with_capacity(k_max);
    let mut worst = 0.0f64;
    for k in 1..=k_max {
        let vals: Vec<f64> = counts.iter().map(|&c| falling(c, k)).collect();
        let mean = vals.iter().sum::<f64>() / n;
        // The jackknife SE of a mean is the usual s / sqrt(N).
        let se = if counts.len() > 1 {
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        let target = mu.powi(k as i32);
        let dev = (mean - target).abs();
        let passed = dev <= bands * se || dev <= 1e-12 * target.max(1.0);
        if se > 0.0 {
            worst = worst.max(dev / se);
        } else if dev > 0.0 {
            worst = f64::INFINITY;
        }
        details.push(MomentCheck {
            k,
            mean,
            target,
            std_error: se,
            passed,
        });
    }
    Ok(TestReport {
        name: "factorial_moments".into(),
        statistic: worst,
        p_value: None,
        passed: Some(details.iter().all(|d| d.passed)),
        sample_size: counts.len(),
        target: format!("mu^k with mu={mu}, k<={k_max}, {bands} SE bands"),
        details,
    })
}

pub const DISPERSION_MIN_COUNTS: usize = 100;

/// Index of dispersion `(N-1) s^2 / mean` against chi-square with `N-1`
/// degrees of freedom, two-sided at level `alpha`.
pub fn poisson_dispersion_test(counts: &[u64], alpha: f64) -> Result<TestReport> {
    if counts.len() < DISPERSION_MIN_COUNTS {
        return invalid(format!(
            "dispersion test needs at least {DISPERSION_MIN_COUNTS} counts, got {}",
            counts.len()
        ));
    }
    let n = counts.len() as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
    let mut report = TestReport {
        name: "dispersion".into(),
        statistic: f64::NAN,
        p_value: None,
        passed: None,
        sample_size: counts.len(),
        target: format!("chi-square with {} dof, two-sided alpha={alpha}", counts.len() - 1),
        details: Vec::new(),
    };
    if mean == 0.0 {
        report.target = "degenerate: all counts are zero".into();
        return Ok(report);
    }
    let ss: f64 = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum();
    let stat = ss / mean;
    let cdf = chi_square_cdf(n - 1.0, stat);
    let p = (2.0 * cdf.min(1.0 - cdf)).clamp(0.0, 1.0);
    report.statistic = stat;
    report.p_value = Some(p);
    report.passed = Some(p >= alpha);
    Ok(report)
}
