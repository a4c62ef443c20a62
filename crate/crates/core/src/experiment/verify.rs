//! Deterministic kernel and limit-law checks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlation::{pair_determinant_limit, rho_k, CorrelationRequest, PairEnsemble};
use crate::gaps::GinibreConstant;
use crate::kernel::{verify_remainder_regimes, wishart_kernel, wishart_kernel_direct, DensityFn};
use crate::laws::{kth_gap_cdf, LimitLaw};
use crate::quadrature::GaussLegendre;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictBundle {
    pub verdicts: Vec<Verdict>,
}

impl VerdictBundle {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

fn verdict(name: &str, passed: bool, value: f64, threshold: f64, detail: String) -> Verdict {
    Verdict {
        name: name.into(),
        passed,
        value,
        threshold,
        detail,
    }
}

pub fn remainder_verdicts() -> Vec<Verdict> {
    let s = verify_remainder_regimes(&[50, 100, 200]);
    let detail = format!(
        "n={:?}, inner ratios {:?}, outer ratios {:?}",
        s.ns, s.inner_ratio, s.outer_ratio
    );
    vec![
        verdict(
            "remainder_small_regime",
            s.small_regime_holds,
            if s.small_regime_holds { 1.0 } else { 0.0 },
            1.0,
            "bound holds on every small-|z| grid point".into(),
        ),
        verdict(
            "remainder_frozen_constants",
            s.constants_hold,
            s.inner_constant.max(s.outer_constant),
            s.inner_constant.max(s.outer_constant),
            detail.clone(),
        ),
        verdict(
            "remainder_ratios_non_increasing",
            s.ratios_non_increasing,
            s.inner_ratio
                .iter()
                .chain(&s.outer_ratio)
                .fold(0.0, |a: f64, &b| a.max(b)),
            s.inner_constant.max(s.outer_constant),
            detail,
        ),
    ]
}

/// Largest relative gap between the Christoffel–Darboux and direct Wishart
/// kernels over `n <= n_max`, `m - n in {0, 5, n}`, on a grid of point pairs.
pub fn cd_identity_error(n_max: usize) -> f64 {
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        for m in [n, n + 5, 2 * n] {
            let beta = m as f64 / n as f64;
            let (a, b) = DensityFn::marchenko_pastur(beta).expect("beta >= 1").support();
            let pts: Vec<f64> = (0..7).map(|i| (a + 0.05) + (b - a) * 1.1 * i as f64 / 6.0).collect();
            for &x in &pts {
                for &y in &pts {
                    if x <= 0.0 || y <= 0.0 {
                        continue;
                    }
                    let cd = wishart_kernel(x, y, m, n).expect("valid point");
                    let direct = wishart_kernel_direct(x, y, m, n).expect("valid point");
                    let scale = direct.abs().max(
                        (wishart_kernel_direct(x, x, m, n).unwrap() * wishart_kernel_direct(y, y, m, n).unwrap())
                            .sqrt(),
                    );
                    if scale > 0.0 {
                        worst = worst.max((cd - direct).abs() / scale);
                    }
                }
            }
        }
    }
    worst
}

pub fn pair_verdicts() -> Vec<Verdict> {
    let n = 500;
    let u = (n as f64).powf(-4.0 / 3.0);
    let gue = pair_determinant_limit(0.0, u, n, PairEnsemble::Gue).expect("bulk point");
    let n2 = 400;
    let u2 = (n2 as f64).powf(-4.0 / 3.0);
    let (a, b) = DensityFn::marchenko_pastur(2.0).expect("beta").support();
    let x = (a + b) / 2.0;
    let wis = pair_determinant_limit(x, u2, n2, PairEnsemble::Wishart { m: 2 * n2 }).expect("bulk point");
    vec![
        verdict(
            "pair_determinant_gue",
            (gue.ratio - 1.0).abs() <= 0.05,
            gue.ratio,
            0.05,
            format!(
                "n={n}, x=0, u=n^(-4/3); exact {:.6e}, leading {:.6e}",
                gue.exact, gue.leading
            ),
        ),
        verdict(
            "pair_determinant_wishart",
            (wis.ratio - 1.0).abs() <= 0.10,
            wis.ratio,
            0.10,
            format!(
                "n={n2}, m={}, x={x}, u=n^(-4/3); exact {:.6e}, leading {:.6e}",
                2 * n2,
                wis.exact,
                wis.leading
            ),
        ),
    ]
}

pub fn density_verdicts() -> Vec<Verdict> {
    let mut worst = 0.0f64;
    let mut names = Vec::new();
    for d in [
        DensityFn::marchenko_pastur(1.0).unwrap(),
        DensityFn::marchenko_pastur(2.0).unwrap(),
        DensityFn::marchenko_pastur(4.0).unwrap(),
        DensityFn::semicircle(),
        DensityFn::quadratic_equilibrium(1.0).unwrap(),
    ] {
        worst = worst.max((d.total_mass() - 1.0).abs());
        names.push(format!("{d:?}"));
    }
    vec![verdict(
        "density_normalization",
        worst < 1e-6,
        worst,
        1e-6,
        names.join("; "),
    )]
}

pub fn one_point_verdicts() -> Vec<Verdict> {
    let n = 100;
    let inside = rho_k(&CorrelationRequest::ginibre(vec![Complex64::new(0.5, 0.0)], n)).unwrap() / n as f64;
    let outside = rho_k(&CorrelationRequest::ginibre(vec![Complex64::new(1.5, 0.0)], n)).unwrap() / n as f64;
    let dev = (inside - 1.0 / std::f64::consts::PI).abs();
    vec![
        verdict(
            "one_point_inside",
            dev < 1e-3,
            dev,
            1e-3,
            format!("rho_1/n = {inside} at |z|=0.5, n={n}"),
        ),
        verdict(
            "one_point_outside",
            outside < 1e-6,
            outside,
            1e-6,
            format!("rho_1/n at |z|=1.5, n={n}"),
        ),
    ]
}

/// `(|int density - 1|, max |d/dx cdf - density|)` over `q in {3, 4}`,
/// `k <= 5`.
pub fn law_normalization_errors() -> (f64, f64) {
    let gl = GaussLegendre::new(64);
    let (mut mass_err, mut deriv_err) = (0.0f64, 0.0f64);
    for q in [3u32, 4] {
        for k in 1..=5u32 {
            let law = LimitLaw { q, k };
            let mass = gl.integrate_panels(0.0, 6.0, 48, |x| law.density(x));
            mass_err = mass_err.max((mass - 1.0).abs());
            for i in 1..40 {
                let x = 0.05 * i as f64;
                let h = 1e-5;
                let d = (kth_gap_cdf(&law, x + h).unwrap() - kth_gap_cdf(&law, x - h).unwrap()) / (2.0 * h);
                deriv_err = deriv_err.max((d - law.density(x)).abs());
            }
        }
    }
    (mass_err, deriv_err)
}

pub fn verify_kernels() -> VerdictBundle {
    let mut verdicts = remainder_verdicts();
    let cd = cd_identity_error(20);
    verdicts.push(verdict(
        "christoffel_darboux_identity",
        cd < 1e-10,
        cd,
        1e-10,
        "n <= 20, m - n in {0, 5, n}".into(),
    ));
    verdicts.extend(pair_verdicts());
    verdicts.extend(density_verdicts());
    verdicts.extend(one_point_verdicts());
    let (mass, deriv) = law_normalization_errors();
    verdicts.push(verdict(
        "law_normalization",
        mass < 1e-8,
        mass,
        1e-8,
        "q in {3,4}, k <= 5".into(),
    ));
    verdicts.push(verdict(
        "law_cdf_density",
        deriv < 1e-6,
        deriv,
        1e-6,
        "central differences, h = 1e-5".into(),
    ));
    let c = GinibreConstant::Quarter.value();
    verdicts.push(verdict(
        "ginibre_constant_consistency",
        (c.powi(4) - 0.25).abs() < 1e-15,
        c,
        0.25f64.powf(0.25),
        "c^4 equals the 1/4 of the s^4/4 intensity".into(),
    ));
    VerdictBundle { verdicts }
}
