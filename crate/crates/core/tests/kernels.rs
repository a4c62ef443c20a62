use gaplab::kernel::*;
use gaplab::quadrature::GaussLegendre;
use num_complex::Complex64;
use proptest::prelude::*;
use statrs::distribution::{DiscreteCDF, Poisson};

const PI: f64 = std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn s(z: Complex64, w: Complex64, n: usize) -> Complex64 {
    ginibre_kernel_scaled(z, w, n).unwrap().get()
}

#[test]
fn ginibre_kernel_examples() {
    for z in [c(0.0, 0.0), c(0.3, -0.2), c(1.0, 0.0), c(2.0, 1.0)] {
        let v = s(z, z, 50);
        assert!(v.re > 0.0 && v.re <= 1.0 && v.im.abs() < 1e-15);
    }
    let v = s(c(1.0, 0.0), c(1.0, 0.0), 10);
    assert!((v.re - 0.457_929_714_6).abs() < 1e-9);
    let (z, w) = (c(0.4, 0.9), c(-1.1, 0.2));
    let want = (-(z.norm_sqr() + w.norm_sqr()) / 2.0).exp();
    assert!((s(z, w, 1) - c(want, 0.0)).norm() < 1e-15);
    assert!(ginibre_kernel_scaled(c(f64::NAN, 0.0), z, 4).is_err());
}

#[test]
fn diagonal_is_poisson_cdf() {
    for n in [1usize, 2, 7, 30, 100, 250, 500] {
        for x in [0.01, 0.3, 0.9, 1.0, 1.2, 2.5] {
            let v = s(c(f64::sqrt(x), 0.0), c(f64::sqrt(x), 0.0), n).re;
            let want = Poisson::new(n as f64 * x).unwrap().cdf(n as u64 - 1);
            assert!((v - want).abs() < 1e-10, "n={n}, x={x}: {v} vs {want}");
        }
    }
}

#[test]
fn remainder_examples() {
    assert_eq!(ginibre_remainder(c(0.0, 0.0), 10).unwrap(), c(0.0, 0.0));
    let r = ginibre_remainder(c(0.02, 0.0), 100).unwrap().norm();
    let bound = (100.0 / (2.0 * PI)).sqrt() * 0.06f64.powi(100);
    assert!(r <= bound);
    // Outer regime at n=200, z=1.5 against the constant fitted at n=50.
    let fit = verify_remainder_regimes(&[50]).outer_constant;
    let rep = check_remainder_regimes(c(1.5, 0.0), 200);
    let outer = rep.checks.iter().find(|ch| ch.regime == Regime::Outer).unwrap();
    assert!(outer.ratio <= fit);
}

#[test]
fn regime_classification() {
    let small = check_remainder_regimes(c(0.015, 0.0), 50);
    let ch = small.checks.iter().find(|ch| ch.regime == Regime::Small).unwrap();
    assert!(ch.satisfied);
    let inner = check_remainder_regimes(c(0.5, 0.0), 100);
    assert_eq!(
        inner.checks.iter().map(|c| c.regime).collect::<Vec<_>>(),
        vec![Regime::Inner]
    );
    let edge = check_remainder_regimes(c(1.0, 0.0), 100);
    assert_eq!(edge.checks.len(), 2);
}

#[test]
fn remainder_regimes_on_grid() {
    let s = verify_remainder_regimes(&[50, 100, 200]);
    assert!(s.small_regime_holds);
    assert!(s.constants_hold, "{s:?}");
}

#[test]
fn laguerre_closed_forms_and_orthonormality() {
    let x = 2.3f64;
    assert!((laguerre_wave(0, 4, 4, x).unwrap() - (-x / 2.0).exp()).abs() < 1e-15);
    assert!((laguerre_wave(1, 4, 4, x).unwrap() - (1.0 - x) * (-x / 2.0).exp()).abs() < 1e-15);
    assert!(laguerre_wave(0, 4, 4, -1.0).is_err());
    // Composite Simpson oracle.
    let m = 8;
    let n = 5;
    let steps = 40_000;
    let h = 80.0 / steps as f64;
    for p in 0..=5 {
        for q in p..=5 {
            let mut acc = 0.0;
            for k in 1..steps {
                let t = k as f64 * h;
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * laguerre_wave(p, m, n, t).unwrap() * laguerre_wave(q, m, n, t).unwrap();
            }
            let v = acc * h / 3.0;
            let want = if p == q { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-8, "p={p} q={q}: {v}");
        }
    }
}

#[test]
fn wishart_cd_identity() {
    let (m, n) = (5, 3);
    for x in [0.2, 0.9, 1.7, 3.1] {
        for y in [0.4, 1.1, 2.6] {
            let cd = wishart_kernel(x, y, m, n).unwrap();
            let d = wishart_kernel_direct(x, y, m, n).unwrap();
            assert!((cd - d).abs() <= 1e-10 * d.abs().max(1e-3), "{x},{y}");
            assert_eq!(cd, wishart_kernel(y, x, m, n).unwrap());
        }
    }
    assert!(wishart_kernel(0.0, 1.0, m, n).is_err());
    assert!(wishart_kernel(1.0, -1.0, m, n).is_err());
    // Confluent branch agrees with the direct sum.
    let conf = wishart_kernel(1.3, 1.3, m, n).unwrap();
    assert!((conf - wishart_kernel_direct(1.3, 1.3, m, n).unwrap()).abs() < 1e-10 * conf);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cd_identity_small_n(n in 1usize..=20, extra in prop::sample::select(vec![0usize, 5, 1000]), x in 0.05f64..4.0, y in 0.05f64..4.0) {
        let m = if extra == 1000 { 2 * n } else { n + extra };
        let cd = wishart_kernel(x, y, m, n).unwrap();
        let d = wishart_kernel_direct(x, y, m, n).unwrap();
        let scale = (wishart_kernel_direct(x, x, m, n).unwrap() * wishart_kernel_direct(y, y, m, n).unwrap()).sqrt();
        prop_assert!((cd - d).abs() <= 1e-10 * scale.max(d.abs()));
    }

    #[test]
    fn ginibre_cauchy_schwarz(zr in -1.5f64..1.5, zi in -1.5f64..1.5, wr in -1.5f64..1.5, wi in -1.5f64..1.5, n in 1usize..300) {
        let (z, w) = (c(zr, zi), c(wr, wi));
        let lhs = s(z, w, n).norm_sqr();
        let rhs = s(z, z, n).re * s(w, w, n).re;
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
        prop_assert!(s(z, w, n).norm() <= 1.0 + 1e-12);
    }
}

#[test]
fn wishart_one_point_density() {
    let (m, n) = (400, 200);
    let g = DensityFn::marchenko_pastur(2.0).unwrap();
    for x in [0.5, 1.0, 1.5, 2.2] {
        let k = wishart_kernel(x, x, m, n).unwrap() / n as f64;
        assert!((k / g.eval(x) - 1.0).abs() < 0.02, "x={x}: {k} vs {}", g.eval(x));
    }
}

#[test]
fn plancherel_rotach_error_decreases() {
    let beta = 2.0;
    let (a, b) = DensityFn::marchenko_pastur(beta).unwrap().support();
    let x = (a + b) / 2.0;
    let err = |n: usize| {
        let g = DensityFn::marchenko_pastur(beta).unwrap().eval(x);
        let y = x + 0.5 / (n as f64 * g);
        wishart_kernel_asymptotic(x, y, 2 * n, n, 0.05).unwrap().relative_error
    };
    let (e25, e100) = (err(25), err(100));
    assert!(e100 < e25, "{e25} -> {e100}");
    assert!(wishart_kernel_asymptotic(a + 0.01, x, 200, 100, 0.05).is_err());
}

#[test]
fn angle_relations() {
    let (a, b) = DensityFn::marchenko_pastur(2.0).unwrap().support();
    let x = (a + b) / 2.0;
    let ang = AngleParams::new(x, 2.0).unwrap();
    let (r0, r1) = ang.residuals(x, 2.0);
    assert!(r0 < 1e-12 && r1 < 1e-12);
    assert!(ang.theta0 > 0.0 && ang.theta0 < PI && ang.theta1 > 0.0 && ang.theta1 < PI / 2.0);
    let one = AngleParams::new(2.0, 1.0).unwrap();
    assert!((one.theta0.cos() + 1.0 / 2f64.sqrt()).abs() < 1e-14);
}

#[test]
fn gue_kernel_examples() {
    // n=2 with the weight exp(-n x^2 / 2): t = x, p0 = pi^{-1/4},
    // p1 = sqrt(2) t pi^{-1/4}; K = e^{-(x^2+y^2)/2} pi^{-1/2} (1 + 2xy).
    for (x, y) in [(0.0, 0.0), (0.3, -0.8), (1.2, 0.5)] {
        let want = (-(x * x + y * y) / 2.0f64).exp() / PI.sqrt() * (1.0 + 2.0 * x * y);
        let got = gue_kernel(x, y, 2).unwrap();
        assert!((got - want).abs() <= 1e-12 * want.abs().max(1e-3), "{x},{y}");
    }
    for (x, y) in [(0.1, 0.7), (-1.3, 0.2)] {
        assert_eq!(gue_kernel(x, y, 30).unwrap(), gue_kernel(y, x, 30).unwrap());
        assert!(gue_kernel(x, x, 30).unwrap() > 0.0);
    }
    let k = gue_kernel(0.0, 0.0, 200).unwrap() / 200.0;
    assert!((k * PI - 1.0).abs() < 0.02);
    let direct = gue_kernel_direct(0.4, -0.3, 40).unwrap();
    assert!((gue_kernel(0.4, -0.3, 40).unwrap() - direct).abs() < 1e-10 * direct.abs().max(1.0));
}

#[test]
fn sine_kernel_examples() {
    assert_eq!(sine_kernel(0.0), 1.0);
    assert!(sine_kernel(1.0).abs() < 1e-15);
    assert!((sine_kernel(0.5) - 2.0 / PI).abs() < 1e-15);
}

#[test]
fn spectral_density_examples() {
    let g = DensityFn::marchenko_pastur(1.0).unwrap();
    assert!((spectral_density(&g, 2.0).unwrap() - 4f64.sqrt() / (4.0 * PI)).abs() < 1e-15);
    assert!((spectral_density(&DensityFn::semicircle(), 0.0).unwrap() - 1.0 / PI).abs() < 1e-15);
    assert_eq!(spectral_density(&g, 7.0).unwrap(), 0.0);
    assert_eq!(spectral_density(&DensityFn::semicircle(), 2.5).unwrap(), 0.0);
    assert!(DensityFn::marchenko_pastur(0.9).is_err());
    let gl = GaussLegendre::new(200);
    for beta in [1.0, 2.0, 4.0] {
        let d = DensityFn::marchenko_pastur(beta).unwrap();
        let (a, b) = d.support();
        // Independent check with a plain panel rule after x = t^2, which
        // removes the hard-edge singularity at beta = 1.
        let mass = gl.integrate_panels(a.sqrt(), b.sqrt(), 400, |t| 2.0 * t * d.eval(t * t));
        assert!((mass - 1.0).abs() < 1e-4, "beta={beta}: {mass}");
        assert!((d.total_mass() - 1.0).abs() < 1e-6);
    }
    assert!((DensityFn::semicircle().total_mass() - 1.0).abs() < 1e-6);
}

#[test]
fn log_complex_materialization() {
    let big = LogComplex::new(800.0, 0.3);
    assert!(big.to_complex().is_none());
    let prod = big * LogComplex::new(-790.0, -0.3);
    let z = prod.to_complex().unwrap();
    assert!((z.re - 10f64.exp()).abs() < 1e-9 * 10f64.exp() && z.im.abs() < 1e-9);
}
