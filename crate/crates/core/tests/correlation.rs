use gaplab::correlation::*;
use gaplab::eigensolver::{eigvals_general, CMatrix};
use gaplab::gaps::{triple_cluster_count_in, Neighborhood};
use gaplab::region::{LengthSet, Region};
use gaplab::rng::{normal, split_seed, trial_rng};
use gaplab::sampler::sample_ginibre;
use num_complex::Complex64;
use proptest::prelude::*;

const PI: f64 = std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ginibre_spectrum(n: usize, seed: u64) -> Vec<Complex64> {
    let a = sample_ginibre(n, seed).unwrap().matrix.unwrap();
    eigvals_general(&a).unwrap().values().to_vec()
}

#[test]
fn one_point_examples() {
    let at = |z, n: usize| rho_k(&CorrelationRequest::ginibre(vec![z], n)).unwrap() / n as f64;
    assert!((at(c(0.5, 0.0), 100) - 1.0 / PI).abs() < 1e-3);
    assert!(at(c(1.5, 0.0), 100) < 1e-6);
    // Two well separated bulk points decorrelate.
    let pair = rho_k(&CorrelationRequest::ginibre(vec![c(0.0, 0.0), c(0.5, 0.0)], 100)).unwrap();
    let single = (100.0 / PI) * (100.0 / PI);
    assert!((pair / single - 1.0).abs() < 1e-6);
    assert_eq!(
        rho_k(&CorrelationRequest::ginibre(vec![c(0.1, 0.0); 3], 2)).unwrap(),
        0.0
    );
}

#[test]
fn real_ensembles_use_their_kernels() {
    let req = CorrelationRequest {
        ensemble: CorrelationEnsemble::Gue,
        points: vec![c(0.0, 0.0)],
        n: 200,
    };
    assert!((rho_k(&req).unwrap() / 200.0 * PI - 1.0).abs() < 0.02);
    let bad = CorrelationRequest {
        ensemble: CorrelationEnsemble::Wishart { m: 20 },
        points: vec![c(1.0, 0.5)],
        n: 10,
    };
    assert!(rho_k(&bad).is_err());
}

#[test]
fn kernel_matrix_is_hermitian_psd() {
    let pts = vec![c(0.1, 0.2), c(-0.3, 0.05), c(0.4, -0.4), c(0.0, 0.7), c(0.25, 0.25)];
    let k = kernel_matrix(&CorrelationRequest::ginibre(pts, 40)).unwrap();
    assert!(k.hermitian_defect() < 1e-14);
    for omega in [vec![0], vec![1, 3], vec![0, 2, 4], vec![]] {
        assert!(fischer_check(&k, &omega).unwrap());
    }
}

#[test]
fn fischer_on_random_gram_matrices() {
    let mut rng = trial_rng(42);
    for t in 0..1000 {
        let k = 1 + t % 8;
        let r = 1 + (t / 8) % 8;
        let x = CMatrix::from_fn(k, r, |_, _| c(normal(&mut rng), normal(&mut rng)));
        let g = x.matmul(&x.conj_transpose());
        let g = CMatrix::from_fn(k, k, |i, j| if i <= j { g[(i, j)] } else { g[(j, i)].conj() });
        let omega: Vec<usize> = (0..k).filter(|i| (t >> i) & 1 == 1).collect();
        assert!(fischer_check(&g, &omega).unwrap(), "trial {t}");
    }
    let rows: Vec<Vec<f64>> = (0..6)
        .map(|i| (0..6).map(|j| 1.0 / (1.0 + (i as f64 - j as f64).abs())).collect())
        .collect();
    let m = CMatrix::from_real_rows(&rows);
    assert!(fischer_check(&m, &[0, 1, 2]).unwrap());
    assert!(fischer_check(&CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![1.0, 1.0]]), &[0]).is_err());
}

#[test]
fn second_factorial_moment_identity() {
    let n = 3;
    let region = Region::disk(c(0.0, 0.0), 0.6);
    let trials = 100_000;
    let vals: Vec<f64> = (0..trials)
        .map(|i| {
            let k = ginibre_spectrum(n, split_seed(8, i))
                .iter()
                .filter(|z| region.contains(**z))
                .count() as f64;
            k * (k - 1.0)
        })
        .collect();
    let mean = vals.iter().sum::<f64>() / trials as f64;
    let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0)).sqrt();
    let se = sd / (trials as f64).sqrt();
    let want = ginibre_factorial_moment(&region, n, 2, 40).unwrap();
    assert!((mean - want).abs() < 3.0 * se, "{mean} vs {want} (se {se})");
    let first = ginibre_factorial_moment(&region, n, 1, 40).unwrap();
    assert!(first > want.sqrt() * 0.5 && first < n as f64);
}

#[test]
fn pair_determinant_examples() {
    let n = 500;
    let u = (n as f64).powf(-4.0 / 3.0);
    let gue = pair_determinant_limit(0.0, u, n, PairEnsemble::Gue).unwrap();
    assert!((gue.ratio - 1.0).abs() < 0.05, "{gue:?}");
    assert!(pair_determinant_limit(0.0, u, 10, PairEnsemble::Wishart { m: 5 }).is_err());
}

#[test]
fn triple_cluster_examples() {
    let q = QuadratureSpec::default();
    let region = Region::disk(c(0.0, 0.0), 0.5);
    let e100 = triple_cluster_expectation(&region, 3.0, 100, Neighborhood::HalfDisk, &q).unwrap();
    let e200 = triple_cluster_expectation(&region, 3.0, 200, Neighborhood::HalfDisk, &q).unwrap();
    assert!(e200.value < e100.value);
    // Direct counts on sampled spectra.
    let n = 50;
    let r = 3.0 * (n as f64).powf(-0.75);
    let trials = 3000;
    let counts: Vec<f64> = (0..trials)
        .map(|i| {
            triple_cluster_count_in(
                &ginibre_spectrum(n, split_seed(12, i)),
                r,
                Neighborhood::HalfDisk,
                &region,
            )
            .unwrap() as f64
        })
        .collect();
    let mean = counts.iter().sum::<f64>() / trials as f64;
    let se = (counts.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0) / trials as f64).sqrt();
    let e = triple_cluster_expectation(&region, 3.0, n, Neighborhood::HalfDisk, &q).unwrap();
    let band = 3.0 * (se * se + e.std_error * e.std_error).sqrt();
    assert!((mean - e.value).abs() < band, "{mean} vs {} (band {band})", e.value);
}

#[test]
fn thinned_single_point() {
    let a = LengthSet::interval(0.0, 1.0);
    let q = QuadratureSpec::default();
    let t = thinned_correlation(&[c(0.1, 0.2)], 400, &a, 0, &q).unwrap();
    let lim = thinned_limit(&a);
    assert!((lim - 1.0 / (4.0 * PI)).abs() < 1e-15);
    assert!((t.partial_sums[0] / lim - 1.0).abs() < 0.05, "{t:?}");
    assert_eq!(t.partial_sums.len(), 2);
    assert!((t.partial_sums[0] - t.partial_sums[1]).abs() <= t.envelope);
    assert!(t.bracket.0 <= t.value && t.value <= t.bracket.1);
    let out = thinned_correlation(&[c(1.5, 0.0)], 400, &a, 0, &q).unwrap();
    assert!(out.value.abs() < 1e-12);
    let none = thinned_correlation(&[c(0.0, 0.0)], 400, &LengthSet::empty(), 0, &q).unwrap();
    assert_eq!(none.value, 0.0);
}

#[test]
fn thinned_pair_and_budget() {
    let a = LengthSet::interval(0.0, 1.0);
    let q = QuadratureSpec {
        nodes: 12,
        ..QuadratureSpec::default()
    };
    let t = thinned_correlation(&[c(-0.3, 0.0), c(0.3, 0.0)], 200, &a, 0, &q).unwrap();
    let single = |z| thinned_correlation(&[z], 200, &a, 0, &q).unwrap().partial_sums[0];
    let product = single(c(-0.3, 0.0)) * single(c(0.3, 0.0));
    assert!((t.partial_sums[0] / product - 1.0).abs() < 0.01);
    let five: Vec<Complex64> = (0..5).map(|i| c(-0.8 + 0.4 * i as f64, 0.0)).collect();
    assert!(thinned_correlation(&five, 200, &a, 2, &q).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rho_symmetric_and_nonnegative(
        pts in prop::collection::vec((-1.2f64..1.2, -1.2f64..1.2), 1..6),
        n in 2usize..80,
        rot in 0usize..6,
    ) {
        let zs: Vec<Complex64> = pts.iter().map(|&(x, y)| c(x, y)).collect();
        let mut perm = zs.clone();
        perm.rotate_left(rot % zs.len());
        perm.reverse();
        let a = rho_k(&CorrelationRequest::ginibre(zs, n)).unwrap();
        let b = rho_k(&CorrelationRequest::ginibre(perm, n)).unwrap();
        prop_assert!(a >= 0.0 && b >= 0.0);
        prop_assert!((a - b).abs() <= 1e-9 * a.max(b).max(1e-300));
    }
}
