use gaplab::eigensolver::{
    eigvals_general, eigvals_hermitian, general_tolerance, hermitian_tolerance, singular_values, wishart_eigenvalues,
    CMatrix, SpectrumKind,
};
use gaplab::sampler::{sample_ginibre, sample_gue, sample_wishart_factor};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn to_na(a: &CMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

fn smallest_singular(a: &DMatrix<Complex64>) -> f64 {
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Greedy matching of two multisets; returns the largest matched distance.
fn match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for &x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, &y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

#[test]
fn triangular_and_companion() {
    let d = CMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)]);
    let s = eigvals_general(&d).unwrap();
    assert_eq!(s.kind(), SpectrumKind::ComplexPlane);
    assert!(match_distance(s.values(), &[c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)]) < 1e-14);
    let comp = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
    let s = eigvals_general(&comp).unwrap();
    assert!(match_distance(s.values(), &[c(1.0, 0.0), c(-1.0, 0.0)]) < 1e-12);
}

#[test]
fn ginibre_matches_nalgebra_schur() {
    for seed in 0..5 {
        let a = sample_ginibre(40, seed).unwrap().matrix.unwrap();
        let ours = eigvals_general(&a).unwrap();
        let theirs = nalgebra::linalg::Schur::new(to_na(&a)).eigenvalues().unwrap();
        let theirs: Vec<Complex64> = theirs.iter().cloned().collect();
        assert!(match_distance(ours.values(), &theirs) < 1e-10, "seed {seed}");
    }
}

#[test]
fn residual_contract_general() {
    let n = 50;
    let a = sample_ginibre(n, 3).unwrap().matrix.unwrap();
    let s = eigvals_general(&a).unwrap();
    let na = to_na(&a);
    let norm = a.frobenius_norm();
    let tol = general_tolerance(n);
    assert!(s.backward_error <= tol);
    for &l in s.values() {
        let shifted = &na - DMatrix::from_diagonal_element(n, n, l);
        assert!(smallest_singular(&shifted) <= tol * norm, "lambda {l}");
    }
    assert!((s.sum() - a.trace()).norm() <= tol * norm);
}

#[test]
fn product_is_determinant() {
    let a = sample_ginibre(8, 11).unwrap().matrix.unwrap();
    let s = eigvals_general(&a).unwrap();
    let prod: f64 = s.values().iter().map(|z| z.norm()).product();
    let det = to_na(&a).determinant().norm();
    assert!((prod - det).abs() <= 1e-10 * det.max(1e-300));
}

#[test]
fn hermitian_examples() {
    let d = CMatrix::from_real_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 2.0]]);
    assert_eq!(eigvals_hermitian(&d).unwrap().reals(), vec![1.0, 2.0, 3.0]);
    let x = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
    let v = eigvals_hermitian(&x).unwrap().reals();
    assert!((v[0] + 1.0).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
    let bad = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]);
    assert!(eigvals_hermitian(&bad).is_err());
}

#[test]
fn gue_trace_and_oracle() {
    let n = 100;
    let h = sample_gue(n, 5).unwrap().matrix.unwrap();
    let s = eigvals_hermitian(&h).unwrap();
    let v = s.reals();
    assert!(v.windows(2).all(|w| w[0] <= w[1]));
    let norm = h.frobenius_norm();
    assert!((s.sum().re - h.trace().re).abs() <= 1e-10 * norm);
    assert!(s.backward_error <= hermitian_tolerance(n));
    let mut theirs: Vec<f64> = to_na(&h).symmetric_eigenvalues().iter().cloned().collect();
    theirs.sort_by(f64::total_cmp);
    for (a, b) in v.iter().zip(&theirs) {
        assert!((a - b).abs() < 1e-11);
    }
}

#[test]
fn singular_value_examples() {
    let id = CMatrix::identity(4);
    assert!(singular_values(&id).unwrap().iter().all(|s| (s - 1.0).abs() < 1e-15));
    let x = CMatrix::from_real_rows(&[vec![3.0, 0.0], vec![0.0, 4.0], vec![0.0, 0.0]]);
    let s = singular_values(&x).unwrap();
    assert!((s[0] - 4.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
    let wide = CMatrix::zeros(2, 3);
    assert!(singular_values(&wide).is_err());
}

#[test]
fn singular_values_match_gram_eigenvalues() {
    let x = sample_wishart_factor(40, 20, 9).unwrap().matrix.unwrap();
    let mut s2: Vec<f64> = singular_values(&x).unwrap().iter().map(|s| s * s).collect();
    s2.sort_by(f64::total_cmp);
    let gram = x.conj_transpose().matmul(&x);
    let e = eigvals_hermitian(&gram).unwrap().reals();
    for (a, b) in s2.iter().zip(&e) {
        assert!((a - b).abs() <= 1e-10 * b.abs());
    }
    let w = wishart_eigenvalues(&x).unwrap().reals();
    for (a, b) in w.iter().zip(&e) {
        assert!((a - b / 40.0).abs() <= 1e-10 * b.abs());
    }
}

#[test]
fn square_wishart_is_nonnegative() {
    for seed in 0..10 {
        let x = sample_wishart_factor(6, 6, seed).unwrap().matrix.unwrap();
        assert!(wishart_eigenvalues(&x).unwrap().reals()[0] >= 0.0);
    }
    // m = n = 2: eigenvalues of X*X/m are squared singular values of X/sqrt(m).
    let x = sample_wishart_factor(2, 2, 4).unwrap().matrix.unwrap();
    let mut scaled = x.clone();
    scaled.scale(0.5f64.sqrt());
    let mut s2: Vec<f64> = singular_values(&scaled).unwrap().iter().map(|s| s * s).collect();
    s2.sort_by(f64::total_cmp);
    let gram = x.conj_transpose().matmul(&x);
    let e = eigvals_hermitian(&gram).unwrap().reals();
    for (a, b) in s2.iter().zip(&e) {
        assert!((a - b / 2.0).abs() < 1e-12);
    }
}

fn unitary_permutation(n: usize, perm: &[usize]) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| if perm[i] == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn permutation_similarity_preserves_spectrum(seed in 0u64..1000, shift in 0usize..7) {
        let n = 7;
        let a = sample_ginibre(n, seed).unwrap().matrix.unwrap();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let p = unitary_permutation(n, &perm);
        let b = p.matmul(&a).matmul(&p.conj_transpose());
        let sa = eigvals_general(&a).unwrap();
        let sb = eigvals_general(&b).unwrap();
        prop_assert!(match_distance(sa.values(), sb.values()) < 1e-10);
    }

    #[test]
    fn hermitian_trace_identity(seed in 0u64..1000, n in 2usize..30) {
        let h = sample_gue(n, seed).unwrap().matrix.unwrap();
        let s = eigvals_hermitian(&h).unwrap();
        prop_assert_eq!(s.len(), n);
        prop_assert!((s.sum().re - h.trace().re).abs() <= 1e-10 * h.frobenius_norm().max(1.0));
    }
}
