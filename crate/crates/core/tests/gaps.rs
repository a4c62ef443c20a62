use gaplab::eigensolver::Spectrum;
use gaplab::gaps::*;
use gaplab::kernel::DensityFn;
use gaplab::region::{LengthSet, Region};
use gaplab::rng::{trial_rng, uniform};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_points(seed: u64, n: usize) -> Vec<Complex64> {
    let mut rng = trial_rng(seed);
    (0..n)
        .map(|_| c(uniform(&mut rng) * 2.0 - 1.0, uniform(&mut rng) * 2.0 - 1.0))
        .collect()
}

#[test]
fn lex_order_examples() {
    assert!(lex_less(c(1.0, 0.0), c(0.0, 1.0)));
    assert!(!lex_less(c(0.3, 0.3), c(0.3, 0.3)));
    assert!(lex_less(c(0.0, 0.0), c(1.0, 0.0)));
}

#[test]
fn successor_examples() {
    let real = Spectrum::real(vec![0.0, 0.1, 0.25]);
    let g = successor_gaps(&real).unwrap();
    let lengths: Vec<f64> = g.iter().map(|r| r.length).collect();
    assert!((lengths[0] - 0.1).abs() < 1e-15 && (lengths[1] - 0.15).abs() < 1e-15);
    assert_eq!(g[0].base, c(0.0, 0.0));
    assert_eq!(g[1].base, c(0.1, 0.0));
    let vertical = successor_gaps_of(&[c(0.0, 0.0), c(0.0, 1.0), c(0.0, 3.0)]).unwrap();
    let mut l: Vec<f64> = vertical.iter().map(|r| r.length).collect();
    l.sort_by(f64::total_cmp);
    assert_eq!(l, vec![1.0, 2.0]);
}

#[test]
fn repeated_eigenvalues_give_zero_gaps() {
    let g = successor_gaps_of(&[c(0.5, 0.5), c(0.5, 0.5), c(1.0, 0.0)]).unwrap();
    assert!(g.iter().any(|r| r.length == 0.0));
}

#[test]
fn consecutive_examples() {
    let s = Spectrum::real(vec![1.0, 2.0, 4.0]);
    let all: Vec<f64> = consecutive_gaps(&s, (0.0, 10.0))
        .unwrap()
        .iter()
        .map(|g| g.length)
        .collect();
    assert_eq!(all, vec![1.0, 2.0]);
    let win = consecutive_gaps(&s, (1.5, 3.0)).unwrap();
    assert_eq!(win.len(), 1);
    assert_eq!(win[0].length, 2.0);
    assert_eq!(win[0].base, c(2.0, 0.0));
    assert!(consecutive_gaps(&s, (5.0, 6.0)).unwrap().is_empty());
    assert!(consecutive_gaps(&Spectrum::complex(vec![c(0.0, 1.0), c(1.0, 0.0)]), (0.0, 1.0)).is_err());
}

#[test]
fn marchenko_pastur_window() {
    let (a, b) = DensityFn::marchenko_pastur(4.0).unwrap().support();
    assert!((a + 0.05 - 0.3).abs() < 1e-15);
    assert!((b - 0.05 - 2.2).abs() < 1e-15);
}

#[test]
fn unordered_pair_example() {
    let s = Spectrum::real(vec![0.0, 1.0, 1.5, 3.5]);
    let st = k_smallest_gaps(&s, 2, GapMode::UnorderedPair, None).unwrap();
    assert_eq!(st.raw, vec![0.5, 1.0]);
    assert!(k_smallest_gaps(&s, 7, GapMode::UnorderedPair, None).is_err());
    assert!(k_smallest_gaps(&s, 4, GapMode::Successor, None).is_err());
}

#[test]
fn smallest_successor_matches_brute_force() {
    for seed in 0..1000 {
        let v = random_points(seed, 30);
        let s = Spectrum::complex(v.clone());
        let succ = k_smallest_gaps(&s, 1, GapMode::Successor, None).unwrap().raw[0];
        let pair = k_smallest_gaps(&s, 1, GapMode::UnorderedPair, None).unwrap().raw[0];
        let brute = brute_force_pair_lengths(&v, &Region::Plane)[0];
        assert_eq!(succ, pair);
        assert_eq!(pair, brute);
    }
}

#[test]
fn hundred_point_successor_min() {
    let v = random_points(77, 100);
    let min_succ = successor_gaps_of(&v)
        .unwrap()
        .iter()
        .map(|g| g.length)
        .fold(f64::INFINITY, f64::min);
    let mut min_pair = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            min_pair = min_pair.min((v[i] - v[j]).norm());
        }
    }
    assert_eq!(min_succ, min_pair);
}

#[test]
fn count_examples() {
    let v = random_points(5, 40);
    let records = successor_gaps_of(&v).unwrap();
    let id = Scaling::identity(40);
    assert_eq!(count_in_region(&records, &id, &LengthSet::empty(), &Region::Plane), 0);
    let everything = LengthSet::interval(-1.0, f64::INFINITY);
    assert_eq!(count_in_region(&records, &id, &everything, &Region::Plane), 39);
    let a1 = LengthSet::interval(0.0, 0.1);
    let a2 = LengthSet::interval(0.1, 0.3);
    let both = LengthSet {
        intervals: vec![(0.0, 0.1), (0.1, 0.3)],
    };
    let n1 = count_in_region(&records, &id, &a1, &Region::Plane);
    let n2 = count_in_region(&records, &id, &a2, &Region::Plane);
    assert_eq!(count_in_region(&records, &id, &both, &Region::Plane), n1 + n2);
}

#[test]
fn rescaling_examples() {
    let s = Spectrum::complex(random_points(9, 20));
    let st = k_smallest_gaps(&s, 3, GapMode::Successor, None).unwrap();
    let same = rescale_gaps(
        &st,
        &ScalingRule::Custom {
            constant: 1.0,
            exponent: 0.0,
        },
        20,
    )
    .unwrap();
    assert_eq!(same.scaled, st.raw);
    let pq = rescale_gaps(&st, &ScalingRule::Ginibre(GinibreConstant::PiQuarter), 20).unwrap();
    let want = 20f64.powf(0.75) * (std::f64::consts::PI / 4.0).powf(0.25);
    for (t, tau) in st.raw.iter().zip(&pq.scaled) {
        assert!((tau / t - want).abs() < 1e-12 * want);
    }
    assert!((GinibreConstant::Quarter.value() - 0.5f64.sqrt()).abs() < 1e-15);

    // Wishart beta=1, I=(0.5,1.5): c = (pi^2/9 int g^4)^{1/3} by an
    // independent trapezoid rule.
    let g = DensityFn::marchenko_pastur(1.0).unwrap();
    let steps = 200_000;
    let h = 1.0 / steps as f64;
    let mut i4 = 0.0;
    for k in 0..=steps {
        let x = 0.5 + k as f64 * h;
        let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
        i4 += w * g.eval(x).powi(4) * h;
    }
    let want_c = (std::f64::consts::PI.powi(2) / 9.0 * i4).cbrt();
    let sc = ScalingRule::Wishart {
        beta: 1.0,
        window: (0.5, 1.5),
    }
    .scaling(100)
    .unwrap();
    assert!((sc.constant - want_c).abs() < 1e-9 * want_c);
    assert_eq!(sc.exponent, 4.0 / 3.0);
    assert!(ScalingRule::Wishart {
        beta: 0.5,
        window: (0.5, 1.5)
    }
    .scaling(100)
    .is_err());
}

#[test]
fn cluster_examples() {
    let line = Spectrum::complex(vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
    assert_eq!(triple_cluster_count(&line, 0.5).unwrap(), 0);
    let tight = Spectrum::complex(vec![c(0.0, 0.0), c(0.1, 0.0), c(0.0, 0.1)]);
    assert_eq!(triple_cluster_count(&tight, 0.5).unwrap(), 6);
    assert!(triple_cluster_count(&tight, 0.0).is_err());
}

#[test]
fn cluster_count_matches_brute_force() {
    let v = random_points(31, 60);
    let r = 0.2;
    let mut brute = 0u64;
    for i in 0..v.len() {
        for j in 0..v.len() {
            for k in 0..v.len() {
                if i != j && j != k && i != k && (v[j] - v[i]).norm() <= r && (v[k] - v[i]).norm() <= r {
                    brute += 1;
                }
            }
        }
    }
    assert_eq!(triple_cluster_count(&Spectrum::complex(v), r).unwrap(), brute);
}

fn arb_point() -> impl Strategy<Value = Complex64> {
    // Small grid so that ties in each coordinate actually occur.
    (-3i32..3, -3i32..3).prop_map(|(a, b)| c(a as f64 * 0.5, b as f64 * 0.5))
}

proptest! {
    #[test]
    fn lex_is_strict_total_order(a in arb_point(), b in arb_point(), d in arb_point()) {
        let states = [lex_less(a, b), lex_less(b, a), a == b];
        prop_assert_eq!(states.iter().filter(|s| **s).count(), 1);
        if lex_less(a, b) && lex_less(b, d) {
            prop_assert!(lex_less(a, d));
        }
    }

    #[test]
    fn real_successor_is_consecutive(mut xs in prop::collection::vec(-10.0f64..10.0, 2..40)) {
        xs.sort_by(f64::total_cmp);
        let s = Spectrum::real(xs.clone());
        let mut succ: Vec<f64> = successor_gaps(&s).unwrap().iter().map(|g| g.length).collect();
        let mut cons: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        succ.sort_by(f64::total_cmp);
        cons.sort_by(f64::total_cmp);
        prop_assert_eq!(succ, cons);
    }

    #[test]
    fn pair_gaps_dominated_by_successor(seed in 0u64..10_000, n in 4usize..40, k in 1usize..4) {
        let s = Spectrum::complex(random_points(seed, n));
        let pair = k_smallest_gaps(&s, k, GapMode::UnorderedPair, None).unwrap().raw;
        let succ = k_smallest_gaps(&s, k, GapMode::Successor, None).unwrap().raw;
        prop_assert_eq!(pair[0], succ[0]);
        for (t, tt) in pair.iter().zip(&succ) {
            prop_assert!(t <= tt);
        }
    }

    #[test]
    fn pair_sweep_matches_brute_force(seed in 0u64..10_000, n in 2usize..50, k in 1usize..6) {
        let v = random_points(seed, n);
        let region = Region::disk(c(0.0, 0.0), 0.8);
        let sweep: Vec<f64> = smallest_pair_gaps(&v, k, &region).iter().map(|g| g.length).collect();
        let brute = brute_force_pair_lengths(&v, &region);
        let m = k.min(brute.len());
        prop_assert_eq!(&sweep[..], &brute[..m]);
    }

    #[test]
    fn scaled_is_increasing(seed in 0u64..1000, constant in 0.1f64..3.0, exponent in 0.0f64..2.0) {
        let s = Spectrum::complex(random_points(seed, 20));
        let st = k_smallest_gaps(&s, 5, GapMode::Successor, None).unwrap();
        let r = rescale_gaps(&st, &ScalingRule::Custom { constant, exponent }, 20).unwrap();
        for w in r.raw.windows(2).zip(r.scaled.windows(2)) {
            prop_assert!((w.0[0] < w.0[1]) == (w.1[0] < w.1[1]));
        }
    }

    #[test]
    fn counts_monotone(seed in 0u64..1000, s1 in 0.0f64..0.5, s2 in 0.0f64..0.5, r1 in 0.1f64..1.5, r2 in 0.1f64..1.5) {
        let v = random_points(seed, 50);
        let rec = successor_gaps_of(&v).unwrap();
        let id = Scaling::identity(50);
        let (sa, sb) = (s1.min(s2), s1.max(s2));
        let (ra, rb) = (r1.min(r2), r1.max(r2));
        let d = |r: f64| Region::disk(c(0.0, 0.0), r);
        prop_assert!(count_in_region(&rec, &id, &LengthSet::interval(0.0, sa), &d(rb))
            <= count_in_region(&rec, &id, &LengthSet::interval(0.0, sb), &d(rb)));
        prop_assert!(count_in_region(&rec, &id, &LengthSet::interval(0.0, sb), &d(ra))
            <= count_in_region(&rec, &id, &LengthSet::interval(0.0, sb), &d(rb)));
    }
}
