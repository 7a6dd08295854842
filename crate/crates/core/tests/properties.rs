//! Randomized invariants over seeds, dimensions and exponents.

use kappa_core::matcore::random::{random_psd_with, random_unitary, stream_rng};
use kappa_core::means::{d_p, kappa_trace};
use kappa_core::verify::{check_trace_inequality, check_triangle};
use kappa_core::PsdMatrix;
use proptest::prelude::*;

fn pair(seed: u64, dim: usize) -> (PsdMatrix<f64>, PsdMatrix<f64>) {
    let mut rng = stream_rng(seed, 0);
    (random_psd_with(dim, 1.0, &mut rng).unwrap(), random_psd_with(dim, 1.0, &mut rng).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trace_of_mean_is_symmetric(seed in any::<u64>(), dim in 2usize..6, p in 0.1f64..20.0) {
        let (a, b) = pair(seed, dim);
        let ab = kappa_trace(&a, &b, p).unwrap();
        let ba = kappa_trace(&b, &a, p).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-10 * ab.abs().max(1.0));
    }

    #[test]
    fn distance_is_unitarily_invariant(seed in any::<u64>(), dim in 2usize..6, p in 0.1f64..10.0) {
        let (a, b) = pair(seed, dim);
        let u = random_unitary::<f64, _>(dim, &mut stream_rng(seed, 1));
        let d = d_p(&a, &b, p).unwrap().d;
        let du = d_p(&a.unitary_congruence(&u).unwrap(), &b.unitary_congruence(&u).unwrap(), p).unwrap().d;
        prop_assert!((d - du).abs() <= 1e-8 * d.max(1.0));
    }

    #[test]
    fn distance_is_homogeneous(seed in any::<u64>(), dim in 2usize..5, p in 0.1f64..10.0, t in 0.1f64..10.0) {
        let (a, b) = pair(seed, dim);
        let d = d_p(&a, &b, p).unwrap().d;
        let dt = d_p(&a.scaled(t).unwrap(), &b.scaled(t).unwrap(), p).unwrap().d;
        prop_assert!((dt - t.sqrt() * d).abs() <= 1e-8 * dt.max(1.0));
    }

    #[test]
    fn trace_chain_holds(seed in any::<u64>(), dim in 2usize..7, p in 0.05f64..60.0) {
        let (a, b) = pair(seed, dim);
        let r = check_trace_inequality(&a, &b, p).unwrap();
        prop_assert!(r.passed, "{:?}", r);
    }

    #[test]
    fn hellinger_and_bures_satisfy_triangle(seed in any::<u64>(), dim in 2usize..5, p in prop::sample::select(vec![1.0f64, 2.0])) {
        let mut rng = stream_rng(seed, 0);
        let a: PsdMatrix<f64> = random_psd_with(dim, 1.0, &mut rng).unwrap();
        let b = random_psd_with(dim, 1.0, &mut rng).unwrap();
        let c = random_psd_with(dim, 1.0, &mut rng).unwrap();
        prop_assert!(check_triangle(&a, &b, &c, p).unwrap() >= -1e-9);
    }
}
