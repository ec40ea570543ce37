use proptest::prelude::*;

use rodeo_core::engine::{rodeo_kernel, RodeoRun};
use rodeo_core::ensemble::{gaussian_transfer, relative_difference, variance_profile};
use rodeo_core::hamiltonians::{decode_config, encode_config, ising_diagonal, Spin};
use rodeo_core::qudit::{tensor, StateVector};
use rodeo_core::Complex64;

fn state(dim: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("non-zero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(|v| {
            let amps: Vec<Complex64> = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            StateVector::from_amplitudes(amps.into_iter().map(|z| z / n).collect()).unwrap()
        })
}

fn spin() -> impl Strategy<Value = Spin> {
    prop_oneof![Just(Spin::Half), Just(Spin::One)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuit_preserves_norm(psi in state(8), d in 2usize..=5, e in -6.0f64..6.0, t in -20.0f64..20.0) {
        let h = ising_diagonal(Spin::Half, 3, 1.0).unwrap();
        let out = RodeoRun::new(d, &h, &psi, e, t).unwrap().run_circuit().unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tensor_is_associative(a in state(2), b in state(3), c in state(2)) {
        let l = tensor(&tensor(&a, &b), &c);
        let r = tensor(&a, &tensor(&b, &c));
        for (x, y) in l.amplitudes().iter().zip(r.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn kernel_is_bounded(d in 2usize..=8, w in -10.0f64..10.0, t in -50.0f64..50.0) {
        prop_assert!(rodeo_kernel(d, w, t).unwrap().norm() <= 1.0 + 1e-12);
        prop_assert_eq!(rodeo_kernel(d, 0.0, t).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn relative_difference_is_bounded(d in 2usize..=10, e in -10.0f64..10.0, ex in -10.0f64..10.0, sigma in 0.1f64..20.0) {
        let r = relative_difference(d, e, ex, sigma).unwrap();
        prop_assert!(r >= 0.0 && r <= 1.0 / d as f64);
        let g2 = gaussian_transfer(2, ex - e, sigma, 0.0).unwrap().re;
        let gd = gaussian_transfer(d, ex - e, sigma, 0.0).unwrap().re;
        prop_assert!(g2 >= gd - 1e-15);
    }

    #[test]
    fn variances_are_bounded(d in 2usize..=8, w in -5.0f64..5.0, sigma in 0.1f64..10.0) {
        let (re, im) = variance_profile(d, w, sigma).unwrap();
        prop_assert!(re >= 0.0 && im >= 0.0);
        prop_assert!(re + im <= 1.0 + 1e-12);
    }

    #[test]
    fn ising_spectrum_symmetries(s in spin(), n in 2usize..=6, x in 0usize..729) {
        let h = ising_diagonal(s, n, 1.0).unwrap();
        let dim = h.dim();
        let x = x % dim;
        let local = s.local_dim();
        let cfg = decode_config(x, local, n).unwrap();
        let flipped: Vec<f64> = cfg.iter().map(|m| -m).collect();
        prop_assert_eq!(h.energy(encode_config(&flipped, local).unwrap()), h.energy(x));
        let mut rotated = cfg.clone();
        rotated.rotate_left(1);
        prop_assert_eq!(h.energy(encode_config(&rotated, local).unwrap()), h.energy(x));
        prop_assert!(h.energy(x).abs() <= n as f64);
    }
}
