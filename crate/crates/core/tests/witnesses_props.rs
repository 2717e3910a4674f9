mod common;

use std::f64::consts::FRAC_PI_4;

use common::*;
use proptest::prelude::*;
use qactivation::protocol::{premeasurement, WaveplateSetting};
use qactivation::qcore::{chi_q, pauli_sum};
use qactivation::witnesses::{expect, w2, w3};

#[test]
fn w2_nonnegative_on_separable_states() {
    let w = w2();
    let mut r = rng(2024);
    for i in 0..1000 {
        let sigma = random_separable(1 + i % 4, &mut r);
        assert!(expect(&w, &sigma).unwrap() >= -1e-10);
    }
}

#[test]
fn detection_threshold() {
    let w = w2();
    for i in 0..=200 {
        let q = i as f64 / 200.0;
        let e = expect(&w, &chi_q(q).unwrap()).unwrap();
        if q > 0.5 + 1e-10 {
            assert!(e < 0.0, "q={q}");
        } else {
            assert!(e >= -1e-10, "q={q}");
        }
    }
}

#[test]
fn decomposition_fidelity() {
    for w in [w2(), w3()] {
        assert!(w.matrix.hermitian_deviation() <= 1e-12);
        assert!(pauli_sum(&w.pauli_terms).unwrap().max_abs_diff(&w.matrix) <= 1e-10);
    }
}

proptest! {
    #[test]
    fn expect_is_linear(seed in any::<u64>(), t in 0.0f64..=1.0, n in 2usize..=3) {
        let w = if n == 2 { w2() } else { w3() };
        let mut r = rng(seed);
        let (a, b) = (random_density(n, &mut r), random_density(n, &mut r));
        let mix = a.mix(&b, t).unwrap();
        let lhs = expect(&w, &mix).unwrap();
        let rhs = t * expect(&w, &a).unwrap() + (1.0 - t) * expect(&w, &b).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn witnesses_coincide_on_protocol_states(q in 0.0f64..=1.0) {
        let s = WaveplateSetting::new(FRAC_PI_4, 0.0).unwrap();
        let e2 = expect(&w2(), &chi_q(q).unwrap()).unwrap();
        let e3 = expect(&w3(), &premeasurement(&chi_q(q).unwrap(), &s).unwrap()).unwrap();
        prop_assert!((e2 - (0.5 - q)).abs() <= 1e-9);
        prop_assert!((e3 - (0.5 - q)).abs() <= 1e-9);
    }
}
