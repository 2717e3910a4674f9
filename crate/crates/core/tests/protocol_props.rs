mod common;

use common::*;
use proptest::prelude::*;
use qactivation::measures::{negativity, Bipartition};
use qactivation::protocol::{
    bloch_vector, cnot_bm, premeasurement, premeasurement_with_unitary, u_b, WaveplateSetting,
    PHI_PERIOD, THETA_PERIOD,
};
use qactivation::qcore::eigen::is_unitary;
use qactivation::qcore::{chi_q, ComplexMatrix, C64};

fn setting() -> impl Strategy<Value = WaveplateSetting> {
    (0.0..=THETA_PERIOD, 0.0..=PHI_PERIOD).prop_map(|(t, p)| WaveplateSetting::new(t, p).unwrap())
}

proptest! {
    #[test]
    fn unitarity(s in setting()) {
        prop_assert!(is_unitary(&u_b(&s), 1e-12));
        prop_assert!(is_unitary(&cnot_bm(), 1e-12));
    }

    #[test]
    fn bloch_vector_unit(s in setting()) {
        prop_assert!((bloch_vector(&s).norm() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn trace_preserved(s in setting(), seed in any::<u64>(), q in 0.0f64..=1.0) {
        let rho = premeasurement(&random_density(2, &mut rng(seed)), &s).unwrap();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-10);
        let rho = premeasurement(&chi_q(q).unwrap(), &s).unwrap();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn phase_convention_invariance(s in setting(), q in 0.0f64..=1.0, a in 0.0f64..6.3, b in 0.0f64..6.3) {
        let chi = chi_q(q).unwrap();
        let phases = ComplexMatrix::from_rows(&[
            vec![C64::from_polar(1.0, a), C64::new(0.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::from_polar(1.0, b)],
        ]).unwrap();
        let plain = negativity(&premeasurement(&chi, &s).unwrap(), &Bipartition::ab_m()).unwrap();
        let shifted = premeasurement_with_unitary(&chi, &(&phases * &u_b(&s))).unwrap();
        let shifted = negativity(&shifted, &Bipartition::ab_m()).unwrap();
        prop_assert!((plain - shifted).abs() <= 1e-10);
    }

    #[test]
    fn setting_serde_round_trip(s in setting()) {
        let json = serde_json::to_string(&s).unwrap();
        let back: WaveplateSetting = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn out_of_range_angles_reduce(t in -10.0f64..10.0, p in -10.0f64..10.0) {
        let s = WaveplateSetting::new(t, p).unwrap();
        prop_assert!((0.0..=THETA_PERIOD).contains(&s.theta()));
        prop_assert!((0.0..=PHI_PERIOD).contains(&s.phi()));
    }
}
