use proptest::prelude::*;

use dimless::prelude::*;
use dimless::report::format_number;

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quantum_moments_are_consistent(f in family(), b in 1u32..=10, n in 0usize..=6) {
        let spec = PotentialSpec::new(f, b as i64).unwrap();
        let sp = solve(&spec, 6, &SolverConfig::default()).unwrap();
        let r = uncertainty_product(&spec, &sp, n).unwrap();
        let q = r.quantum;
        prop_assert!(q.x2 >= 0.0 && q.p2 >= 0.0);
        prop_assert!(q.x_mean.abs() <= q.x2.sqrt());
        prop_assert!(q.p_mean.abs() < 1e-10);
        prop_assert!(r.product_qm() > 0.0);
        let frame = dimensionless_frame(&spec, q.frame.energy).unwrap();
        let st = sp.state(n).unwrap();
        let kinetic = momentum_second_moment(&st, &spec, sp.grid(), &frame, MomentumRoute::Kinetic).unwrap();
        let derivative = momentum_second_moment(&st, &spec, sp.grid(), &frame, MomentumRoute::Derivative).unwrap();
        prop_assert!((kinetic - derivative).abs() <= 1e-4 * kinetic);
        // tails beyond the turning point exist but stay modest
        let x4 = position_moment(&st, sp.grid(), &frame, 4).unwrap();
        prop_assert!(x4 >= q.x2 * q.x2 - 1e-12);
    }

    #[test]
    fn classical_products_are_scale_free(f in family(), b in 1u32..=10, e in 0.05f64..50.0) {
        let spec = PotentialSpec::new(f, b as i64).unwrap();
        let a = classical_dispersion_product(&spec, e).unwrap();
        let c = classical_dispersion_product(&spec, 2.0 * e).unwrap();
        prop_assert!((a.product() - c.product()).abs() < 1e-10);
        prop_assert!((a.x2 - c.x2).abs() < 1e-10);
    }

    #[test]
    fn classical_virial(b in 1u32..=10, e in 0.1f64..10.0) {
        let spec = PotentialSpec::symmetric_power(b).unwrap();
        let m = classical_dispersion_product(&spec, e).unwrap();
        let xb = classical_average(&spec, e, |x, _| x.abs().powi(b as i32)).unwrap();
        prop_assert!((m.p2 - (1.0 - xb)).abs() < 1e-9);
        prop_assert!((m.p2 - b as f64 / (b as f64 + 2.0)).abs() < 1e-8);
    }

    #[test]
    fn frames_round_trip(f in family(), b in 1u32..=16, e in 1e-3f64..1e3) {
        let spec = PotentialSpec::new(f, b as i64).unwrap();
        let frame = dimensionless_frame(&spec, e).unwrap();
        prop_assert!((frame.p_max * frame.p_max / 2.0 - e).abs() <= 1e-12 * e);
        if f.is_power() {
            prop_assert!(((spec.evaluate(frame.x_max) - e) / e).abs() < 1e-12);
        }
    }

    #[test]
    fn formatted_numbers_round_trip(v in prop::num::f64::NORMAL) {
        let back: f64 = format_number(v).parse().unwrap();
        prop_assert!(((back - v) / v).abs() < 5e-12);
    }
}
