use proptest::prelude::*;
use qshear_core::qseries::TruncatedSeries;
use qshear_core::{
    combine, preset, q_factorial, q_number, q_shear, CombinationSpec, Complex64, HarmonicMap, Preset, QParam,
    ShearConvention,
};

fn series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), order + 1).prop_map(|pairs| {
        TruncatedSeries::new(pairs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
    })
}

fn proper_q() -> impl Strategy<Value = QParam> {
    (0.01f64..0.99).prop_map(|v| QParam::new(v).unwrap())
}

fn disk_point(r_max: f64) -> impl Strategy<Value = Complex64> {
    (0.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(move |(u, a)| Complex64::from_polar(r_max * u.sqrt(), a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_inverts_integral(s in series(32), q in proper_q()) {
        let back = s.q_integrate(q).q_derivative(q);
        prop_assert!(back.max_abs_diff(&s) <= 1e-12 * s.max_abs_coeff().max(1.0));
    }

    #[test]
    fn derivative_is_linear(a in series(24), b in series(24), q in proper_q(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let c = Complex64::new(re, im);
        let lhs = (&a.scale(c) + &b).q_derivative(q);
        let rhs = &a.q_derivative(q).scale(c) + &b.q_derivative(q);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * 24.0 * 3.0);
    }

    #[test]
    fn q_product_rule(a in series(24), b in series(24), q in proper_q()) {
        // D(ab)(z) = a(qz) Db(z) + Da(z) b(z), exact below the truncation order
        let lhs = (&a * &b).q_derivative(q).resized(23);
        let shifted = a.scale_argument(Complex64::new(q.value(), 0.0));
        let rhs = (&(&shifted * &b.q_derivative(q)) + &(&a.q_derivative(q) * &b)).resized(23);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10);
    }

    #[test]
    fn division_inverts_product(a in series(24), b in series(24)) {
        let mut coeffs = b.coeffs().to_vec();
        coeffs[0] = Complex64::new(2.0, 0.5);
        let b = TruncatedSeries::new(coeffs).unwrap();
        let back = &a.checked_div(&b).unwrap() * &b;
        prop_assert!(back.max_abs_diff(&a) <= 1e-9);
    }

    #[test]
    fn pointwise_difference_quotient(s in series(32), q in proper_q(), z in disk_point(0.9)) {
        prop_assume!(z.norm() > 1e-3);
        let via_coeffs = s.q_derivative(q).eval(z);
        prop_assert!((via_coeffs - s.q_derivative_at(z, q)).norm() <= 1e-9 + 1e-13 / (1.0 - q.value()) / z.norm());
    }

    #[test]
    fn argument_scaling_matches_evaluation(s in series(20), z in disk_point(0.8), re in -1.0f64..1.0, im in -1.0f64..1.0) {
        let c = Complex64::new(re, im);
        prop_assert!((s.scale_argument(c).eval(z) - s.eval(c * z)).norm() <= 1e-12);
    }

    #[test]
    fn shear_recombines_and_carries_dilatation(
        q in proper_q(),
        w1 in -0.4f64..0.4,
        w2 in -0.4f64..0.4,
        plus in any::<bool>(),
        z in disk_point(0.6),
    ) {
        let order = 256;
        let convention = if plus { ShearConvention::Plus } else { ShearConvention::Minus };
        let f = TruncatedSeries::from_real(&[0.0, 1.0, 0.3, -0.1]).unwrap().resized(order);
        let omega = TruncatedSeries::from_real(&[0.0, w1, w2]).unwrap().resized(order);
        let map = q_shear(&f, &omega, q, convention).unwrap().map;
        let recombined = match convention {
            ShearConvention::Minus => map.h() - map.g(),
            ShearConvention::Plus => map.h() + map.g(),
        };
        prop_assert!(recombined.max_abs_diff(&f) <= 1e-10);
        prop_assert!(map.h().coeff(0).norm() <= 1e-15 && map.g().coeff(0).norm() <= 1e-15);
        prop_assert!((map.h().coeff(1) - 1.0).norm() <= 1e-12);
        let dil = map.dilatation().unwrap().eval(z).unwrap();
        prop_assert!((dil - omega.eval(z)).norm() <= 1e-9);
    }

    #[test]
    fn combination_evaluates_affinely(q in proper_q(), t in 0.0f64..=1.0, z in disk_point(0.9)) {
        let a = preset(Preset::S3F1, q, 64).unwrap();
        let b = preset(Preset::Example1, q, 64).unwrap();
        let c = combine(&CombinationSpec::pair(a.clone(), b.clone(), t).unwrap()).unwrap();
        let expected = a.eval(z) * t + b.eval(z) * (1.0 - t);
        prop_assert!((c.eval(z) - expected).norm() <= 1e-12);
    }

    #[test]
    fn map_json_round_trip_is_exact(s in series(16), g in series(16), q in proper_q()) {
        let mut h = s.coeffs().to_vec();
        h[0] = Complex64::default();
        h[1] = Complex64::new(1.0, 0.0);
        let mut g = g.coeffs().to_vec();
        g[0] = Complex64::default();
        let map = HarmonicMap::new(TruncatedSeries::new(h).unwrap(), TruncatedSeries::new(g).unwrap(), q, "prop").unwrap();
        let text = serde_json::to_string(&map).unwrap();
        let back: HarmonicMap = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, map);
    }
}

#[test]
fn q_integers_and_factorials_match_oracles() {
    for qv in [0.1, 0.5, 0.9] {
        let q = QParam::new(qv).unwrap();
        let mut factorial = 1.0;
        for k in 0..=32usize {
            let direct: f64 = (0..k).map(|j| qv.powi(j as i32)).sum();
            assert!((q_number(k, q) - direct).abs() <= 4.0 * f64::EPSILON * direct);
            if k > 0 {
                factorial *= direct;
            }
            assert!((q_factorial(k, q) - factorial).abs() <= 64.0 * f64::EPSILON * factorial);
        }
    }
    for k in 0..=32usize {
        assert_eq!(q_number(k, QParam::classical()), k as f64);
    }
}
