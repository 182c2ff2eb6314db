use memdiff::kernel::eval_k0;
use memdiff::report::Check;
use memdiff::theta::{eval_theta, grade_sequence, SeriesTruncation};
use memdiff::{derive_constants, Field, KernelConfig, OperatorParams, Status, StripGeometry, TimeFn};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = OperatorParams> {
    (0.1f64..3.0, 0.1f64..3.0, 0.1f64..3.0, 0.1f64..3.0)
        .prop_map(|(e, a, b, beta)| OperatorParams::new(e, a, b, beta).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn k0_is_even_in_x(p in params(), x in 0.0f64..3.0, t in 0.05f64..5.0) {
        let cfg = KernelConfig::default();
        let l = eval_k0(&p, x, t, &cfg).unwrap();
        let r = eval_k0(&p, -x, t, &cfg).unwrap();
        prop_assert!((l - r).abs() <= 1e-14 * (1.0 + l.abs()));
    }

    #[test]
    fn k0_below_pointwise_envelope(p in params(), x in 0.0f64..3.0, t in 0.05f64..5.0) {
        let cfg = KernelConfig::default();
        let k = eval_k0(&p, x, t, &cfg).unwrap();
        let env = memdiff::kernel::pointwise_envelope(&p, x, t);
        prop_assert!(k.abs() <= env * (1.0 + 1e-9) + 1e-13, "{} > {}", k, env);
    }

    #[test]
    fn theta_is_symmetric_about_the_walls(p in params(), frac in 0.0f64..1.0, t in 0.05f64..3.0, l in 0.5f64..2.0) {
        // theta(x) and theta(2L - x) coincide, so the profile is even about x = L
        let cfg = KernelConfig::default();
        let tr = SeriesTruncation::default();
        let geom = StripGeometry::new(l).unwrap();
        let x = frac * l;
        let direct = eval_theta(&p, &geom, x, t, &tr, &cfg).unwrap();
        let mut images = 0.0;
        for n in -40i32..=40 {
            images += eval_k0(&p, 2.0 * l - x + 2.0 * n as f64 * l, t, &cfg).unwrap();
        }
        prop_assert!((direct - images).abs() < 1e-10);
    }

    #[test]
    fn estimate_constants_are_positive(p in params(), l in 0.2f64..5.0) {
        let c = derive_constants(&p, Some(l)).unwrap();
        prop_assert!(c.omega > 0.0 && c.beta0 > 0.0 && c.beta1 > 0.0);
        for t in [0.0, 0.5, 2.0, 10.0] {
            prop_assert!(p.eval_e(t).unwrap() >= 0.0);
        }
    }

    #[test]
    fn inequality_margin_has_the_right_sign(lhs in -1e3f64..1e3, rhs in -1e3f64..1e3) {
        let c = Check::inequality("c", lhs, rhs, 0.0);
        prop_assert_eq!(c.passed(), lhs <= rhs);
        prop_assert_eq!(c.margin, rhs - lhs);
    }

    #[test]
    fn decreasing_sequences_never_fail(mut devs in prop::collection::vec(0.0f64..1.0, 1..6), tol in 1e-4f64..1.0) {
        devs.sort_by(|a, b| b.total_cmp(a));
        let s = grade_sequence(&devs, tol);
        prop_assert!(s != Status::Fail);
        prop_assert_eq!(s == Status::Pass, *devs.last().unwrap() <= tol);
    }

    #[test]
    fn field_interpolation_is_exact_at_nodes(nx in 4usize..20, nt in 1usize..20, i in 0usize..20, j in 0usize..20) {
        let f = Field::from_fn(2.0, 3.0, nx, nt, |x, t| (x * 1.3).sin() + t * t).unwrap();
        let (i, j) = (i.min(nx), j.min(nt));
        prop_assert!((f.interpolate(f.x(i), f.t(j)) - f.get(i, j)).abs() < 1e-13);
    }

    #[test]
    fn builtin_derivatives_match_difference_quotients(
        amp in -2.0f64..2.0, rate in 0.1f64..3.0, t in 0.01f64..10.0
    ) {
        for f in [
            TimeFn::Tanh { amplitude: amp, rate },
            TimeFn::Arctan { amplitude: amp, rate },
            TimeFn::TimeExponential { amplitude: amp, rate },
            TimeFn::Sine { offset: 0.0, amplitude: amp, frequency: rate, phase: 0.3, decay: 0.2 },
        ] {
            let h = 1e-5;
            let fd = (f.eval(t + h) - f.eval(t - h)) / (2.0 * h);
            let d = f.derivative(t).unwrap();
            prop_assert!((d - fd).abs() < 1e-6 * (1.0 + d.abs()), "{:?}", f);
        }
    }
}
