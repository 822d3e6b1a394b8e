//! Property tests for the quadrature engine and the scalar nonlinearity.

use fplap::quad::{integrate, integrate_shaped, Endpoints, QuadConfig};
use fplap::{g_power, g_ratio};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn g_power_is_odd(t in -50.0_f64..50.0, p in 2.0_f64..6.0) {
        let a = g_power(-t, p);
        let b = -g_power(t, p);
        prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300));
    }

    #[test]
    fn g_power_strictly_increasing(t1 in -10.0_f64..10.0, dt in 1e-6_f64..5.0, p in 2.0_f64..6.0) {
        prop_assert!(g_power(t1, p) < g_power(t1 + dt, p));
    }

    #[test]
    fn g_ratio_lower_bound(t in -10.0_f64..10.0, ds in 1e-9_f64..10.0, p in 2.0_f64..6.0) {
        let r = g_ratio(t, t + ds, p).unwrap();
        prop_assert!(r >= 2.0_f64.powf(2.0 - p) - 1e-12, "ratio {r}");
    }

    #[test]
    fn quadrature_is_deterministic(a in -2.0_f64..0.0, len in 0.5_f64..3.0, w in 1.0_f64..20.0) {
        let cfg = QuadConfig::default();
        let f = |x: f64| (w * x).sin() * (-x * x).exp() + x.abs().sqrt();
        let r1 = integrate(f, a, a + len, &cfg).unwrap();
        let r2 = integrate(f, a, a + len, &cfg).unwrap();
        prop_assert_eq!(r1.value.to_bits(), r2.value.to_bits());
        prop_assert_eq!(r1.err_est.to_bits(), r2.err_est.to_bits());
        prop_assert_eq!(r1.n_evals, r2.n_evals);
    }

    #[test]
    fn refinement_monotonicity(alpha in -0.6_f64..0.9, w in 1.0_f64..8.0) {
        // halving abs_tol never increases the error estimate of a
        // converged result
        let f = |x: f64| x.powf(alpha) * (1.0 + (w * x).cos());
        let loose = QuadConfig { abs_tol: 1e-6, rel_tol: 1e-300, ..QuadConfig::default() };
        let tight = QuadConfig { abs_tol: 5e-7, rel_tol: 1e-300, ..QuadConfig::default() };
        let e = Endpoints::lower_alg(alpha);
        let r1 = integrate_shaped(f, 0.0, 1.0, e, &loose).unwrap();
        let r2 = integrate_shaped(f, 0.0, 1.0, e, &tight).unwrap();
        if r1.converged && r2.converged {
            prop_assert!(
                r2.err_est <= r1.err_est,
                "err went up: {} -> {}", r1.err_est, r2.err_est
            );
        }
    }

    #[test]
    fn power_integrals_match_antiderivative(alpha in -0.9_f64..2.0) {
        // integral of x^alpha on [0,1] is 1/(alpha+1)
        let cfg = QuadConfig::default();
        let r = integrate_shaped(
            |x: f64| x.powf(alpha),
            0.0,
            1.0,
            Endpoints::lower_alg(alpha),
            &cfg,
        )
        .unwrap();
        let expect = 1.0 / (alpha + 1.0);
        prop_assert!(
            (r.value - expect).abs() <= (10.0 * r.err_est).max(1e-9 * expect.abs()),
            "alpha={}: {} vs {} (err {})", alpha, r.value, expect, r.err_est
        );
    }
}
