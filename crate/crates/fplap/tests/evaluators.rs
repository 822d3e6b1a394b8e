//! Cross-evaluator invariants that span modules: the direct and
//! decomposed 1-d routes agree over a parameter grid, the n >= 2 trace
//! stays bounded up to the boundary, and the boundary fit in n = 2 has
//! a small singular coefficient at its coarser tolerance.

use fplap::analysis::singular_fit;
use fplap::oplap1d::{eval_decomposed_1d, eval_direct_1d};
use fplap::oplapnd::eval_radial_nd;
use fplap::{Params, Profile, QuadConfig};

#[test]
fn method_agreement_grid() {
    let cfg = QuadConfig::default();
    for &s in &[0.25, 0.5, 0.75] {
        for &p in &[2.0, 3.0, 4.0] {
            let params = Params::new(1, s, p).unwrap();
            let u = Profile::bump(s);
            for &x in &[0.5, 0.9, 0.99, 0.999] {
                let d = eval_direct_1d(&u, x, &params, &cfg).unwrap();
                let e = eval_decomposed_1d(s, x, &params, &cfg).unwrap();
                let tol = (d.err_est + e.err_est).max(1e-12);
                assert!(
                    (d.value - e.value).abs() <= tol,
                    "s={s} p={p} x={x}: direct {} vs decomposed {} (tol {tol:.2e})",
                    d.value,
                    e.value
                );
            }
        }
    }
}

#[test]
fn nd_trace_bounded_to_the_boundary() {
    // dyadic approach r0 = 1 - 2^{-j}: the values stay finite and the
    // running maximum settles (increments shrink near the boundary)
    let u = Profile::bump(0.5);
    let params = Params::new(2, 0.5, 3.0).unwrap();
    let cfg = QuadConfig::with_tols(1e-7, 1e-6);
    let mut running = Vec::new();
    let mut max_abs: f64 = 0.0;
    for j in 1..=12 {
        let r0 = 1.0 - 2.0_f64.powi(-j);
        let r = eval_radial_nd(&u, r0, &params, &cfg).unwrap();
        assert!(r.value.is_finite());
        max_abs = max_abs.max(r.value.abs());
        running.push(max_abs);
    }
    let last = running[running.len() - 1];
    for w in running.windows(2).skip(8) {
        assert!(
            (w[1] - w[0]) <= 0.05 * last,
            "running max still moving near the boundary: {running:?}"
        );
    }
}

#[test]
fn nd_singular_fit_small_b() {
    // coarser n = 2 analogue of the boundary fit
    let params = Params::new(2, 0.5, 3.0).unwrap();
    let cfg = QuadConfig::with_tols(1e-7, 1e-6);
    let fit = singular_fit(&params, &cfg, 14).unwrap();
    let maxv = fit.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    assert!(
        fit.b.abs() <= 1e-2 * maxv,
        "b = {}, max|v| = {maxv}",
        fit.b
    );
}
