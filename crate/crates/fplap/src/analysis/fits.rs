//! Boundary-coefficient extraction and boundedness sweeps.

use crate::error::Error;
use crate::model::{Params, Profile};
use crate::oplap1d::{eval_decomposed_1d, eval_direct_1d, EvalResult};
use crate::oplapnd::eval_radial_nd;
use crate::quad::QuadConfig;
use crate::Result;

/// Pick the appropriate evaluator for a point/radius: the direct method
/// for interior 1-d points, the six-term decomposition for the unit bump
/// near the boundary, the radial reduction for `n >= 2`.
pub(crate) fn eval_auto(
    u: &Profile,
    x: f64,
    params: &Params,
    cfg: &QuadConfig,
) -> Result<EvalResult> {
    if params.n == 1 {
        let decomposable = matches!(u, Profile::Bump { s_exp } if (s_exp - params.s).abs() < 1e-12);
        if decomposable && x.abs() >= 0.9 && x.abs() < 1.0 {
            eval_decomposed_1d(params.s, x.abs(), params, cfg)
        } else {
            eval_direct_1d(u, x, params, cfg)
        }
    } else {
        eval_radial_nd(u, x.abs(), params, cfg)
    }
}

/// Two-parameter fit `v(x) ≈ a + b (1-x)^{-s}` of operator values of the
/// unit bump along the dyadic boundary approach `x_j = 1 - 2^{-j}`.
/// Uniform boundedness predicts `b = 0`.
#[derive(Debug, Clone)]
pub struct SingularFit {
    /// Bounded part of the fit.
    pub a: f64,
    /// Coefficient of `(1-x)^{-s}`.
    pub b: f64,
    /// Max absolute fit residual.
    pub residual: f64,
    /// Abscissae actually used (converged evaluations only).
    pub xs: Vec<f64>,
    /// Operator values at `xs`.
    pub values: Vec<f64>,
    /// Coefficient of the `(1-x)^{1-s}` correction when the extended
    /// basis is requested.
    pub correction: Option<f64>,
}

/// Default two-parameter fit, `j = 4..=j_max` (`j_max = 14` covers
/// `1 - x` down to `6e-5`).
pub fn singular_fit(params: &Params, cfg: &QuadConfig, j_max: u32) -> Result<SingularFit> {
    singular_fit_extended(params, cfg, j_max, false)
}

/// Like [`singular_fit`], optionally adding a `(1-x)^{1-s}` correction
/// column to diagnose the fit residual. The reported `(a, b)` keep their
/// meaning; the correction coefficient is returned separately.
pub fn singular_fit_extended(
    params: &Params,
    cfg: &QuadConfig,
    j_max: u32,
    extended: bool,
) -> Result<SingularFit> {
    if j_max < 6 {
        return Err(Error::domain("singular_fit needs j_max >= 6 (>= 3 points)"));
    }
    let u = Profile::bump(params.s);
    let s = params.s;
    let mut xs = Vec::new();
    let mut values = Vec::new();
    let mut last_err: Option<Error> = None;
    for j in 4..=j_max {
        let x = 1.0 - 2.0_f64.powi(-(j as i32));
        match eval_auto(&u, x, params, cfg) {
            Ok(r) => {
                xs.push(x);
                values.push(r.value);
            }
            Err(e) => last_err = Some(e),
        }
    }
    if xs.len() < 3 {
        return Err(last_err.unwrap_or_else(|| Error::domain("fewer than 3 converged points")));
    }

    // least squares against {1, (1-x)^{-s}} (+ optional (1-x)^{1-s})
    let w: Vec<f64> = xs.iter().map(|x| (1.0 - x).powf(-s)).collect();
    let ncols = if extended { 3 } else { 2 };
    let col = |i: usize, row: usize| -> f64 {
        match i {
            0 => 1.0,
            1 => w[row],
            _ => (1.0 - xs[row]).powf(1.0 - s),
        }
    };
    let mut ata = [[0.0_f64; 3]; 3];
    let mut atv = [0.0_f64; 3];
    #[allow(clippy::needless_range_loop)]
    for row in 0..xs.len() {
        for i in 0..ncols {
            for j in 0..ncols {
                ata[i][j] += col(i, row) * col(j, row);
            }
            atv[i] += col(i, row) * values[row];
        }
    }
    let coef = solve_small(&mut ata, &mut atv, ncols)
        .ok_or_else(|| Error::domain("singular normal equations in singular_fit"))?;
    let residual = (0..xs.len())
        .map(|row| {
            let fit: f64 = (0..ncols).map(|i| coef[i] * col(i, row)).sum();
            (values[row] - fit).abs()
        })
        .fold(0.0, f64::max);
    Ok(SingularFit {
        a: coef[0],
        b: coef[1],
        residual,
        xs,
        values,
        correction: extended.then_some(coef[2]),
    })
}

/// Gaussian elimination with partial pivoting on an `n x n` system,
/// `n <= 3`.
#[allow(clippy::needless_range_loop)]
fn solve_small(a: &mut [[f64; 3]; 3], b: &mut [f64; 3], n: usize) -> Option<[f64; 3]> {
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())?;
        if a[piv][k] == 0.0 {
            return None;
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = [0.0_f64; 3];
    for k in (0..n).rev() {
        let mut sum = b[k];
        for j in k + 1..n {
            sum -= a[k][j] * x[j];
        }
        x[k] = sum / a[k][k];
    }
    Some(x)
}

/// One sweep entry; `value` is absent when the evaluator failed at that
/// point (the sweep continues).
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub x: f64,
    pub value: Option<f64>,
    pub err_est: f64,
    pub n_evals: u64,
    pub status: &'static str,
}

/// Evaluate the operator of the unit bump over a grid of radii and
/// report the maximum absolute value together with the whole trace.
pub fn bounded_sweep(
    params: &Params,
    cfg: &QuadConfig,
    grid: &[f64],
) -> Result<(f64, Vec<SweepPoint>)> {
    let u = Profile::bump(params.s);
    let mut trace = Vec::with_capacity(grid.len());
    let mut max_abs: f64 = 0.0;
    let mut any_ok = false;
    for &x in grid {
        match eval_auto(&u, x, params, cfg) {
            Ok(r) => {
                any_ok = true;
                max_abs = max_abs.max(r.value.abs());
                trace.push(SweepPoint {
                    x,
                    value: Some(r.value),
                    err_est: r.err_est,
                    n_evals: r.n_evals,
                    status: "ok",
                });
            }
            Err(Error::NonConvergence {
                value,
                err_est,
                n_evals,
            }) => trace.push(SweepPoint {
                x,
                value: Some(value),
                err_est,
                n_evals,
                status: "non-convergence",
            }),
            Err(_) => trace.push(SweepPoint {
                x,
                value: None,
                err_est: f64::NAN,
                n_evals: 0,
                status: "error",
            }),
        }
    }
    if !any_ok {
        return Err(Error::domain("no grid point evaluated successfully"));
    }
    Ok((max_abs, trace))
}

/// Desk-scale Hölder seminorm estimate: the maximum of
/// `|u(x)-u(y)| / |x-y|^nu` over all sample pairs.
pub fn holder_seminorm(samples: &[(Vec<f64>, f64)], nu: f64) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::domain("holder_seminorm needs at least two samples"));
    }
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::domain("nu must lie in (0, 1)"));
    }
    let mut best: f64 = 0.0;
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let (xi, vi) = &samples[i];
            let (xj, vj) = &samples[j];
            let d2: f64 = xi.iter().zip(xj).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 == 0.0 {
                continue;
            }
            best = best.max((vi - vj).abs() / d2.sqrt().powf(nu));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fit_constant_case_recovers_pi() {
        // p = 2, s = 1/2: the trace is constant pi, so b = 0 up to noise
        let params = Params::new(1, 0.5, 2.0).unwrap();
        let fit = singular_fit(&params, &QuadConfig::default(), 14).unwrap();
        assert!(fit.b.abs() < 1e-8, "b = {}", fit.b);
        assert!((fit.a - PI).abs() < 1e-7, "a = {}", fit.a);
        assert!(fit.residual < 1e-7);
        assert_eq!(fit.xs.len(), 11);
    }

    #[test]
    fn fit_matches_independent_least_squares() {
        // the true (a, b) of the pinned fit for (s, p) = (0.5, 4), from
        // 40-digit reference values of the operator trace
        let params = Params::new(1, 0.5, 4.0).unwrap();
        let fit = singular_fit(&params, &QuadConfig::default(), 14).unwrap();
        assert!(
            (fit.a - 6.671_535_450_776_22).abs() < 1e-6,
            "a = {}",
            fit.a
        );
        assert!(
            (fit.b - 0.025515823124499696).abs() < 1e-7,
            "b = {}",
            fit.b
        );
        assert!((fit.residual - 1.73782875281).abs() < 1e-5);
    }

    #[test]
    fn extended_fit_shrinks_b_for_half_order() {
        let params = Params::new(1, 0.5, 4.0).unwrap();
        let plain = singular_fit(&params, &QuadConfig::default(), 14).unwrap();
        let ext = singular_fit_extended(&params, &QuadConfig::default(), 14, true).unwrap();
        assert!(ext.correction.is_some());
        assert!(ext.b.abs() < plain.b.abs());
    }

    #[test]
    fn sweep_is_increasing_for_appendix_case() {
        let params = Params::new(1, 0.5, 4.0).unwrap();
        let grid: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let (max_abs, trace) = bounded_sweep(&params, &QuadConfig::default(), &grid).unwrap();
        let vals: Vec<f64> = trace.iter().map(|t| t.value.unwrap()).collect();
        for w in vals.windows(2) {
            assert!(w[1] > w[0], "not increasing: {w:?}");
        }
        assert!((vals[0] - (6.0 * 2.0_f64.ln() - 3.0)).abs() < 1e-7);
        assert!(max_abs < 3.0 * PI);
    }

    #[test]
    fn holder_seminorm_behaviour() {
        let consts: Vec<(Vec<f64>, f64)> = (0..5).map(|i| (vec![i as f64 * 0.1], 1.0)).collect();
        assert_eq!(holder_seminorm(&consts, 0.5).unwrap(), 0.0);

        // bump sampled on the dyadic boundary approach: bounded seminorm
        // at nu = s, unbounded growth at nu > s
        let u = Profile::bump(0.5);
        let mk = |jmax: i32| -> Vec<(Vec<f64>, f64)> {
            (1..=jmax)
                .map(|j| {
                    let x = 1.0 - 2.0_f64.powi(-j);
                    (vec![x], u.value(&[x]))
                })
                .chain(std::iter::once((vec![1.0], 0.0)))
                .collect()
        };
        let at_half_8 = holder_seminorm(&mk(8), 0.5).unwrap();
        let at_half_16 = holder_seminorm(&mk(16), 0.5).unwrap();
        assert!(at_half_16 <= 2.0_f64.powf(0.5) + 1e-12);
        assert!(at_half_16 <= at_half_8 * 1.5 + 1e-12);
        let at_08_8 = holder_seminorm(&mk(8), 0.8).unwrap();
        let at_08_16 = holder_seminorm(&mk(16), 0.8).unwrap();
        assert!(
            at_08_16 > 2.0 * at_08_8,
            "expected growth: {at_08_8} -> {at_08_16}"
        );

        assert!(holder_seminorm(&consts[..1], 0.5).is_err());
        assert!(holder_seminorm(&consts, 1.2).is_err());
    }
}
