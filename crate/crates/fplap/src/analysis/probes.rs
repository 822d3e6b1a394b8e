//! Empirical probes: the comparison-principle consistency check on
//! constructed profile pairs, and membership of the power cusp in the
//! kernel tail space.

use crate::error::Error;
use crate::model::{Params, Profile};
use crate::quad::{integrate_full, integrate_shaped, Endpoints, QuadConfig};
use crate::special::sphere_measure;
use crate::Result;

use super::fits::eval_auto;

/// Outcome of sampling the comparison principle on a grid.
///
/// This is a consistency probe, not a proof: it reports whether the
/// operator-side hypothesis and the ordering conclusion hold at every
/// sampled point, at the achieved quadrature accuracy.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub consistent: bool,
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    /// Points where a side failed, with a short description.
    pub violations: Vec<(f64, String)>,
    /// Points where an evaluator did not converge.
    pub inconclusive: Vec<f64>,
    pub checked_points: usize,
}

/// Sample `(-Δ)^s_p u + c u` against `(-Δ)^s_p v + c v` on a grid inside
/// the ball of `domain_radius`, after verifying `u >= v` outside it by
/// sampling.
pub fn comparison_probe(
    u: &Profile,
    v: &Profile,
    c_vals: &dyn Fn(f64) -> f64,
    domain_radius: f64,
    grid: &[f64],
    params: &Params,
    cfg: &QuadConfig,
) -> Result<ComparisonReport> {
    if !(domain_radius > 0.0) {
        return Err(Error::domain("domain_radius must be positive"));
    }
    // exterior ordering u >= v, sampled
    let outer_reach = domain_radius
        .max(u.support_radius())
        .max(v.support_radius())
        * 2.0;
    for i in 0..=64 {
        let r = domain_radius + (outer_reach - domain_radius) * (i as f64) / 64.0;
        let (uv, vv) = if params.n == 1 {
            (u.value(&[r]), v.value(&[r]))
        } else {
            (u.value_radial(r), v.value_radial(r))
        };
        if uv < vv - 1e-12 {
            return Err(Error::domain(format!(
                "precondition failed: u < v outside the domain at |x| = {r}"
            )));
        }
    }

    let mut violations = Vec::new();
    let mut inconclusive = Vec::new();
    let mut hypothesis_holds = true;
    let mut conclusion_holds = true;
    for &x in grid {
        if x.abs() >= domain_radius {
            return Err(Error::domain(format!(
                "grid point {x} outside the open domain"
            )));
        }
        let c = c_vals(x);
        if c < 0.0 {
            return Err(Error::domain("c(x) must be nonnegative"));
        }
        let (uval, vval) = if params.n == 1 {
            (u.value(&[x]), v.value(&[x]))
        } else {
            (u.value_radial(x.abs()), v.value_radial(x.abs()))
        };
        let (lu, lv) = match (eval_auto(u, x, params, cfg), eval_auto(v, x, params, cfg)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                inconclusive.push(x);
                continue;
            }
        };
        let lhs = lu.value + c * uval;
        let rhs = lv.value + c * vval;
        let tol = lu.err_est + lv.err_est + 1e-12 * (lhs.abs() + rhs.abs());
        if lhs < rhs - tol {
            hypothesis_holds = false;
            violations.push((x, format!("operator side: {lhs} < {rhs}")));
        }
        if uval < vval - 1e-12 {
            conclusion_holds = false;
            violations.push((x, format!("ordering: u = {uval} < v = {vval}")));
        }
    }
    Ok(ComparisonReport {
        consistent: hypothesis_holds && conclusion_holds && inconclusive.is_empty(),
        hypothesis_holds,
        conclusion_holds,
        violations,
        inconclusive,
        checked_points: grid.len(),
    })
}

/// Tail-space membership of the half-ball power cusp `|x|^{-t}`.
#[derive(Debug, Clone)]
pub struct LspReport {
    /// `t < n/(p-1)` (strict); decided analytically, never by quadrature.
    pub finite: bool,
    /// The tail integral when finite.
    pub value: Option<f64>,
    pub err_est: f64,
    /// The critical exponent `n/(p-1)`.
    pub threshold: f64,
}

/// `∫ |1+u(x)|^{p-1} / (1+|x|^{n+sp}) dx` for the half-ball cusp
/// `u = |x|^{-t}`, split into the cusp half-ball and the exterior kernel
/// mass. Finiteness is equivalent to `t < n/(p-1)` and is decided by the
/// exponent test `n - t(p-1) > 0`.
pub fn lsp_tail(t_exp: f64, params: &Params, cfg: &QuadConfig) -> Result<LspReport> {
    if !(t_exp > 0.0) {
        return Err(Error::domain("t_exp must be positive"));
    }
    let n = params.n as f64;
    let p = params.p;
    let sp = params.sp();
    let threshold = n / (p - 1.0);
    if n - t_exp * (p - 1.0) <= 0.0 {
        return Ok(LspReport {
            finite: false,
            value: None,
            err_est: 0.0,
            threshold,
        });
    }
    let sigma = sphere_measure(params.n - 1);
    // cusp half-ball: integrand ~ r^{n-1-t(p-1)} at 0
    let cusp_exp = n - 1.0 - t_exp * (p - 1.0);
    let cusp = integrate_shaped(
        |r: f64| {
            (1.0 + r.powf(-t_exp)).powf(p - 1.0) * r.powf(n - 1.0) / (1.0 + r.powf(n + sp))
        },
        0.0,
        1.0,
        Endpoints::lower_alg(cusp_exp),
        cfg,
    )?
    .into_result()?;
    // kernel mass over all of R^n minus the half unit ball
    let whole = integrate_full(
        |r: f64| r.powf(n - 1.0) / (1.0 + r.powf(n + sp)),
        0.0,
        f64::INFINITY,
        Endpoints::smooth(),
        Some(1.0 + sp),
        cfg,
    )?
    .into_result()?;
    let unit = integrate_shaped(
        |r: f64| r.powf(n - 1.0) / (1.0 + r.powf(n + sp)),
        0.0,
        1.0,
        Endpoints::smooth(),
        cfg,
    )?
    .into_result()?;
    let value = 0.5 * sigma * cusp.value + sigma * whole.value - 0.5 * sigma * unit.value;
    Ok(LspReport {
        finite: true,
        value: Some(value),
        err_est: sigma * (0.5 * cusp.err_est + whole.err_est + 0.5 * unit.err_est),
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    
    #[test]
    fn lsp_window_examples() {
        let cfg = QuadConfig::default();
        // n=2, p=3: threshold 1
        let params = Params::new(2, 0.5, 3.0).unwrap();
        let fin = lsp_tail(0.9, &params, &cfg).unwrap();
        assert!(fin.finite && fin.value.unwrap().is_finite());
        let div = lsp_tail(1.0, &params, &cfg).unwrap();
        assert!(!div.finite && div.value.is_none());
        // frozen finite values at t = threshold - 0.05, s = 1/2
        let p12 = Params::new(1, 0.5, 2.0).unwrap();
        let v = lsp_tail(0.95, &p12, &cfg).unwrap();
        assert!(
            (v.value.unwrap() - 22.805025382661843).abs() <= 1e-6,
            "{}",
            v.value.unwrap()
        );
        let p23 = Params::new(2, 0.5, 3.0).unwrap();
        let v = lsp_tail(0.95, &p23, &cfg).unwrap();
        assert!(
            (v.value.unwrap() - 41.671027786328271).abs() <= 1e-6,
            "{}",
            v.value.unwrap()
        );
        let p34 = Params::new(3, 0.5, 4.0).unwrap();
        let v = lsp_tail(0.95, &p34, &cfg).unwrap();
        assert!(
            (v.value.unwrap() - 71.875_084_461_664_49).abs() <= 1e-5,
            "{}",
            v.value.unwrap()
        );
    }

    #[test]
    fn lsp_lower_bound_by_kernel_mass() {
        // dropping the cusp part leaves the exterior kernel mass
        let cfg = QuadConfig::default();
        let params = Params::new(1, 0.5, 2.0).unwrap();
        let v = lsp_tail(0.5, &params, &cfg).unwrap();
        assert!((v.value.unwrap() - 4.875_538_628_269_616).abs() < 1e-7);
        let sigma = 2.0;
        let exterior = integrate_full(
            |r: f64| 1.0 / (1.0 + r * r),
            1.0,
            f64::INFINITY,
            Endpoints::smooth(),
            Some(2.0),
            &cfg,
        )
        .unwrap()
        .value;
        assert!(v.value.unwrap() >= sigma * exterior);
    }

    #[test]
    fn probe_scaled_pair() {
        // u = bump, v = u/2: operator of v is 2^{1-p} x operator of u, so
        // the hypothesis holds wherever the operator is nonnegative
        let params = Params::new(1, 0.5, 3.0).unwrap();
        let cfg = QuadConfig::with_tols(1e-8, 1e-7);
        let u = Profile::bump(0.5);
        let v = u.scaled_copy(0.5);
        let grid: Vec<f64> = (0..9).map(|i| -0.8 + 0.2 * i as f64).collect();
        let rep = comparison_probe(&u, &v, &|_| 1.0, 1.0, &grid, &params, &cfg).unwrap();
        assert!(rep.consistent, "violations: {:?}", rep.violations);
    }

    #[test]
    fn probe_equal_pair() {
        let params = Params::new(1, 0.5, 2.0).unwrap();
        let cfg = QuadConfig::with_tols(1e-8, 1e-7);
        let u = Profile::bump(0.5);
        let rep =
            comparison_probe(&u, &u.clone(), &|_| 0.0, 1.0, &[0.0, 0.4, -0.6], &params, &cfg)
                .unwrap();
        assert!(rep.consistent);
    }

    #[test]
    fn probe_detects_violated_exterior_ordering() {
        // v bigger than u outside the claimed domain: precondition fails
        let params = Params::new(1, 0.5, 3.0).unwrap();
        let cfg = QuadConfig::default();
        let u = Profile::scaled_bump(0.5, 0.5);
        let v = Profile::bump(0.5);
        assert!(comparison_probe(&u, &v, &|_| 0.0, 0.4, &[0.0], &params, &cfg).is_err());
    }
}
