//! Evaluation of `(-Δ)^s_p u` for radial profiles in dimension `n >= 2`.
//!
//! [`eval_radial_nd`] reduces the n-dimensional PV integral to a double
//! integral over the axial coordinate `y1` and the transverse radius
//! `rho` with weight `rho^{n-2}`: the singular point sits at
//! `(r0, 0)` and is handled by pairing in `y1` about `r0` on each slice
//! `rho > 0`, leaving an integrable `O(rho^{p-sp-1})` edge for the outer
//! integral. Where the profile vanishes, the slice integral collapses to
//! the kernel moment and the strip `|y1| > R` closes in analytic form.
//!
//! [`eval_cartesian_2d`] is the brute-force oracle for `n = 2`: polar
//! coordinates centered at the evaluation point with antipodal pairing.
//! It is deliberately slow and meant for cross-checking at modest
//! tolerances.

use crate::error::Error;
use crate::model::{g_power, Params, Profile};
use crate::oplap1d::EvalResult;
use crate::quad::{integrate_full, integrate_shaped, Behavior, Endpoints, QuadConfig, QuadResult};
use crate::special::{beta, bump_pair_g_sum_offset, sphere_measure};
use crate::Result;
use std::cell::RefCell;

/// Geometry of the axial/transverse reduction at radius `r0`.
#[derive(Debug, Clone, Copy)]
pub struct RadialReduction {
    pub r0: f64,
    /// Surface measure of `S^{n-2}` (2 for `n = 2`: the 0-sphere has two
    /// points).
    pub omega: f64,
    /// Location of the PV singularity in the `(y1, rho)` half-plane.
    pub singular_point: (f64, f64),
}

impl RadialReduction {
    pub fn new(r0: f64, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("the radial reduction requires n >= 2"));
        }
        if !(r0 >= 0.0) {
            return Err(Error::domain("r0 must be nonnegative"));
        }
        Ok(RadialReduction {
            r0,
            omega: sphere_measure(n - 2),
            singular_point: (r0, 0.0),
        })
    }
}

/// `M(n, s, p) = ∫_0^∞ y^{n-2} (1+y^2)^{-(n+sp)/2} dy` by quadrature
/// with the `1/y` tail map.
pub fn kernel_moment(n: u32, s: f64, p: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if n < 2 {
        return Err(Error::domain("kernel_moment requires n >= 2"));
    }
    let sp = s * p;
    let pow = -(n as f64 + sp) / 2.0;
    let w = n as f64 - 2.0;
    integrate_full(
        |y: f64| y.powf(w) * (1.0 + y * y).powf(pow),
        0.0,
        f64::INFINITY,
        Endpoints::smooth(),
        Some(2.0 + sp),
        cfg,
    )?
    .into_result()
}

/// The Beta-function closed form `M(n,s,p) = B((n-1)/2, (sp+1)/2) / 2`,
/// used as an independent check on [`kernel_moment`].
pub fn kernel_moment_beta(n: u32, s: f64, p: f64) -> f64 {
    let sp = s * p;
    0.5 * beta((n as f64 - 1.0) / 2.0, (sp + 1.0) / 2.0)
}

struct InnerStats {
    max_err: f64,
    n_evals: u64,
    error: Option<Error>,
}

impl InnerStats {
    fn new() -> RefCell<Self> {
        RefCell::new(InnerStats {
            max_err: 0.0,
            n_evals: 0,
            error: None,
        })
    }
    fn absorb(st: &RefCell<Self>, r: Result<QuadResult>) -> f64 {
        match r {
            Ok(q) => {
                let mut s = st.borrow_mut();
                s.max_err = s.max_err.max(q.err_est);
                s.n_evals += q.n_evals;
                q.value
            }
            Err(e) => {
                st.borrow_mut().error.get_or_insert(e);
                f64::NAN
            }
        }
    }
}

fn check_radial(u: &Profile, params: &Params) -> Result<f64> {
    if params.n < 2 {
        return Err(Error::domain("eval_radial_nd requires n >= 2"));
    }
    if matches!(u, Profile::PowerCusp { .. }) {
        return Err(Error::domain("PowerCusp is not C^{1,1}"));
    }
    if !u.radial() {
        return Err(Error::domain("eval_radial_nd requires a radial profile"));
    }
    let r = u.support_radius();
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::domain("profile must have compact support"));
    }
    Ok(r)
}

/// Paired slice integral at fixed transverse radius `rho`:
/// `∫_lo^eta [G(u0-u(+tau)) + G(u0-u(-tau))] (tau^2+rho^2)^{-kp} dtau`.
/// For `rho` much smaller than `eta` the kernel spike of width `rho` is
/// equalized by `tau = rho sinh v`. A nonzero `lo` is the rounding-noise
/// floor for naively paired custom profiles; the truncated mass is
/// bounded by the endpoint value and added to the error estimate.
fn paired_slice(
    pair_h: &dyn Fn(f64) -> f64,
    rho: f64,
    lo: f64,
    eta: f64,
    kp: f64,
    kinks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let mut out = if rho < 0.1 * eta {
        let scale = rho.powf(1.0 - 2.0 * kp);
        let f = |v: f64| {
            let tau = rho * v.sinh();
            pair_h(tau) * scale * v.cosh().powf(1.0 - 2.0 * kp)
        };
        let vlo = (lo / rho).asinh();
        let vmax = (eta / rho).asinh();
        let vkinks: Vec<f64> = kinks
            .iter()
            .filter(|&&t| t > lo && t < eta)
            .map(|&t| (t / rho).asinh())
            .collect();
        piecewise(&f, vlo, vmax, &vkinks, Behavior::Smooth, Behavior::Smooth, cfg)?
    } else {
        let f = |tau: f64| pair_h(tau) * (tau * tau + rho * rho).powf(-kp);
        piecewise(&f, lo, eta, kinks, Behavior::Smooth, Behavior::Smooth, cfg)?
    };
    if lo > 0.0 {
        out.err_est += 2.0 * pair_h(lo).abs() * (lo * lo + rho * rho).powf(-kp) * lo;
    }
    Ok(out)
}

fn piecewise(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    kinks: &[f64],
    lower: Behavior,
    upper: Behavior,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if b <= a {
        return Ok(QuadResult::zero());
    }
    let mut cuts = vec![a];
    for &k in kinks {
        if k > a + 1e-13 && k < b - 1e-13 {
            cuts.push(k);
        }
    }
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut total = QuadResult::zero();
    for w in cuts.windows(2) {
        let lo_b = if w[0] == a { lower } else { Behavior::Smooth };
        let hi_b = if w[1] == b { upper } else { Behavior::Smooth };
        let r = integrate_shaped(
            f,
            w[0],
            w[1],
            Endpoints {
                lower: lo_b,
                upper: hi_b,
            },
            cfg,
        )?
        .into_result()?;
        total.value += r.value;
        total.err_est += r.err_est;
        total.n_evals += r.n_evals;
    }
    Ok(total)
}

/// `(-Δ)^s_p u` at radius `r0` for a radial profile, `n >= 2`.
pub fn eval_radial_nd(
    u: &Profile,
    r0: f64,
    params: &Params,
    cfg: &QuadConfig,
) -> Result<EvalResult> {
    let r = check_radial(u, params)?;
    if !(r0 >= 0.0 && r0 < r) {
        return Err(Error::domain(format!(
            "r0 must lie in [0, {r}) strictly inside the support"
        )));
    }
    let n = params.n;
    let s = params.s;
    let p = params.p;
    let sp = params.sp();
    let c = params.c_norm;
    let kp = (n as f64 + sp) / 2.0;
    let wexp = n as f64 - 2.0;
    let omega = sphere_measure(n - 2);
    let u0 = u.value_radial(r0);
    let g0 = g_power(u0, p);
    let bnd = match u.boundary_exponent() {
        Some(e) => Behavior::Algebraic(e),
        None => Behavior::Smooth,
    };

    // strip |y1| > R: u = 0 along the whole slice, the rho-integral is
    // the kernel moment and the y1 tail closes analytically
    let moment = kernel_moment(n, s, p, cfg)?;
    let tail_geom = ((r - r0).powf(-sp) + (r + r0).powf(-sp)) / sp;
    let strip = g0 * moment.value * tail_geom;
    let strip_err = g0.abs() * moment.err_est * tail_geom;

    // cap region {|y1| <= R, rho >= sqrt(R^2-y1^2)}: still u = 0
    let inner_cfg = QuadConfig {
        abs_tol: cfg.abs_tol / (8.0 * r.powi(n as i32 - 1)).max(1.0),
        ..*cfg
    };
    let cap_stats = InnerStats::new();
    let cap_f = |y1: f64| -> f64 {
        let lo = (r * r - y1 * y1).max(0.0).sqrt();
        let kernel = |rho: f64| rho.powf(wexp) * ((r0 - y1).powi(2) + rho * rho).powf(-kp);
        let res = integrate_full(
            kernel,
            lo,
            f64::INFINITY,
            Endpoints::smooth(),
            Some(2.0 + sp),
            &inner_cfg,
        )
        .and_then(|q| q.into_result());
        InnerStats::absorb(&cap_stats, res)
    };
    let cap_outer = integrate_shaped(cap_f, -r, r, Endpoints::alg(0.5, 0.5), cfg);
    let cap_inner = cap_stats.into_inner();
    if let Some(e) = cap_inner.error {
        return Err(e);
    }
    let cap_outer = cap_outer?.into_result()?;
    let cap = g0 * cap_outer.value;
    let cap_err = g0.abs() * (cap_outer.err_est + 2.0 * r * cap_inner.max_err);

    // disk rho in (0, R), y1 in [-a, a], a = sqrt(R^2 - rho^2): the PV
    // region; pairing in y1 about r0 wherever the slab contains r0
    let bump = u.bump_form();
    let disk_stats = InnerStats::new();
    let disk_f = |rho: f64| -> f64 {
        let a = (r * r - rho * rho).max(0.0).sqrt();
        if a <= 0.0 {
            return 0.0;
        }
        // G(u0 - u(sqrt(y1^2 + rho^2))) has a |t|^{p-2} kink where the
        // sampled radius crosses r0
        let mut kinks: Vec<f64> = Vec::new();
        if rho < r0 {
            let d = (r0 * r0 - rho * rho).sqrt();
            kinks.push(d);
            kinks.push(-d);
        }
        let unpaired = |y1: f64| -> f64 {
            let rad = (y1 * y1 + rho * rho).sqrt();
            g_power(u0 - u.value_radial(rad), p) * ((r0 - y1).powi(2) + rho * rho).powf(-kp)
        };
        let result = (|| -> Result<QuadResult> {
            if r0 < a {
                let eta = cfg.pairing_radius(a - r0);
                let offset = match bump {
                    Some((se, amp)) => {
                        // u(r0) - amp (R^2-r0^2-rho^2)^s, relative-accurate
                        let a_line = r * r - r0 * r0;
                        -amp * a_line.powf(se)
                            * f64::exp_m1(se * f64::ln_1p(-rho * rho / a_line))
                    }
                    None => 0.0,
                };
                let a_slice = r * r - r0 * r0 - rho * rho;
                let pair_h = |tau: f64| -> f64 {
                    match bump {
                        Some((se, amp)) if a_slice - tau * tau - 2.0 * r0 * tau > 0.0 => {
                            bump_pair_g_sum_offset(a_slice, r0, tau, se, p, amp, offset)
                        }
                        _ => {
                            let rp = ((r0 + tau) * (r0 + tau) + rho * rho).sqrt();
                            let rm = ((r0 - tau) * (r0 - tau) + rho * rho).sqrt();
                            g_power(u0 - u.value_radial(rp), p)
                                + g_power(u0 - u.value_radial(rm), p)
                        }
                    }
                };
                let tau_kinks: Vec<f64> = kinks.iter().map(|k| (k - r0).abs()).collect();
                let lo = if bump.is_some() {
                    0.0
                } else {
                    f64::EPSILON.sqrt() * r
                };
                let paired = paired_slice(&pair_h, rho, lo, eta, kp, &tau_kinks, &inner_cfg)?;
                let left =
                    piecewise(&unpaired, -a, r0 - eta, &kinks, bnd, Behavior::Smooth, &inner_cfg)?;
                let right =
                    piecewise(&unpaired, r0 + eta, a, &kinks, Behavior::Smooth, bnd, &inner_cfg)?;
                Ok(QuadResult {
                    value: paired.value + left.value + right.value,
                    err_est: paired.err_est + left.err_est + right.err_est,
                    n_evals: paired.n_evals + left.n_evals + right.n_evals,
                    converged: true,
                })
            } else {
                piecewise(&unpaired, -a, a, &kinks, bnd, bnd, &inner_cfg)
            }
        })();
        rho.powf(wexp) * InnerStats::absorb(&disk_stats, result)
    };
    // outer edge orders: rho^{n-2} times the O(rho^{p-sp-1}) pairing
    // residue at 0 (clamped so the node map stays in f64 range), sqrt at R
    let e_low = (wexp + p - sp - 1.0).max(-0.5);
    let disk_outer = integrate_shaped(disk_f, 0.0, r, Endpoints::alg(e_low, 0.5), cfg);
    let disk_inner = disk_stats.into_inner();
    if let Some(e) = disk_inner.error {
        return Err(e);
    }
    let disk_outer = disk_outer?.into_result()?;
    let disk = disk_outer.value;
    let disk_err = disk_outer.err_est + r * r.powf(wexp) * disk_inner.max_err;

    let scale = c * omega;
    let value = scale * (disk + cap + strip);
    let err_est = scale * (disk_err + cap_err + strip_err) + 4.0 * f64::EPSILON * value.abs();
    Ok(EvalResult {
        value,
        err_est,
        n_evals: disk_outer.n_evals
            + disk_inner.n_evals
            + cap_outer.n_evals
            + cap_inner.n_evals
            + moment.n_evals,
        terms: Some(vec![
            ("inner", scale * disk),
            ("outer", scale * cap),
            ("tail", scale * strip),
        ]),
    })
}

/// Brute-force 2-d PV evaluation at an arbitrary point `x` inside the
/// support: polar coordinates centered at `x`, pairing across antipodal
/// angles. Low-accuracy oracle; run it with `rel_tol ~ 1e-4`.
pub fn eval_cartesian_2d(
    u: &Profile,
    x: &[f64],
    params: &Params,
    cfg: &QuadConfig,
) -> Result<EvalResult> {
    if params.n != 2 {
        return Err(Error::domain("eval_cartesian_2d requires n = 2"));
    }
    if x.len() != 2 {
        return Err(Error::domain("x must be a 2-vector"));
    }
    if matches!(u, Profile::PowerCusp { .. }) {
        return Err(Error::domain("PowerCusp is not C^{1,1}"));
    }
    let r = u.support_radius();
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::domain("profile must have compact support"));
    }
    let rx2 = x[0] * x[0] + x[1] * x[1];
    if rx2 >= r * r {
        return Err(Error::domain("x must lie strictly inside the support"));
    }
    let s = params.s;
    let p = params.p;
    let sp = params.sp();
    let c = params.c_norm;
    let u0 = u.value(x);
    let g0 = g_power(u0, p);
    let a_margin = r * r - rx2;
    let bump = u.bump_form();
    let bnd = match u.boundary_exponent() {
        Some(e) => Behavior::Algebraic(e),
        None => Behavior::Smooth,
    };
    let s_exp_hint = u.boundary_exponent().unwrap_or(s);

    let inner_cfg = QuadConfig {
        abs_tol: cfg.abs_tol / 16.0,
        ..*cfg
    };
    let stats = InnerStats::new();
    let theta_f = |theta: f64| -> f64 {
        let e = [theta.cos(), theta.sin()];
        let cpr = x[0] * e[0] + x[1] * e[1];
        let sq = (cpr * cpr + a_margin).sqrt();
        let t_plus = sq - cpr;
        let t_minus = sq + cpr;
        let rmin = t_plus.min(t_minus);
        let rmax = t_plus.max(t_minus);
        let at = |t: f64, sign: f64| -> f64 {
            u.value(&[x[0] + sign * t * e[0], x[1] + sign * t * e[1]])
        };
        let kink = 2.0 * cpr.abs();
        let result = (|| -> Result<QuadResult> {
            // paired segment: both rays inside the support
            let pair_h = |t: f64| -> f64 {
                match bump {
                    Some((se, amp)) if a_margin - t * t - 2.0 * cpr.abs() * t > 0.0 => {
                        bump_pair_g_sum_offset(a_margin, cpr, t, se, p, amp, 0.0)
                    }
                    _ => g_power(u0 - at(t, 1.0), p) + g_power(u0 - at(t, -1.0), p),
                }
            };
            let integrand = |t: f64| pair_h(t) * t.powf(-1.0 - sp);
            let (pair_lo, pair_lo_b, trunc) = if bump.is_some() {
                (0.0, Behavior::Algebraic(p - sp - 1.0), 0.0)
            } else {
                let fl = f64::EPSILON.sqrt() * r;
                (fl, Behavior::Smooth, 2.0 * integrand(fl).abs() * fl)
            };
            let mut paired = piecewise(
                &integrand,
                pair_lo,
                rmin,
                &[kink],
                pair_lo_b,
                Behavior::Algebraic(s_exp_hint),
                &inner_cfg,
            )?;
            paired.err_est += trunc;
            // middle segment: one ray has exited the support
            let live_sign = if t_plus > t_minus { 1.0 } else { -1.0 };
            let mid = piecewise(
                &|t: f64| (g_power(u0 - at(t, live_sign), p) + g0) * t.powf(-1.0 - sp),
                rmin,
                rmax,
                &[kink],
                Behavior::Algebraic(s_exp_hint),
                bnd,
                &inner_cfg,
            )?;
            // beyond rmax both rays are outside: closed-form tail
            let tail = 2.0 * g0 * rmax.powf(-sp) / sp;
            Ok(QuadResult {
                value: paired.value + mid.value + tail,
                err_est: paired.err_est + mid.err_est,
                n_evals: paired.n_evals + mid.n_evals,
                converged: true,
            })
        })();
        InnerStats::absorb(&stats, result)
    };
    let outer = integrate_shaped(theta_f, 0.0, std::f64::consts::PI, Endpoints::smooth(), cfg);
    let inner = stats.into_inner();
    if let Some(e) = inner.error {
        return Err(e);
    }
    let outer = outer?.into_result()?;
    let value = c * outer.value;
    let err_est = c * (outer.err_est + std::f64::consts::PI * inner.max_err);
    Ok(EvalResult {
        value,
        err_est,
        n_evals: outer.n_evals + inner.n_evals,
        terms: None,
    })
}
