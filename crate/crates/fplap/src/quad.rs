//! Deterministic adaptive quadrature.
//!
//! A 15-point Gauss-Kronrod pair drives recursive bisection with the
//! tolerance halved per split, so the subdivision tree (and therefore the
//! result, summed left to right) is bit-reproducible. Endpoint
//! singularities of declared algebraic order `(x-a)^e`, `e > -1`, are
//! removed by the substitution `x = a + (b-a) t^k` with `k` picked from
//! `e`; improper upper limits are mapped by `z -> 1/z` onto a finite
//! interval instead of truncated.

use crate::error::Error;
use crate::model::{g_power, Params, Profile};
use crate::Result;
use std::cell::RefCell;

/// Tolerances and limits for one integration call.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    /// Absolute tolerance target.
    pub abs_tol: f64,
    /// Relative tolerance target.
    pub rel_tol: f64,
    /// Maximum bisection depth.
    pub max_depth: u32,
    /// PV pairing radius as a fraction of the distance from the
    /// evaluation point to the support boundary (capped at 0.1).
    pub pv_radius_frac: f64,
    /// Map `[T, inf)` tails onto `(0, 1/T]` via `z -> 1/z`. When false,
    /// tails are truncated at a large cutoff (debugging aid only; the
    /// truncation error is not reflected in `err_est`).
    pub far_field_map: bool,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_depth: 60,
            pv_radius_frac: 0.25,
            far_field_map: true,
        }
    }
}

impl QuadConfig {
    pub fn with_tols(abs_tol: f64, rel_tol: f64) -> Self {
        QuadConfig {
            abs_tol,
            rel_tol,
            ..QuadConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if !(self.pv_radius_frac > 0.0 && self.pv_radius_frac <= 0.5) {
            return Err(Error::domain("pv_radius_frac must lie in (0, 0.5]"));
        }
        Ok(())
    }

    /// Pairing radius for a point at distance `dist` from the support
    /// boundary.
    pub fn pairing_radius(&self, dist: f64) -> f64 {
        (self.pv_radius_frac * dist).min(0.1)
    }
}

/// Outcome of one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err_est: f64,
    pub n_evals: u64,
    pub converged: bool,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult {
            value: 0.0,
            err_est: 0.0,
            n_evals: 0,
            converged: true,
        }
    }

    /// Convert a non-converged result into the corresponding error.
    pub fn into_result(self) -> Result<QuadResult> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                value: self.value,
                err_est: self.err_est,
                n_evals: self.n_evals,
            })
        }
    }
}

/// Declared local behavior of the integrand at an endpoint:
/// `f(x) ~ smooth + c (x - endpoint)^e` with `e > -1` (negative `e`
/// means an integrable singularity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Behavior {
    Smooth,
    Algebraic(f64),
}

/// Endpoint declarations for one finite interval.
#[derive(Debug, Clone, Copy)]
pub struct Endpoints {
    pub lower: Behavior,
    pub upper: Behavior,
}

impl Endpoints {
    pub fn smooth() -> Self {
        Endpoints {
            lower: Behavior::Smooth,
            upper: Behavior::Smooth,
        }
    }
    pub fn lower_alg(e: f64) -> Self {
        Endpoints {
            lower: Behavior::Algebraic(e),
            upper: Behavior::Smooth,
        }
    }
    pub fn upper_alg(e: f64) -> Self {
        Endpoints {
            lower: Behavior::Smooth,
            upper: Behavior::Algebraic(e),
        }
    }
    pub fn alg(lower: f64, upper: f64) -> Self {
        Endpoints {
            lower: Behavior::Algebraic(lower),
            upper: Behavior::Algebraic(upper),
        }
    }
}

/// Substitution order for a declared algebraic exponent. The map
/// `x = a + (b-a) t^k` turns `(x-a)^e` into `t^{k(1+e)-1}`; `k` is
/// picked so that several derivatives of the transformed integrand stay
/// bounded.
fn subst_order(e: f64) -> i32 {
    if e >= 3.0 {
        return 1;
    }
    let e = e.max(-0.99);
    ((5.0 / (1.0 + e)).ceil() as i32).clamp(2, 32)
}

// below this, t^k has lost so much precision that the remaining mass of
// an integrable singularity is far under any tolerance; treated as zero
const SUBNORMAL_GUARD: f64 = 1e-300;

// 15-point Kronrod nodes (positive half) and weights, with the embedded
// 7-point Gauss weights, as tabulated in QUADPACK's dqk15.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// One Gauss-Kronrod 15 pass. Returns `(value, err, resabs)`.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<(f64, f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(format!(
                "integrand returned {v} at x = {x}"
            )))
        }
    };
    let fc = eval(center)?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0_f64; 7];
    let mut fv2 = [0.0_f64; 7];
    for j in 0..7 {
        let absc = half * XGK[j];
        let f1 = eval(center - absc)?;
        let f2 = eval(center + absc)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        if j % 2 == 1 {
            resg += WG[j / 2] * fsum;
        }
        resk += WGK[j] * fsum;
        resabs += WGK[j] * (f1.abs() + f2.abs());
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((value, err, resabs))
}

// hard cap on function evaluations per integration call; a backstop
// against integrands whose error estimate refuses to shrink under
// refinement (e.g. rounding-noise-dominated combinations)
const MAX_EVALS_PER_CALL: u64 = 3_000_000;

struct Adapt<'a> {
    f: &'a dyn Fn(f64) -> f64,
    max_depth: u32,
    n_evals: u64,
}

impl Adapt<'_> {
    /// Depth-first bisection, left child before right, tolerance halved
    /// per split. Returns `(value, err)` with the error summed over the
    /// accepted leaves.
    fn run(&mut self, a: f64, b: f64, tol: f64, depth: u32) -> Result<(f64, f64)> {
        let (v, e, resabs) = gk15(self.f, a, b)?;
        self.n_evals += 15;
        let machine_floor = 100.0 * f64::EPSILON * resabs;
        if e <= tol
            || e <= machine_floor
            || depth >= self.max_depth
            || self.n_evals >= MAX_EVALS_PER_CALL
        {
            return Ok((v, e));
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return Ok((v, e));
        }
        let (v1, e1) = self.run(a, mid, 0.5 * tol, depth + 1)?;
        let (v2, e2) = self.run(mid, b, 0.5 * tol, depth + 1)?;
        Ok((v1 + v2, e1 + e2))
    }
}

/// One transformed subinterval, integrated over [lo, hi] in the mapped
/// variable.
struct Piece<'a> {
    g: Box<dyn Fn(f64) -> f64 + 'a>,
    lo: f64,
    hi: f64,
}

fn lower_subst_piece<'a>(
    f: &'a (dyn Fn(f64) -> f64 + 'a),
    a: f64,
    b: f64,
    e: f64,
) -> Piece<'a> {
    let k = subst_order(e);
    if k == 1 {
        return Piece {
            g: Box::new(f),
            lo: a,
            hi: b,
        };
    }
    let len = b - a;
    let kf = k as f64;
    Piece {
        g: Box::new(move |t: f64| {
            let tk = t.powi(k);
            let x = a + len * tk;
            if tk < SUBNORMAL_GUARD || x <= a {
                // the map has run out of resolution; the unresolved mass
                // of any integrable singularity is negligible here
                return 0.0;
            }
            f(x) * kf * len * t.powi(k - 1)
        }),
        lo: 0.0,
        hi: 1.0,
    }
}

fn upper_subst_piece<'a>(
    f: &'a (dyn Fn(f64) -> f64 + 'a),
    a: f64,
    b: f64,
    e: f64,
) -> Piece<'a> {
    let k = subst_order(e);
    if k == 1 {
        return Piece {
            g: Box::new(f),
            lo: a,
            hi: b,
        };
    }
    let len = b - a;
    let kf = k as f64;
    Piece {
        g: Box::new(move |t: f64| {
            let tk = t.powi(k);
            let x = b - len * tk;
            if tk < SUBNORMAL_GUARD || x >= b {
                return 0.0;
            }
            f(x) * kf * len * t.powi(k - 1)
        }),
        lo: 0.0,
        hi: 1.0,
    }
}

fn finite_pieces<'a>(
    f: &'a (dyn Fn(f64) -> f64 + 'a),
    a: f64,
    b: f64,
    endpoints: Endpoints,
) -> Vec<Piece<'a>> {
    match (endpoints.lower, endpoints.upper) {
        (Behavior::Smooth, Behavior::Smooth) => vec![Piece {
            g: Box::new(f),
            lo: a,
            hi: b,
        }],
        (Behavior::Algebraic(e), Behavior::Smooth) => vec![lower_subst_piece(f, a, b, e)],
        (Behavior::Smooth, Behavior::Algebraic(e)) => vec![upper_subst_piece(f, a, b, e)],
        (Behavior::Algebraic(el), Behavior::Algebraic(eu)) => {
            let mid = 0.5 * (a + b);
            vec![
                lower_subst_piece(f, a, mid, el),
                upper_subst_piece(f, mid, b, eu),
            ]
        }
    }
}

/// Full-control entry point: finite or improper upper limit, declared
/// endpoint behaviors, and (for improper integrals) the known power-law
/// decay `f ~ z^{-decay}` of the tail.
pub fn integrate_full<F>(
    f: F,
    a: f64,
    b: f64,
    endpoints: Endpoints,
    tail_decay: Option<f64>,
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !a.is_finite() {
        return Err(Error::domain("lower integration bound must be finite"));
    }
    if b.is_finite() && b <= a {
        if b == a {
            return Ok(QuadResult::zero());
        }
        return Err(Error::domain("integration bounds must satisfy a <= b"));
    }

    let fref: &dyn Fn(f64) -> f64 = &f;
    // z -> 1/z maps [T, inf) onto (0, 1/T]; f ~ z^{-d} becomes t^{d-2}
    let tail_fn = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        fref(1.0 / t) / (t * t)
    };
    let mut pieces: Vec<Piece> = Vec::new();
    if b.is_finite() {
        pieces.extend(finite_pieces(fref, a, b, endpoints));
    } else if cfg.far_field_map {
        let t_split = if a <= 0.0 { 1.0 } else { (2.0 * a).max(1.0) };
        if t_split > a {
            pieces.extend(finite_pieces(
                fref,
                a,
                t_split,
                Endpoints {
                    lower: endpoints.lower,
                    upper: Behavior::Smooth,
                },
            ));
        }
        let tail_e = tail_decay.map(|d| d - 2.0).unwrap_or(-0.5);
        pieces.push(lower_subst_piece(&tail_fn, 0.0, 1.0 / t_split, tail_e));
    } else {
        // truncation fallback; the cutoff error is not tracked
        let cutoff = (1e6_f64).max(1e3 * (1.0 + a.abs()));
        pieces.extend(finite_pieces(
            fref,
            a,
            cutoff,
            Endpoints {
                lower: endpoints.lower,
                upper: Behavior::Smooth,
            },
        ));
    }

    // first pass: a single GK estimate per piece fixes the error budget
    let mut n_evals = 0u64;
    let mut rough = 0.0;
    for p in &pieces {
        let (v, _, _) = gk15(&p.g, p.lo, p.hi)?;
        n_evals += 15;
        rough += v;
    }

    let mut budget = cfg.abs_tol.max(cfg.rel_tol * rough.abs());
    for _pass in 0..2 {
        let per_piece = budget / pieces.len() as f64;
        let mut value = 0.0;
        let mut err = 0.0;
        for p in &pieces {
            let mut ad = Adapt {
                f: &p.g,
                max_depth: cfg.max_depth,
                n_evals: 0,
            };
            let (v, e) = ad.run(p.lo, p.hi, per_piece, 0)?;
            n_evals += ad.n_evals;
            value += v;
            err += e;
        }
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if err <= target {
            return Ok(QuadResult {
                value,
                err_est: err,
                n_evals,
                converged: true,
            });
        }
        if budget > 2.0 * target {
            // the first-pass estimate was off; tighten once and retry
            budget = target;
            continue;
        }
        return Ok(QuadResult {
            value,
            err_est: err,
            n_evals,
            converged: false,
        });
    }
    unreachable!()
}

/// Integrate `f` over `[a, b]` (`b` may be `f64::INFINITY`).
///
/// Algebraic endpoint singularities `x^{-e}` with `e < 1` are tolerated
/// without declaration; callers that know the endpoint orders should
/// prefer [`integrate_shaped`], which clusters nodes optimally.
pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    integrate_full(f, a, b, Endpoints::alg(-0.5, -0.5), None, cfg)
}

/// Integrate with declared endpoint behaviors.
pub fn integrate_shaped<F>(
    f: F,
    a: f64,
    b: f64,
    endpoints: Endpoints,
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    integrate_full(f, a, b, endpoints, None, cfg)
}

/// Iterated double integral with inner limits depending on the outer
/// variable. The inner absolute tolerance is the outer one divided by
/// the outer interval length, so the accumulated inner error stays
/// within budget; `err_est` combines both layers.
pub fn integrate2d_iterated<F, L, U>(
    f: F,
    outer: (f64, f64),
    inner_lo: L,
    inner_hi: U,
    cfg: &QuadConfig,
) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64,
    L: Fn(f64) -> f64,
    U: Fn(f64) -> f64,
{
    let (a, b) = outer;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("outer interval must be finite"));
    }
    if b <= a {
        if b == a {
            return Ok(QuadResult::zero());
        }
        return Err(Error::domain("outer interval must satisfy a <= b"));
    }
    let len = b - a;
    let inner_cfg = QuadConfig {
        abs_tol: cfg.abs_tol / len.max(1.0),
        ..*cfg
    };
    let state: RefCell<(f64, u64, Option<Error>)> = RefCell::new((0.0, 0, None));
    let g = |w: f64| -> f64 {
        match integrate(|y| f(w, y), inner_lo(w), inner_hi(w), &inner_cfg) {
            Ok(r) => {
                let mut st = state.borrow_mut();
                st.0 = st.0.max(r.err_est);
                st.1 += r.n_evals;
                if !r.converged {
                    st.2.get_or_insert(Error::NonConvergence {
                        value: r.value,
                        err_est: r.err_est,
                        n_evals: r.n_evals,
                    });
                }
                r.value
            }
            Err(e) => {
                state.borrow_mut().2.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let outer_res = integrate_full(g, a, b, Endpoints::smooth(), None, cfg);
    let (max_inner_err, inner_evals, inner_err_state) = state.into_inner();
    if let Some(e) = inner_err_state {
        return Err(e);
    }
    let r = outer_res?;
    Ok(QuadResult {
        value: r.value,
        err_est: r.err_est + len * max_inner_err,
        n_evals: r.n_evals + inner_evals,
        converged: r.converged,
    })
}

/// The paired PV integrand along a line: `h(z) = G(u(x) - u(x+z e)) +
/// G(u(x) - u(x-z e))`. After division by `z^{1+sp}` the pairing leaves
/// an integrable singularity of order `z^{p-sp-1}` at 0 for `C^{1,1}`
/// profiles.
///
/// For the bump family the combination is formed cancellation-free; for
/// custom profiles it is the plain sum, whose accuracy at tiny `z` is
/// limited by rounding in `u`.
pub fn pv_paired_integrand(
    u: &Profile,
    x: &[f64],
    direction: &[f64],
    params: &Params,
) -> Result<impl Fn(f64) -> f64> {
    if x.len() != direction.len() || x.is_empty() {
        return Err(Error::domain("point and direction dimensions must match"));
    }
    let norm2: f64 = direction.iter().map(|d| d * d).sum();
    if (norm2 - 1.0).abs() > 1e-12 {
        return Err(Error::domain("direction must be a unit vector"));
    }
    let u = u.clone();
    let x: Vec<f64> = x.to_vec();
    let e: Vec<f64> = direction.to_vec();
    let p = params.p;
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let proj: f64 = x.iter().zip(&e).map(|(a, b)| a * b).sum();
    let bump = u.bump_form();
    let rr = u.support_radius();
    let a_margin = rr * rr - r2;
    let u0 = u.value(&x);
    Ok(move |z: f64| -> f64 {
        if let Some((s_exp, amp)) = bump {
            if a_margin - z * z - 2.0 * proj.abs() * z > 0.0 {
                return crate::special::bump_pair_g_sum(a_margin, proj, z, s_exp, p, amp);
            }
        }
        let plus: Vec<f64> = x.iter().zip(&e).map(|(xi, ei)| xi + z * ei).collect();
        let minus: Vec<f64> = x.iter().zip(&e).map(|(xi, ei)| xi - z * ei).collect();
        g_power(u0 - u.value(&plus), p) + g_power(u0 - u.value(&minus), p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x * x, 0.0, 1.0, &cfg()).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0 / 3.0).abs() <= r.err_est.max(1e-14));
    }

    #[test]
    fn endpoint_singularity_undeclared() {
        // integral of x^{-1/2} over [0,1] is 2
        let r = integrate(|x| x.powf(-0.5), 0.0, 1.0, &cfg()).unwrap();
        assert!(r.converged, "err_est={}", r.err_est);
        assert!((r.value - 2.0).abs() <= 1e-9, "value={}", r.value);
    }

    #[test]
    fn endpoint_singularity_declared() {
        let r = integrate_shaped(
            |x| x.powf(-0.5),
            0.0,
            1.0,
            Endpoints::lower_alg(-0.5),
            &cfg(),
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0).abs() <= 1e-10);
    }

    #[test]
    fn improper_tail() {
        let r = integrate(|x| x.powi(-2), 1.0, f64::INFINITY, &cfg()).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn improper_tail_slow_decay() {
        // integral_1^inf x^{-1.3} = 1/0.3
        let r = integrate_full(
            |x: f64| x.powf(-1.3),
            1.0,
            f64::INFINITY,
            Endpoints::smooth(),
            Some(1.3),
            &cfg(),
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0 / 0.3).abs() <= 1e-9 * (1.0 / 0.3));
    }

    #[test]
    fn deterministic_bitwise() {
        let run = || integrate(|x: f64| (x * 17.3).sin() / (1.0 + x * x), 0.0, 4.0, &cfg()).unwrap();
        let r1 = run();
        let r2 = run();
        assert_eq!(r1.value.to_bits(), r2.value.to_bits());
        assert_eq!(r1.err_est.to_bits(), r2.err_est.to_bits());
        assert_eq!(r1.n_evals, r2.n_evals);
    }

    #[test]
    fn nan_is_reported() {
        let r = integrate(|x| (x - 0.5).ln(), 0.0, 1.0, &cfg());
        assert!(matches!(r, Err(Error::Evaluation(_))));
    }

    #[test]
    fn iterated_2d_unit_square() {
        let r = integrate2d_iterated(|_, _| 1.0, (0.0, 1.0), |_| 0.0, |_| 1.0, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn iterated_2d_triangle() {
        // x in [0,1], y in [0,x], f = y*x: integral = 1/8
        let r = integrate2d_iterated(|x, y| x * y, (0.0, 1.0), |_| 0.0, |x| x, &cfg()).unwrap();
        assert!((r.value - 0.125).abs() <= 1e-9, "value={}", r.value);
    }

    #[test]
    fn iterated_2d_separable_kernel() {
        // f = y^{n-2}/(1+y^2)^{(n+sp)/2} * w^{-1-sp} with n=2, sp=1:
        // product of two 1-d integrals over w in [1,2], y in [0,1]
        let f = |w: f64, y: f64| (1.0 + y * y).powf(-1.5) * w.powf(-2.0);
        let r = integrate2d_iterated(f, (1.0, 2.0), |_| 0.0, |_| 1.0, &cfg()).unwrap();
        let iw = integrate(|w: f64| w.powf(-2.0), 1.0, 2.0, &cfg()).unwrap();
        let iy = integrate(|y: f64| (1.0 + y * y).powf(-1.5), 0.0, 1.0, &cfg()).unwrap();
        let expect = iw.value * iy.value;
        assert!(
            (r.value - expect).abs() <= 10.0 * (r.err_est + iw.err_est + iy.err_est),
            "{} vs {}",
            r.value,
            expect
        );
        // and the y-factor is analytic: y/sqrt(1+y^2) at 1 = 1/sqrt(2)
        assert!((iy.value - 1.0 / 2.0_f64.sqrt()).abs() <= 1e-10);
    }

    #[test]
    fn paired_integrand_center_symmetry() {
        // bump at x=0: h(z) = 2 G(1 - (1-z^2)^s) for z < 1
        let params = Params::new(1, 0.5, 3.0).unwrap();
        let u = Profile::bump(0.5);
        let h = pv_paired_integrand(&u, &[0.0], &[1.0], &params).unwrap();
        for &z in &[0.1, 0.4, 0.8] {
            let expect = 2.0 * g_power(1.0 - (1.0_f64 - z * z).powf(0.5), 3.0);
            assert!((h(z) - expect).abs() <= 1e-13 * expect.abs(), "z={z}");
        }
    }

    #[test]
    fn paired_integrand_constant_profile() {
        let params = Params::new(1, 0.5, 3.0).unwrap();
        let c = Profile::Custom(crate::model::CustomProfile {
            value: std::sync::Arc::new(|_| 2.5),
            gradient: None,
            support_radius: f64::INFINITY,
            radial: true,
            boundary_exponent: None,
            bump_like: None,
        });
        let h = pv_paired_integrand(&c, &[0.2], &[1.0], &params).unwrap();
        for &z in &[0.01, 0.3, 2.0] {
            assert_eq!(h(z), 0.0);
        }
    }

    #[test]
    fn paired_integrand_two_routes_agree() {
        // paired vs direct sum of the two one-sided G terms
        let params = Params::new(1, 0.5, 3.0).unwrap();
        let u = Profile::bump(0.5);
        let h = pv_paired_integrand(&u, &[0.3], &[1.0], &params).unwrap();
        let z = 0.1;
        let manual = g_power(u.value(&[0.3]) - u.value(&[0.4]), 3.0)
            + g_power(u.value(&[0.3]) - u.value(&[0.2]), 3.0);
        assert!((h(z) - manual).abs() <= 1e-13 * manual.abs());
    }

    #[test]
    fn paired_integrand_integrable_order() {
        // log-log slope of h(z)/z^{1+sp} as z -> 0 must be >= p-sp-1 - 0.1
        let (s, p) = (0.5, 3.0);
        let params = Params::new(1, s, p).unwrap();
        let u = Profile::bump(s);
        let h = pv_paired_integrand(&u, &[0.4], &[1.0], &params).unwrap();
        let sp = s * p;
        let f = |z: f64| h(z).abs() / z.powf(1.0 + sp);
        // one decade, ten samples
        let mut pts = Vec::new();
        for i in 0..10 {
            let z = 1e-4 * 10f64.powf(i as f64 / 9.0);
            pts.push((z.ln(), f(z).ln()));
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(slope >= p - sp - 1.0 - 0.1, "slope={slope}");
    }
}
