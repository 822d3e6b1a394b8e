//! The verification suite: every release-gating claim as an executable
//! criterion with pinned tolerances and wall-clock budgets. Run it via
//! `fplap verify` or the `acceptance` integration test target.

use crate::analysis::{
    bounded_sweep, closed_form_half, comparison_probe, hopf_ratio, identity_residual, lsp_tail,
    scaling_check, singular_fit,
};
use crate::model::{g_ratio, Params, Profile};
use crate::oplap1d::{eval_decomposed_1d, eval_direct_1d};
use crate::oplapnd::{eval_cartesian_2d, eval_radial_nd, kernel_moment, kernel_moment_beta};
use crate::quad::QuadConfig;
use std::f64::consts::PI;
use std::time::Instant;

/// One elementary check inside a criterion.
#[derive(Debug, Clone)]
pub struct CheckRow {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub tol: String,
    pub pass: bool,
}

impl CheckRow {
    fn new(name: impl Into<String>, expected: f64, got: f64, tol: f64, pass: bool) -> Self {
        CheckRow {
            name: name.into(),
            expected: format!("{expected:.12e}"),
            got: format!("{got:.12e}"),
            tol: format!("{tol:.3e}"),
            pass,
        }
    }

    fn abs(name: impl Into<String>, expected: f64, got: f64, tol: f64) -> Self {
        let pass = (got - expected).abs() <= tol;
        Self::new(name, expected, got, tol, pass)
    }

    fn rel(name: impl Into<String>, expected: f64, got: f64, rel_tol: f64) -> Self {
        let pass = (got - expected).abs() <= rel_tol * expected.abs();
        Self::new(name, expected, got, rel_tol, pass)
    }

    fn flag(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        CheckRow {
            name: name.into(),
            expected: "true".into(),
            got: detail.into(),
            tol: "-".into(),
            pass,
        }
    }
}

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub seconds: f64,
    pub budget_seconds: f64,
    pub rows: Vec<CheckRow>,
}

impl Criterion {
    pub fn summary_line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let failed = self.rows.iter().filter(|r| !r.pass).count();
        format!(
            "[{status}] criterion {:2}: {} ({} checks, {} failed, {:.2}s / budget {:.0}s)",
            self.id,
            self.name,
            self.rows.len(),
            failed,
            self.seconds,
            self.budget_seconds
        )
    }
}

fn finish(
    id: u32,
    name: &'static str,
    budget_seconds: f64,
    start: Instant,
    rows: Vec<CheckRow>,
) -> Criterion {
    let seconds = start.elapsed().as_secs_f64();
    let pass = rows.iter().all(|r| r.pass) && seconds <= budget_seconds;
    Criterion {
        id,
        name,
        pass,
        seconds,
        budget_seconds,
        rows,
    }
}

/// 1. Closed-form reproduction at `s = 1/2`.
pub fn c01_closed_forms() -> Criterion {
    let start = Instant::now();
    let mut rows = Vec::new();
    let cfg = QuadConfig::default();
    let u = Profile::bump(0.5);
    for &p in &[2.0, 4.0, 6.0, 8.0] {
        let params = Params::new(1, 0.5, p).unwrap();
        for &x in &[0.0, 0.25, 0.5, 0.75, 0.9] {
            let want = closed_form_half(p, x, 1.0).unwrap();
            match eval_direct_1d(&u, x, &params, &cfg) {
                Ok(r) => rows.push(CheckRow::rel(format!("p={p} x={x}"), want, r.value, 1e-4)),
                Err(e) => rows.push(CheckRow::flag(format!("p={p} x={x}"), false, e.to_string())),
            }
        }
    }
    finish(1, "closed-form reproduction (s=1/2)", 10.0, start, rows)
}

/// 2. `p = 2` constancy of the trace.
pub fn c02_p2_constancy() -> Criterion {
    let start = Instant::now();
    let mut rows = Vec::new();
    let cfg = QuadConfig::default();
    let u = Profile::bump(0.5);
    let params = Params::new(1, 0.5, 2.0).unwrap();
    let mut vals = Vec::new();
    for i in 0..10 {
        let x = i as f64 * 0.1;
        match eval_direct_1d(&u, x, &params, &cfg) {
            Ok(r) => vals.push(r.value),
            Err(e) => rows.push(CheckRow::flag(format!("x={x}"), false, e.to_string())),
        }
    }
    if vals.len() == 10 {
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let var =
            vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (vals.len() - 1) as f64;
        let spread = var.sqrt() / mean;
        rows.push(CheckRow::abs("relative spread", 0.0, spread, 1e-5));
        rows.push(CheckRow::rel("mean vs pi", PI, mean, 1e-5));
    }
    finish(2, "p=2 constancy", 2.0, start, rows)
}

/// 3. The scalar identity and its epsilon-split.
pub fn c03_identity() -> Criterion {
    let start = Instant::now();
    let mut rows = Vec::new();
    let tight = QuadConfig::with_tols(1e-12, 1e-11);
    for &s in &[0.25, 0.5, 0.75] {
        for &p in &[2.0, 2.5, 3.0, 4.0] {
            match identity_residual(s, p, &tight) {
                Ok(rep) => {
                    rows.push(CheckRow::abs(
                        format!("residual s={s} p={p}"),
                        0.0,
                        rep.residual,
                        1e-6,
                    ));
                    // monotone approach to -1/(sp): the gap shrinks at
                    // every step of the eps sequence (its rate is
                    // eps^{p-sp}, slow when p-sp is small)
                    let lim = -1.0 / (s * p);
                    let gap_first = (rep.h3.first().unwrap() - lim).abs();
                    let gap_last = (rep.h3.last().unwrap() - lim).abs();
                    let monotone = rep
                        .h3
                        .windows(2)
                        .all(|w| (w[1] - lim).abs() < (w[0] - lim).abs())
                        && gap_last < 0.1 * gap_first;
                    rows.push(CheckRow::flag(
                        format!("H3 -> -1/(sp) monotone s={s} p={p}"),
                        monotone,
                        format!("gap {gap_first:.3e} -> {gap_last:.3e}"),
                    ));
                }
                Err(e) => rows.push(CheckRow::flag(
                    format!("residual s={s} p={p}"),
                    false,
                    e.to_string(),
                )),
            }
        }
    }
    finish(3, "boundary-singular identity", 5.0, start, rows)
}

/// 4. Uniform boundedness in 1-d: the two-parameter boundary fit and
///    cross-method agreement near the boundary.
pub fn c04_boundedness_1d() -> Criterion {
    let start = Instant::now();
    let mut rows = Vec::new();
    let cfg = QuadConfig::default();
    for &s in &[0.3, 0.5, 0.7] {
        for &p in &[2.5, 3.0, 4.0] {
            let params = Params::new(1, s, p).unwrap();
            match singular_fit(&params, &cfg, 14) {
                Ok(fit) => {
                    let maxv = fit.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                    rows.push(CheckRow::abs(
                        format!("|b| s={s} p={p}"),
                        0.0,
                        fit.b,
                        1e-3 * maxv,
                    ));
                }
                Err(e) => rows.push(CheckRow::flag(
                    format!("|b| s={s} p={p}"),
                    false,
                    e.to_string(),
                )),
            }
            let u = Profile::bump(s);
            let agree = eval_direct_1d(&u, 0.99, &params, &cfg).and_then(|d| {
                eval_decomposed_1d(s, 0.99, &params, &cfg).map(|e| {
                    (
                        (d.value - e.value).abs(),
                        d.err_est + e.err_est,
                        d.value,
                        e.value,
                    )
                })
            });
            match agree {
                Ok((diff, tol, dv, ev)) => rows.push(CheckRow::new(
                    format!("methods at x=0.99 s={s} p={p}"),
                    dv,
                    ev,
                    tol,
                    diff <= tol.max(1e-12),
                )),
                Err(e) => rows.push(CheckRow::flag(
                    format!("methods at x=0.99 s={s} p={p}"),
                    false,
                    e.to_string(),
                )),
            }
        }
    }
    finish(
        4,
        "1-d boundedness (fit + method agreement)",
        60.0,
        start,
        rows,
    )
}

/// 5. Appendix monotonicity and ranges.
pub fn c05_appendix_sweeps() -> Criterion {
    let start = Instant::now();
    let mut rows = Vec::new();
    let cfg = QuadConfig::default();
    let cases = [
        (4.0, 6.0 * 2.0_f64.ln() - 3.0, 3.0 * PI),
        (6.0, 40.0 - 12.5 * PI, 7.5 * PI),
        (8.0, 469.0 / 6.0 - 112.0 * 2.0_f64.ln(), 17.5 * PI),
    ];
    let mut grid: Vec<f64> = (0..20).map(|i| i as f64 * 0.05).collect();
    grid.extend_from_slice(&[0.99, 0.999, 0.9999]);
    for &(p, start_val, limit) in &cases {
        let params = Params::new(1, 0.5, p).unwrap();
        match bounded_sweep(&params, &cfg, &grid) {
            Ok((_, trace)) => {
                let vals: Vec<f64> = trace.iter().filter_map(|t| t.value).collect();
                let all_ok = vals.len() == grid.len();
                let increasing = all_ok && vals.windows(2).all(|w| w[1] > w[0]);
                rows.push(CheckRow::flag(
                    format!("strictly increasing p={p}"),
                    increasing,
                    format!("{} points", vals.len()),
                ));
                if let Some(v0) = vals.first() {
                    rows.push(CheckRow::abs(format!("start p={p}"), start_val, *v0, 1e-4));
                }
                if let Some(vl) = vals.last() {
                    let cf = closed_form_half(p, 0.9999, 1.0).unwrap();
                    rows.push(CheckRow::abs(
                        format!("x=0.9999 vs closed form p={p}"),
                        cf,
                        *vl,
                        1e-2,
                    ));
                    rows.push(CheckRow::flag(
                        format!("below limit p={p}"),
                        all_ok && vals.iter().all(|v| *v < limit),
                        format!("sup {:.6} < {:.6}", vl, limit),
                    ));
                }
            }
            Err(e) => rows.push(CheckRow::flag(format!("sweep p={p}"), false, e.to_string())),
        }
    }
    finish(5, "appendix monotonicity and ranges", 60.0, start, rows)
}

/// 6. The n-dimensional reduction against the Cartesian oracle.
pub fn c06_nd_reduction() -> Criterion {
    let start = Instant::now();
    let mut rows = Vec::new();
    let oracle_cfg = QuadConfig::with_tols(1e-6, 1e-4);
    let radial_cfg = QuadConfig::with_tols(1e-8, 1e-7);
    for &(s, p) in &[(0.5, 2.0), (0.5, 3.0), (0.3, 4.0)] {
        let params = Params::new(2, s, p).unwrap();
        let u = Profile::bump(s);
        for &r0 in &[0.2, 0.5, 0.8] {
            let pair = eval_radial_nd(&u, r0, &params, &radial_cfg).and_then(|a| {
                eval_cartesian_2d(&u, &[r0, 0.0], &params, &oracle_cfg).map(|b| (a, b))
            });
            match pair {
                Ok((a, b)) => {
                    let tol = a.err_est + b.err_est;
                    rows.push(CheckRow::new(
                        format!("radial vs cartesian s={s} p={p} r0={r0}"),
                        a.value,
                        b.value,
                        tol,
                        (a.value - b.value).abs() <= tol,
                    ));
                }
                Err(e) => rows.push(CheckRow::flag(
                    format!("radial vs cartesian s={s} p={p} r0={r0}"),
                    false,
                    e.to_string(),
                )),
            }
        }
    }
    // rotation invariance of the oracle at a fixed set of angles
    let params = Params::new(2, 0.5, 3.0).unwrap();
    let u = Profile::bump(0.5);
    let base = eval_cartesian_2d(&u, &[0.5, 0.0], &params, &oracle_cfg);
    for &ang in &[0.7, 1.9, 2.8, 5.3] {
        let x = [0.5 * f64::cos(ang), 0.5 * f64::sin(ang)];
        let rot = eval_cartesian_2d(&u, &x, &params, &oracle_cfg);
        match (&base, rot) {
            (Ok(a), Ok(b)) => {
                let tol = 2.0 * (a.err_est + b.err_est);
                rows.push(CheckRow::new(
                    format!("rotation {ang} rad"),
                    a.value,
                    b.value,
                    tol,
                    (a.value - b.value).abs() <= tol,
                ));
            }
            _ => rows.push(CheckRow::flag(
                format!("rotation {ang} rad"),
                false,
                "eval error",
            )),
        }
    }
    finish(6, "n-d reduction vs Cartesian oracle", 300.0, start, rows)
}

/// 7. Kernel moment against the Beta closed form.
pub fn c07_kernel_moment() -> Criterion {
    let start = Instant::now();
    let mut rows = Vec::new();
    let cfg = QuadConfig::default();
    for n in [2u32, 3, 4] {
        for &s in &[0.25, 0.5, 0.75] {
            for &p in &[2.0, 3.0] {
                let want = kernel_moment_beta(n, s, p);
                match kernel_moment(n, s, p, &cfg) {
                    Ok(m) => rows.push(CheckRow::rel(
                        format!("M(n={n}, s={s}, p={p})"),
                        want,
                        m.value,
                        10.0 * cfg.rel_tol,
                    )),
                    Err(e) => rows.push(CheckRow::flag(
                        format!("M(n={n}, s={s}, p={p})"),
                        false,
                        e.to_string(),
                    )),
                }
            }
        }
    }
    // the two elementary antiderivative cases
    let m = kernel_moment(2, 0.5, 2.0, &cfg)
        .map(|m| m.value)
        .unwrap_or(f64::NAN);
    rows.push(CheckRow::rel("analytic n=2 sp=1", 1.0, m, 10.0 * cfg.rel_tol));
    let m = kernel_moment(3, 0.5, 2.0, &cfg)
        .map(|m| m.value)
        .unwrap_or(f64::NAN);
    rows.push(CheckRow::rel("analytic n=3 sp=1", 0.5, m, 10.0 * cfg.rel_tol));
    finish(7, "kernel moment vs Beta closed form", 2.0, start, rows)
}

/// 8. Barrier machinery: rescaling law, homogeneity, boundary ratio.
pub fn c08_barrier() -> Criterion {
    let start = Instant::now();
    let mut rows = Vec::new();
    let cfg1 = QuadConfig::default();
    let params1 = Params::new(1, 0.5, 4.0).unwrap();
    for &rho in &[0.5, 2.0, 5.0] {
        match scaling_check(rho, 0.6 * rho, &params1, &cfg1) {
            Ok(e) => rows.push(CheckRow::abs(format!("scaling n=1 rho={rho}"), 0.0, e, 1e-4)),
            Err(e) => rows.push(CheckRow::flag(
                format!("scaling n=1 rho={rho}"),
                false,
                e.to_string(),
            )),
        }
    }
    let params2 = Params::new(2, 0.5, 2.0).unwrap();
    let cfg2 = QuadConfig::with_tols(1e-8, 1e-7);
    for &rho in &[0.5, 2.0, 5.0] {
        match scaling_check(rho, 0.6 * rho, &params2, &cfg2) {
            Ok(e) => rows.push(CheckRow::abs(format!("scaling n=2 rho={rho}"), 0.0, e, 1e-3)),
            Err(e) => rows.push(CheckRow::flag(
                format!("scaling n=2 rho={rho}"),
                false,
                e.to_string(),
            )),
        }
    }
    // homogeneity: op(lambda u) = lambda^{p-1} op(u)
    let params = Params::new(1, 0.5, 3.0).unwrap();
    let u = Profile::bump(0.5);
    match eval_direct_1d(&u, 0.4, &params, &cfg1) {
        Ok(base) => {
            for &lambda in &[0.5, 2.0] {
                match eval_direct_1d(&u.scaled_copy(lambda), 0.4, &params, &cfg1) {
                    Ok(r) => {
                        let want = lambda.powf(params.p - 1.0) * base.value;
                        rows.push(CheckRow::rel(
                            format!("homogeneity lambda={lambda}"),
                            want,
                            r.value,
                            1e-6,
                        ));
                    }
                    Err(e) => rows.push(CheckRow::flag(
                        format!("homogeneity lambda={lambda}"),
                        false,
                        e.to_string(),
                    )),
                }
            }
        }
        Err(e) => rows.push(CheckRow::flag("homogeneity base", false, e.to_string())),
    }
    // boundary ratio converges to 2^s
    for &s in &[0.3, 0.5, 0.7] {
        let u = Profile::bump(s);
        let tr = hopf_ratio(&u, &[0.0], &[1.0], &[2.0_f64.powi(-12)]).unwrap();
        rows.push(CheckRow::abs(
            format!("hopf ratio 2^s, s={s}"),
            2.0_f64.powf(s),
            tr[0].1,
            1e-3,
        ));
    }
    finish(8, "barrier scaling and homogeneity", 30.0, start, rows)
}

// xorshift64*: deterministic sampling without a dependency
struct Rng(u64);

impl Rng {
    fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
    fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// 9. The monotonicity-lemma lower bound on `g_ratio`.
pub fn c09_lemma_ratio() -> Criterion {
    let start = Instant::now();
    let mut rows = Vec::new();
    for &p in &[2.0, 3.0, 5.0] {
        let bound = 2.0_f64.powf(2.0 - p) - 1e-12;
        let mut rng = Rng(0x9e3779b97f4a7c15 ^ (p as u64));
        let mut worst = f64::INFINITY;
        let mut ok = true;
        for _ in 0..100_000 {
            let a = rng.in_range(-10.0, 10.0);
            let b = rng.in_range(-10.0, 10.0);
            let (t, s_arg) = if a < b { (a, b) } else { (b, a) };
            if t == s_arg {
                continue;
            }
            let r = g_ratio(t, s_arg, p).unwrap();
            worst = worst.min(r);
            if r < bound {
                ok = false;
            }
        }
        rows.push(CheckRow::flag(
            format!("10^5 samples p={p}"),
            ok,
            format!("min ratio {worst:.15}"),
        ));
        // equality case at rho = -1
        let eq = g_ratio(-1.0, 1.0, p).unwrap();
        rows.push(CheckRow::rel(
            format!("equality at rho=-1, p={p}"),
            2.0_f64.powf(2.0 - p),
            eq,
            1e-14,
        ));
    }
    finish(9, "G-ratio lower bound", 1.0, start, rows)
}

/// 10. The tail-space membership window.
pub fn c10_lsp_window() -> Criterion {
    let start = Instant::now();
    let mut rows = Vec::new();
    let cfg = QuadConfig::default();
    let halved = QuadConfig::with_tols(cfg.abs_tol / 2.0, cfg.rel_tol / 2.0);
    for &(n, p) in &[(1u32, 2.0), (2, 3.0), (3, 4.0)] {
        let params = Params::new(n, 0.5, p).unwrap();
        let tc = n as f64 / (p - 1.0);
        match lsp_tail(tc - 0.05, &params, &cfg) {
            Ok(r) => {
                rows.push(CheckRow::flag(
                    format!("finite side n={n} p={p}"),
                    r.finite && r.value.is_some(),
                    format!("value {:?}", r.value),
                ));
                let again = lsp_tail(tc - 0.05, &params, &halved).unwrap();
                let (v1, v2) = (r.value.unwrap(), again.value.unwrap());
                rows.push(CheckRow::rel(
                    format!("tolerance-halving stability n={n} p={p}"),
                    v1,
                    v2,
                    1e-6,
                ));
            }
            Err(e) => rows.push(CheckRow::flag(
                format!("finite side n={n} p={p}"),
                false,
                e.to_string(),
            )),
        }
        match lsp_tail(tc + 0.05, &params, &cfg) {
            Ok(r) => rows.push(CheckRow::flag(
                format!("divergent side n={n} p={p}"),
                !r.finite && r.value.is_none(),
                format!("finite={}", r.finite),
            )),
            Err(e) => rows.push(CheckRow::flag(
                format!("divergent side n={n} p={p}"),
                false,
                e.to_string(),
            )),
        }
    }
    finish(10, "tail-space window", 5.0, start, rows)
}

/// 11. Comparison-principle probe on three constructed pairs.
pub fn c11_comparison() -> Criterion {
    let start = Instant::now();
    let mut rows = Vec::new();
    let params = Params::new(1, 0.5, 3.0).unwrap();
    let cfg = QuadConfig::with_tols(1e-8, 1e-7);
    let grid: Vec<f64> = (0..50).map(|i| -0.72 + 1.44 * i as f64 / 49.0).collect();
    let u = Profile::bump(0.5);

    let pairs: Vec<(&str, Profile, Profile, f64)> = vec![
        ("u vs u/2", u.clone(), u.scaled_copy(0.5), 1.0),
        ("u vs u", u.clone(), u.clone(), 1.0),
        (
            "u vs eps*psi_(1/2)",
            u.clone(),
            Profile::scaled_bump(0.5, 0.5).scaled_copy(0.05),
            0.75,
        ),
    ];
    for (name, a, b, radius) in pairs {
        let grid_in: Vec<f64> = grid
            .iter()
            .copied()
            .filter(|x| x.abs() < radius - 1e-9)
            .collect();
        match comparison_probe(&a, &b, &|_| 1.0, radius, &grid_in, &params, &cfg) {
            Ok(rep) => rows.push(CheckRow::flag(
                name,
                rep.consistent,
                format!(
                    "{} points, {} violations, {} inconclusive",
                    rep.checked_points,
                    rep.violations.len(),
                    rep.inconclusive.len()
                ),
            )),
            Err(e) => rows.push(CheckRow::flag(name, false, e.to_string())),
        }
    }
    finish(11, "comparison-principle probe", 60.0, start, rows)
}

/// Run all criteria in order.
pub fn run_all() -> Vec<Criterion> {
    vec![
        c01_closed_forms(),
        c02_p2_constancy(),
        c03_identity(),
        c04_boundedness_1d(),
        c05_appendix_sweeps(),
        c06_nd_reduction(),
        c07_kernel_moment(),
        c08_barrier(),
        c09_lemma_ratio(),
        c10_lsp_window(),
        c11_comparison(),
    ]
}
