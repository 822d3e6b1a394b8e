//! Command execution: flag/config merging, evaluation, parallel sweeps,
//! and report assembly.

use crate::emit::{self, Row};
use crate::{Cli, Command, CommonOpts};
use fplap::analysis::{
    closed_form_half, hopf_report, identity_residual, lsp_tail, scaling_check, singular_fit_extended,
};
use fplap::oplap1d::{eval_decomposed_1d, eval_direct_1d, EvalResult};
use fplap::oplapnd::{eval_cartesian_2d, eval_radial_nd};
use fplap::{Error, Params, Profile, QuadConfig};
use serde_json::{json, Value};
use std::io::Write;

const EXIT_OK: i32 = 0;
const EXIT_VERIFY: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_NONCONV: i32 = 3;
const EXIT_IO: i32 = 4;

/// Fully resolved run configuration (flags over config file over
/// defaults).
pub struct RunSpec {
    pub params: Params,
    pub cfg: QuadConfig,
    pub jobs: usize,
    pub format: String,
    pub out: Option<String>,
}

fn config_value(cfg: &Value, key: &str) -> Option<f64> {
    match cfg.get(key) {
        Some(Value::Number(n)) => n.as_f64(),
        Some(Value::String(s)) => crate::parse_real(s).ok(),
        _ => None,
    }
}

fn resolve(common: &CommonOpts) -> Result<RunSpec, String> {
    let file: Value = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {path}: {e}"))?;
            serde_json::from_str(&text).map_err(|e| format!("config {path}: {e}"))?
        }
        None => Value::Null,
    };
    let n = common
        .n
        .or_else(|| config_value(&file, "n").map(|v| v as u32))
        .unwrap_or(1);
    let s = common.s.or_else(|| config_value(&file, "s")).unwrap_or(0.5);
    let p = common.p.or_else(|| config_value(&file, "p")).unwrap_or(2.0);
    let c_norm = common
        .c_norm
        .or_else(|| config_value(&file, "c_norm"))
        .unwrap_or(1.0);
    let abs_tol = common
        .abs_tol
        .or_else(|| config_value(&file, "abs_tol"))
        .unwrap_or(1e-10);
    let rel_tol = common
        .rel_tol
        .or_else(|| config_value(&file, "rel_tol"))
        .unwrap_or(1e-9);
    let jobs = common
        .jobs
        .or_else(|| config_value(&file, "jobs").map(|v| v as usize))
        .unwrap_or(1)
        .max(1);
    let format = common
        .format
        .clone()
        .or_else(|| {
            file.get("format")
                .and_then(|v| v.as_str())
                .map(str::to_owned)
        })
        .unwrap_or_else(|| "json".into());
    if format != "json" && format != "csv" {
        return Err(format!("unknown format {format:?}; use json or csv"));
    }
    let params = Params::with_c_norm(n, s, p, c_norm).map_err(|e| e.to_string())?;
    let cfg = QuadConfig::with_tols(abs_tol, rel_tol);
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(RunSpec {
        params,
        cfg,
        jobs,
        format,
        out: common.out.clone(),
    })
}

fn params_json(spec: &RunSpec) -> Value {
    json!({
        "n": spec.params.n,
        "s": spec.params.s,
        "p": spec.params.p,
        "c_norm": spec.params.c_norm,
    })
}

fn config_json(spec: &RunSpec) -> Value {
    json!({
        "abs_tol": spec.cfg.abs_tol,
        "rel_tol": spec.cfg.rel_tol,
        "max_depth": spec.cfg.max_depth,
        "pv_radius_frac": spec.cfg.pv_radius_frac,
        "far_field_map": spec.cfg.far_field_map,
        "jobs": spec.jobs,
    })
}

fn emit_report(spec: &RunSpec, rows: &[Row], summary: Value) -> i32 {
    let bytes = match spec.format.as_str() {
        "csv" => emit::csv_bytes(rows),
        _ => emit::json_bytes(&json!({
            "params": params_json(spec),
            "config": config_json(spec),
            "rows": emit::rows_to_json(rows),
            "summary": summary,
        })),
    };
    let result = match &spec.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| e.to_string()),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| e.to_string()),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_IO
        }
    }
}

fn error_exit(e: &Error) -> i32 {
    eprintln!("error: {e}");
    match e {
        Error::NonConvergence { .. } => EXIT_NONCONV,
        _ => EXIT_USAGE,
    }
}

fn eval_one(spec: &RunSpec, x: f64, method: &str) -> Result<EvalResult, Error> {
    let params = &spec.params;
    let u = Profile::bump(params.s);
    match (method, params.n) {
        ("direct", 1) | ("auto", 1) => eval_direct_1d(&u, x, params, &spec.cfg),
        ("decomposed", 1) => eval_decomposed_1d(params.s, x, params, &spec.cfg),
        ("radial", _) | ("auto", _) => eval_radial_nd(&u, x, params, &spec.cfg),
        ("cartesian", 2) => eval_cartesian_2d(&u, &[x, 0.0], params, &spec.cfg),
        _ => Err(Error::domain(format!(
            "method {method:?} is not available in dimension {}",
            params.n
        ))),
    }
}

fn row_from(x: f64, r: &EvalResult) -> Row {
    Row {
        x,
        value: r.value,
        err_est: r.err_est,
        n_evals: r.n_evals,
        status: "ok".into(),
    }
}

pub fn dispatch(cli: Cli) -> i32 {
    let spec = match resolve(&cli.common) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    match cli.command {
        Command::Eval { x, r0, method } => cmd_eval(&spec, x, r0, &method),
        Command::Sweep { grid } => cmd_sweep(&spec, &grid.points()),
        Command::Identity => cmd_identity(&spec),
        Command::Closedform { x } => cmd_closedform(&spec, x),
        Command::Singfit { jmax, extended } => cmd_singfit(&spec, jmax, extended),
        Command::Scaling { rho, x } => cmd_scaling(&spec, rho, x),
        Command::Hopf { rho } => cmd_hopf(&spec, rho),
        Command::Lsp { t } => cmd_lsp(&spec, t),
        Command::CompareMethods { x, r0 } => cmd_compare(&spec, x, r0),
        Command::Verify => cmd_verify(&spec),
    }
}

fn point_arg(spec: &RunSpec, x: Option<f64>, r0: Option<f64>) -> Result<f64, String> {
    match (spec.params.n, x, r0) {
        (1, Some(x), None) => Ok(x),
        (1, None, None) => Err("--x is required for n = 1".into()),
        (_, None, Some(r)) => Ok(r),
        (n, None, None) => Err(format!("--r0 is required for n = {n}")),
        _ => Err("pass --x for n = 1 or --r0 for n >= 2, not both".into()),
    }
}

fn cmd_eval(spec: &RunSpec, x: Option<f64>, r0: Option<f64>, method: &str) -> i32 {
    let x = match point_arg(spec, x, r0) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    if x.abs() >= 1.0 {
        eprintln!("error: x outside open support");
        return EXIT_USAGE;
    }
    match eval_one(spec, x, method) {
        Ok(r) => {
            let terms: Value = match &r.terms {
                Some(t) => Value::Object(
                    t.iter()
                        .map(|(k, v)| (k.to_string(), json!(v)))
                        .collect(),
                ),
                None => Value::Null,
            };
            emit_report(
                spec,
                &[row_from(x, &r)],
                json!({"method": method, "terms": terms}),
            )
        }
        Err(e) => error_exit(&e),
    }
}

fn cmd_sweep(spec: &RunSpec, points: &[f64]) -> i32 {
    let rows = parallel_rows(spec, points);
    let n_failed = rows.iter().filter(|r| r.status != "ok").count();
    let code = emit_report(
        spec,
        &rows,
        json!({"points": points.len(), "failed": n_failed}),
    );
    if code != EXIT_OK {
        return code;
    }
    if n_failed > 0 {
        return EXIT_NONCONV;
    }
    EXIT_OK
}

/// Evaluate grid points on up to `jobs` threads; rows come back in grid
/// order regardless of completion order.
fn parallel_rows(spec: &RunSpec, points: &[f64]) -> Vec<Row> {
    let jobs = spec.jobs.min(points.len().max(1));
    if jobs <= 1 {
        return points.iter().map(|&x| sweep_row(spec, x)).collect();
    }
    let mut rows: Vec<Option<Row>> = vec![None; points.len()];
    std::thread::scope(|scope| {
        let chunks: Vec<(usize, &[f64])> = points
            .chunks(points.len().div_ceil(jobs))
            .enumerate()
            .collect();
        let mut handles = Vec::new();
        for (ci, chunk) in chunks {
            let offset = ci * points.len().div_ceil(jobs);
            handles.push((
                offset,
                scope.spawn(move || chunk.iter().map(|&x| sweep_row(spec, x)).collect::<Vec<_>>()),
            ));
        }
        for (offset, h) in handles {
            for (i, row) in h.join().expect("worker panicked").into_iter().enumerate() {
                rows[offset + i] = Some(row);
            }
        }
    });
    rows.into_iter().map(Option::unwrap).collect()
}

fn sweep_row(spec: &RunSpec, x: f64) -> Row {
    match eval_one(spec, x, "auto") {
        Ok(r) => row_from(x, &r),
        Err(Error::NonConvergence {
            value,
            err_est,
            n_evals,
        }) => Row {
            x,
            value,
            err_est,
            n_evals,
            status: "non-convergence".into(),
        },
        Err(e) => Row {
            x,
            value: f64::NAN,
            err_est: f64::NAN,
            n_evals: 0,
            status: format!("error: {e}"),
        },
    }
}

fn cmd_identity(spec: &RunSpec) -> i32 {
    match identity_residual(spec.params.s, spec.params.p, &spec.cfg) {
        Ok(rep) => {
            let rows: Vec<Row> = rep
                .eps_sequence
                .iter()
                .zip(&rep.h3)
                .map(|(&eps, &h3)| Row {
                    x: eps,
                    value: h3,
                    err_est: 0.0,
                    n_evals: 0,
                    status: "h3".into(),
                })
                .collect();
            emit_report(
                spec,
                &rows,
                json!({
                    "residual": rep.residual,
                    "residual_err": rep.residual_err,
                    "h1": rep.h1,
                    "h2": rep.h2,
                    "h3": rep.h3,
                    "eps_sequence": rep.eps_sequence,
                    "limit": -1.0 / (spec.params.s * spec.params.p),
                    "n_evals": rep.n_evals,
                }),
            )
        }
        Err(e) => error_exit(&e),
    }
}

fn cmd_closedform(spec: &RunSpec, x: f64) -> i32 {
    match closed_form_half(spec.params.p, x, spec.params.c_norm) {
        Ok(v) => emit_report(
            spec,
            &[Row {
                x,
                value: v,
                err_est: 0.0,
                n_evals: 0,
                status: "ok".into(),
            }],
            json!({"value": v}),
        ),
        Err(e) => error_exit(&e),
    }
}

fn cmd_singfit(spec: &RunSpec, jmax: u32, extended: bool) -> i32 {
    match singular_fit_extended(&spec.params, &spec.cfg, jmax, extended) {
        Ok(fit) => {
            let rows: Vec<Row> = fit
                .xs
                .iter()
                .zip(&fit.values)
                .map(|(&x, &v)| Row {
                    x,
                    value: v,
                    err_est: 0.0,
                    n_evals: 0,
                    status: "ok".into(),
                })
                .collect();
            emit_report(
                spec,
                &rows,
                json!({
                    "a": fit.a,
                    "b": fit.b,
                    "residual": fit.residual,
                    "correction": fit.correction,
                    "j_max": jmax,
                }),
            )
        }
        Err(e) => error_exit(&e),
    }
}

fn cmd_scaling(spec: &RunSpec, rho: f64, x: f64) -> i32 {
    match scaling_check(rho, x, &spec.params, &spec.cfg) {
        Ok(err) => emit_report(
            spec,
            &[Row {
                x,
                value: err,
                err_est: 0.0,
                n_evals: 0,
                status: "ok".into(),
            }],
            json!({"rho": rho, "relative_error": err}),
        ),
        Err(e) => error_exit(&e),
    }
}

fn cmd_hopf(spec: &RunSpec, rho: f64) -> i32 {
    match hopf_report(&spec.params, &spec.cfg, rho) {
        Ok(rep) => {
            let rows: Vec<Row> = rep
                .ratio_trace
                .iter()
                .map(|&(delta, ratio)| Row {
                    x: delta,
                    value: ratio,
                    err_est: 0.0,
                    n_evals: 0,
                    status: "ratio".into(),
                })
                .collect();
            emit_report(
                spec,
                &rows,
                json!({
                    "rho": rep.rho,
                    "c0": rep.c0,
                    "scaling_errs": rep.scaling_errs,
                    "c_d": rep.c_d,
                    "c_rho": rep.c_rho,
                    "eps_admissible": rep.eps_admissible,
                    "ratio_limit": 2.0_f64.powf(spec.params.s),
                }),
            )
        }
        Err(e) => error_exit(&e),
    }
}

fn cmd_lsp(spec: &RunSpec, t: f64) -> i32 {
    match lsp_tail(t, &spec.params, &spec.cfg) {
        Ok(rep) => emit_report(
            spec,
            &[Row {
                x: t,
                value: rep.value.unwrap_or(f64::NAN),
                err_est: rep.err_est,
                n_evals: 0,
                status: if rep.finite { "finite" } else { "divergent" }.into(),
            }],
            json!({
                "t": t,
                "finite": rep.finite,
                "value": rep.value,
                "threshold": rep.threshold,
            }),
        ),
        Err(e) => error_exit(&e),
    }
}

fn cmd_compare(spec: &RunSpec, x: Option<f64>, r0: Option<f64>) -> i32 {
    let x = match point_arg(spec, x, r0) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let (name_a, name_b) = if spec.params.n == 1 {
        ("direct", "decomposed")
    } else {
        ("radial", "cartesian")
    };
    let a = eval_one(spec, x, name_a);
    let b = eval_one(spec, x, name_b);
    match (a, b) {
        (Ok(a), Ok(b)) => {
            let diff = (a.value - b.value).abs();
            let tol = a.err_est + b.err_est;
            let rows = vec![
                Row {
                    x,
                    value: a.value,
                    err_est: a.err_est,
                    n_evals: a.n_evals,
                    status: name_a.into(),
                },
                Row {
                    x,
                    value: b.value,
                    err_est: b.err_est,
                    n_evals: b.n_evals,
                    status: name_b.into(),
                },
            ];
            emit_report(
                spec,
                &rows,
                json!({"difference": diff, "summed_err": tol, "agree": diff <= tol}),
            )
        }
        (Err(e), _) | (_, Err(e)) => error_exit(&e),
    }
}

fn cmd_verify(spec: &RunSpec) -> i32 {
    let criteria = fplap::acceptance::run_all();
    if spec.format == "json" && spec.out.is_some() {
        // machine-readable variant when writing to a file
        let v = json!({
            "criteria": criteria.iter().map(|c| json!({
                "id": c.id,
                "name": c.name,
                "pass": c.pass,
                "seconds": c.seconds,
                "checks": c.rows.iter().map(|r| json!({
                    "name": r.name,
                    "expected": r.expected,
                    "got": r.got,
                    "tol": r.tol,
                    "pass": r.pass,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "pass": criteria.iter().all(|c| c.pass),
        });
        if let Some(path) = &spec.out {
            if let Err(e) = std::fs::write(path, emit::json_bytes(&v)) {
                eprintln!("error: {e}");
                return EXIT_IO;
            }
        }
    }
    let mut all_pass = true;
    for c in &criteria {
        println!("{}", c.summary_line());
        for row in c.rows.iter().filter(|r| !r.pass) {
            println!(
                "       failed: {} (expected {}, got {}, tol {})",
                row.name, row.expected, row.got, row.tol
            );
        }
        all_pass &= c.pass;
    }
    let n_pass = criteria.iter().filter(|c| c.pass).count();
    println!("{n_pass}/{} criteria passed", criteria.len());
    if all_pass {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}
