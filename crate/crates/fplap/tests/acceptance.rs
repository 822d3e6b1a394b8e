//! The release-gating verification suite. One test per criterion; each
//! prints its pass/fail line and the failing checks, if any.
//!
//! Criterion 4's two-parameter boundary fit is a known red: the fitted
//! singular coefficient of the exact operator trace exceeds the pinned
//! threshold for the low-`s` parameter sets (see the test body), which
//! is a property of the fit model, not of the evaluators — the same
//! trace values reproduce 40-digit reference computations.

use fplap::acceptance::{self, Criterion};

fn report(cr: &Criterion) {
    println!("{}", cr.summary_line());
    for row in cr.rows.iter().filter(|r| !r.pass) {
        println!(
            "       failed: {} (expected {}, got {}, tol {})",
            row.name, row.expected, row.got, row.tol
        );
    }
}

fn assert_criterion(cr: Criterion) {
    report(&cr);
    assert!(cr.pass, "criterion {} failed", cr.id);
}

#[test]
fn criterion_01_closed_forms() {
    assert_criterion(acceptance::c01_closed_forms());
}

#[test]
fn criterion_02_p2_constancy() {
    assert_criterion(acceptance::c02_p2_constancy());
}

#[test]
fn criterion_03_identity() {
    assert_criterion(acceptance::c03_identity());
}

#[test]
fn criterion_04_boundedness_1d() {
    let cr = acceptance::c04_boundedness_1d();
    report(&cr);
    // The method-agreement half of the criterion must hold
    // unconditionally.
    for row in cr.rows.iter().filter(|r| r.name.starts_with("methods")) {
        assert!(row.pass, "{} failed", row.name);
    }
    // The fitted b of the true trace exceeds 1e-3*max|v| for the slowly
    // decaying parameter sets; the evaluator is correct (the traces match
    // independent high-precision references elsewhere in the suite), so
    // the red is reported rather than papered over.
    assert!(cr.pass, "criterion 4 failed (see rows above)");
}

#[test]
fn criterion_05_appendix_sweeps() {
    assert_criterion(acceptance::c05_appendix_sweeps());
}

#[test]
fn criterion_06_nd_reduction() {
    assert_criterion(acceptance::c06_nd_reduction());
}

#[test]
fn criterion_07_kernel_moment() {
    assert_criterion(acceptance::c07_kernel_moment());
}

#[test]
fn criterion_08_barrier() {
    assert_criterion(acceptance::c08_barrier());
}

#[test]
fn criterion_09_lemma_ratio() {
    assert_criterion(acceptance::c09_lemma_ratio());
}

#[test]
fn criterion_10_lsp_window() {
    assert_criterion(acceptance::c10_lsp_window());
}

#[test]
fn criterion_11_comparison_probe() {
    assert_criterion(acceptance::c11_comparison());
}
