//! Verification payloads built on top of the evaluators: the scalar
//! identity behind the vanishing singular coefficient, the `s = 1/2`
//! closed forms, boundary-coefficient extraction, boundedness sweeps,
//! the barrier/scaling machinery, and the tail-space membership check.

mod closed_form;
mod fits;
mod hopf;
mod identity;
mod probes;

pub use closed_form::{closed_form_half, closed_form_half_limit};
pub use fits::{bounded_sweep, holder_seminorm, singular_fit, singular_fit_extended, SingularFit, SweepPoint};
pub use hopf::{hopf_ratio, hopf_report, scaling_check, HopfReport};
pub use identity::{identity_residual, IdentityReport};
pub use probes::{comparison_probe, lsp_tail, ComparisonReport, LspReport};
