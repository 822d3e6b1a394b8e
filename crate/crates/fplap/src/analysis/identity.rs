//! The scalar identity that kills the boundary-singular coefficient:
//!
//! ```text
//! 1/(sp) + ∫_0^1 ([1-(1-k)^s]^{p-1} - [(1+k)^s-1]^{p-1}) k^{-1-sp} dk
//!        - ∫_1^∞ [(1+k)^s-1]^{p-1} k^{-1-sp} dk  =  0
//! ```
//!
//! together with its epsilon-split into three pieces `H1 + H2 + H3`,
//! whose limits are `0`, `0` and `-1/(sp)`.

use crate::error::Error;
use crate::quad::{integrate_full, integrate_shaped, Endpoints, QuadConfig};
use crate::special::bracket_pair_diff;
use crate::Result;

/// Residual of the identity plus the epsilon-split traces.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub s: f64,
    pub p: f64,
    /// Value of the left side; zero up to quadrature error.
    pub residual: f64,
    /// Quadrature error bound on `residual`.
    pub residual_err: f64,
    /// `H1(eps)`: the paired core over `(0, eps]`; tends to 0.
    pub h1: Vec<f64>,
    /// `H2(eps)`: minus the one-sided sliver over `[eps, eps/(1-eps)]`;
    /// tends to 0.
    pub h2: Vec<f64>,
    /// `H3(eps) = -1/(sp) + [1-(1-eps)^s]^p / (sp eps^{sp})`, in closed
    /// form; decreases monotonically to `-1/(sp)`.
    pub h3: Vec<f64>,
    pub eps_sequence: Vec<f64>,
    pub n_evals: u64,
}

/// Evaluate the identity residual and the `H`-split traces for
/// `eps in {1e-1, ..., 1e-4}`.
pub fn identity_residual(s: f64, p: f64, cfg: &QuadConfig) -> Result<IdentityReport> {
    if !(s > 0.0 && s < 1.0) || !(p >= 2.0) {
        return Err(Error::domain("identity_residual requires 0 < s < 1, p >= 2"));
    }
    let sp = s * p;
    let core = |k: f64| bracket_pair_diff(s, p, k, 0.0) * k.powf(-1.0 - sp);
    let one_sided = |k: f64| {
        let b = f64::exp_m1(s * f64::ln_1p(k));
        b.powf(p - 1.0) * k.powf(-1.0 - sp)
    };

    let q1 = integrate_shaped(core, 0.0, 1.0, Endpoints::alg(p - sp - 1.0, s), cfg)?
        .into_result()?;
    // the one-sided integrand decays like k^{-1-s}
    let q2 = integrate_full(
        one_sided,
        1.0,
        f64::INFINITY,
        Endpoints::smooth(),
        Some(1.0 + s),
        cfg,
    )?
    .into_result()?;

    let residual = 1.0 / sp + q1.value - q2.value;
    let mut n_evals = q1.n_evals + q2.n_evals;

    let eps_sequence = vec![1e-1, 1e-2, 1e-3, 1e-4];
    let mut h1 = Vec::new();
    let mut h2 = Vec::new();
    let mut h3 = Vec::new();
    for &eps in &eps_sequence {
        let r1 = integrate_shaped(core, 0.0, eps, Endpoints::lower_alg(p - sp - 1.0), cfg)?
            .into_result()?;
        let r2 = integrate_shaped(one_sided, eps, eps / (1.0 - eps), Endpoints::smooth(), cfg)?
            .into_result()?;
        n_evals += r1.n_evals + r2.n_evals;
        h1.push(r1.value);
        h2.push(-r2.value);
        let gap = -f64::exp_m1(s * f64::ln_1p(-eps)); // 1 - (1-eps)^s
        h3.push(-1.0 / sp + gap.powf(p) / (sp * eps.powf(sp)));
    }

    Ok(IdentityReport {
        s,
        p,
        residual,
        residual_err: q1.err_est + q2.err_est,
        h1,
        h2,
        h3,
        eps_sequence,
        n_evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> QuadConfig {
        QuadConfig::with_tols(1e-12, 1e-11)
    }

    #[test]
    fn residual_vanishes() {
        let r = identity_residual(0.5, 2.0, &tight()).unwrap();
        assert!(r.residual.abs() <= 1e-8, "residual {}", r.residual);
        let r = identity_residual(0.3, 3.0, &tight()).unwrap();
        assert!(r.residual.abs() <= 1e-6, "residual {}", r.residual);
    }

    #[test]
    fn h3_closed_form_trace() {
        // frozen trace for (s, p) = (0.5, 3)
        let r = identity_residual(0.5, 3.0, &QuadConfig::default()).unwrap();
        let expect = [
            -0.663_817_715_846_643_2,
            -0.666_582_703_609_079_6,
            -0.666_664_029_457_376_1,
            -0.666_666_583_327_082_8,
        ];
        for (got, want) in r.h3.iter().zip(expect) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
        // monotone decrease toward -1/(sp)
        let lim = -1.0 / 1.5;
        for w in r.h3.windows(2) {
            assert!(w[1] < w[0] && w[1] > lim);
        }
    }

    #[test]
    fn h_split_reassembles_for_every_eps() {
        // H1 + H2 + H3 equals Q1 - Q2 exactly, for each eps
        let cfg = QuadConfig::default();
        let r = identity_residual(0.4, 2.5, &cfg).unwrap();
        let q_total = r.residual - 1.0 / (0.4 * 2.5);
        for i in 0..r.eps_sequence.len() {
            let sum = r.h1[i] + r.h2[i] + r.h3[i];
            assert!(
                (sum - q_total).abs() <= 1e-7,
                "eps={}: {} vs {}",
                r.eps_sequence[i],
                sum,
                q_total
            );
        }
        // and the two quadrature pieces tend to zero
        assert!(r.h1.last().unwrap().abs() < 1e-3);
        assert!(r.h2.last().unwrap().abs() < 1e-3);
    }
}
