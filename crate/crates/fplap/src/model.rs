//! Problem parameters, candidate profiles, and the scalar nonlinearity
//! `G(t) = |t|^{p-2} t`.

use crate::error::Error;
use crate::Result;
use std::fmt;
use std::sync::Arc;

/// Operator parameters: dimension `n`, order `s`, exponent `p` and the
/// normalization constant.
///
/// `c_norm` defaults to 1: reference closed forms all omit the constant,
/// and nothing in this crate depends on a particular normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub n: u32,
    pub s: f64,
    pub p: f64,
    pub c_norm: f64,
}

impl Params {
    pub fn new(n: u32, s: f64, p: f64) -> Result<Self> {
        Self::with_c_norm(n, s, p, 1.0)
    }

    pub fn with_c_norm(n: u32, s: f64, p: f64, c_norm: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("dimension n must be >= 1"));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::domain(format!("order s must lie in (0,1), got {s}")));
        }
        if !(p >= 2.0) {
            return Err(Error::domain(format!("exponent p must be >= 2, got {p}")));
        }
        if !(c_norm > 0.0) {
            return Err(Error::domain("c_norm must be positive"));
        }
        // sp < p holds automatically for s < 1; checked because the
        // quadrature convergence orders rely on it
        assert!(s * p < p);
        Ok(Params { n, s, p, c_norm })
    }

    /// The kernel exponent `sp`.
    pub fn sp(&self) -> f64 {
        self.s * self.p
    }
}

type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradientFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A user-supplied profile. `value` must vanish outside the ball of
/// `support_radius`; `boundary_exponent`, when known, declares the
/// Hölder order of the decay at the support boundary so the quadrature
/// can cluster nodes there.
///
/// `bump_like = Some((s_exp, amplitude))` asserts that the callback
/// equals `amplitude * (R^2 - |y|^2)^{s_exp}_+` with `R` the support
/// radius; the evaluators then form the paired PV combinations in the
/// cancellation-free bump arithmetic instead of subtracting callback
/// values (which loses all digits near the singularity).
#[derive(Clone)]
pub struct CustomProfile {
    pub value: ValueFn,
    pub gradient: Option<GradientFn>,
    pub support_radius: f64,
    pub radial: bool,
    pub boundary_exponent: Option<f64>,
    pub bump_like: Option<(f64, f64)>,
}

impl fmt::Debug for CustomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomProfile")
            .field("support_radius", &self.support_radius)
            .field("radial", &self.radial)
            .field("boundary_exponent", &self.boundary_exponent)
            .finish()
    }
}

/// Candidate functions the evaluators understand.
///
/// * `Bump(s)`: `(1-|x|^2)^s_+`, support radius 1.
/// * `ScaledBump(s, ρ)`: `ψ_ρ(x) = ψ(x/ρ) = (ρ^2-|x|^2)^s_+ / ρ^{2s}`.
/// * `PowerCusp(t)`: `|x|^{-t}` on the upper half unit ball, 0 elsewhere.
///   Only used for the tail-space membership check; it is not `C^{1,1}`
///   and is rejected by the operator evaluators.
/// * `Custom`: arbitrary compactly supported callback.
#[derive(Debug, Clone)]
pub enum Profile {
    Bump { s_exp: f64 },
    ScaledBump { s_exp: f64, rho: f64 },
    PowerCusp { t_exp: f64 },
    Custom(CustomProfile),
}

impl Profile {
    pub fn bump(s_exp: f64) -> Self {
        Profile::Bump { s_exp }
    }

    pub fn scaled_bump(s_exp: f64, rho: f64) -> Self {
        Profile::ScaledBump { s_exp, rho }
    }

    /// Profile value at a point of any dimension.
    pub fn value(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        match self {
            Profile::Bump { .. } | Profile::ScaledBump { .. } => self.value_radial(r2.sqrt()),
            Profile::PowerCusp { t_exp } => {
                let last = *x.last().unwrap_or(&0.0);
                if r2 < 1.0 && last > 0.0 {
                    r2.sqrt().powf(-t_exp)
                } else {
                    0.0
                }
            }
            Profile::Custom(c) => (c.value)(x),
        }
    }

    /// Value at radius `r` for radial profiles.
    pub fn value_radial(&self, r: f64) -> f64 {
        match self {
            Profile::Bump { s_exp } => {
                if r >= 1.0 {
                    0.0
                } else {
                    (1.0 - r * r).powf(*s_exp)
                }
            }
            Profile::ScaledBump { s_exp, rho } => {
                if r >= *rho {
                    0.0
                } else {
                    (rho * rho - r * r).powf(*s_exp) / rho.powf(2.0 * s_exp)
                }
            }
            Profile::PowerCusp { .. } => panic!("PowerCusp is not radial on its half-ball domain"),
            Profile::Custom(c) => (c.value)(&[r]),
        }
    }

    pub fn support_radius(&self) -> f64 {
        match self {
            Profile::Bump { .. } => 1.0,
            Profile::ScaledBump { rho, .. } => *rho,
            Profile::PowerCusp { .. } => 1.0,
            Profile::Custom(c) => c.support_radius,
        }
    }

    pub fn radial(&self) -> bool {
        match self {
            Profile::Bump { .. } | Profile::ScaledBump { .. } => true,
            Profile::PowerCusp { .. } => false,
            Profile::Custom(c) => c.radial,
        }
    }

    /// Hölder exponent of the decay at the support boundary, when known.
    pub fn boundary_exponent(&self) -> Option<f64> {
        match self {
            Profile::Bump { s_exp } | Profile::ScaledBump { s_exp, .. } => Some(*s_exp),
            Profile::PowerCusp { .. } => None,
            Profile::Custom(c) => c.boundary_exponent,
        }
    }

    /// For the bump family: `(s_exp, amplitude)` such that
    /// `u(y) = amplitude * (R^2 - |y|^2)^{s_exp}_+`. `None` otherwise.
    pub(crate) fn bump_form(&self) -> Option<(f64, f64)> {
        match self {
            Profile::Bump { s_exp } => Some((*s_exp, 1.0)),
            Profile::ScaledBump { s_exp, rho } => Some((*s_exp, rho.powf(-2.0 * s_exp))),
            Profile::Custom(c) => c.bump_like,
            _ => None,
        }
    }

    /// A pointwise multiple `factor * u`, keeping the bump-form and
    /// boundary metadata so the scaled copy evaluates as robustly as the
    /// original.
    pub fn scaled_copy(&self, factor: f64) -> Profile {
        let base = self.clone();
        Profile::Custom(CustomProfile {
            value: Arc::new(move |x: &[f64]| factor * base.value(x)),
            gradient: None,
            support_radius: self.support_radius(),
            radial: self.radial(),
            boundary_exponent: self.boundary_exponent(),
            bump_like: self.bump_form().map(|(s, amp)| (s, factor * amp)),
        })
    }
}

/// The nonlinearity `G(t) = |t|^{p-2} t` evaluated at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GValue {
    pub t: f64,
    pub p: f64,
    pub value: f64,
}

impl GValue {
    pub fn new(t: f64, p: f64) -> Self {
        GValue {
            t,
            p,
            value: g_power(t, p),
        }
    }
}

/// `G(t) = |t|^{p-2} t`, odd and strictly increasing for `p >= 2`.
pub fn g_power(t: f64, p: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t.signum() * t.abs().powf(p - 1.0)
    }
}

/// The monotonicity-lemma ratio `(G(s_arg) - G(t)) / G(s_arg - t)`,
/// bounded below by `2^{2-p}` with equality at `t/s_arg = -1`.
pub fn g_ratio(t: f64, s_arg: f64, p: f64) -> Result<f64> {
    if !(t < s_arg) {
        return Err(Error::domain(format!(
            "g_ratio requires t < s_arg, got t={t}, s_arg={s_arg}"
        )));
    }
    Ok((g_power(s_arg, p) - g_power(t, p)) / g_power(s_arg - t, p))
}

/// Spec'd accessor for profile values at a point.
pub fn profile_value(pr: &Profile, x: &[f64]) -> f64 {
    pr.value(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(Params::new(1, 0.5, 2.0).is_ok());
        assert!(Params::new(0, 0.5, 2.0).is_err());
        assert!(Params::new(1, 1.0, 2.0).is_err());
        assert!(Params::new(1, 0.0, 2.0).is_err());
        assert!(Params::new(1, 0.5, 1.9).is_err());
        assert!(Params::with_c_norm(1, 0.5, 2.0, 0.0).is_err());
    }

    #[test]
    fn g_power_examples() {
        assert_eq!(g_power(0.0, 3.7), 0.0);
        for &p in &[2.0, 2.5, 3.0, 7.3] {
            assert!((g_power(-1.0, p) + 1.0).abs() < 1e-15);
        }
        assert!((g_power(2.0, 3.0) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn g_ratio_examples() {
        // equality case rho = -1
        for &p in &[2.0, 3.0, 5.0] {
            let r = g_ratio(-1.0, 1.0, p).unwrap();
            assert!(
                (r - 2.0_f64.powf(2.0 - p)).abs() <= 1e-15 * r.abs(),
                "p={p}"
            );
        }
        assert!((g_ratio(0.0, 1.0, 4.0).unwrap() - 1.0).abs() < 1e-15);
        // (0.9^3 - 0.3^3)/0.6^3 = 3.25
        let r = g_ratio(0.3, 0.9, 4.0).unwrap();
        assert!((r - 3.25).abs() < 1e-12);
        assert!(g_ratio(1.0, 1.0, 3.0).is_err());
        assert!(g_ratio(1.5, 1.0, 3.0).is_err());
    }

    #[test]
    fn bump_values() {
        let u = Profile::bump(0.5);
        assert_eq!(u.value(&[0.0]), 1.0);
        assert_eq!(u.value(&[1.0]), 0.0);
        assert_eq!(u.value(&[1.5]), 0.0);
        let v = u.value(&[0.6, 0.0]);
        assert!((v - (1.0_f64 - 0.36).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn scaled_bump_is_rescaled_bump() {
        // psi_rho(x) = psi(x/rho) pointwise
        let s = 0.37;
        let rho = 2.5;
        let psi = Profile::bump(s);
        let psi_rho = Profile::scaled_bump(s, rho);
        assert_eq!(psi_rho.value(&[0.0]), 1.0);
        for i in 0..50 {
            let x = -2.4 + 4.8 * (i as f64) / 49.0;
            let a = psi_rho.value(&[x]);
            let b = psi.value(&[x / rho]);
            assert!((a - b).abs() <= 1e-14 * (1.0 + b.abs()), "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn custom_radial_spot_check() {
        // a radial custom profile must depend on |x| only
        let c = Profile::Custom(CustomProfile {
            value: Arc::new(|x: &[f64]| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                (1.0 - r2).max(0.0).powf(0.7)
            }),
            gradient: None,
            support_radius: 1.0,
            radial: true,
            boundary_exponent: Some(0.7),
            bump_like: None,
        });
        for i in 0..8 {
            let ang = 0.9 * i as f64;
            let r = 0.1 + 0.1 * i as f64;
            let a = c.value(&[r * ang.cos(), r * ang.sin()]);
            let b = c.value(&[r, 0.0]);
            assert!((a - b).abs() <= 1e-14 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn power_cusp_half_ball() {
        let u = Profile::PowerCusp { t_exp: 0.5 };
        assert_eq!(u.value(&[-0.5]), 0.0);
        assert!((u.value(&[0.25]) - 2.0).abs() < 1e-14);
        assert_eq!(u.value(&[0.3, -0.1]), 0.0);
        assert!(u.value(&[0.3, 0.1]) > 1.0);
        assert_eq!(u.value(&[2.0]), 0.0);
    }
}
