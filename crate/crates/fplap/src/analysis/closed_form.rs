//! Reference closed forms for `(-Δ)^{1/2}_p (1-x^2)^{1/2}_+` in one
//! dimension, `p in {2, 4, 6, 8}`, with the normalization constant
//! omitted. These are the golden values the direct evaluator is checked
//! against.

use crate::error::Error;
use crate::Result;
use std::f64::consts::PI;

/// The `s = 1/2` closed form at `x`, multiplied by `c_norm`.
///
/// * `p = 2`: constant `π`.
/// * `p = 4`: `3 sqrt(1-x^2) [log(4-4x^2) - 1] + 6x asin x`,
///   increasing from `6 log 2 - 3` to `3π`.
/// * `p = 6`: `20 sqrt(1-x^2) [x log((1-x)/(1+x)) + 2] + (5π/2)(8x^2-5)`,
///   increasing from `40 - 25π/2` to `15π/2`.
/// * `p = 8`: `7 sqrt(1-x^2) [4(5x^2-2) log(4-4x^2) + (67-x^2)/6]
///   + 35x(8x^2-7) asin x`, increasing from `469/6 - 112 log 2` to
///   `35π/2`.
pub fn closed_form_half(p: f64, x: f64, c_norm: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::domain("closed_form_half requires |x| < 1"));
    }
    let root = (1.0 - x * x).sqrt();
    let v = if p == 2.0 {
        PI
    } else if p == 4.0 {
        3.0 * root * ((4.0 - 4.0 * x * x).ln() - 1.0) + 6.0 * x * x.asin()
    } else if p == 6.0 {
        20.0 * root * (x * ((1.0 - x) / (1.0 + x)).ln() + 2.0) + 2.5 * PI * (8.0 * x * x - 5.0)
    } else if p == 8.0 {
        7.0 * root * (4.0 * (5.0 * x * x - 2.0) * (4.0 - 4.0 * x * x).ln() + (67.0 - x * x) / 6.0)
            + 35.0 * x * (8.0 * x * x - 7.0) * x.asin()
    } else {
        return Err(Error::domain(
            "closed forms are tabulated for p in {2, 4, 6, 8} only",
        ));
    };
    Ok(c_norm * v)
}

/// The `x -> 1` limits of the closed forms (their suprema on `(0,1)`).
pub fn closed_form_half_limit(p: f64) -> Result<f64> {
    match p as u32 {
        2 => Ok(PI),
        4 => Ok(3.0 * PI),
        6 => Ok(7.5 * PI),
        8 => Ok(17.5 * PI),
        _ => Err(Error::domain("limits tabulated for p in {2, 4, 6, 8} only")),
    }
}
