//! Scalar kernels used throughout the evaluators.
//!
//! The paired principal-value integrands combine profile values at `x+z`
//! and `x-z` so that the leading odd terms cancel. Forming that
//! combination naively loses all significant digits as `z -> 0`, so the
//! helpers here express the symmetric sums/differences through `expm1`,
//! `log1p` and an even binomial series, keeping the relative error at
//! machine level for every `z`.

/// `(1+w)^s + (1-w)^s - 2` without cancellation, `|w| < 1`.
///
/// For small `w` this is `s(s-1) w^2 + O(w^4)`; the direct expression
/// loses ~`log10(1/w^2)` digits, the even-term binomial series none.
pub fn sym_pow_sum(s: f64, w: f64) -> f64 {
    debug_assert!(w.abs() < 1.0);
    if w.abs() > 0.7 {
        return (1.0 + w).powf(s) + (1.0 - w).powf(s) - 2.0;
    }
    if w == 0.0 {
        return 0.0;
    }
    let w2 = w * w;
    let mut coef = 1.0_f64; // binom(s, j), updated incrementally
    let mut wpow = 1.0_f64; // w^j for even j
    let mut total = 0.0_f64;
    for j in 1..200usize {
        coef *= (s - (j as f64 - 1.0)) / j as f64;
        if j % 2 == 0 {
            wpow *= w2;
            let term = coef * wpow;
            total += term;
            if term.abs() <= f64::EPSILON * total.abs() {
                break;
            }
        }
    }
    2.0 * total
}

/// `(1+w)^s - (1-w)^s` with full relative accuracy, `|w| <= 1`.
pub fn sym_pow_diff(s: f64, w: f64) -> f64 {
    f64::exp_m1(s * f64::ln_1p(w)) - f64::exp_m1(s * f64::ln_1p(-w))
}

/// `(m+d)^q - (m-d)^q` for `m > 0`, `|d| <= m`, accurate when `|d| << m`.
pub fn pow_diff(q: f64, m: f64, d: f64) -> f64 {
    let r = d / m;
    m.powf(q) * (f64::exp_m1(q * f64::ln_1p(r)) - f64::exp_m1(q * f64::ln_1p(-r)))
}

/// The paired `G`-sum for the bump family.
///
/// With `u(y) = amp * (R^2 - |y|^2)^s_+` sampled along a line through the
/// evaluation point, let `a` be the squared-support margin on that line
/// (`R^2 - |x|^2` in 1-d, `R^2 - r0^2 - rho^2` on a transverse slice) and
/// `c` the signed coordinate of the pairing center. Returns
///
/// ```text
/// G(u0 - u_+) + G(u0 - u_-),   u_± = amp·(a - z^2 ∓ 2cz)^s
/// ```
///
/// where `u0 = amp·a^s + offset` (`offset` is the gap between the value
/// at the evaluation point and the on-slice value at the pairing center;
/// 0 in 1-d). The odd terms cancel to leave `O(z^p)` when `offset = 0`;
/// both paired points must be inside the support
/// (`a - z^2 - 2|c|z >= 0`).
pub fn bump_pair_g_sum_offset(
    a: f64,
    c: f64,
    z: f64,
    s: f64,
    p: f64,
    amp: f64,
    offset: f64,
) -> f64 {
    let q = a - z * z;
    debug_assert!(q > 0.0 && q - 2.0 * c.abs() * z >= 0.0);
    let w = 2.0 * c * z / q;
    let qs = q.powf(s);
    // (u_- - u_+)/2 and u0 - (u_+ + u_-)/2, both relative-accurate in z
    let half_diff = amp * qs * sym_pow_diff(s, w) / 2.0;
    let sym = offset
        + amp
            * (-a.powf(s) * f64::exp_m1(s * f64::ln_1p(-z * z / a))
                - qs * sym_pow_sum(s, w) / 2.0);
    paired_g(sym, half_diff, p)
}

/// [`bump_pair_g_sum_offset`] with a zero offset (the 1-d case).
pub fn bump_pair_g_sum(a: f64, c: f64, z: f64, s: f64, p: f64, amp: f64) -> f64 {
    bump_pair_g_sum_offset(a, c, z, s, p, amp, 0.0)
}

/// `G(S+D) + G(S-D)` with `G(t) = |t|^{p-2} t`, robust when `|S| << |D|`.
pub fn paired_g(s_part: f64, d_part: f64, p: f64) -> f64 {
    let d = d_part.abs();
    if d == 0.0 {
        return 2.0 * crate::model::g_power(s_part, p);
    }
    if s_part.abs() < d {
        // G(S+D) + G(S-D) = (D+S)^{p-1} - (D-S)^{p-1}
        pow_diff(p - 1.0, d, s_part)
    } else {
        crate::model::g_power(s_part + d, p) + crate::model::g_power(s_part - d, p)
    }
}

/// `A^{p-1} - B^{p-1}` for `A, B > 0`, given that `mean = (A+B)/2` and
/// `half_diff = (A-B)/2` are already known to full relative accuracy.
pub fn g_diff_from_parts(mean: f64, half_diff: f64, p: f64) -> f64 {
    if half_diff.abs() < mean {
        pow_diff(p - 1.0, mean, half_diff)
    } else {
        crate::model::g_power(mean + half_diff, p) - crate::model::g_power(mean - half_diff, p)
    }
}

/// The bracket difference appearing in the near-boundary decomposition
/// and the scalar identity:
///
/// ```text
/// [1 - (1-k-qc k^2)^s]^{p-1} - [(1+k-qc k^2)^s - 1]^{p-1}
/// ```
///
/// Both brackets are `~ sk` as `k -> 0` and the difference is `O(k^p)`;
/// the two-sided combination is assembled from relative-accurate parts so
/// no digits are lost at small `k`. `qc = 0` gives the identity
/// integrand.
pub fn bracket_pair_diff(s: f64, p: f64, k: f64, qc: f64) -> f64 {
    let kk = k * k;
    let u_plus = -f64::exp_m1(s * f64::ln_1p(-(k + qc * kk)));
    let u_minus = f64::exp_m1(s * f64::ln_1p(k - qc * kk));
    if k >= 0.5 {
        return u_plus.powf(p - 1.0) - u_minus.powf(p - 1.0);
    }
    // u_+ - u_- = -[2((1+mu)^s - 1) + (1+mu)^s E(delta)], mu = -qc k^2
    let mu = -qc * kk;
    let delta = k / (1.0 + mu);
    let diff =
        -(2.0 * f64::exp_m1(s * f64::ln_1p(mu)) + (1.0 + mu).powf(s) * sym_pow_sum(s, delta));
    g_diff_from_parts(0.5 * (u_plus + u_minus), 0.5 * diff, p)
}

/// Natural log of the Gamma function.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta(a: f64, b: f64) -> f64 {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

/// Surface measure of the unit sphere `S^m` in `R^{m+1}`:
/// `|S^m| = 2 π^{(m+1)/2} / Γ((m+1)/2)`. `|S^0| = 2` (two points).
pub fn sphere_measure(m: u32) -> f64 {
    let h = (m as f64 + 1.0) / 2.0;
    2.0 * std::f64::consts::PI.powf(h) / ln_gamma(h).exp()
}
