//! Two-parameter Mittag-Leffler function `E_{α,β}(z)` for real arguments.
//!
//! Regimes:
//! * `z >= 0`: power series (all terms positive).
//! * `z < 0`, small: power series with compensated summation, accepted only
//!   while the absolute series stays below [`ABS_SUM_LIMIT`], which bounds the
//!   cancellation error.
//! * `z <= -50`: asymptotic series `-Σ z^{-k}/Γ(β-αk)` truncated at its
//!   smallest term.
//! * in between: the real branch-cut integral
//!   `E_{α,β}(-x) = 1/(πα) ∫_0^∞ e^{-u^{1/α}} u^{(1-β)/α}
//!   (u sin πβ - x sin π(α-β)) / (u² + 2xu cos πα + x²) du`,
//!   valid for `0 < α < 1`, `0 < β < 1 + α`, after lowering β with
//!   `E_{α,β}(z) = (E_{α,β-α}(z) - 1/Γ(β-α)) / z`.
//! * `α = 1` uses `exp`/`expm1` and the incomplete-gamma integral instead.

use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate_adaptive, Compensated};
use crate::scalar::{c, cu, Real};
use crate::special::{cos_pi, ln_abs_recip_gamma, ln_gamma, recip_gamma, sin_pi};

/// Hard cap on the number of series terms.
pub const SERIES_CAP: usize = 10_000;
/// Largest admissible `Σ|z^k/Γ(αk+β)|` for the series on the negative axis.
pub const ABS_SUM_LIMIT: f64 = 16.0;
/// Start of the asymptotic regime on the negative axis.
pub const ASYMPTOTIC_FROM: f64 = 50.0;

const ASYMPTOTIC_TERMS: usize = 400;
const QUAD_PANELS: usize = 4000;

/// A validated Mittag-Leffler evaluation request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlfQuery<T> {
    pub alpha: T,
    pub beta: T,
    pub z: T,
}

impl<T: Real> MlfQuery<T> {
    pub fn new(alpha: T, beta: T, z: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(invalid("alpha", alpha, "must lie in (0, 1]"));
        }
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(invalid("beta", beta, "must be positive and finite"));
        }
        if !z.is_finite() {
            return Err(invalid("z", z, "must be finite"));
        }
        Ok(Self { alpha, beta, z })
    }
}

/// Evaluates `E_{α,β}(z)`.
pub fn mittag_leffler<T: Real>(q: &MlfQuery<T>) -> Result<T> {
    let v = eval(q.alpha, q.beta, q.z)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow)
    }
}

/// Shorthand for `mittag_leffler(&MlfQuery::new(alpha, beta, z)?)`.
pub fn ml<T: Real>(alpha: T, beta: T, z: T) -> Result<T> {
    mittag_leffler(&MlfQuery::new(alpha, beta, z)?)
}

fn eval<T: Real>(alpha: T, beta: T, z: T) -> Result<T> {
    if z == T::zero() {
        return Ok(recip_gamma(beta));
    }
    if alpha == T::one() {
        return alpha_one(beta, z);
    }
    if z > T::zero() {
        return series(alpha, beta, z, None).map(|s| s.expect("unguarded series"));
    }
    if let Some(v) = series(alpha, beta, z, Some(c(ABS_SUM_LIMIT)))? {
        return Ok(v);
    }
    negative_axis(alpha, beta, -z)
}

/// Power series. With `guard`, returns `None` as soon as the absolute sum
/// exceeds the guard.
fn series<T: Real>(alpha: T, beta: T, z: T, guard: Option<T>) -> Result<Option<T>> {
    let lnz = z.abs().ln();
    let negative = z < T::zero();
    let half_eps = T::epsilon() * c(0.5);
    let mut sum = Compensated::new();
    let mut abs_sum = T::zero();
    let mut small_run = 0;
    let mut zk = T::one();
    let mut zk_ok = true;
    for k in 0..SERIES_CAP {
        let arg = alpha * cu::<T>(k) + beta;
        let term = if zk_ok && arg < c(170.0) {
            zk * recip_gamma(arg)
        } else {
            let mag = (cu::<T>(k) * lnz - ln_gamma(arg)).exp();
            if negative && k % 2 == 1 {
                -mag
            } else {
                mag
            }
        };
        sum.add(term);
        abs_sum = abs_sum + term.abs();
        if let Some(g) = guard {
            if abs_sum > g {
                return Ok(None);
            }
        }
        if !abs_sum.is_finite() {
            return Err(Error::Overflow);
        }
        let s = sum.value();
        if term.abs() < half_eps * s.abs() || (term == T::zero() && k > 0) {
            small_run += 1;
            if small_run >= 3 {
                return Ok(Some(s));
            }
        } else {
            small_run = 0;
        }
        zk = zk * z;
        if !zk.is_finite() || zk == T::zero() {
            zk_ok = false;
        }
    }
    Err(Error::SeriesCap(SERIES_CAP))
}

/// `E_{α,β}(-x)` for `0 < α < 1`, `x > 0`, outside the series regime.
fn negative_axis<T: Real>(alpha: T, beta: T, x: T) -> Result<T> {
    if x >= c(ASYMPTOTIC_FROM) {
        if let Some(v) = asymptotic(alpha, beta, x) {
            return Ok(v);
        }
    }
    if beta >= T::one() + alpha * c(0.5) {
        let lower = negative_axis(alpha, beta - alpha, x)?;
        return Ok((lower - recip_gamma(beta - alpha)) / (-x));
    }
    branch_cut_integral(alpha, beta, x)
}

fn asymptotic<T: Real>(alpha: T, beta: T, x: T) -> Option<T> {
    let lnx = x.ln();
    let ln_pi = T::PI().ln();
    let mut sum = Compensated::new();
    let mut prev = T::infinity();
    for k in 1..=ASYMPTOTIC_TERMS {
        let y = beta - alpha * cu::<T>(k);
        let kl = cu::<T>(k) * lnx;
        // Near the poles of Γ a coefficient can be tiny by accident, so
        // truncation is judged on the envelope Γ(1-y)/π of |1/Γ(y)|.
        let envelope = if y > T::zero() {
            ln_abs_recip_gamma(y).map(|(l, _)| (l - kl).exp())
        } else {
            Some((ln_gamma(T::one() - y) - ln_pi - kl).exp())
        };
        let Some(envelope) = envelope else { continue };
        if envelope > prev {
            break;
        }
        prev = envelope;
        if let Some((l, sign)) = ln_abs_recip_gamma(y) {
            let mag = (l - kl).exp();
            sum.add(if k % 2 == 1 { sign * mag } else { -sign * mag });
        }
        let s = sum.value();
        if envelope <= T::epsilon() * c(0.25) * s.abs() {
            return Some(s);
        }
    }
    let s = sum.value();
    if prev <= T::epsilon() * c(4.0) * s.abs() {
        Some(s)
    } else {
        None
    }
}

fn branch_cut_integral<T: Real>(alpha: T, beta: T, x: T) -> Result<T> {
    let one = T::one();
    let spb = sin_pi(beta);
    let spab = sin_pi(alpha - beta);
    let cpa = cos_pi(alpha);
    let two = c::<T>(2.0);
    let inv_alpha = alpha.recip();
    let u_max = c::<T>(ASYMPTOTIC_FROM).powf(alpha);

    // Breakpoints in u around the near-pole of the rational factor.
    let mut ub = vec![T::zero(), u_max];
    if u_max > one {
        ub.push(one);
    }
    let width = x * sin_pi(alpha);
    let centre = (-x * cpa).max(T::zero());
    for f in [-4.0, -1.0, 0.0, 1.0, 4.0] {
        let u = centre + width * c(f);
        if u > T::zero() && u < u_max {
            ub.push(u);
        }
    }
    ub.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    ub.dedup();

    let rational = |u: T| (u * spb - x * spab) / (u * u + two * x * u * cpa + x * x);
    let abs_tol = T::min_positive_value().max(c(1e-300));
    let rel_tol = T::epsilon() * c(2.0);

    let integral = if beta <= one {
        let p = (one - beta) * inv_alpha;
        integrate_adaptive(
            |u: T| {
                if u == T::zero() {
                    return if p == T::zero() {
                        rational(u)
                    } else {
                        T::zero()
                    };
                }
                (-u.powf(inv_alpha)).exp() * u.powf(p) * rational(u)
            },
            &ub,
            abs_tol,
            rel_tol,
            QUAD_PANELS,
        )?
    } else {
        // u = v^q removes the integrable singularity u^{(1-β)/α}.
        let q = alpha / (alpha + one - beta);
        let inv_q = q.recip();
        let vb: Vec<T> = ub.iter().map(|&u| u.powf(inv_q)).collect();
        let e = q * inv_alpha;
        integrate_adaptive(
            |v: T| q * (-v.powf(e)).exp() * rational(v.powf(q)),
            &vb,
            abs_tol,
            rel_tol,
            QUAD_PANELS,
        )?
    };
    Ok(integral / (T::PI() * alpha))
}

fn alpha_one<T: Real>(beta: T, z: T) -> Result<T> {
    let one = T::one();
    if beta == one {
        return Ok(z.exp());
    }
    if z > T::zero() {
        if beta == c(2.0) {
            return Ok(z.exp_m1() / z);
        }
        return series(one, beta, z, None).map(|s| s.expect("unguarded series"));
    }
    if let Some(v) = series(one, beta, z, Some(c(ABS_SUM_LIMIT)))? {
        return Ok(v);
    }
    if beta == c(2.0) {
        return Ok(z.exp_m1() / z);
    }
    if beta > c(2.0) {
        let lower = alpha_one(beta - one, z)?;
        return Ok((lower - recip_gamma(beta - one)) / z);
    }
    if beta > one {
        return incomplete_gamma_integral(beta, z);
    }
    Ok(recip_gamma(beta) + z * alpha_one(beta + one, z)?)
}

/// `E_{1,β}(z) = (1/Γ(β)) ∫_0^1 exp(z (1 - v^{1/(β-1)})) dv` for `1 < β < 2`.
fn incomplete_gamma_integral<T: Real>(beta: T, z: T) -> Result<T> {
    let one = T::one();
    let m = (beta - one).recip();
    let x = -z;
    let mut breaks = vec![T::zero(), one];
    for f in [1.0, 10.0, 100.0] {
        let v = one - c::<T>(f) / (m * x);
        if v > T::zero() && v < one {
            breaks.push(v);
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    let integral = integrate_adaptive(
        |v: T| (z * (one - v.powf(m))).exp(),
        &breaks,
        T::min_positive_value(),
        T::epsilon() * c(2.0),
        QUAD_PANELS,
    )?;
    Ok(integral * recip_gamma(beta))
}
