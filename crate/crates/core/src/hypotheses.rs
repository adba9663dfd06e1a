//! Constants of the Lipschitz, growth and nonlocal hypotheses, the
//! contraction constant `Ω` and the Krasnoselskii ball condition.

use crate::error::{invalid, Error, Result};
use crate::fraccalc::TimeGrid;
use crate::quadrature::simpson;
use crate::resolvent::FractionalResolvent;
use crate::scalar::{c, cu, Real};
use crate::solver::{Forcing, Nonlocal, ProblemSpec};

/// Subintervals of the composite Simpson rule in [`lq_norm`].
pub const LQ_INTERVALS: usize = 1024;

/// A nonnegative function on `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile<T> {
    Constant(T),
    /// Samples at `J + 1` equispaced nodes of `[0, T]`, linearly interpolated.
    Table(Vec<T>),
}

impl<T: Real> Profile<T> {
    pub fn validate(&self, name: &'static str) -> Result<()> {
        let bad = match self {
            Profile::Constant(v) => (!(*v >= T::zero()) || !v.is_finite()).then_some(*v),
            Profile::Table(t) => {
                if t.len() < 2 {
                    return Err(Error::Dimension(format!(
                        "profile `{name}` needs at least two samples"
                    )));
                }
                t.iter()
                    .copied()
                    .find(|v| !(*v >= T::zero()) || !v.is_finite())
            }
        };
        match bad {
            Some(v) => Err(invalid(name, v, "samples must be finite and nonnegative")),
            None => Ok(()),
        }
    }

    pub fn eval(&self, t: T, t_end: T) -> T {
        match self {
            Profile::Constant(v) => *v,
            Profile::Table(tab) => {
                let n = tab.len() - 1;
                let x = (t / t_end * cu::<T>(n)).max(T::zero()).min(cu::<T>(n));
                let i = x.floor().to_usize().unwrap_or(0).min(n - 1);
                let p = x - cu::<T>(i);
                tab[i] + p * (tab[i + 1] - tab[i])
            }
        }
    }

    pub fn sup(&self) -> T {
        match self {
            Profile::Constant(v) => *v,
            Profile::Table(t) => t.iter().fold(T::zero(), |m, &v| m.max(v)),
        }
    }
}

/// `(∫_0^T f(t)^{1/a} dt)^a` by composite Simpson on [`LQ_INTERVALS`] subintervals.
pub fn lq_norm<T: Real, F: Fn(T) -> T>(f: F, exponent_inv: T, t_end: T) -> Result<T> {
    if !(exponent_inv > T::zero() && exponent_inv < T::one()) {
        return Err(invalid("exponent_inv", exponent_inv, "must lie in (0, 1)"));
    }
    if !(t_end > T::zero()) || !t_end.is_finite() {
        return Err(invalid("T", t_end, "must be positive"));
    }
    let h = t_end / cu::<T>(LQ_INTERVALS);
    let mut scale = T::zero();
    for i in 0..=LQ_INTERVALS {
        let v = f(h * cu::<T>(i));
        if !(v >= T::zero()) || !v.is_finite() {
            return Err(invalid("f", v, "samples must be finite and nonnegative"));
        }
        scale = scale.max(v);
    }
    if scale == T::zero() {
        return Ok(T::zero());
    }
    let q = T::one() / exponent_inv;
    let integral = simpson(|t| (f(t) / scale).powf(q), T::zero(), t_end, LQ_INTERVALS);
    Ok(scale * integral.max(T::zero()).powf(exponent_inv))
}

/// `L^{1/a}` norm of a profile.
pub fn profile_norm<T: Real>(p: &Profile<T>, exponent_inv: T, t_end: T) -> Result<T> {
    p.validate("profile")?;
    lq_norm(|t| p.eval(t, t_end), exponent_inv, t_end)
}

/// Inputs of [`contraction_constant`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionInput<T> {
    pub m: T,
    pub b: T,
    pub m1: T,
    pub m2: T,
    pub n: T,
    pub t_end: T,
    pub alpha: T,
    pub alpha1: T,
    pub alpha2: T,
}

fn nonneg<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v >= T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, v, "must be finite and nonnegative"))
    }
}

fn sub_order<T: Real>(name: &'static str, v: T, alpha: T) -> Result<()> {
    if v > T::zero() && v < alpha {
        Ok(())
    } else {
        Err(invalid(name, v, "must lie in (0, alpha)"))
    }
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha <= T::one() {
        Ok(())
    } else {
        Err(invalid("alpha", alpha, "must lie in (0, 1]"))
    }
}

/// `((α - a)/(1 - a))^{1-a}`, the Hölder factor attached to exponent `a`.
fn holder<T: Real>(alpha: T, a: T) -> T {
    ((alpha - a) / (T::one() - a)).powf(T::one() - a)
}

/// `Ω = Mb + M M₁ T^{1-α₁} / q₁ + M M₂ N T^{α+1-α₂} / (α q₂)` with
/// `qᵢ = ((α-αᵢ)/(1-αᵢ))^{1-αᵢ}`.
pub fn contraction_constant<T: Real>(p: &ContractionInput<T>) -> Result<T> {
    check_alpha(p.alpha)?;
    sub_order("alpha1", p.alpha1, p.alpha)?;
    sub_order("alpha2", p.alpha2, p.alpha)?;
    nonneg("M", p.m)?;
    nonneg("b", p.b)?;
    nonneg("M1", p.m1)?;
    nonneg("M2", p.m2)?;
    nonneg("N", p.n)?;
    if !(p.t_end > T::zero()) || !p.t_end.is_finite() {
        return Err(invalid("T", p.t_end, "must be positive"));
    }
    let one = T::one();
    let t1 = p.m * p.m1 * p.t_end.powf(one - p.alpha1) / holder(p.alpha, p.alpha1);
    let t2 = p.m * p.m2 * p.n * p.t_end.powf(p.alpha + one - p.alpha2)
        / (p.alpha * holder(p.alpha, p.alpha2));
    Ok(p.m * p.b + t1 + t2)
}

/// Inputs of the Krasnoselskii ball condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrasnoselskiiInput<T> {
    pub m: T,
    pub b: T,
    pub x_norm: T,
    /// `max_{u ∈ B_r} ‖g(u)‖`, held fixed by the caller.
    pub g_sup: T,
    /// `‖h‖_{L^{1/α₃}}`.
    pub h: T,
    pub t_end: T,
    pub alpha: T,
    pub alpha3: T,
}

impl<T: Real> KrasnoselskiiInput<T> {
    fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        sub_order("alpha3", self.alpha3, self.alpha)?;
        nonneg("M", self.m)?;
        nonneg("b", self.b)?;
        nonneg("x_norm", self.x_norm)?;
        nonneg("g_sup", self.g_sup)?;
        nonneg("H", self.h)?;
        if !(self.t_end > T::zero()) || !self.t_end.is_finite() {
            return Err(invalid("T", self.t_end, "must be positive"));
        }
        Ok(())
    }

    /// `M T^{1-α₃} / q₃ · H`, the forcing contribution.
    fn forcing_term(&self) -> T {
        self.m * self.t_end.powf(T::one() - self.alpha3) / holder(self.alpha, self.alpha3) * self.h
    }
}

/// `Mb < 1` and `M(‖x‖ + g_sup) + M T^{1-α₃}/q₃ · H ≤ r`.
pub fn check_krasnoselskii<T: Real>(p: &KrasnoselskiiInput<T>, r: T) -> Result<bool> {
    p.validate()?;
    if !(r > T::zero()) {
        return Err(invalid("r", r, "must be positive"));
    }
    Ok(p.m * p.b < T::one() && krasnoselskii_lhs(p) <= r)
}

fn krasnoselskii_lhs<T: Real>(p: &KrasnoselskiiInput<T>) -> T {
    p.m * (p.x_norm + p.g_sup) + p.forcing_term()
}

/// Smallest `r` passing the ball inequality when `g_sup` does not depend on `r`.
pub fn krasnoselskii_breakpoint<T: Real>(p: &KrasnoselskiiInput<T>) -> Result<T> {
    p.validate()?;
    Ok(krasnoselskii_lhs(p))
}

/// Smallest `r` when `g` is linear with `‖g(u)‖ ≤ b‖u‖_*`, so that
/// `g_sup = b r`; `None` when `Mb ≥ 1`. `p.g_sup` is ignored.
pub fn krasnoselskii_linear_radius<T: Real>(p: &KrasnoselskiiInput<T>) -> Result<Option<T>> {
    p.validate()?;
    let mb = p.m * p.b;
    if mb >= T::one() {
        return Ok(None);
    }
    Ok(Some((p.m * p.x_norm + p.forcing_term()) / (T::one() - mb)))
}

/// `|x - y|^γ - |x^γ - y^γ|`, nonnegative for `x, y > 0`, `γ ∈ (0, 1)`.
pub fn power_inequality_margin<T: Real>(x: T, y: T, gamma: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(invalid("x", x, "must be positive"));
    }
    if !(y > T::zero()) || !y.is_finite() {
        return Err(invalid("y", y, "must be positive"));
    }
    if !(gamma > T::zero() && gamma < T::one()) {
        return Err(invalid("gamma", gamma, "must lie in (0, 1)"));
    }
    Ok((x - y).abs().powf(gamma) - (x.powf(gamma) - y.powf(gamma)).abs())
}

/// Lipschitz and growth data of a problem.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzData<T> {
    pub alpha1: T,
    pub alpha2: T,
    pub alpha3: T,
    pub m1: Profile<T>,
    pub m2: Profile<T>,
    pub h: Profile<T>,
    pub b: T,
    pub kernel_bound: T,
}

impl<T: Real> LipschitzData<T> {
    pub fn validate(&self, alpha: T) -> Result<()> {
        sub_order("alpha1", self.alpha1, alpha)?;
        sub_order("alpha2", self.alpha2, alpha)?;
        sub_order("alpha3", self.alpha3, alpha)?;
        self.m1.validate("m1")?;
        self.m2.validate("m2")?;
        self.h.validate("h")?;
        nonneg("b", self.b)?;
        nonneg("N", self.kernel_bound)
    }

    /// Data implied by a problem's built-in forcing, nonlocal term and kernel.
    /// The exponents default to `α/2` when `None`.
    pub fn from_problem(
        spec: &ProblemSpec<T>,
        grid: &TimeGrid<T>,
        exponents: Option<[T; 3]>,
    ) -> Result<Self> {
        let half = spec.alpha() * c(0.5);
        let [alpha1, alpha2, alpha3] = exponents.unwrap_or([half; 3]);
        let (m1, m2, h) = match spec.forcing() {
            Forcing::Zero => (T::zero(), T::zero(), T::zero()),
            Forcing::Constant(v) => (T::zero(), T::zero(), v.abs() * spec.basis_unit_norm()),
            Forcing::Saturated { mu1, mu2 } => (*mu1, *mu2, (*mu1 + *mu2) * spec.basis_unit_norm()),
        };
        Ok(Self {
            alpha1,
            alpha2,
            alpha3,
            m1: Profile::Constant(m1),
            m2: Profile::Constant(m2),
            h: Profile::Constant(h),
            b: spec.nonlocal_lipschitz(grid)?,
            kernel_bound: spec.kernel().sup_bound(grid)?,
        })
    }
}

/// How `max_{u ∈ B_r} ‖g(u)‖` depends on `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonlocalBound<T> {
    /// Bounded independently of `r`.
    Fixed(T),
    /// Linear: `≤ b r`.
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport<T> {
    pub m: T,
    pub m1: T,
    pub m2: T,
    pub h: T,
    pub n: T,
    pub b: T,
    pub omega: T,
    pub contractive: bool,
    pub mb_below_one: bool,
    /// Smallest radius passing the ball condition, when one is known.
    pub ball_radius: Option<T>,
    /// Verdict at a caller-supplied radius.
    pub ball_at_radius: Option<(T, bool)>,
    pub notes: Vec<String>,
}

/// Evaluates the hypotheses for given constants.
pub fn hypothesis_report<T: Real>(
    m: T,
    data: &LipschitzData<T>,
    t_end: T,
    alpha: T,
    x_norm: T,
    g_bound: NonlocalBound<T>,
    radius: Option<T>,
) -> Result<HypothesisReport<T>> {
    check_alpha(alpha)?;
    data.validate(alpha)?;
    let m1 = profile_norm(&data.m1, data.alpha1, t_end)?;
    let m2 = profile_norm(&data.m2, data.alpha2, t_end)?;
    let h = profile_norm(&data.h, data.alpha3, t_end)?;
    let omega = contraction_constant(&ContractionInput {
        m,
        b: data.b,
        m1,
        m2,
        n: data.kernel_bound,
        t_end,
        alpha,
        alpha1: data.alpha1,
        alpha2: data.alpha2,
    })?;
    let base = KrasnoselskiiInput {
        m,
        b: data.b,
        x_norm,
        g_sup: T::zero(),
        h,
        t_end,
        alpha,
        alpha3: data.alpha3,
    };
    let mut notes = Vec::new();
    let mb_ok = m * data.b < T::one();
    let ball_radius = match g_bound {
        NonlocalBound::Fixed(g) => {
            let r = krasnoselskii_breakpoint(&KrasnoselskiiInput { g_sup: g, ..base })?;
            mb_ok.then_some(r)
        }
        NonlocalBound::Linear => krasnoselskii_linear_radius(&base)?,
    };
    let ball_at_radius = match radius {
        Some(r) => {
            let g_sup = match g_bound {
                NonlocalBound::Fixed(g) => g,
                NonlocalBound::Linear => data.b * r,
            };
            Some((
                r,
                check_krasnoselskii(&KrasnoselskiiInput { g_sup, ..base }, r)?,
            ))
        }
        None => None,
    };
    if !(omega < T::one()) {
        notes.push(format!(
            "Omega = {omega} is not below 1: no contraction guarantee"
        ));
    }
    if !mb_ok {
        notes.push(format!(
            "Mb = {} is not below 1: ball condition cannot hold",
            m * data.b
        ));
    }
    if let NonlocalBound::Linear = g_bound {
        notes.push("nonlocal bound grows linearly in r; radius from the closed form".to_string());
    }
    Ok(HypothesisReport {
        m,
        m1,
        m2,
        h,
        n: data.kernel_bound,
        b: data.b,
        omega,
        contractive: omega < T::one(),
        mb_below_one: mb_ok,
        ball_radius,
        ball_at_radius,
        notes,
    })
}

/// Full hypothesis check of a problem on a grid.
pub fn assess_problem<T: Real>(
    spec: &ProblemSpec<T>,
    grid: &TimeGrid<T>,
    exponents: Option<[T; 3]>,
    radius: Option<T>,
) -> Result<HypothesisReport<T>> {
    let data = LipschitzData::from_problem(spec, grid, exponents)?;
    let resolvent = FractionalResolvent::new(spec.operator().clone(), spec.alpha())?;
    let m = resolvent.norm_bound(grid)?;
    let g_bound = match spec.nonlocal() {
        Nonlocal::Zero => NonlocalBound::Fixed(T::zero()),
        Nonlocal::Constant(g) => NonlocalBound::Fixed(g.norm()),
        Nonlocal::Linear { .. } => NonlocalBound::Linear,
        Nonlocal::Saturated { .. } => NonlocalBound::Fixed(spec.basis_unit_norm()),
    };
    hypothesis_report(
        m,
        &data,
        grid.t_end(),
        spec.alpha(),
        spec.x0().norm(),
        g_bound,
        radius,
    )
}
