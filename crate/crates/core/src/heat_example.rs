//! Dirichlet heat problem on `(0, 1)` with saturated forcing, exponential
//! memory `r(t, s) = e^{t-s}` and multi-point nonlocal data, `T = 1`.
//!
//! The initial datum is given by its sine-series coefficients
//! `p(x) = Σ p_n sin(nπx)`; in the orthonormal basis `√2 sin(nπx)` used by the
//! solver its coefficients are `p_n / √2`.

use crate::error::{invalid, Error, Result};
use crate::fraccalc::{TimeGrid, VolterraKernel, WeightedTrajectory};
use crate::hypotheses::{assess_problem, contraction_constant, ContractionInput, HypothesisReport};
use crate::scalar::{c, Real};
use crate::solver::{nonlocal_value, Basis, Forcing, Nonlocal, ProblemSpec};
use crate::special::{gamma, recip_gamma};
use crate::spectral::{SpectralOperator, StateVector};

/// Form of the nonlocal condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `g(u) = Σ aᵢ u(tᵢ)`.
    I,
    /// `g(u) = Σ aᵢ|u(tᵢ)| / (1 + Σ aᵢ|u(tᵢ)|)`.
    II,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatExampleParams<T> {
    pub k: T,
    pub alpha: T,
    pub mu1: T,
    pub mu2: T,
    pub variant: Variant,
    pub a: Vec<T>,
    pub t_points: Vec<T>,
    /// Sine-series coefficients of the initial datum.
    pub p_coeffs: Vec<T>,
    pub alpha1: T,
    pub alpha2: T,
    pub alpha3: T,
}

impl<T: Real> HeatExampleParams<T> {
    /// `α = 1/2, k = 1, μ₁ = μ₂ = 0.05`, variant I with `a₁ = 0.1, t₁ = 0.5`,
    /// `p(x) = sin(πx)` and `α₁ = α₂ = α₃ = α/2`.
    pub fn reference() -> Self {
        let half = c::<T>(0.5);
        Self {
            k: T::one(),
            alpha: half,
            mu1: c(0.05),
            mu2: c(0.05),
            variant: Variant::I,
            a: vec![c(0.1)],
            t_points: vec![half],
            p_coeffs: vec![T::one()],
            alpha1: c(0.25),
            alpha2: c(0.25),
            alpha3: c(0.25),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > T::zero()) || !self.k.is_finite() {
            return Err(invalid("k", self.k, "must be positive"));
        }
        if !(self.alpha > T::zero() && self.alpha <= T::one()) {
            return Err(invalid("alpha", self.alpha, "must lie in (0, 1]"));
        }
        for (name, v) in [
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
            ("alpha3", self.alpha3),
        ] {
            if !(v > T::zero() && v < self.alpha) {
                return Err(invalid(name, v, "must lie in (0, alpha)"));
            }
        }
        for (name, v) in [("mu1", self.mu1), ("mu2", self.mu2)] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(invalid(name, v, "must be finite and nonnegative"));
            }
        }
        if self.a.len() != self.t_points.len() {
            return Err(Error::Dimension(format!(
                "{} coefficients but {} time points",
                self.a.len(),
                self.t_points.len()
            )));
        }
        if let Some(v) = self
            .a
            .iter()
            .find(|v| !(**v >= T::zero()) || !v.is_finite())
        {
            return Err(invalid("a", *v, "must be finite and nonnegative"));
        }
        if let Some(v) = self
            .t_points
            .iter()
            .find(|v| !(**v > T::zero() && **v <= T::one()))
        {
            return Err(invalid("t_points", *v, "must lie in (0, 1]"));
        }
        if let Some(v) = self.p_coeffs.iter().find(|v| !v.is_finite()) {
            return Err(invalid("p_coeffs", *v, "must be finite"));
        }
        Ok(())
    }

    /// `b = Σ aᵢ tᵢ^{α-1}`.
    pub fn nonlocal_lipschitz(&self) -> T {
        self.a
            .iter()
            .zip(&self.t_points)
            .fold(T::zero(), |acc, (&a, &t)| {
                acc + a * t.powf(self.alpha - T::one())
            })
    }
}

/// Builds the heat problem with `n_modes` modes and `2 n_modes` collocation points.
pub fn build_heat_problem<T: Real>(
    params: &HeatExampleParams<T>,
    n_modes: usize,
) -> Result<ProblemSpec<T>> {
    build_heat_problem_with_points(params, n_modes, 2 * n_modes)
}

pub fn build_heat_problem_with_points<T: Real>(
    params: &HeatExampleParams<T>,
    n_modes: usize,
    spatial_points: usize,
) -> Result<ProblemSpec<T>> {
    params.validate()?;
    if n_modes < params.p_coeffs.len() {
        return Err(Error::Dimension(format!(
            "n_modes = {n_modes} is smaller than the {} initial coefficients",
            params.p_coeffs.len()
        )));
    }
    let op = SpectralOperator::heat(params.k, n_modes)?;
    let mut x0 = vec![T::zero(); n_modes];
    for (x, &p) in x0.iter_mut().zip(&params.p_coeffs) {
        *x = p * T::FRAC_1_SQRT_2();
    }
    let nonlocal = match params.variant {
        Variant::I => Nonlocal::Linear {
            a: params.a.clone(),
            t: params.t_points.clone(),
        },
        Variant::II => Nonlocal::Saturated {
            a: params.a.clone(),
            t: params.t_points.clone(),
        },
    };
    ProblemSpec::new(
        params.alpha,
        T::one(),
        op,
        StateVector::new(x0)?,
        Forcing::Saturated {
            mu1: params.mu1,
            mu2: params.mu2,
        },
        nonlocal,
        VolterraKernel::exponential(),
        Basis::Sine {
            points: spatial_points,
        },
    )
}

/// `μ₁|w₁|/(1+|w₁|) + μ₂/(1+|w₂|)`.
pub fn example_f<T: Real>(_t: T, w1: T, w2: T, mu1: T, mu2: T) -> T {
    let a = w1.abs();
    mu1 * a / (T::one() + a) + mu2 / (T::one() + w2.abs())
}

/// `s/(1+s)` with `s = Σ aᵢ|vᵢ|`.
pub(crate) fn saturate<T: Real, I: Iterator<Item = (T, T)>>(terms: I) -> T {
    let s = terms.fold(T::zero(), |acc, (a, v)| acc + a * v.abs());
    s / (T::one() + s)
}

/// `g(u)` for the heat problem in `u.modes()` modes.
pub fn example_g<T: Real>(
    u: &WeightedTrajectory<T>,
    variant: Variant,
    a: &[T],
    t_points: &[T],
) -> Result<StateVector<T>> {
    let params = HeatExampleParams {
        alpha: u.alpha(),
        variant,
        a: a.to_vec(),
        t_points: t_points.to_vec(),
        p_coeffs: Vec::new(),
        alpha1: u.alpha() * c(0.25),
        alpha2: u.alpha() * c(0.25),
        alpha3: u.alpha() * c(0.25),
        ..HeatExampleParams::reference()
    };
    if u.grid().t_end() != T::one() {
        return Err(invalid(
            "T",
            u.grid().t_end(),
            "the heat example lives on [0, 1]",
        ));
    }
    let spec = build_heat_problem(&params, u.modes())?;
    nonlocal_value(&spec, u)
}

/// A displayed sufficient condition `value < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition<T> {
    pub value: T,
    pub holds: bool,
}

fn holder<T: Real>(alpha: T, a: T) -> T {
    ((alpha - a) / (T::one() - a)).powf(T::one() - a)
}

/// `μ₁/(Γ(α)q₁) + Σaᵢtᵢ^{α-1}/Γ(α) + μ₂e/(Γ(α+1)q₂) < 1`, checked against
/// [`contraction_constant`] with `M = 1/Γ(α)`, `b = Σaᵢtᵢ^{α-1}`,
/// `M₁ = μ₁`, `M₂ = μ₂`, `N = e`, `T = 1`.
pub fn condition_i<T: Real>(params: &HeatExampleParams<T>) -> Result<Condition<T>> {
    params.validate()?;
    let alpha = params.alpha;
    let g = gamma(alpha);
    let b = params.nonlocal_lipschitz();
    let e = T::one().exp();
    let value = params.mu1 / (g * holder(alpha, params.alpha1))
        + b / g
        + params.mu2 * e / (gamma(alpha + T::one()) * holder(alpha, params.alpha2));
    let omega = contraction_constant(&ContractionInput {
        m: recip_gamma(alpha),
        b,
        m1: params.mu1,
        m2: params.mu2,
        n: e,
        t_end: T::one(),
        alpha,
        alpha1: params.alpha1,
        alpha2: params.alpha2,
    })?;
    if (omega - value).abs() > c::<T>(1e-12) * value.max(T::one()) {
        return Err(Error::Inconsistent(format!(
            "condition I gives {value}, contraction constant gives {omega}"
        )));
    }
    Ok(Condition {
        value,
        holds: value < T::one(),
    })
}

/// `μ₁/(Γ(α)q₁) < 1`.
pub fn condition_ii<T: Real>(params: &HeatExampleParams<T>) -> Result<Condition<T>> {
    params.validate()?;
    let value = params.mu1 / condition_ii_threshold(params.alpha, params.alpha1)?;
    Ok(Condition {
        value,
        holds: value < T::one(),
    })
}

/// `μ₁* = Γ(α)((α-α₁)/(1-α₁))^{1-α₁}`, where condition II changes verdict.
pub fn condition_ii_threshold<T: Real>(alpha: T, alpha1: T) -> Result<T> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(invalid("alpha", alpha, "must lie in (0, 1]"));
    }
    if !(alpha1 > T::zero() && alpha1 < alpha) {
        return Err(invalid("alpha1", alpha1, "must lie in (0, alpha)"));
    }
    Ok(gamma(alpha) * holder(alpha, alpha1))
}

/// Hypothesis report of the assembled problem, with `M` measured on `grid`.
pub fn assess_heat<T: Real>(
    params: &HeatExampleParams<T>,
    n_modes: usize,
    grid: &TimeGrid<T>,
    radius: Option<T>,
) -> Result<HypothesisReport<T>> {
    let spec = build_heat_problem(params, n_modes)?;
    assess_problem(
        &spec,
        grid,
        Some([params.alpha1, params.alpha2, params.alpha3]),
        radius,
    )
}
