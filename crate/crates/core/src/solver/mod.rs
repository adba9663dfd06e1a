//! Mild solutions by Picard iteration of
//! `(𝒩u)(t) = S(t)[x - g(u)] + ∫_0^t S(t-s) f(s, s^{1-α}u(s), (Ku)(s)) ds`.
//!
//! The convolution is integrated per mode with exact moments of the
//! resolvent kernel `τ^{α-1} E_{α,α}(λτ^α)` against the piecewise-linear
//! interpolant of the projected forcing `f̂_n`:
//! `∫_0^τ σ^{α-1} E_{α,α}(λσ^α) dσ = τ^α E_{α,α+1}(λτ^α)` and
//! `∫_0^τ σ^α E_{α,α}(λσ^α) dσ = τ^{α+1} [E_{α,α+1} - E_{α,α+2}](λτ^α)`.

mod collocation;

pub use collocation::Basis;

use std::fmt::Debug;

use collocation::Collocation;

use crate::error::{invalid, Error, Result};
use crate::fraccalc::{
    kernel_apply_raw, weighted_sup_norm, Interpolation, ProductRule, TimeGrid, VolterraKernel,
    WeightedTrajectory,
};
use crate::heat_example::{example_f, saturate};
use crate::mlf::ml;
use crate::scalar::{c, cu, Real};
use crate::special::recip_gamma;
use crate::spectral::{SpectralOperator, StateVector};

/// Built-in forcing terms `f(t, w, Ku)`, evaluated pointwise in space.
#[derive(Debug, Clone, PartialEq)]
pub enum Forcing<T> {
    Zero,
    /// `f ≡ c` at every point.
    Constant(T),
    /// `μ₁|w|/(1+|w|) + μ₂/(1+|Ku|)`.
    Saturated {
        mu1: T,
        mu2: T,
    },
}

/// Built-in nonlocal terms `g(u)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Nonlocal<T> {
    Zero,
    Constant(StateVector<T>),
    /// `Σ aᵢ u(tᵢ)`.
    Linear {
        a: Vec<T>,
        t: Vec<T>,
    },
    /// `Σ aᵢ|u(tᵢ)| / (1 + Σ aᵢ|u(tᵢ)|)`, pointwise.
    Saturated {
        a: Vec<T>,
        t: Vec<T>,
    },
}

impl<T: Real> Nonlocal<T> {
    fn points(&self) -> Option<(&[T], &[T])> {
        match self {
            Nonlocal::Linear { a, t } | Nonlocal::Saturated { a, t } => Some((a, t)),
            _ => None,
        }
    }
}

/// A nonlocal time point moved to the nearest grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snap<T> {
    pub requested: T,
    pub node: usize,
    pub distance: T,
}

/// Complete problem description.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec<T> {
    alpha: T,
    t_end: T,
    operator: SpectralOperator<T>,
    x0: StateVector<T>,
    forcing: Forcing<T>,
    nonlocal: Nonlocal<T>,
    kernel: VolterraKernel<T>,
    basis: Basis,
}

impl<T: Real> ProblemSpec<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: T,
        t_end: T,
        operator: SpectralOperator<T>,
        x0: StateVector<T>,
        forcing: Forcing<T>,
        nonlocal: Nonlocal<T>,
        kernel: VolterraKernel<T>,
        basis: Basis,
    ) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(invalid("alpha", alpha, "must lie in (0, 1]"));
        }
        if !(t_end > T::zero()) || !t_end.is_finite() {
            return Err(invalid("T", t_end, "must be positive and finite"));
        }
        let modes = operator.n_modes();
        if x0.len() != modes {
            return Err(Error::Dimension(format!(
                "initial datum has {} modes, operator has {modes}",
                x0.len()
            )));
        }
        if let Basis::Sine { points } = basis {
            if points < 2 * modes {
                return Err(invalid(
                    "spatial_points",
                    cu::<T>(points),
                    "must be at least 2 n_modes",
                ));
            }
        }
        match &forcing {
            Forcing::Zero => {}
            Forcing::Constant(v) => {
                if !v.is_finite() {
                    return Err(invalid("c", *v, "must be finite"));
                }
            }
            Forcing::Saturated { mu1, mu2 } => {
                for (name, v) in [("mu1", *mu1), ("mu2", *mu2)] {
                    if !(v >= T::zero()) || !v.is_finite() {
                        return Err(invalid(name, v, "must be finite and nonnegative"));
                    }
                }
            }
        }
        if let Nonlocal::Constant(g) = &nonlocal {
            if g.len() != modes {
                return Err(Error::Dimension(format!(
                    "nonlocal datum has {} modes, operator has {modes}",
                    g.len()
                )));
            }
        }
        if let Some((a, t)) = nonlocal.points() {
            if a.len() != t.len() {
                return Err(Error::Dimension(format!(
                    "{} coefficients but {} time points",
                    a.len(),
                    t.len()
                )));
            }
            if let Some(v) = a.iter().find(|v| !(**v >= T::zero()) || !v.is_finite()) {
                return Err(invalid("a", *v, "must be finite and nonnegative"));
            }
            if let Some(v) = t.iter().find(|v| !(**v > T::zero() && **v <= t_end)) {
                return Err(invalid("t_points", *v, "must lie in (0, T]"));
            }
        }
        Ok(Self {
            alpha,
            t_end,
            operator,
            x0,
            forcing,
            nonlocal,
            kernel,
            basis,
        })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn t_end(&self) -> T {
        self.t_end
    }

    pub fn operator(&self) -> &SpectralOperator<T> {
        &self.operator
    }

    pub fn x0(&self) -> &StateVector<T> {
        &self.x0
    }

    pub fn forcing(&self) -> &Forcing<T> {
        &self.forcing
    }

    pub fn nonlocal(&self) -> &Nonlocal<T> {
        &self.nonlocal
    }

    pub fn kernel(&self) -> &VolterraKernel<T> {
        &self.kernel
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn n_modes(&self) -> usize {
        self.operator.n_modes()
    }

    /// Norm of the projection of the unit function: 1 on `(0, 1)` in the sine
    /// basis, `√N` for a diagonal system.
    pub fn basis_unit_norm(&self) -> T {
        match self.basis {
            Basis::Sine { .. } => T::one(),
            Basis::Diagonal => cu::<T>(self.n_modes()).sqrt(),
        }
    }

    /// Nonlocal time points moved to grid nodes. Points below the first
    /// positive node are rejected.
    pub fn snaps(&self, grid: &TimeGrid<T>) -> Result<Vec<Snap<T>>> {
        self.check_grid(grid)?;
        let Some((_, t)) = self.nonlocal.points() else {
            return Ok(Vec::new());
        };
        t.iter()
            .map(|&ti| {
                if ti < grid.step() {
                    return Err(invalid(
                        "t_points",
                        ti,
                        "must not lie below the first positive grid node",
                    ));
                }
                let (node, distance) = grid.nearest(ti);
                Ok(Snap {
                    requested: ti,
                    node,
                    distance,
                })
            })
            .collect()
    }

    /// `b = Σ aᵢ tᵢ^{α-1}` at the snapped nodes; 0 without time points.
    pub fn nonlocal_lipschitz(&self, grid: &TimeGrid<T>) -> Result<T> {
        let Some((a, _)) = self.nonlocal.points() else {
            return Ok(T::zero());
        };
        let snaps = self.snaps(grid)?;
        Ok(a.iter().zip(&snaps).fold(T::zero(), |acc, (&ai, s)| {
            acc + ai * grid.node(s.node).powf(self.alpha - T::one())
        }))
    }

    fn check_grid(&self, grid: &TimeGrid<T>) -> Result<()> {
        if (grid.t_end() - self.t_end).abs() > c::<T>(1e-12) * self.t_end {
            return Err(invalid(
                "T",
                grid.t_end(),
                "grid horizon differs from the problem horizon",
            ));
        }
        Ok(())
    }
}

/// Evaluation of `g(u)` and of the projected forcing at the grid nodes.
#[derive(Debug, Clone)]
struct Nonlinearity<T> {
    spec: ProblemSpec<T>,
    grid: TimeGrid<T>,
    colloc: Collocation<T>,
    snaps: Vec<Snap<T>>,
    /// Projection of the constant forcing.
    constant: Option<Vec<T>>,
}

impl<T: Real> Nonlinearity<T> {
    fn new(spec: &ProblemSpec<T>, grid: &TimeGrid<T>) -> Result<Self> {
        let snaps = spec.snaps(grid)?;
        let colloc = Collocation::new(spec.basis, spec.n_modes());
        let constant = match spec.forcing {
            Forcing::Constant(v) => {
                let n = match spec.basis {
                    Basis::Sine { points } => points,
                    Basis::Diagonal => spec.n_modes(),
                };
                Some(colloc.project(&vec![v; n]))
            }
            _ => None,
        };
        Ok(Self {
            spec: spec.clone(),
            grid: *grid,
            colloc,
            snaps,
            constant,
        })
    }

    fn check(&self, u: &WeightedTrajectory<T>) -> Result<()> {
        if u.grid() != &self.grid {
            return Err(Error::Dimension(
                "trajectory grid differs from the solver grid".into(),
            ));
        }
        if u.modes() != self.spec.n_modes() {
            return Err(Error::Dimension(format!(
                "trajectory has {} modes, problem has {}",
                u.modes(),
                self.spec.n_modes()
            )));
        }
        if (u.alpha() - self.spec.alpha).abs() > T::epsilon() {
            return Err(invalid(
                "alpha",
                u.alpha(),
                "trajectory weight differs from the problem order",
            ));
        }
        Ok(())
    }

    fn g(&self, u: &WeightedTrajectory<T>) -> StateVector<T> {
        let modes = self.spec.n_modes();
        let am1 = self.spec.alpha - T::one();
        match &self.spec.nonlocal {
            Nonlocal::Zero => StateVector::zeros(modes),
            Nonlocal::Constant(g) => g.clone(),
            Nonlocal::Linear { a, .. } => {
                let mut acc = StateVector::zeros(modes);
                for (&ai, s) in a.iter().zip(&self.snaps) {
                    acc.axpy(ai * self.grid.node(s.node).powf(am1), &u.values()[s.node]);
                }
                acc
            }
            Nonlocal::Saturated { a, .. } => {
                let fields: Vec<(T, Vec<T>)> = a
                    .iter()
                    .zip(&self.snaps)
                    .map(|(&ai, s)| {
                        let scale = self.grid.node(s.node).powf(am1);
                        (
                            ai,
                            self.colloc
                                .synthesize(u.values()[s.node].scaled(scale).coeffs()),
                        )
                    })
                    .collect();
                let n = fields.first().map_or(0, |f| f.1.len());
                let values: Vec<T> = (0..n)
                    .map(|m| saturate(fields.iter().map(|(ai, v)| (*ai, v[m]))))
                    .collect();
                StateVector::from_vec_unchecked(self.colloc.project(&values))
            }
        }
    }

    /// `f̂(t_j)` for every node, or `None` when `f ≡ 0`.
    fn forcing(&self, u: &WeightedTrajectory<T>) -> Result<Option<Vec<Vec<T>>>> {
        let steps = self.grid.steps();
        match &self.spec.forcing {
            Forcing::Zero => Ok(None),
            Forcing::Constant(_) => {
                let v = self.constant.clone().unwrap_or_default();
                Ok(Some(vec![v; steps + 1]))
            }
            Forcing::Saturated { mu1, mu2 } => {
                let ku = kernel_apply_raw(u, &self.spec.kernel)?;
                let mut out = Vec::with_capacity(steps + 1);
                for (j, (w, k)) in u.values().iter().zip(&ku).enumerate() {
                    let wp = self.colloc.synthesize(w.coeffs());
                    let kp = self.colloc.synthesize(k.coeffs());
                    let t = self.grid.node(j);
                    let fp: Vec<T> = wp
                        .iter()
                        .zip(&kp)
                        .map(|(&a, &b)| example_f(t, a, b, *mu1, *mu2))
                        .collect();
                    let fh = self.colloc.project(&fp);
                    if fh.iter().any(|v| !v.is_finite()) {
                        return Err(Error::NonFiniteForcing { node: j });
                    }
                    out.push(fh);
                }
                Ok(Some(out))
            }
        }
    }
}

/// The fixed-point map `𝒩` on one grid, with its weight tables.
#[derive(Debug, Clone)]
pub struct MildOperator<T> {
    nl: Nonlinearity<T>,
    /// `e[n][j] = E_{α,α}(λ_n t_j^α)`.
    e: Vec<Vec<T>>,
    /// Convolution weights by lag `k = j - m`: `left[n][k]` multiplies
    /// `f̂_n(t_m)`, `right[n][k]` multiplies `f̂_n(t_{m+1})`.
    left: Vec<Vec<T>>,
    right: Vec<Vec<T>>,
}

impl<T: Real> MildOperator<T> {
    pub fn new(spec: &ProblemSpec<T>, grid: &TimeGrid<T>) -> Result<Self> {
        let nl = Nonlinearity::new(spec, grid)?;
        let alpha = spec.alpha;
        let one = T::one();
        let steps = grid.steps();
        let h = grid.step();
        let nodes = grid.nodes();
        let mut e = Vec::with_capacity(spec.n_modes());
        let mut left = Vec::with_capacity(spec.n_modes());
        let mut right = Vec::with_capacity(spec.n_modes());
        for &l in spec.operator.eigenvalues() {
            let mut en = Vec::with_capacity(steps + 1);
            let mut q0 = Vec::with_capacity(steps + 1);
            let mut q1 = Vec::with_capacity(steps + 1);
            for &t in &nodes {
                let ta = t.powf(alpha);
                let z = l * ta;
                en.push(ml(alpha, alpha, z)?);
                let e1 = ml(alpha, alpha + one, z)?;
                let e2 = ml(alpha, alpha + one + one, z)?;
                q0.push(ta * e1);
                q1.push(ta * t * (e1 - e2));
            }
            let mut ln = vec![T::zero(); steps + 1];
            let mut rn = vec![T::zero(); steps + 1];
            for k in 1..=steps {
                let (a, b) = (nodes[k], nodes[k - 1]);
                let d0 = q0[k] - q0[k - 1];
                let d1 = q1[k] - q1[k - 1];
                ln[k] = (d1 - b * d0) / h;
                rn[k] = (a * d0 - d1) / h;
            }
            e.push(en);
            left.push(ln);
            right.push(rn);
        }
        Ok(Self { nl, e, left, right })
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.nl.grid
    }

    pub fn spec(&self) -> &ProblemSpec<T> {
        &self.nl.spec
    }

    pub fn snaps(&self) -> &[Snap<T>] {
        &self.nl.snaps
    }

    /// `g(u)` in coefficients.
    pub fn nonlocal(&self, u: &WeightedTrajectory<T>) -> Result<StateVector<T>> {
        self.nl.check(u)?;
        Ok(self.nl.g(u))
    }

    /// `S(·)y` in weighted form; node 0 holds `y/Γ(α)`.
    pub fn free_response(&self, y: &StateVector<T>) -> WeightedTrajectory<T> {
        let grid = self.nl.grid;
        let rg = recip_gamma(self.nl.spec.alpha);
        let values = (0..=grid.steps())
            .map(|j| {
                let v = if j == 0 {
                    y.coeffs().iter().map(|&x| x * rg).collect()
                } else {
                    y.coeffs()
                        .iter()
                        .zip(&self.e)
                        .map(|(&x, en)| en[j] * x)
                        .collect()
                };
                StateVector::from_vec_unchecked(v)
            })
            .collect();
        WeightedTrajectory::from_parts_unchecked(grid, self.nl.spec.alpha, values)
    }

    /// `𝒩u`.
    pub fn apply(&self, u: &WeightedTrajectory<T>) -> Result<WeightedTrajectory<T>> {
        self.nl.check(u)?;
        let spec = &self.nl.spec;
        let grid = self.nl.grid;
        let g = self.nl.g(u);
        let d = &spec.x0 - &g;
        let mut out = self.free_response(&d);
        if let Some(f) = self.nl.forcing(u)? {
            let e = T::one() - spec.alpha;
            let mut values = out.into_values();
            for (j, slot) in values.iter_mut().enumerate().skip(1) {
                let tw = grid.node(j).powf(e);
                for n in 0..spec.n_modes() {
                    let (ln, rn) = (&self.left[n], &self.right[n]);
                    let mut acc = T::zero();
                    for m in 0..j {
                        acc = acc + ln[j - m] * f[m][n] + rn[j - m] * f[m + 1][n];
                    }
                    slot[n] = slot[n] + tw * acc;
                }
            }
            out = WeightedTrajectory::from_parts_unchecked(grid, spec.alpha, values);
        }
        if let Some(j) = out.values().iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteForcing { node: j });
        }
        Ok(out)
    }
}

/// `𝒩u` on the grid of `u`.
pub fn fixed_point_map<T: Real>(
    spec: &ProblemSpec<T>,
    u: &WeightedTrajectory<T>,
) -> Result<WeightedTrajectory<T>> {
    MildOperator::new(spec, u.grid())?.apply(u)
}

/// `g(u)` for a problem.
pub fn nonlocal_value<T: Real>(
    spec: &ProblemSpec<T>,
    u: &WeightedTrajectory<T>,
) -> Result<StateVector<T>> {
    let nl = Nonlinearity::new(spec, u.grid())?;
    nl.check(u)?;
    Ok(nl.g(u))
}

/// Picard iteration history.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<T> {
    pub iterations: usize,
    /// `‖u_{k+1} - u_k‖_*` for `k = 0, 1, ...`.
    pub deltas: Vec<T>,
    /// `deltas[k] / deltas[k-1]` where the previous delta is positive.
    pub ratios: Vec<Option<T>>,
    pub converged: bool,
    /// Largest ratio from the third iteration on.
    pub omega_observed: Option<T>,
}

impl<T: Real> ConvergenceReport<T> {
    fn new() -> Self {
        Self {
            iterations: 0,
            deltas: Vec::new(),
            ratios: Vec::new(),
            converged: false,
            omega_observed: None,
        }
    }

    fn push(&mut self, delta: T) {
        let ratio = match self.deltas.last() {
            Some(&p) if p > T::zero() => Some(delta / p),
            _ => None,
        };
        self.deltas.push(delta);
        self.ratios.push(ratio);
        self.iterations = self.deltas.len();
        if self.iterations >= 3 {
            if let Some(r) = ratio {
                self.omega_observed = Some(self.omega_observed.map_or(r, |o: T| o.max(r)));
            }
        }
    }

    /// Ratios from the third iteration on.
    pub fn late_ratios(&self) -> impl Iterator<Item = T> + '_ {
        self.ratios.iter().skip(2).filter_map(|r| *r)
    }

    /// Three consecutive increases adding up to more than a factor 10, or a
    /// non-finite delta.
    fn diverging(&self) -> bool {
        let d = &self.deltas;
        match d.last() {
            Some(v) if !v.is_finite() => return true,
            None => return false,
            _ => {}
        }
        if d.len() < 4 {
            return false;
        }
        let k = d.len() - 1;
        d[k] > d[k - 1]
            && d[k - 1] > d[k - 2]
            && d[k - 2] > d[k - 3]
            && d[k] > c::<T>(10.0) * d[k - 3]
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError<T: Debug> {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("Picard iteration diverged after {} iterations", .0.iterations)]
    Diverged(ConvergenceReport<T>),
}

/// Iterates `u_{k+1} = 𝒩u_k` from `u_0 = S(·)x` until `‖u_{k+1} - u_k‖_* <= tol`.
pub fn picard_solve<T: Real>(
    spec: &ProblemSpec<T>,
    grid: &TimeGrid<T>,
    tol: T,
    max_iter: usize,
) -> Result<(WeightedTrajectory<T>, ConvergenceReport<T>), SolveError<T>> {
    if !(tol > T::zero()) {
        return Err(invalid("tol", tol, "must be positive").into());
    }
    if max_iter == 0 {
        return Err(invalid("max_iter", T::zero(), "must be at least 1").into());
    }
    let op = MildOperator::new(spec, grid)?;
    picard_with(&op, tol, max_iter)
}

/// [`picard_solve`] with a prepared operator.
pub fn picard_with<T: Real>(
    op: &MildOperator<T>,
    tol: T,
    max_iter: usize,
) -> Result<(WeightedTrajectory<T>, ConvergenceReport<T>), SolveError<T>> {
    let mut u = op.free_response(op.spec().x0());
    let mut report = ConvergenceReport::new();
    for _ in 0..max_iter {
        let next = match op.apply(&u) {
            Ok(v) => v,
            Err(Error::NonFiniteForcing { .. }) if report.iterations > 0 => {
                report.push(T::infinity());
                return Err(SolveError::Diverged(report));
            }
            Err(e) => return Err(e.into()),
        };
        let delta = weighted_sup_norm(&next.difference(&u)?);
        report.push(delta);
        u = next;
        if report.diverging() {
            return Err(SolveError::Diverged(report));
        }
        if delta <= tol {
            report.converged = true;
            break;
        }
    }
    Ok((u, report))
}

/// Degree of the interpolant of `w` used for `J^α u` in [`mild_residual`].
pub const RESIDUAL_DEGREE: usize = 4;

/// `max_{j >= 2} ‖w_j - (x - g(u))/Γ(α) - t_j^{1-α}[A J^α u + J^α f](t_j)‖`.
pub fn mild_residual<T: Real>(spec: &ProblemSpec<T>, u: &WeightedTrajectory<T>) -> Result<T> {
    let grid = *u.grid();
    let nl = Nonlinearity::new(spec, &grid)?;
    nl.check(u)?;
    let alpha = spec.alpha;
    let degree = RESIDUAL_DEGREE.min(grid.steps());
    let rule_u = ProductRule::new(grid, alpha, alpha, Interpolation::PowerLagrange { degree })?;
    let ju = rule_u.integrate_raw(u);
    let jf = match nl.forcing(u)? {
        Some(f) => {
            let values = f.into_iter().map(StateVector::from_vec_unchecked).collect();
            let ft = WeightedTrajectory::from_parts_unchecked(grid, T::one(), values);
            Some(
                ProductRule::new(grid, T::one(), alpha, Interpolation::PiecewiseLinear)?
                    .integrate_raw(&ft),
            )
        }
        None => None,
    };
    let d = (&spec.x0 - &nl.g(u)).scaled(recip_gamma(alpha));
    let e = T::one() - alpha;
    let mut worst = T::zero();
    for j in 2..=grid.steps() {
        let tw = grid.node(j).powf(e);
        let mut rhs = &d + &spec.operator.apply(&ju[j]).scaled(tw);
        if let Some(jf) = &jf {
            rhs.axpy(tw, &jf[j]);
        }
        worst = worst.max((&u.values()[j] - &rhs).norm());
    }
    Ok(worst)
}
