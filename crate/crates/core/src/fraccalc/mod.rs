//! Riemann-Liouville calculus on uniform time grids.
//!
//! Trajectories are stored in weighted form `w(t) = t^{1-α} u(t)`, which
//! stays bounded at `t = 0` for solutions of Riemann-Liouville problems.
//! Integrals are computed by product integration: the singular factors
//! `s^{α-1}` and `(t-s)^{β-1}` are integrated exactly against a polynomial
//! interpolant of `w`.

mod product;

pub use product::{Interpolation, ProductRule};

use crate::error::{invalid, Error, Result};
use crate::scalar::{c, cu, f64_of, Real};
use crate::spectral::StateVector;

/// Uniform grid `t_j = j T / J`, `j = 0..=J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    t_end: T,
    steps: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_end: T, steps: usize) -> Result<Self> {
        if !(t_end > T::zero()) || !t_end.is_finite() {
            return Err(invalid("T", t_end, "must be positive and finite"));
        }
        if steps < 2 {
            return Err(invalid("J", cu::<T>(steps), "needs at least 2 steps"));
        }
        Ok(Self { t_end, steps })
    }

    /// Horizon `T`.
    pub fn t_end(&self) -> T {
        self.t_end
    }

    /// Number of steps `J`; there are `J + 1` nodes.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step(&self) -> T {
        self.t_end / cu(self.steps)
    }

    pub fn node(&self, j: usize) -> T {
        if j == self.steps {
            self.t_end
        } else {
            self.t_end * cu::<T>(j) / cu::<T>(self.steps)
        }
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..=self.steps).map(|j| self.node(j)).collect()
    }

    /// Index of the node nearest to `t`, with the snap distance.
    pub fn nearest(&self, t: T) -> (usize, T) {
        let x = (t / self.step()).round();
        let j = x.to_usize().unwrap_or(0).min(self.steps);
        (j, (self.node(j) - t).abs())
    }
}

/// Node samples of `w(t) = t^{1-α} u(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTrajectory<T> {
    grid: TimeGrid<T>,
    alpha: T,
    values: Vec<StateVector<T>>,
}

impl<T: Real> WeightedTrajectory<T> {
    pub fn new(grid: TimeGrid<T>, alpha: T, values: Vec<StateVector<T>>) -> Result<Self> {
        check_order("alpha", alpha)?;
        if values.len() != grid.steps() + 1 {
            return Err(Error::Dimension(format!(
                "trajectory has {} samples, grid has {} nodes",
                values.len(),
                grid.steps() + 1
            )));
        }
        let dim = values[0].len();
        for (j, v) in values.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::Dimension(format!(
                    "sample {j} has {} modes, expected {dim}",
                    v.len()
                )));
            }
            if !v.is_finite() {
                return Err(Error::NonFiniteForcing { node: j });
            }
        }
        Ok(Self {
            grid,
            alpha,
            values,
        })
    }

    pub(crate) fn from_parts_unchecked(
        grid: TimeGrid<T>,
        alpha: T,
        values: Vec<StateVector<T>>,
    ) -> Self {
        Self {
            grid,
            alpha,
            values,
        }
    }

    /// Samples `w(t_j)` from a closed form.
    pub fn from_fn<F: FnMut(T) -> StateVector<T>>(
        grid: TimeGrid<T>,
        alpha: T,
        mut w: F,
    ) -> Result<Self> {
        let values = grid.nodes().into_iter().map(&mut w).collect();
        Self::new(grid, alpha, values)
    }

    /// Scalar trajectory from samples of `w`.
    pub fn scalar(grid: TimeGrid<T>, alpha: T, w: &[T]) -> Result<Self> {
        let values = w
            .iter()
            .map(|&v| StateVector::from_vec_unchecked(vec![v]))
            .collect();
        Self::new(grid, alpha, values)
    }

    /// Scalar trajectory sampling `u` itself (`w = t^{1-α} u`); `w(0)` is
    /// taken as `u(0)` when `α = 1` and must be supplied by `w0` otherwise.
    pub fn scalar_from_u<F: Fn(T) -> T>(grid: TimeGrid<T>, alpha: T, w0: T, u: F) -> Result<Self> {
        let w: Vec<T> = grid
            .nodes()
            .into_iter()
            .enumerate()
            .map(|(j, t)| {
                if j == 0 {
                    w0
                } else {
                    t.powf(T::one() - alpha) * u(t)
                }
            })
            .collect();
        Self::scalar(grid, alpha, &w)
    }

    pub fn zeros(grid: TimeGrid<T>, alpha: T, modes: usize) -> Result<Self> {
        Self::new(
            grid,
            alpha,
            vec![StateVector::zeros(modes); grid.steps() + 1],
        )
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn values(&self) -> &[StateVector<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<StateVector<T>> {
        self.values
    }

    pub fn modes(&self) -> usize {
        self.values[0].len()
    }

    /// Coefficient `n` across all nodes.
    pub fn mode(&self, n: usize) -> Vec<T> {
        self.values.iter().map(|v| v[n]).collect()
    }

    /// `u(t_j) = t_j^{α-1} w_j` for `j >= 1`.
    pub fn u_at(&self, j: usize) -> StateVector<T> {
        let t = self.grid.node(j);
        self.values[j].scaled(t.powf(self.alpha - T::one()))
    }

    /// Pointwise difference of two trajectories on the same grid.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid || self.modes() != other.modes() {
            return Err(Error::Dimension(
                "trajectories live on different grids".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self::from_parts_unchecked(self.grid, self.alpha, values))
    }
}

/// Weighted sup-norm `max_j ‖w_j‖`.
pub fn weighted_sup_norm<T: Real>(u: &WeightedTrajectory<T>) -> T {
    u.values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
}

pub(crate) fn check_order<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v > T::zero() && v <= T::one() {
        Ok(())
    } else {
        Err(invalid(name, v, "must lie in (0, 1]"))
    }
}

/// Weights `ω_{j,i}` with `Σ_i ω_{j,i} φ(t_i) = ∫_0^{t_j} (t_j - s)^{α-1} φ(s) ds`
/// for every piecewise-linear `φ`. No `1/Γ(α)` factor is included.
pub fn singular_conv_weights<T: Real>(grid: &TimeGrid<T>, alpha: T, j: usize) -> Result<Vec<T>> {
    check_order("alpha", alpha)?;
    if j > grid.steps() {
        return Err(Error::Dimension(format!(
            "node {j} outside grid of {} steps",
            grid.steps()
        )));
    }
    let mut w = vec![T::zero(); j + 1];
    if j == 0 {
        return Ok(w);
    }
    let h = grid.step();
    let tj = grid.node(j);
    let a1 = alpha + T::one();
    for i in 0..j {
        let a = tj - grid.node(i);
        let b = tj - grid.node(i + 1);
        let m0 = (a.powf(alpha) - b.powf(alpha)) / alpha;
        let m1 = (a.powf(a1) - b.powf(a1)) / a1;
        w[i] = w[i] + (m1 - b * m0) / h;
        w[i + 1] = w[i + 1] + (a * m0 - m1) / h;
    }
    Ok(w)
}

/// `J^order u`, returned in the weighted representation of `u`.
pub fn frac_integral<T: Real>(
    u: &WeightedTrajectory<T>,
    order: T,
) -> Result<WeightedTrajectory<T>> {
    let rule = ProductRule::new(*u.grid(), u.alpha(), order, Interpolation::PiecewiseLinear)?;
    Ok(rule.apply(u))
}

/// Riemann-Liouville derivative `D^order u = d/dt J^{1-order} u`, returned in
/// the weighted representation of `u`.
///
/// Differencing uses second-order one-sided stencils: forward at nodes 1 and
/// 2, backward from node 3 on, so node 0 of `J^{1-order} u` is never used.
/// The weighted value at node 0 is extrapolated linearly.
pub fn frac_derivative<T: Real>(
    u: &WeightedTrajectory<T>,
    order: T,
) -> Result<WeightedTrajectory<T>> {
    if !(order > T::zero() && order < T::one()) {
        return Err(invalid("order", order, "must lie in (0, 1)"));
    }
    let grid = *u.grid();
    let steps = grid.steps();
    if steps < 4 {
        return Err(Error::Dimension(
            "derivative stencils need at least 4 steps".into(),
        ));
    }
    let rule = ProductRule::new(
        grid,
        u.alpha(),
        T::one() - order,
        Interpolation::PiecewiseLinear,
    )?;
    let v = rule.integrate_raw(u);
    let h2 = grid.step() * c(2.0);
    let (three, four) = (c::<T>(3.0), c::<T>(4.0));
    let one_minus_alpha = T::one() - u.alpha();
    let mut out = vec![StateVector::zeros(u.modes()); steps + 1];
    for j in 1..=steps {
        let mut d = StateVector::zeros(u.modes());
        for n in 0..u.modes() {
            d[n] = if j >= 3 {
                (three * v[j][n] - four * v[j - 1][n] + v[j - 2][n]) / h2
            } else {
                (-three * v[j][n] + four * v[j + 1][n] - v[j + 2][n]) / h2
            };
        }
        out[j] = d.scaled(grid.node(j).powf(one_minus_alpha));
    }
    let mut w0 = out[1].scaled(c(2.0));
    w0.axpy(-T::one(), &out[2]);
    out[0] = w0;
    WeightedTrajectory::new(grid, u.alpha(), out)
}

/// Memory kernel `r(t, s)` of the Volterra operator `(Ku)(t) = ∫_0^t r(t,s) u(s) ds`.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelKind<T> {
    /// `r ≡ c`.
    Constant(T),
    /// `r(t, s) = e^{t-s}`.
    Exponential,
    /// Node table: `table[j][i] = r(t_j, t_i)` for `i <= j`.
    Tabulated(Vec<Vec<T>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolterraKernel<T> {
    pub kind: KernelKind<T>,
    /// Known `max |r|` on the triangle, if any.
    pub bound_hint: Option<T>,
}

impl<T: Real> VolterraKernel<T> {
    pub fn constant(v: T) -> Self {
        Self {
            kind: KernelKind::Constant(v),
            bound_hint: Some(v.abs()),
        }
    }

    pub fn exponential() -> Self {
        Self {
            kind: KernelKind::Exponential,
            bound_hint: None,
        }
    }

    pub fn tabulated(table: Vec<Vec<T>>) -> Self {
        Self {
            kind: KernelKind::Tabulated(table),
            bound_hint: None,
        }
    }

    /// `r(t_j, t_i)`.
    pub fn at_nodes(&self, grid: &TimeGrid<T>, j: usize, i: usize) -> Result<T> {
        let v = match &self.kind {
            KernelKind::Constant(v) => *v,
            KernelKind::Exponential => (grid.step() * cu::<T>(j - i)).exp(),
            KernelKind::Tabulated(table) => {
                let row = table
                    .get(j)
                    .ok_or_else(|| Error::Dimension(format!("kernel table lacks row {j}")))?;
                *row.get(i).ok_or_else(|| {
                    Error::Dimension(format!("kernel table row {j} lacks column {i}"))
                })?
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteKernel {
                t: f64_of(grid.node(j)),
                s: f64_of(grid.node(i)),
            })
        }
    }

    /// `N = max_{0 <= s <= t <= T} |r(t, s)|`, over the grid triangle.
    pub fn sup_bound(&self, grid: &TimeGrid<T>) -> Result<T> {
        match &self.kind {
            KernelKind::Constant(v) => Ok(v.abs()),
            KernelKind::Exponential => Ok(grid.t_end().exp()),
            KernelKind::Tabulated(_) => {
                let mut m = T::zero();
                for j in 0..=grid.steps() {
                    for i in 0..=j {
                        m = m.max(self.at_nodes(grid, j, i)?.abs());
                    }
                }
                Ok(m)
            }
        }
    }
}

/// Per-cell weights of `∫ s^{α-1} φ(s) ds` for linear `φ` on each cell:
/// `(left[i], right[i])` multiply `φ(t_i)` and `φ(t_{i+1})`.
pub(crate) fn memory_cell_weights<T: Real>(grid: &TimeGrid<T>, alpha: T) -> (Vec<T>, Vec<T>) {
    let h = grid.step();
    let a1 = alpha + T::one();
    let steps = grid.steps();
    let mut left = vec![T::zero(); steps];
    let mut right = vec![T::zero(); steps];
    for i in 0..steps {
        let (a, b) = (grid.node(i), grid.node(i + 1));
        let mu0 = (b.powf(alpha) - a.powf(alpha)) / alpha;
        let mu1 = (b.powf(a1) - a.powf(a1)) / a1 - a * mu0;
        left[i] = mu0 - mu1 / h;
        right[i] = mu1 / h;
    }
    (left, right)
}

/// Raw node values `(Ku)(t_j)` (not weighted).
pub fn kernel_apply_raw<T: Real>(
    u: &WeightedTrajectory<T>,
    r: &VolterraKernel<T>,
) -> Result<Vec<StateVector<T>>> {
    let grid = *u.grid();
    let steps = grid.steps();
    let (left, right) = memory_cell_weights(&grid, u.alpha());
    let modes = u.modes();
    let mut out = vec![StateVector::zeros(modes); steps + 1];
    if let KernelKind::Constant(v) = r.kind {
        if v == T::zero() {
            return Ok(out);
        }
    }
    // Node weights for target j: Σ_i coef_i r(t_j, t_i) w_i.
    for (j, slot) in out.iter_mut().enumerate().skip(1) {
        let mut acc = StateVector::zeros(modes);
        for i in 0..=j {
            let mut coef = T::zero();
            if i < j {
                coef = coef + left[i];
            }
            if i > 0 {
                coef = coef + right[i - 1];
            }
            let rv = r.at_nodes(&grid, j, i)?;
            acc.axpy(coef * rv, &u.values()[i]);
        }
        *slot = acc;
    }
    Ok(out)
}

/// `Ku` in the weighted representation of `u`.
pub fn kernel_apply<T: Real>(
    u: &WeightedTrajectory<T>,
    r: &VolterraKernel<T>,
) -> Result<WeightedTrajectory<T>> {
    let grid = *u.grid();
    let raw = kernel_apply_raw(u, r)?;
    let e = T::one() - u.alpha();
    let values = raw
        .into_iter()
        .enumerate()
        .map(|(j, v)| {
            if j == 0 {
                v
            } else {
                v.scaled(grid.node(j).powf(e))
            }
        })
        .collect();
    WeightedTrajectory::new(grid, u.alpha(), values)
}
