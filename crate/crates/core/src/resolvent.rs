//! Spectral fractional resolvent `(S(t)x)_n = t^{α-1} E_{α,α}(λ_n t^α) x_n`
//! and numerical checks of its defining identities.
//!
//! With `S` in weighted form, `ê_n(t) = t^{1-α} S(t)_n = E_{α,α}(λ_n t^α)` is
//! bounded, and the identities are verified on `ê` and on
//! `Î_n(t) = t^{1-α} J^α[S(·)_n](t)`:
//! * limit: `Γ(α) ê_n(t) → 1` as `t → 0`;
//! * commutativity of `S(t)` and `S(s)`;
//! * `ê(t) Î(s) - Î(t) ê(s) = (Î(s) - Î(t)) / Γ(α)`;
//! * `ê(t) = 1/Γ(α) + λ Î(t)`, with `J^α` applied before or after `A`.

use crate::error::{invalid, Error, Result};
use crate::fraccalc::{check_order, Interpolation, ProductRule, TimeGrid};
use crate::mlf::ml;
use crate::scalar::{c, Real};
use crate::special::{gamma, recip_gamma};
use crate::spectral::{SpectralOperator, StateVector};

/// Time prefactor of the spectral multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prefactor {
    /// `t^{α-1}`: the fractional resolvent.
    Standard,
    /// `t^{1-α}`: a deliberately wrong family, used to check that the axiom
    /// checks can fail.
    Mutated,
}

/// `S(t)` for a diagonal generator.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalResolvent<T> {
    op: SpectralOperator<T>,
    alpha: T,
    prefactor: Prefactor,
}

impl<T: Real> FractionalResolvent<T> {
    pub fn new(op: SpectralOperator<T>, alpha: T) -> Result<Self> {
        Self::with_prefactor(op, alpha, Prefactor::Standard)
    }

    pub fn with_prefactor(op: SpectralOperator<T>, alpha: T, prefactor: Prefactor) -> Result<Self> {
        check_order("alpha", alpha)?;
        Ok(Self {
            op,
            alpha,
            prefactor,
        })
    }

    pub fn operator(&self) -> &SpectralOperator<T> {
        &self.op
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn prefactor(&self) -> Prefactor {
        self.prefactor
    }

    /// `t^{1-α} S(t)` restricted to eigenvalue `lambda`; at `t = 0` the
    /// continuous extension.
    pub fn weighted_multiplier(&self, lambda: T, t: T) -> Result<T> {
        let one = T::one();
        let e = ml(self.alpha, self.alpha, lambda * t.powf(self.alpha))?;
        Ok(match self.prefactor {
            Prefactor::Standard => e,
            Prefactor::Mutated => {
                let p = (one - self.alpha) * c(2.0);
                if p == T::zero() {
                    e
                } else {
                    t.powf(p) * e
                }
            }
        })
    }

    /// Diagonal of `S(t)`.
    pub fn multipliers(&self, t: T) -> Result<Vec<T>> {
        if !(t > T::zero()) {
            return Err(invalid("t", t, "resolvent is defined for t > 0"));
        }
        let pre = t.powf(self.alpha - T::one());
        self.op
            .eigenvalues()
            .iter()
            .map(|&l| Ok(pre * self.weighted_multiplier(l, t)?))
            .collect()
    }

    /// `S(t) x`.
    pub fn apply(&self, t: T, x: &StateVector<T>) -> Result<StateVector<T>> {
        if x.len() != self.op.n_modes() {
            return Err(Error::Dimension(format!(
                "state has {} modes, operator has {}",
                x.len(),
                self.op.n_modes()
            )));
        }
        let d = self.multipliers(t)?;
        StateVector::new(x.coeffs().iter().zip(&d).map(|(&a, &b)| a * b).collect())
    }

    /// `S(t) S(s) x`, formed as one diagonal product so that swapping `t`
    /// and `s` gives bit-identical output.
    pub fn compose(&self, t: T, s: T, x: &StateVector<T>) -> Result<StateVector<T>> {
        let a = self.multipliers(t)?;
        let b = self.multipliers(s)?;
        let d: Vec<T> = a.iter().zip(&b).map(|(&p, &q)| p * q).collect();
        if x.len() != d.len() {
            return Err(Error::Dimension(format!(
                "state has {} modes, operator has {}",
                x.len(),
                d.len()
            )));
        }
        StateVector::new(x.coeffs().iter().zip(&d).map(|(&v, &m)| v * m).collect())
    }

    /// `M = max_t ‖t^{1-α} S(t)‖` over the grid nodes, including the
    /// continuous extension at `t = 0`.
    pub fn norm_bound(&self, grid: &TimeGrid<T>) -> Result<T> {
        let mut m = T::zero();
        for t in grid.nodes() {
            for &l in self.op.eigenvalues() {
                m = m.max(self.weighted_multiplier(l, t)?.abs());
            }
        }
        Ok(m)
    }

    /// `max_t |t^{1-α} S(t)|` over the first mode dropped by the spectral
    /// truncation, at the first positive node; `None` if the eigenvalue
    /// family is unknown.
    pub fn tail_estimate(&self, grid: &TimeGrid<T>) -> Result<Option<T>> {
        match self.op.first_neglected_eigenvalue() {
            Some(l) => Ok(Some(self.weighted_multiplier(l, grid.node(1))?.abs())),
            None => Ok(None),
        }
    }

    pub fn verify_axioms(&self, grid: &TimeGrid<T>, tol: T) -> Result<AxiomReport<T>> {
        verify(self, grid, tol)
    }
}

/// `S(t) x`.
pub fn resolvent_apply<T: Real>(
    r: &FractionalResolvent<T>,
    t: T,
    x: &StateVector<T>,
) -> Result<StateVector<T>> {
    r.apply(t, x)
}

/// `M = max_t ‖t^{1-α} S(t)‖` on the grid.
pub fn resolvent_norm_bound<T: Real>(r: &FractionalResolvent<T>, grid: &TimeGrid<T>) -> Result<T> {
    r.norm_bound(grid)
}

/// Numerical verification of the resolvent identities.
pub fn verify_resolvent_axioms<T: Real>(
    r: &FractionalResolvent<T>,
    grid: &TimeGrid<T>,
    tol: T,
) -> Result<AxiomReport<T>> {
    verify(r, grid, tol)
}

/// Outcome of one identity check: residual and admissible bound of the
/// comparison with the largest residual-to-bound ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomCheck<T> {
    pub residual: T,
    pub bound: T,
    pub passed: bool,
}

impl<T: Real> AxiomCheck<T> {
    fn new() -> Self {
        Self {
            residual: T::zero(),
            bound: T::zero(),
            passed: true,
        }
    }

    fn record(&mut self, residual: T, bound: T, worst_ratio: &mut T) {
        self.passed &= residual <= bound;
        let ratio = if bound > T::zero() {
            residual / bound
        } else if residual > T::zero() {
            T::infinity()
        } else {
            T::zero()
        };
        if ratio > *worst_ratio || *worst_ratio == -T::one() {
            *worst_ratio = ratio;
            self.residual = residual;
            self.bound = bound;
        }
    }
}

/// One limit probe at time `t`, reporting the mode closest to its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitProbe<T> {
    pub t: T,
    pub residual: T,
    pub bound: T,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport<T> {
    pub alpha: T,
    pub modes: usize,
    pub prefactor: Prefactor,
    /// Limit `Γ(α) t^{1-α} S(t) → I`, per probe time.
    pub limit: Vec<LimitProbe<T>>,
    pub p1: AxiomCheck<T>,
    pub p2: AxiomCheck<T>,
    pub p3: AxiomCheck<T>,
    pub c1: AxiomCheck<T>,
    pub c2: AxiomCheck<T>,
    pub tail_estimate: Option<T>,
}

impl<T: Real> AxiomReport<T> {
    pub fn all_passed(&self) -> bool {
        self.p1.passed && self.p2.passed && self.p3.passed && self.c1.passed && self.c2.passed
    }
}

/// Probe times for the limit check, besides the first positive node.
pub const LIMIT_PROBES: [f64; 2] = [1e-6, 1e-8];
/// Safety factor applied to the propagated product-integration bound.
pub const BOUND_FACTOR: f64 = 5.0;
/// Fractions of a cell where the interpolation defect is sampled.
const DEFECT_PROBES: [f64; 5] = [0.125, 0.25, 0.5, 0.75, 0.875];

fn verify<T: Real>(
    r: &FractionalResolvent<T>,
    grid: &TimeGrid<T>,
    tol: T,
) -> Result<AxiomReport<T>> {
    if !(tol > T::zero()) {
        return Err(invalid("tol", tol, "must be positive"));
    }
    let alpha = r.alpha;
    let ga = gamma(alpha);
    let rg = recip_gamma(alpha);
    let steps = grid.steps();
    let first_order = c::<T>(2.0) * ga * recip_gamma(alpha + alpha);
    let roundoff = c::<T>(64.0) * T::epsilon();

    // Limit (P1): per-mode bound 2Γ(α)/Γ(2α) |λ_n| t^α.
    let mut limit = Vec::new();
    let mut p1 = AxiomCheck::new();
    let mut p1_worst = -T::one();
    let mut times = vec![grid.node(1)];
    times.extend(
        LIMIT_PROBES
            .iter()
            .map(|&t| c::<T>(t))
            .filter(|&t| t <= grid.t_end()),
    );
    for t in times {
        let ta = t.powf(alpha);
        let mut probe = AxiomCheck::new();
        let mut probe_worst = -T::one();
        for &l in r.op.eigenvalues() {
            let res = (ga * r.weighted_multiplier(l, t)? - T::one()).abs();
            let bound = first_order * l.abs() * ta + tol + roundoff;
            probe.record(res, bound, &mut probe_worst);
            p1.record(res, bound, &mut p1_worst);
        }
        limit.push(LimitProbe {
            t,
            residual: probe.residual,
            bound: probe.bound,
            passed: probe.passed,
        });
    }

    // Commutativity (P2): diagonal products in both orders, bit for bit.
    let mut p2 = AxiomCheck::new();
    let mut p2_worst = -T::one();
    let stride = (steps / 16).max(1);
    let probe_nodes: Vec<usize> = (1..=steps).step_by(stride).collect();
    let diagonals: Vec<Vec<T>> = probe_nodes
        .iter()
        .map(|&j| r.multipliers(grid.node(j)))
        .collect::<Result<_>>()?;
    for a in &diagonals {
        for b in &diagonals {
            let mut worst = T::zero();
            let mut exact = true;
            for (x, y) in a.iter().zip(b) {
                let ab = *x * *y;
                let ba = *y * *x;
                exact &= ab.to_f64().map(f64::to_bits) == ba.to_f64().map(f64::to_bits);
                worst = worst.max((ab - ba).abs());
            }
            p2.record(worst, tol, &mut p2_worst);
            p2.passed &= exact;
        }
    }

    // (P3), (c1), (c2), per mode.
    let rule = ProductRule::new(*grid, alpha, alpha, Interpolation::PiecewiseLinear)?;
    let nodes = grid.nodes();
    let h = grid.step();
    let weight: Vec<T> = nodes.iter().map(|&t| t.powf(T::one() - alpha)).collect();
    let mut p3 = AxiomCheck::new();
    let mut c1 = AxiomCheck::new();
    let mut c2 = AxiomCheck::new();
    let (mut p3_worst, mut c1_worst, mut c2_worst) = (-T::one(), -T::one(), -T::one());
    let bound_factor = c::<T>(BOUND_FACTOR);
    for &l in r.op.eigenvalues() {
        let e: Vec<T> = nodes
            .iter()
            .map(|&t| r.weighted_multiplier(l, t))
            .collect::<Result<_>>()?;
        let integral: Vec<T> = rule
            .integrate_scalar(&e)
            .into_iter()
            .zip(&weight)
            .map(|(v, &w)| v * w)
            .collect();
        let le: Vec<T> = e.iter().map(|&v| l * v).collect();
        let integral_a: Vec<T> = rule
            .integrate_scalar(&le)
            .into_iter()
            .zip(&weight)
            .map(|(v, &w)| v * w)
            .collect();

        // Interpolation defect of the exact weighted multiplier per cell.
        let mut defect = vec![T::zero(); steps];
        for (i, d) in defect.iter_mut().enumerate() {
            for &p in DEFECT_PROBES.iter() {
                let p = c::<T>(p);
                let s = nodes[i] + p * h;
                let exact = r.weighted_multiplier(l, s)?;
                let lin = e[i] + p * (e[i + 1] - e[i]);
                *d = d.max((exact - lin).abs());
            }
        }
        // Propagated bound on |Î - Î_exact| at each node.
        let eps: Vec<T> = (0..=steps)
            .map(|j| {
                let s: T = (0..j)
                    .map(|i| rule.cell_mass(j, i) * defect[i])
                    .fold(T::zero(), |a, b| a + b);
                s * rg * weight[j]
            })
            .collect();

        for j in 2..=steps {
            let res = (e[j] - rg - l * integral[j]).abs();
            let scale = e[j].abs() + rg + (l * integral[j]).abs();
            c1.record(
                res,
                bound_factor * l.abs() * eps[j] + tol + roundoff * scale,
                &mut c1_worst,
            );
            let res2 = (e[j] - rg - integral_a[j]).abs();
            let scale2 = e[j].abs() + rg + integral_a[j].abs();
            c2.record(
                res2,
                bound_factor * l.abs() * eps[j] + tol + roundoff * scale2,
                &mut c2_worst,
            );
        }
        for i in 2..=steps {
            for j in 2..=steps {
                let lhs = e[i] * integral[j] - integral[i] * e[j];
                let rhs = (integral[j] - integral[i]) * rg;
                let res = (lhs - rhs).abs();
                let prop = e[i].abs() * eps[j] + e[j].abs() * eps[i] + (eps[i] + eps[j]) * rg;
                let scale = (e[i] * integral[j]).abs()
                    + (integral[i] * e[j]).abs()
                    + (integral[j].abs() + integral[i].abs()) * rg;
                p3.record(
                    res,
                    bound_factor * prop + tol + roundoff * scale,
                    &mut p3_worst,
                );
            }
        }
    }

    Ok(AxiomReport {
        alpha,
        modes: r.op.n_modes(),
        prefactor: r.prefactor,
        limit,
        p1,
        p2,
        p3,
        c1,
        c2,
        tail_estimate: r.tail_estimate(grid)?,
    })
}
