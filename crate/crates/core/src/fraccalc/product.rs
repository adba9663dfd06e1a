//! Product-integration weights for `J^β u(t_j) = (1/Γ(β)) ∫_0^{t_j} (t_j-s)^{β-1} s^{α-1} w(s) ds`.
//!
//! On every cell `w` is replaced by a Lagrange interpolant in the variable
//! `τ = s^θ` and the resulting moments are computed as follows:
//! * first cell, `j = 1`: Beta integrals;
//! * first cell, `j >= 2`: binomial series of `(t_j - s)^{β-1}` in `s/t_j`;
//! * last cell: power series of `s^{α-1} L(s^θ)` in `(t_j - s)/t_j`;
//! * interior cells: 16-point Gauss-Legendre (both singular points lie at
//!   least one cell away).

use crate::error::{invalid, Error, Result};
use crate::quadrature::gauss_legendre;
use crate::scalar::{c, cu, Real};
use crate::special::{beta as beta_fn, recip_gamma};
use crate::spectral::StateVector;

use super::{check_order, TimeGrid, WeightedTrajectory};

const SERIES_TERMS: usize = 64;
const GAUSS_POINTS: usize = 16;

/// Interpolant of the weighted samples used inside each cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    /// Linear in `s` between neighbouring nodes.
    PiecewiseLinear,
    /// Lagrange polynomial of the given degree in `τ = s^α` on a stencil of
    /// `degree + 1` consecutive nodes centred on the cell.
    PowerLagrange { degree: usize },
}

impl Interpolation {
    fn degree(self) -> usize {
        match self {
            Interpolation::PiecewiseLinear => 1,
            Interpolation::PowerLagrange { degree } => degree,
        }
    }
}

/// Precomputed weight table for one `(grid, α, β, interpolation)`.
#[derive(Debug, Clone)]
pub struct ProductRule<T> {
    grid: TimeGrid<T>,
    alpha: T,
    order: T,
    interp: Interpolation,
    /// `weights[j][k]`, `k = 0..=J`; excludes `1/Γ(β)`.
    weights: Vec<Vec<T>>,
    /// `mass[j][i] = ∫_{t_i}^{t_{i+1}} (t_j - s)^{β-1} s^{α-1} ds`.
    mass: Vec<Vec<T>>,
}

impl<T: Real> ProductRule<T> {
    pub fn new(grid: TimeGrid<T>, alpha: T, order: T, interp: Interpolation) -> Result<Self> {
        check_order("alpha", alpha)?;
        check_order("order", order)?;
        let d = interp.degree();
        if d == 0 {
            return Err(invalid("degree", T::zero(), "must be at least 1"));
        }
        if d > grid.steps() {
            return Err(Error::Dimension(format!(
                "interpolation degree {d} exceeds the {} grid steps",
                grid.steps()
            )));
        }
        let theta = match interp {
            Interpolation::PiecewiseLinear => T::one(),
            Interpolation::PowerLagrange { .. } => alpha,
        };
        let builder = Builder::new(grid, alpha, order, theta, d);
        let (weights, mass) = builder.build();
        Ok(Self {
            grid,
            alpha,
            order,
            interp,
            weights,
            mass,
        })
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn order(&self) -> T {
        self.order
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interp
    }

    /// Row `j` of the weight table (without `1/Γ(β)`).
    pub fn weights_row(&self, j: usize) -> &[T] {
        &self.weights[j]
    }

    /// `∫_{t_i}^{t_{i+1}} (t_j - s)^{β-1} s^{α-1} ds` for `i < j`.
    pub fn cell_mass(&self, j: usize, i: usize) -> T {
        self.mass[j][i]
    }

    /// Raw values `J^β u(t_j)`, `j = 0..=J`.
    pub fn integrate_raw(&self, u: &WeightedTrajectory<T>) -> Vec<StateVector<T>> {
        debug_assert!(u.grid() == &self.grid);
        let modes = u.modes();
        let g = recip_gamma(self.order);
        let mut out = Vec::with_capacity(self.grid.steps() + 1);
        for row in &self.weights {
            let mut acc = StateVector::zeros(modes);
            for (k, &wk) in row.iter().enumerate() {
                if wk != T::zero() {
                    acc.axpy(wk, &u.values()[k]);
                }
            }
            out.push(acc.scaled(g));
        }
        out
    }

    /// Raw values `J^β u(t_j)` for a scalar weighted trajectory `w`.
    pub fn integrate_scalar(&self, w: &[T]) -> Vec<T> {
        let g = recip_gamma(self.order);
        self.weights
            .iter()
            .map(|row| {
                let mut acc = T::zero();
                for (k, &wk) in row.iter().enumerate() {
                    acc = acc + wk * w[k];
                }
                acc * g
            })
            .collect()
    }

    /// `J^β u` in the weighted representation of `u`: node `j` holds
    /// `t_j^{1-α} J^β u(t_j)`; node 0 holds 0.
    pub fn apply(&self, u: &WeightedTrajectory<T>) -> WeightedTrajectory<T> {
        let raw = self.integrate_raw(u);
        let e = T::one() - u.alpha();
        let values = raw
            .into_iter()
            .enumerate()
            .map(|(j, v)| {
                if j == 0 {
                    StateVector::zeros(u.modes())
                } else {
                    v.scaled(self.grid.node(j).powf(e))
                }
            })
            .collect();
        WeightedTrajectory::from_parts_unchecked(self.grid, u.alpha(), values)
    }
}

struct Builder<T> {
    grid: TimeGrid<T>,
    alpha: T,
    beta: T,
    theta: T,
    d: usize,
    h: T,
    tau: Vec<T>,
    gl: (Vec<T>, Vec<T>),
}

impl<T: Real> Builder<T> {
    fn new(grid: TimeGrid<T>, alpha: T, beta: T, theta: T, d: usize) -> Self {
        let tau = grid.nodes().into_iter().map(|t| t.powf(theta)).collect();
        Self {
            grid,
            alpha,
            beta,
            theta,
            d,
            h: grid.step(),
            tau,
            gl: gauss_legendre(GAUSS_POINTS),
        }
    }

    fn stencil_start(&self, i: usize) -> usize {
        let back = (self.d - 1) / 2;
        i.saturating_sub(back).min(self.grid.steps() - self.d)
    }

    fn build(&self) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
        let steps = self.grid.steps();
        let mut weights = vec![vec![T::zero(); steps + 1]; steps + 1];
        let mut mass: Vec<Vec<T>> = (0..=steps).map(|j| vec![T::zero(); j]).collect();

        // Monomial coefficients of the first-cell basis in ν = τ / h^θ.
        let nu: Vec<T> = (0..=self.d).map(|m| cu::<T>(m).powf(self.theta)).collect();
        let first_basis: Vec<Vec<T>> = (0..=self.d).map(|k| lagrange_monomials(&nu, k)).collect();
        let mut m = vec![T::zero(); self.d + 1];

        for j in 1..=steps {
            for i in 0..j {
                let lo = self.stencil_start(i);
                if i == 0 {
                    self.first_cell(j, &first_basis, &mut m);
                } else if i == j - 1 {
                    self.last_cell(j, lo, &mut m);
                } else {
                    self.interior_cell(j, i, lo, &mut m);
                }
                let mut cell = T::zero();
                for (q, &mq) in m.iter().enumerate() {
                    weights[j][lo + q] = weights[j][lo + q] + mq;
                    cell = cell + mq;
                }
                mass[j][i] = cell;
            }
        }
        (weights, mass)
    }

    fn first_cell(&self, j: usize, basis: &[Vec<T>], out: &mut [T]) {
        let (alpha, beta, theta, h) = (self.alpha, self.beta, self.theta, self.h);
        // Moments of (s/h)^{qθ} against the cell kernel.
        let moments: Vec<T> = (0..=self.d)
            .map(|q| {
                let a = alpha + theta * cu::<T>(q);
                if j == 1 {
                    h.powf(alpha + beta - T::one()) * beta_fn(a, beta)
                } else {
                    let tj = self.grid.node(j);
                    let rho = cu::<T>(j).recip();
                    let mut coef = T::one();
                    let mut pow = T::one();
                    let mut sum = T::zero();
                    for r in 0..400 {
                        let term = coef * pow / (a + cu::<T>(r));
                        sum = sum + term;
                        if term.abs() <= T::epsilon() * c(0.25) * sum.abs() && r > 2 {
                            break;
                        }
                        coef = coef * (cu::<T>(r) - (beta - T::one())) / cu::<T>(r + 1);
                        pow = pow * rho;
                        if coef == T::zero() {
                            break;
                        }
                    }
                    tj.powf(beta - T::one()) * h.powf(alpha) * sum
                }
            })
            .collect();
        for (k, coeffs) in basis.iter().enumerate() {
            out[k] = coeffs
                .iter()
                .zip(&moments)
                .map(|(&a, &b)| a * b)
                .fold(T::zero(), |s, v| s + v);
        }
    }

    fn last_cell(&self, j: usize, lo: usize, out: &mut [T]) {
        let (alpha, beta, theta, h) = (self.alpha, self.beta, self.theta, self.h);
        let tj = self.grid.node(j);
        let tau_j = self.tau[j];
        let scale = tau_j - self.tau[j - 1];
        let y: Vec<T> = (lo..=lo + self.d)
            .map(|m| (self.tau[m] - tau_j) / scale)
            .collect();

        let n = SERIES_TERMS;
        let a_series = binomial_series(alpha - T::one(), n);
        let mut b_series = binomial_series(theta, n);
        b_series[0] = T::zero();
        let ratio = tau_j / scale;
        for b in b_series.iter_mut() {
            *b = *b * ratio;
        }
        let rho = cu::<T>(j).recip();
        let hb = h.powf(beta);
        // Q_q = ∫_0^h σ^{β-1} [A(x) B(x)^q] dσ with x = σ / t_j.
        let mut q_moments = Vec::with_capacity(self.d + 1);
        let mut p = a_series;
        for q in 0..=self.d {
            if q > 0 {
                p = mul_truncated(&p, &b_series);
            }
            let mut sum = T::zero();
            let mut pow = T::one();
            for (r, &pr) in p.iter().enumerate() {
                sum = sum + pr * pow / (beta + cu::<T>(r));
                pow = pow * rho;
                if pow == T::zero() {
                    break;
                }
            }
            q_moments.push(hb * sum);
        }
        let pre = tj.powf(alpha - T::one());
        for k in 0..=self.d {
            let e = lagrange_monomials(&y, k);
            let s = e
                .iter()
                .zip(&q_moments)
                .fold(T::zero(), |s, (&a, &b)| s + a * b);
            out[k] = pre * s;
        }
    }

    fn interior_cell(&self, j: usize, i: usize, lo: usize, out: &mut [T]) {
        let (alpha, beta, theta) = (self.alpha, self.beta, self.theta);
        let tj = self.grid.node(j);
        let (a, b) = (self.grid.node(i), self.grid.node(i + 1));
        let half = (b - a) * c(0.5);
        let mid = (a + b) * c(0.5);
        for v in out.iter_mut() {
            *v = T::zero();
        }
        let nodes = &self.tau[lo..=lo + self.d];
        let one = T::one();
        for (x, w) in self.gl.0.iter().zip(&self.gl.1) {
            let s = mid + half * *x;
            let kern = *w * half * (tj - s).powf(beta - one) * s.powf(alpha - one);
            let ts = if theta == one { s } else { s.powf(theta) };
            for (k, o) in out.iter_mut().enumerate() {
                let mut l = one;
                for (m, &tm) in nodes.iter().enumerate() {
                    if m != k {
                        l = l * (ts - tm) / (nodes[k] - tm);
                    }
                }
                *o = *o + kern * l;
            }
        }
    }
}

/// Coefficients of `(1 - x)^γ` up to `x^{n-1}`.
fn binomial_series<T: Real>(gamma: T, n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n);
    let mut coef = T::one();
    for r in 0..n {
        out.push(coef);
        coef = coef * (cu::<T>(r) - gamma) / cu::<T>(r + 1);
    }
    out
}

fn mul_truncated<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len();
    let mut out = vec![T::zero(); n];
    for (i, &ai) in a.iter().enumerate() {
        if ai == T::zero() {
            continue;
        }
        for (k, &bk) in b.iter().take(n - i).enumerate() {
            out[i + k] = out[i + k] + ai * bk;
        }
    }
    out
}

/// Ascending monomial coefficients of the Lagrange basis polynomial `k`
/// on `nodes`.
fn lagrange_monomials<T: Real>(nodes: &[T], k: usize) -> Vec<T> {
    let mut poly = vec![T::one()];
    let mut denom = T::one();
    for (m, &xm) in nodes.iter().enumerate() {
        if m == k {
            continue;
        }
        let mut next = vec![T::zero(); poly.len() + 1];
        for (i, &p) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1] + p;
            next[i] = next[i] - xm * p;
        }
        poly = next;
        denom = denom * (nodes[k] - xm);
    }
    poly.into_iter().map(|p| p / denom).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrange_basis_interpolates() {
        let nodes: [f64; 4] = [0.0, 1.0, 2.5, 4.0];
        for k in 0..4 {
            let p = lagrange_monomials(&nodes, k);
            for (m, &x) in nodes.iter().enumerate() {
                let v: f64 = p
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * x.powi(i as i32))
                    .sum();
                let want = if m == k { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn binomial_series_of_square_root() {
        let s = binomial_series(0.5_f64, 6);
        let x: f64 = 0.1;
        let v: f64 = s
            .iter()
            .enumerate()
            .map(|(r, c)| c * x.powi(r as i32))
            .sum();
        assert!((v - 0.9_f64.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn stencils_stay_inside_the_grid() {
        let grid = TimeGrid::new(1.0_f64, 8).unwrap();
        let b = Builder::new(grid, 0.5, 0.5, 0.5, 4);
        assert_eq!(b.stencil_start(0), 0);
        assert_eq!(b.stencil_start(3), 2);
        assert_eq!(b.stencil_start(7), 4);
        let b = Builder::new(grid, 0.5, 0.5, 1.0, 1);
        assert_eq!(b.stencil_start(7), 7);
    }
}
