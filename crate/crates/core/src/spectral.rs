//! Coefficient vectors and diagonal operators in an eigenbasis.

use std::ops::{Add, Index, IndexMut, Sub};

use crate::error::{invalid, Error, Result};
use crate::scalar::{cu, Real};

/// An element of the state space, stored as eigenbasis coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    coeffs: Vec<T>,
}

impl<T: Real> StateVector<T> {
    /// Builds a state vector, rejecting non-finite coefficients.
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if let Some(v) = coeffs.iter().find(|v| !v.is_finite()) {
            return Err(invalid("coefficient", *v, "must be finite"));
        }
        Ok(Self { coeffs })
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<T>) -> Self {
        Self { coeffs }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); n],
        }
    }

    /// The `n`-th unit vector (0-based) of length `len`.
    pub fn unit(len: usize, n: usize) -> Self {
        let mut v = Self::zeros(len);
        v.coeffs[n] = T::one();
        v
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub fn into_vec(self) -> Vec<T> {
        self.coeffs
    }

    /// Euclidean coefficient norm (the `L²` norm by Parseval in an orthonormal basis).
    pub fn norm(&self) -> T {
        let mut scale = T::zero();
        for v in &self.coeffs {
            scale = scale.max(v.abs());
        }
        if scale == T::zero() {
            return T::zero();
        }
        let s: T = self.coeffs.iter().map(|&v| (v / scale) * (v / scale)).sum();
        scale * s.sqrt()
    }

    pub fn scaled(&self, a: T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&v| v * a).collect(),
        }
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: T, other: &Self) {
        debug_assert_eq!(self.len(), other.len());
        for (x, &y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x = *x + a * y;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|v| v.is_finite())
    }
}

impl<T: Real> Index<usize> for StateVector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.coeffs[i]
    }
}

impl<T: Real> IndexMut<usize> for StateVector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.coeffs[i]
    }
}

impl<T: Real> Add for &StateVector<T> {
    type Output = StateVector<T>;
    fn add(self, rhs: Self) -> StateVector<T> {
        StateVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &StateVector<T> {
    type Output = StateVector<T>;
    fn sub(self, rhs: Self) -> StateVector<T> {
        StateVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

/// A diagonal operator `A e_n = λ_n e_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOperator<T> {
    eigenvalues: Vec<T>,
    diffusivity: Option<T>,
}

impl<T: Real> SpectralOperator<T> {
    pub fn new(eigenvalues: Vec<T>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Dimension("operator needs at least one mode".into()));
        }
        if let Some(v) = eigenvalues.iter().find(|v| !v.is_finite()) {
            return Err(invalid("eigenvalue", *v, "must be finite"));
        }
        Ok(Self {
            eigenvalues,
            diffusivity: None,
        })
    }

    /// Dirichlet operator `k² ∂²/∂x²` on `(0, 1)`: `λ_n = -k² n² π²`.
    pub fn heat(k: T, n_modes: usize) -> Result<Self> {
        if !(k > T::zero()) || !k.is_finite() {
            return Err(invalid("k", k, "must be positive"));
        }
        if n_modes == 0 {
            return Err(Error::Dimension("operator needs at least one mode".into()));
        }
        let eigenvalues = (1..=n_modes).map(|n| heat_eigenvalue(k, n)).collect();
        Ok(Self {
            eigenvalues,
            diffusivity: Some(k),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn diffusivity(&self) -> Option<T> {
        self.diffusivity
    }

    /// First eigenvalue dropped by the truncation, when the family is known.
    pub fn first_neglected_eigenvalue(&self) -> Option<T> {
        self.diffusivity
            .map(|k| heat_eigenvalue(k, self.n_modes() + 1))
    }

    /// `max_n |λ_n|`.
    pub fn spectral_radius(&self) -> T {
        self.eigenvalues
            .iter()
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Applies `A` coefficientwise.
    pub fn apply(&self, x: &StateVector<T>) -> StateVector<T> {
        StateVector {
            coeffs: x
                .coeffs
                .iter()
                .zip(&self.eigenvalues)
                .map(|(&v, &l)| v * l)
                .collect(),
        }
    }
}

fn heat_eigenvalue<T: Real>(k: T, n: usize) -> T {
    let nf = cu::<T>(n);
    -(k * k) * nf * nf * T::PI() * T::PI()
}
