//! Passage between eigen-coefficients and point values for pointwise
//! nonlinearities.

use crate::scalar::{cu, Real};

/// Coefficient representation of the state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// Orthonormal Dirichlet sine basis `√2 sin(nπx)` on `(0, 1)`, sampled at
    /// `points` interior nodes `x_m = m/(points+1)`.
    Sine { points: usize },
    /// Coefficients are themselves the point values (one independent
    /// scalar equation per mode).
    Diagonal,
}

/// Sine synthesis and discrete sine projection.
#[derive(Debug, Clone)]
pub(crate) enum Collocation<T> {
    Sine {
        points: usize,
        modes: usize,
        /// `table[m * modes + n] = √2 sin((n+1) π x_m)`.
        table: Vec<T>,
    },
    Diagonal,
}

impl<T: Real> Collocation<T> {
    pub(crate) fn new(basis: Basis, modes: usize) -> Self {
        match basis {
            Basis::Diagonal => Collocation::Diagonal,
            Basis::Sine { points } => {
                let sqrt2 = T::SQRT_2();
                let denom = cu::<T>(points + 1);
                let mut table = Vec::with_capacity(points * modes);
                for m in 1..=points {
                    for n in 1..=modes {
                        // sin(nmπ/(P+1)) with the argument reduced modulo 2(P+1).
                        let k = (n * m) % (2 * (points + 1));
                        table.push(sqrt2 * (T::PI() * cu::<T>(k) / denom).sin());
                    }
                }
                Collocation::Sine {
                    points,
                    modes,
                    table,
                }
            }
        }
    }

    /// Point values of the function with coefficients `coeffs`.
    pub(crate) fn synthesize(&self, coeffs: &[T]) -> Vec<T> {
        match self {
            Collocation::Diagonal => coeffs.to_vec(),
            Collocation::Sine {
                points,
                modes,
                table,
            } => (0..*points)
                .map(|m| {
                    let row = &table[m * modes..(m + 1) * modes];
                    row.iter()
                        .zip(coeffs)
                        .fold(T::zero(), |acc, (&s, &c)| acc + s * c)
                })
                .collect(),
        }
    }

    /// Coefficients of the interpolant through `values`, truncated to the
    /// retained modes.
    pub(crate) fn project(&self, values: &[T]) -> Vec<T> {
        match self {
            Collocation::Diagonal => values.to_vec(),
            Collocation::Sine {
                points,
                modes,
                table,
            } => {
                let scale = T::one() / cu::<T>(points + 1);
                let mut out = vec![T::zero(); *modes];
                for (m, &v) in values.iter().enumerate() {
                    let row = &table[m * modes..(m + 1) * modes];
                    for (o, &s) in out.iter_mut().zip(row) {
                        *o = *o + s * v;
                    }
                }
                out.iter().map(|&v| v * scale).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_inverts_synthesis() {
        let c = Collocation::<f64>::new(Basis::Sine { points: 16 }, 8);
        let coeffs = [1.0, -0.5, 0.25, 0.0, 3.0, 0.1, -2.0, 0.7];
        let back = c.project(&c.synthesize(&coeffs));
        for (a, b) in coeffs.iter().zip(&back) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn synthesis_of_first_mode() {
        let c = Collocation::<f64>::new(Basis::Sine { points: 3 }, 2);
        let v = c.synthesize(&[1.0 / 2f64.sqrt(), 0.0]);
        // sin(πx) at x = 1/4, 1/2, 3/4.
        assert!((v[1] - 1.0).abs() < 1e-15);
        assert!((v[0] - v[2]).abs() < 1e-15);
    }
}
