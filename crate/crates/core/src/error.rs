use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("series did not converge within {0} terms")]
    SeriesCap(usize),
    #[error("result overflows the scalar type")]
    Overflow,
    #[error("adaptive quadrature did not reach tolerance")]
    Quadrature,
    #[error("kernel evaluation is not finite at t = {t}, s = {s}")]
    NonFiniteKernel { t: f64, s: f64 },
    #[error("forcing evaluation is not finite at node {node}")]
    NonFiniteForcing { node: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T: crate::Real>(
    name: &'static str,
    value: T,
    constraint: &'static str,
) -> Error {
    Error::InvalidParameter {
        name,
        value: crate::scalar::f64_of(value),
        constraint,
    }
}
