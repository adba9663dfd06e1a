//! Riemann-Liouville fractional evolution equations with nonlocal initial
//! conditions, `D^α u = Au + f(t, t^{1-α}u, Ku)`, `Γ(α) t^{1-α}u(t)|_{t=0} = x - g(u)`,
//! for diagonal `A`.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix `f64`.

pub mod error;
pub mod fraccalc;
pub mod heat_example;
pub mod hypotheses;
pub mod mlf;
pub mod quadrature;
pub mod resolvent;
pub mod scalar;
pub mod solver;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use fraccalc::{
    frac_derivative, frac_integral, kernel_apply, singular_conv_weights, weighted_sup_norm,
    Interpolation, KernelKind,
};
pub use heat_example::{
    build_heat_problem, condition_i, condition_ii, example_f, example_g, Condition, Variant,
};
pub use hypotheses::{
    check_krasnoselskii, contraction_constant, lq_norm, power_inequality_margin, HypothesisReport,
    NonlocalBound, Profile,
};
pub use mlf::{mittag_leffler, ml};
pub use resolvent::{
    resolvent_apply, resolvent_norm_bound, verify_resolvent_axioms, AxiomReport, Prefactor,
};
pub use scalar::Real;
pub use solver::{
    fixed_point_map, mild_residual, picard_solve, Basis, ConvergenceReport, Forcing, Nonlocal,
};

pub type MlfQuery = mlf::MlfQuery<f64>;
pub type TimeGrid = fraccalc::TimeGrid<f64>;
pub type WeightedTrajectory = fraccalc::WeightedTrajectory<f64>;
pub type VolterraKernel = fraccalc::VolterraKernel<f64>;
pub type ProductRule = fraccalc::ProductRule<f64>;
pub type StateVector = spectral::StateVector<f64>;
pub type SpectralOperator = spectral::SpectralOperator<f64>;
pub type FractionalResolvent = resolvent::FractionalResolvent<f64>;
pub type ProblemSpec = solver::ProblemSpec<f64>;
pub type MildOperator = solver::MildOperator<f64>;
pub type SolveError = solver::SolveError<f64>;
pub type LipschitzData = hypotheses::LipschitzData<f64>;
pub type ContractionInput = hypotheses::ContractionInput<f64>;
pub type KrasnoselskiiInput = hypotheses::KrasnoselskiiInput<f64>;
pub type HeatExampleParams = heat_example::HeatExampleParams<f64>;
