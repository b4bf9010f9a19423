//! Laguerre polynomials `L_n^{(α)}(nz)` with `α/n → −1`, the level curves
//! `Γ_r` of `|z e^{1−z}|`, the measures `μ_r` and their potentials.
//!
//! Every numerical routine is generic over [`scalar::Real`], implemented
//! for `f64` and for the MPFR-backed [`Ap`]. Polynomial construction also
//! works over exact rationals.

pub mod error;
pub mod lab;
pub mod laguerre;
pub mod potential;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod szego;

use num_complex::Complex;

pub use error::{Error, Result};
pub use lab::{make_schedule, zero_distribution_report, AlphaSchedule, ConvergenceReport, ScheduleKind};
pub use laguerre::{
    coefficients, evaluate, evaluate_at_zero, monic_rescaled, param_decomposition, CoeffList, LaguerreSpec,
    ParamDecomposition,
};
pub use potential::{
    discretize_mu_r, log_potential, verify_balayage, weighted_energy, weighted_leja, BalayageReport, ExternalField,
    Level,
};
pub use roots::{contracted_zeros, counting_measure, find_roots, DiscreteMeasure, ZeroSet};
pub use scalar::{with_precision, working_precision, Ap, Precision, Real, Scalar};
pub use szego::{locate, phi_map, real_crossings, trace_level_curve, LevelCurve, RegionTag};

/// Multiprecision real.
pub type ApReal = Ap;
/// Multiprecision complex.
pub type ApComplex = Complex<Ap>;
/// Exact rational, usable for coefficient construction.
pub type Rational = num_rational::BigRational;
pub type Complex64 = Complex<f64>;
