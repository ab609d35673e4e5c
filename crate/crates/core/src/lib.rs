//! Global conservative solutions of the two-component Hunter-Saxton system
//!
//! ```text
//! u_t + u u_x = 1/4 (int_{-inf}^x - int_x^inf) (u_x^2 + rho^2) dy
//! rho_t + (u rho)_x = 0
//! ```
//!
//! computed exactly on piecewise-linear data. Initial data `(u, rho, mu)` is
//! mapped to characteristic variables `(y, U, H, r)`, evolved with the explicit
//! semigroup and mapped back; energy that concentrates at wave breaking is kept
//! as atoms of `mu` and released afterwards.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases
//! fix double precision.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod eulerian;
pub mod evolution;
pub mod func;
pub mod lagrangian;
pub mod measure;
pub mod metric;
pub mod oracle;
pub mod scalar;
pub mod transform;
pub mod validation;

pub use error::{Error, Result};
pub use eulerian::{energy_density, EulerianState};
pub use evolution::{
    breaking_times, evolve, evolve_eulerian, weak_residual, BreakingReport, Residual,
    TestFunction, Trajectory,
};
pub use func::{norm_b, MonotoneGraph, PiecewiseConstant, PiecewiseLinear};
pub use lagrangian::{LagrangianReport, LagrangianState, Relabeling};
pub use measure::RadonMeasure;
pub use metric::{
    b_distance, bracket, d_lower, j_upper, lipschitz_check, lipschitz_sweep, JOptions,
    LipschitzReport, MetricBracket,
};
pub use scalar::Scalar;
pub use transform::{to_eulerian, to_lagrangian};
pub use validation::{Violation, DEFAULT_TOL};

pub type PiecewiseLinear64 = PiecewiseLinear<f64>;
pub type PiecewiseConstant64 = PiecewiseConstant<f64>;
pub type RadonMeasure64 = RadonMeasure<f64>;
pub type EulerianState64 = EulerianState<f64>;
pub type LagrangianState64 = LagrangianState<f64>;
pub type Relabeling64 = Relabeling<f64>;
pub type MetricBracket64 = MetricBracket<f64>;

pub type PiecewiseLinear32 = PiecewiseLinear<f32>;
pub type PiecewiseConstant32 = PiecewiseConstant<f32>;
pub type EulerianState32 = EulerianState<f32>;
pub type LagrangianState32 = LagrangianState<f32>;
