//! Fermi bridges to submanifolds of model spaces.
//!
//! The crate simulates Brownian motion and Fermi bridges (diffusions with
//! generator `1/2 Lap - r_N/(T - t) d/dr_N`) on Euclidean space, hyperbolic
//! space and the circle, and estimates integrated heat kernels
//! `p_T(x, N) = int_N p_T(x, y) dvol_N(y)` by
//!
//! ```text
//! p_T(x, N) = q_T(x, N) lim_{t -> T} E[ 1{t < tau_D} exp( int_0^t r_N/(T - s) (dA_s + dL_s) ) ]
//! ```
//!
//! with `q_T` the flat reference kernel. Closed-form kernels, comparison bounds
//! and derivative probes live in [`kernels`]; path generation in [`simulate`];
//! estimators and verifiers in [`estimate`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimate;
pub mod geometry;
pub mod kernels;
pub mod simulate;
pub mod stats;

pub use error::{Error, Result};
pub use estimate::EstimateResult;
pub use geometry::{ComparisonConstants, GeometryPoint, ModelPair, Side, SpaceForm, SpaceKind, SubmanifoldModel};
pub use kernels::{BoundParams, KernelValue};
pub use simulate::{BridgeConfig, GridPolicy, PathAccumulator, TimeGrid};
