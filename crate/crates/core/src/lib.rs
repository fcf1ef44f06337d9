//! Online data-driven reachability analysis with zonotopes.
//!
//! The crate estimates a set of models for an unknown system with a
//! set-valued recursive least-squares estimator with exponential forgetting,
//! then propagates zonotopic reachable sets through that model set for linear
//! time-varying and Lipschitz nonlinear plants.

// `!(x >= 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimator;
pub mod harness;
pub mod reach;
pub mod scenario;
pub mod sets;
pub mod validation;

pub use error::{Error, Result};
pub use sets::{IntervalMatrix, MatrixZonotope, Zonotope};
