//! Sample-complexity bounds and Monte Carlo checks for exact support
//! recovery of sparse vectors from noisy Gaussian measurements.
//!
//! The model is `Y = Xβ + W` with `X` an `n × p` standard Gaussian matrix,
//! `β` a `k`-sparse vector and unit-variance noise. The crate provides:
//!
//! - [`bounds`]: closed-form sufficient and necessary conditions on `n`;
//! - [`signal_model`]: the stationary sparse source, its Toeplitz
//!   autocorrelation and power spectrum;
//! - [`wishart_info`]: log-determinant expectations and the information-rate
//!   lower bound;
//! - [`recovery_sim`]: an exhaustive maximum-likelihood decoder and error
//!   probability estimates;
//! - [`validate`]: invariant suites that tie the above together.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod numerics;
pub mod recovery_sim;
pub mod signal_model;
pub mod spectrum;
pub mod validate;
pub mod wishart_info;

pub use bounds::{BoundResult, BoundStatus, Theorem, DEFAULT_SLACK};
pub use error::{Error, Result};
pub use numerics::{Matrix, RandomStream};
pub use recovery_sim::{ErrorMetric, ExperimentConfig, SimReport, Sweep, TrialOutcome};
pub use signal_model::{ReducedProblem, SignalModel, SparseVector};
pub use spectrum::SpectrumSummary;
pub use wishart_info::{AVariant, InfoRateBound, McEstimate, MutualInformation};
