//! Steady states of a feedback-cooled optomechanical oscillator.
//!
//! Everything is expressed in units where `ħ = 1` and the mechanical
//! frequency is `ω_m = 1`; rates are ratios to `ω_m` and the bath enters
//! through `θ = k_B T / ħω_m`. Three independent routes to the stationary
//! second moments are provided:
//!
//! * [`analytic`] — closed forms, optima and nonclassicality criteria;
//! * [`spectral`] — adaptive quadrature of the noise-spectrum integrals;
//! * [`langevin`] — Lyapunov solution and seeded ensemble simulation of the
//!   linear stochastic equations.

pub mod analytic;
pub mod error;
pub mod exec;
pub mod langevin;
pub mod model;
pub mod optimize;
pub mod spectral;

pub use analytic::{NoiseBreakdown, SteadyState};
pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{DimensionlessParams, FeedbackScheme, SystemParams};
