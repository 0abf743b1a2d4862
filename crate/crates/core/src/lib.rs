//! Driven Markov processes close to equilibrium.
//!
//! `ness-core` builds jump processes and one-dimensional diffusions that
//! satisfy local detailed balance, solves for their stationary laws exactly,
//! and compares them with the first-order McLennan formula
//!
//! ```text
//! ρ_ε(x) ∝ ρ₀(x) · exp(ε h1(x)),     h1 = β L₀⁻¹ w1,
//! ```
//!
//! where `w1` is the linear term of the expected entropy flux and `L₀` the
//! equilibrium generator. Monte Carlo estimators check the exact path-space
//! identities (fluctuation symmetry, the entropy–traffic representation of
//! the transient density) and the Green–Kubo relations.
//!
//! ```
//! use ness_core::{mclennan, models};
//!
//! let model = models::random_model(4, 7, 0.01).unwrap();
//! let exact = model.rates().unwrap().stationary().unwrap();
//! let approx = mclennan::mclennan_correction(&model).unwrap().rho_mclennan;
//! assert!(exact.max_abs_diff(&approx) < 1e-4);
//! ```

pub mod csv;
pub mod diffusion;
pub mod error;
pub mod greenkubo;
pub mod markov;
pub mod mclennan;
pub mod models;
pub mod pathspace;
pub mod stats;

pub use error::{Error, Result};
pub use markov::{Distribution, JumpModel, RateMatrix};
pub use pathspace::Trajectory;
pub use stats::PathEstimate;
