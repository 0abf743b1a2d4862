use thiserror::Error;

/// Errors raised by model construction, solvers and samplers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("numeric range error: {0}")]
    Range(String),

    #[error("master-equation integration failed after reaching t = {achieved}")]
    Integration { achieved: f64 },

    #[error("chain is reducible ({components} communicating classes); stationary law is not unique")]
    Reducible { components: usize },

    #[error("spectral gap {gap:e} is below 1e-12; chain is nearly degenerate")]
    NearDegenerate { gap: f64 },

    #[error("jump {from} -> {to} has zero reference rate; path measures are not absolutely continuous")]
    AbsoluteContinuity { from: usize, to: usize },

    #[error("right-hand side is not centred under the reference law (mean {mean:e}); Poisson equation has no solution")]
    Solvability { mean: f64 },

    #[error("coupling rates overlap allowed reference transitions at ({from}, {to})")]
    CouplingOverlap { from: usize, to: usize },

    #[error("state space of size {size} exceeds the dense-solver limit {limit}")]
    SizeLimit { size: usize, limit: usize },

    #[error("step {step} moved {displacement} which exceeds half the torus; reduce dt")]
    DtTooLarge { step: usize, displacement: f64 },

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
