use thiserror::Error;

use crate::problem::ProblemError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures raised by the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid problem: {}", join(.0))]
    InvalidProblem(Vec<ProblemError>),

    #[error("transmission matrix is degenerate: every column determinant vanishes")]
    DegenerateMatrix,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("step size underflow at x = {x} (h = {step:e})")]
    StepFailure { x: f64, step: f64 },

    #[error("non-finite state at x = {x}")]
    NonFiniteState { x: f64 },

    #[error("jump map is singular: |{which}| = {value:e}")]
    SingularJump { which: &'static str, value: f64 },

    #[error(
        "successive approximation stalled after {iterations} iterations (last change {change:e})"
    )]
    NoConvergence { iterations: usize, change: f64 },

    #[error("case {supplied} does not match the boundary angles (expected {expected})")]
    CaseMismatch {
        supplied: crate::problem::Case,
        expected: crate::problem::Case,
    },

    #[error("solution paths live on different sides of the interface")]
    SideMismatch,

    #[error("solution meshes do not coincide")]
    MeshMismatch,

    #[error("bracket [{lo}, {hi}] has no sign change")]
    LostBracket { lo: f64, hi: f64 },

    #[error(
        "tangency candidate near {lambda} rejected: min |w| = {min_abs:e} above floor {floor:e}"
    )]
    TangencyRejected {
        lambda: f64,
        min_abs: f64,
        floor: f64,
    },

    #[error("found {found} eigenvalues up to {lambda_max}, expected about {expected:.1}")]
    IncompleteSpectrum {
        found: usize,
        expected: f64,
        lambda_max: f64,
    },

    #[error("lambda = {lambda} is not an eigenvalue (right boundary residual {residual:e})")]
    NotAnEigenvalue { lambda: f64, residual: f64 },

    #[error("power-law fit is degenerate: {0}")]
    DegenerateFit(String),
}

fn join(errors: &[ProblemError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
