use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "quadrature did not converge: estimated error {error:.3e} above tolerance {tolerance:.3e}"
    )]
    NonConvergence { error: f64, tolerance: f64 },

    #[error("integrand returned a non-finite value at x = {0}")]
    NonFinite(f64),

    #[error("bracket [{lo}, {hi}] does not straddle a sign change")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("argument outside supported range: {0}")]
    OutOfSupportedRange(String),

    #[error("could not bracket the first zero of J_{nu}")]
    BracketingFailure { nu: f64 },

    #[error("mass matrix is singular: cell {cell} has non-positive weight")]
    SingularMass { cell: usize },

    #[error("eigen-iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("ODE integrator step underflow at x = {x}")]
    StiffnessFailure { x: f64 },

    #[error("Rayleigh quotient denominator vanishes")]
    ZeroDenominator,

    #[error("tabulated tail is inconclusive: {0}")]
    InconclusiveTail(String),

    #[error("sharp constant meaningless for mu <= 2 (mu = {mu})")]
    MeaninglessConstant { mu: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
