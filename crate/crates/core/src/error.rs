use thiserror::Error;

/// Errors raised by the walk computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// `ad - bc = 0`: `P, Q, R, S` do not span the 2x2 matrices.
    #[error("PQRS basis is singular (ad - bc = 0)")]
    SingularBasis,

    /// Two PQRS matrices built on different walk parameters were combined.
    #[error("PQRS operands use different walk parameters")]
    MismatchedBasis,

    /// A closed form needs `abcd != 0`.
    #[error("closed form requires abcd != 0")]
    DegenerateParameters,

    /// Argument outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Requested work exceeds an enumeration or iteration budget.
    #[error("budget exceeded: {what} = {requested} > {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    /// Time index must be at least one.
    #[error("invalid time n = {0}, expected n >= 1")]
    InvalidTime(u64),

    /// The requested closed form does not cover these parameters.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// An iterative limit failed to stabilise.
    #[error("no convergence after {iterations} refinements (last change {last_change:e})")]
    NonConvergence { iterations: u32, last_change: f64 },

    /// The absorbing-chain linear system could not be solved.
    #[error("singular linear system at site {0}")]
    SingularSystem(usize),

    /// Series argument too large for the power-series evaluator.
    #[error("argument {0} too large for the power series")]
    Overflow(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
