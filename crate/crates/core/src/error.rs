use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation
    /// (for example `n = 0`, `p < 1`, a negative abscissa).
    #[error("domain error: {0}")]
    Domain(String),

    /// Dimensions of elements and spaces do not agree.
    #[error("shape error: {0}")]
    Shape(String),

    /// Too few torus coordinates were supplied for an evaluation.
    #[error("arity error: need {needed} coordinates, got {got}")]
    Arity { needed: usize, got: usize },

    /// An integer computation left the supported range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// The request exceeds a configured memory or work budget.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A ratio was requested whose denominator vanishes.
    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    /// A caller-side precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
