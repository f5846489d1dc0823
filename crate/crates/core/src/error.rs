use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Quantum numbers or other arguments outside their allowed range.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("divergent integral: decay rate {0} is not positive")]
    Divergent(String),

    /// A polar integrand with an even power of sin(θ) survived; its integral
    /// carries a factor of π and is not representable as a rational.
    #[error("unsupported integrand: {0}")]
    UnsupportedIntegrand(String),

    #[error("decay rates differ: {0} vs {1}")]
    BetaMismatch(String, String),

    /// An identity that must hold exactly did not.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    /// A quadrature rule too small for the requested integrand.
    #[error("quadrature order {order} insufficient, need at least {needed}")]
    InsufficientOrder { order: usize, needed: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
