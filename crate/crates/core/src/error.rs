use thiserror::Error;

/// Errors produced by the reconstruction library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain where the method is defined.
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    /// Inconsistent or invalid experiment configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A documented precondition of an operation was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The bracket handed to the root finder had no sign change.
    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    RootBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: estimated error {estimate:e} after {panels} panels")]
    Quadrature { estimate: f64, panels: usize },

    /// Too few usable points for a least-squares rate fit.
    #[error("rate fit needs at least {needed} usable points, got {got}")]
    FitInsufficient { needed: usize, got: usize },

    /// Abscissas of a rate fit are all identical.
    #[error("rate fit abscissas are degenerate")]
    DegenerateFit,
}

pub type Result<T> = std::result::Result<T, Error>;
