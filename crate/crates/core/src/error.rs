use core::fmt;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    Domain(&'static str),
    /// The operation is not meaningful for the given input, e.g. asking a
    /// perfect reflector for a finite permittivity.
    Usage(&'static str),
    /// Adaptive quadrature or root search ran out of budget. Carries the best
    /// estimate and the error achieved so far.
    NonConvergence { estimate: f64, error: f64 },
    /// The vacuum term is attractive, so no finite stable thickness exists.
    Attractive,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
            Error::NonConvergence { estimate, error } => write!(
                f,
                "no convergence: best estimate {estimate:e}, achieved error {error:e}"
            ),
            Error::Attractive => write!(f, "attractive vacuum term: no stable thickness"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
