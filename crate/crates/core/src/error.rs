use alloc::vec::Vec;
use core::fmt;

/// Which neighbour bound of the Temple inequality was violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Rayleigh quotient not above `μ_{n-1}`.
    Mu,
    /// Rayleigh quotient not below `ν_{n+1}`.
    Nu,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Kummer's `c` parameter is a non-positive integer.
    InvalidC { c: f64 },
    /// A series hit its term cap before meeting the stopping rule.
    NonConvergence { terms: usize },
    /// The Neumann/Robin coefficient formula divides by (numerically) zero.
    DegenerateDenominator { m: u32, n: u32, b: f64 },
    /// Cholesky of the Gram matrix failed at this leading minor (1-based).
    NotPositiveDefinite { minor: usize },
    /// The Temple quotient needs `μ < ρ < ν`.
    PreconditionViolated { side: Side, rho: f64, bound: f64 },
    /// A finite-element integral was not finite.
    QuadratureBreakdown { element: usize },
    /// Eigenpair `index` (0-based) did not reach the residual target.
    ConvergenceFailure { index: usize, residual: f64 },
    /// The determinant scan of window `window` saw the wrong number of sign changes.
    RootNotIsolated {
        window: u32,
        sign_changes: usize,
        profile: Vec<f64>,
    },
    /// Argument outside an operation's documented domain.
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidC { c } => {
                write!(f, "kummer parameter c = {c} is a non-positive integer")
            }
            Error::NonConvergence { terms } => {
                write!(f, "series did not converge within {terms} terms")
            }
            Error::DegenerateDenominator { m, n, b } => write!(
                f,
                "boundary coefficient denominator vanishes for m = {m}, n = {n}, b = {b}"
            ),
            Error::NotPositiveDefinite { minor } => {
                write!(
                    f,
                    "gram matrix not positive definite (leading minor {minor})"
                )
            }
            Error::PreconditionViolated { side, rho, bound } => match side {
                Side::Mu => write!(
                    f,
                    "temple precondition violated: rho = {rho} <= mu = {bound}"
                ),
                Side::Nu => write!(
                    f,
                    "temple precondition violated: rho = {rho} >= nu = {bound}"
                ),
            },
            Error::QuadratureBreakdown { element } => {
                write!(f, "non-finite element integral on element {element}")
            }
            Error::ConvergenceFailure { index, residual } => write!(
                f,
                "eigenpair {index} failed to converge (residual {residual:e})"
            ),
            Error::RootNotIsolated {
                window,
                sign_changes,
                ..
            } => write!(
                f,
                "determinant window {window} has {sign_changes} sign changes, expected 1"
            ),
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
        }
    }
}

impl core::error::Error for Error {}
