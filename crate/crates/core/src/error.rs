use alloc::string::String;
use core::fmt;

use crate::C64;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the numerical core.
///
/// Variants split into two families: [`Error::is_numerical`] is true when the
/// inputs were valid but a computation could not reach its accuracy contract.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    Domain(String),
    /// The saddle-point formula degenerates at θ = 0.
    DegenerateAngle,
    /// A branched square root was started on its cut `[0, +∞)`.
    BranchCut { re: f64, im: f64 },
    /// An integration path passes within `distance` of a branch point.
    BranchProximity { distance: f64 },
    /// Invalid discretisation, grid or run configuration.
    Config(String),
    /// An operation precondition was not met.
    Precondition(String),
    /// The caller asked for something the theory rules out.
    Refused(String),
    /// Adaptive quadrature ran out of subdivisions.
    Convergence { estimate: C64, error_estimate: f64 },
    /// The dense eigensolver did not converge.
    Solver(String),
    /// A retained eigenpair violates the residual threshold.
    Accuracy { index: usize, residual: f64 },
    /// The requested quantity lies below what double precision resolves.
    PrecisionLimited(String),
    /// A finite-difference or similar estimate came out non-finite or unstable.
    NumericalDegeneracy(String),
}

impl Error {
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::Solver(_)
                | Error::Accuracy { .. }
                | Error::PrecisionLimited(_)
                | Error::NumericalDegeneracy(_)
                | Error::BranchProximity { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::DegenerateAngle => {
                write!(f, "degenerate angle: the saddle point is undefined at theta = 0")
            }
            Error::BranchCut { re, im } => {
                write!(f, "branch cut: cannot start a square-root branch at {re}{im:+}i on [0, +inf)")
            }
            Error::BranchProximity { distance } => {
                write!(f, "integration path passes within {distance:e} of a branch point")
            }
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition failed: {msg}"),
            Error::Refused(msg) => write!(f, "refused: {msg}"),
            Error::Convergence {
                estimate,
                error_estimate,
            } => write!(
                f,
                "quadrature did not converge: best estimate {estimate} with error {error_estimate:e}"
            ),
            Error::Solver(msg) => write!(f, "eigensolver failure: {msg}"),
            Error::Accuracy { index, residual } => write!(
                f,
                "eigenpair {index} has residual {residual:e}, above the accuracy threshold"
            ),
            Error::PrecisionLimited(msg) => write!(f, "precision limited: {msg}"),
            Error::NumericalDegeneracy(msg) => write!(f, "numerical degeneracy: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
