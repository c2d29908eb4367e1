use crate::calculus::CalculusError;
use crate::ring::RingError;

/// Failures of the hierarchy-level operations.
///
/// Identity failures carry a short label naming the identity that broke, so
/// a failing check can be traced without a debugger.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("potential depends on t")]
    NotStationary,
    #[error("the two forms of the level {0} equation disagree")]
    FormMismatch(u32),
    #[error("no tau_{index} of degree <= {bound} in t solves level {level}")]
    NoSolutionWithinBound { level: u32, index: u16, bound: u32 },
    #[error("tau_{index} is not determined: {free} free parameter(s) remain")]
    AmbiguousSolution { index: u16, free: usize },
    #[error("function does not solve the Schrodinger equation")]
    NotASolution,
    #[error("sigma violates the Riccati equation")]
    RiccatiViolation,
    #[error("cross-check failed: {0}")]
    CrossCheckFailure(String),
    #[error("identity failed: {0}")]
    IdentityFailure(String),
    #[error("differential equation violated: {0}")]
    PdeViolation(String),
    #[error("potential does not solve the stationary level {0} equation")]
    NotStationarySolution(u32),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("numerator is not homogeneous of degree {0}")]
    HomogeneityFailure(u32),
    #[error("degree bound violated: {0}")]
    DegreeViolation(String),
    #[error("entries lie outside the rational and single-exponential classes")]
    UnrecognizedExtension,
}

pub type Result<T> = std::result::Result<T, Error>;
