use alloc::string::String;

use crate::expr::ExprError;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("metric is not symmetric positive definite: {0}")]
    SingularMetric(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),

    #[error("scalar curvature {0} is zero within tolerance")]
    ZeroScalarCurvature(f64),

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("Ricci tensor vanishes, the 1-form system is vacuous")]
    DegenerateRicci,

    #[error("scalar curvature {given} differs from trace of Ricci {trace}")]
    InconsistentScalarCurvature { given: f64, trace: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    pub(crate) fn dim(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { expected, found }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::dim(expected, found))
    }
}
