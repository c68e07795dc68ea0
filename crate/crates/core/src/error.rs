use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial has no coefficients")]
    Empty,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("degree {got} is below the required minimum {min}")]
    DegreeTooLow { got: usize, min: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("index {k} out of range for {len} values")]
    OutOfRange { k: usize, len: usize },
    #[error("deflation point must be nonzero")]
    ZeroDeflationPoint,
    #[error("deflation point is not a root: |f(zeta)| = {residual:e} exceeds {threshold:e}")]
    ResidualTooLarge { residual: f64, threshold: f64 },
    #[error("root finder did not converge after {iterations} iterations (worst scaled residual {worst_residual:e})")]
    NonConvergence { iterations: usize, worst_residual: f64 },
    #[error("fewer than two distinct roots: every epsilon keeps the balls disjoint")]
    SingleCluster,
    #[error("polynomial is not a pure power a_n z^n")]
    NotPurePower,
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter { name, value, reason }
    }
}
