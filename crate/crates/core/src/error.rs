use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PbError {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("malformed expression at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("operator degree {degree} exceeds the limit of {limit}")]
    DegreeGuard { degree: usize, limit: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("moment order {order} exceeds the cap of {cap}")]
    MomentCap { order: usize, cap: usize },

    #[error("numerical consistency error: {0}")]
    NumericalConsistency(String),

    #[error("singular parameter: {0}")]
    SingularParameter(String),

    #[error("parameter guard violated: {0}")]
    Guard(String),

    #[error("assumption violated: {0}")]
    AssumptionViolation(String),

    #[error("operator is not first order: {0}")]
    NotFirstOrder(String),
}

pub type Result<T, E = PbError> = std::result::Result<T, E>;

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(PbError::Dimension { expected, found });
    }
    Ok(())
}
