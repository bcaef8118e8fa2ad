use crate::padic::{Norm, PadicError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("pole: {0}")]
    Pole(String),
    #[error("no convergence after {iterations} iterations: {what}")]
    NoConvergence { what: String, iterations: usize },
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("not a fixed point (residual {residual})")]
    NotAFixedPoint { residual: Norm },
    #[error("no square-root branch lands in the target ball: {0}")]
    Branch(String),
    #[error("orbit left the repeller domain at step {step}")]
    Escape { step: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("no placement satisfies the boundary equations: {0}")]
    NoValidPlacement(String),
    #[error("partition function vanishes at working precision")]
    ZeroPartitionFunction,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 1 domain error, 2 precision exhaustion,
    /// 3 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Padic(PadicError::PrecisionExhausted { .. })
            | Error::NoConvergence { .. }
            | Error::Branch(_) => 2,
            Error::Verification(_)
            | Error::Consistency(_)
            | Error::NoValidPlacement(_)
            | Error::NotAFixedPoint { .. } => 3,
            _ => 1,
        }
    }
}
