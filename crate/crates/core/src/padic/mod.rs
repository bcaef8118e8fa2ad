//! Finite-precision p-adic numbers.
//!
//! A value is stored as `p^v * u` where `u` is an integer in `[1, p^N)`
//! coprime to `p`. Multiplicative operations are exact on valuations;
//! additive ones realign and report catastrophic cancellation.

mod ball;
mod context;
mod literal;
mod norm;
mod number;
mod serde_impl;
mod series;
mod sqrt;

pub use ball::Ball;
pub use context::{PrimeContext, DEFAULT_GUARD, DEFAULT_PRECISION};
pub use literal::PadicLiteral;
pub use norm::Norm;
pub use number::PadicNumber;
pub use sqrt::tonelli_shanks;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: {cancelled} of {precision} digits cancelled")]
    PrecisionExhausted { cancelled: u32, precision: u32 },
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("not a square in Q_p")]
    NotASquare,
    #[error("zero input")]
    ZeroInput,
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("need precision > guard >= 1, got precision {precision}, guard {guard}")]
    InvalidPrecision { precision: u32, guard: u32 },
    #[error("operands belong to different prime contexts")]
    ContextMismatch,
    #[error("digit {digit} out of range for p = {p}")]
    InvalidDigit { digit: u64, p: u64 },
    #[error("cannot parse p-adic literal: {0}")]
    Parse(String),
}
