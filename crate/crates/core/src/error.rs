use thiserror::Error;

/// Errors produced by the protocol model and the attack analyses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("key value {k} is outside Z_(2^{n})")]
    KeyOutOfRange { k: u64, n: u32 },

    #[error("length mismatch: expected at most {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("resolution mismatch: key uses n = {key}, state uses n = {state}")]
    ResolutionMismatch { key: u32, state: u32 },

    #[error("outcome (T0z = {zeros_z}, T0x = {zeros_x}) has zero probability")]
    ImpossibleOutcome { zeros_z: u32, zeros_x: u32 },

    #[error("Jacobi diagonalization did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("not a valid density operator: {0}")]
    InvalidDensity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
