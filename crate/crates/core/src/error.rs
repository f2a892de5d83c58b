use thiserror::Error;

use crate::circuit::GateKind;

/// Errors raised by circuit construction, simulation and the classical pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{a} and {modulus} are not coprime (gcd = {gcd})")]
    NotCoprime { a: u64, modulus: u64, gcd: u64 },

    #[error("malformed gate: {0}")]
    MalformedGate(String),

    #[error("qubit index {index} out of range for a {width}-qubit circuit")]
    QubitOutOfRange { index: usize, width: usize },

    #[error("classical bit index {index} out of range for {width} classical bits")]
    ClbitOutOfRange { index: usize, width: usize },

    #[error("circuit is not unitary: {0}")]
    NonUnitary(String),

    #[error("cannot add {added} control(s) to a {kind:?} gate: the gate set allows at most two controls")]
    ControlOverflow { kind: GateKind, added: usize },

    #[error("state has {actual} qubits but the circuit expects {expected}")]
    WidthMismatch { expected: usize, actual: usize },

    #[error("{requested} qubits exceeds the simulator capacity of {max}")]
    CapacityExceeded { requested: usize, max: usize },

    #[error("numerical corruption: {0}")]
    NumericalCorruption(String),

    #[error("order finding exhausted {attempts} attempts without a factor of {modulus}")]
    AttemptsExhausted { modulus: u64, attempts: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
