use thiserror::Error;

use crate::protocol::ProtocolPhase;
use crate::statevec::{MeasurementBasis, QubitLabel};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit label {0} appears more than once")]
    DuplicateLabel(QubitLabel),

    #[error("qubit label {0} is not in the register")]
    UnknownLabel(QubitLabel),

    #[error("the path degree of freedom exists only for particle P1")]
    InvalidLabel,

    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("non-finite amplitude at index {index}")]
    NonFinite { index: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary: max |U†U - I| = {deviation:e}")]
    NonUnitary { deviation: f64 },

    #[error("norm drifted to {norm_sqr} after gate application")]
    NormDrift { norm_sqr: f64 },

    #[error("basis {basis:?} cannot measure qubit {qubit}")]
    InvalidBasis {
        qubit: QubitLabel,
        basis: MeasurementBasis,
    },

    #[error("branch has probability {probability:e}, below the zero-probability cutoff")]
    ZeroProbabilityBranch { probability: f64 },

    #[error("registers differ between operands")]
    RegisterMismatch,

    #[error("keep set for partial trace is empty")]
    EmptyKeepSet,

    #[error("zero vector has no canonical phase")]
    ZeroVector,

    #[error("qubit {0} is entangled with the rest of the register")]
    NotProduct(QubitLabel),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(&'static str),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{operation} is not allowed in phase {phase:?}")]
    ProtocolOrderViolation {
        operation: &'static str,
        phase: ProtocolPhase,
    },

    #[error("fidelity denominator {denominator:e} underflows; branch does not occur")]
    DegenerateBranch { denominator: f64 },

    #[error("closed-form average fidelity assumes a real input state (phase = {phase})")]
    FormulaDomain { phase: f64 },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
