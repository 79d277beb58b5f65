//! Exact state-vector simulation of single-particle path-spin state transfer.
//!
//! A spin-1/2 particle passes a tunable beam splitter and a spin flipper in one
//! arm, which entangles its path with its spin. Alice couples that particle to
//! an auxiliary spin and to the spin carrying an unknown qubit, sends it to Bob,
//! and announces two measurement bits. Bob closes the interferometer, copies the
//! particle's spin onto his own spin, measures, and applies a Pauli correction.
//!
//! The crate is organised as
//!
//! * [`statevec`]: dense five-qubit state vectors, projective measurement,
//!   fidelities and reduced density matrices;
//! * [`gates`]: the beam splitters, spin flipper, CNOT and Pauli matrices;
//! * [`protocol`]: the two-party state machine, branch enumeration and
//!   seeded Monte Carlo runs;
//! * [`analysis`]: closed-form fidelities, cross-validation, sweeps, the
//!   interception analysis and the verification suite.
//!
//! All numerics are generic over [`Scalar`]; the `*64` aliases below fix
//! the scalar to `f64`, which is what the command-line tool uses.

pub mod analysis;
pub mod error;
pub mod gates;
pub mod protocol;
pub mod scalar;
pub mod statevec;

pub use error::{Error, Result};
pub use gates::{Gate, Pauli, SplitterParams};
pub use protocol::{
    BobOutcome, BranchRecord, ClassicalMessage, CorrectionTable, Mode, ProtocolConfig,
    ProtocolPhase, RunRecord, Selector, Session,
};
pub use scalar::Scalar;
pub use statevec::{Amplitude, DensityMatrix, MeasurementBasis, QubitLabel, StateVector};

pub type StateVector64 = StateVector<f64>;
pub type Gate64 = Gate<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type ProtocolConfig64 = ProtocolConfig<f64>;
pub type Session64 = Session<f64>;
pub type BranchRecord64 = BranchRecord<f64>;
pub type RunRecord64 = RunRecord<f64>;
pub type FidelityReport64 = analysis::FidelityReport<f64>;
pub type SweepGrid64 = analysis::SweepGrid<f64>;

pub type StateVector32 = StateVector<f32>;
pub type ProtocolConfig32 = ProtocolConfig<f32>;
