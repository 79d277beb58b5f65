//! Two-party protocol: state machine, correction tables, exhaustive branch
//! enumeration and seeded sampling.

mod branches;
mod config;
mod correction;
mod messages;
mod sampling;
mod session;

pub use branches::{enumerate_branches, enumerate_branches_with, BranchRecord};
pub use config::{Mode, ProtocolConfig};
pub use correction::{correction_by_parity, correction_for, CorrectionTable};
pub use messages::{
    BobOutcome, ClassicalMessage, MeasurementEvent, MessageKind, Party, ProtocolPhase, Transcript,
};
pub use sampling::{run_rng, run_sampled, RunRecord};
pub use session::{AliceReport, Recovery, Selector, Session};
