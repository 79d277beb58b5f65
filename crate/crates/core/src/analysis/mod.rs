//! Closed-form fidelities and their cross-validation against the simulator,
//! parameter sweeps, interception analysis and the full verification suite.

mod eve;
mod formulas;
mod report;
mod sweep;
mod verify;

pub use eve::{eve_information, premature_measurement_leak, probe_inputs};
pub use formulas::{
    alice_conditional_state, alice_outcome_probability, average_fidelity_formula,
    bob_joint_state_after_cnot, bob_target_state, fidelity_case,
};
pub use report::{cross_validate, BranchFidelity, FidelityReport};
pub use sweep::{amplitude_axis, probability_axis, sweep, SweepGrid};
pub use verify::{verify_grid, verify_point, VerifyFailure, VerifySummary};
