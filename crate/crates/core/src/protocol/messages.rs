use std::fmt;

use serde::Serialize;

use crate::statevec::{MeasurementBasis, QubitLabel};

/// Stages of a protocol run, in the order they occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ProtocolPhase {
    Initial,
    AfterBS1,
    AfterSpinFlip,
    AfterAuxCnot,
    AfterInputCnot,
    ParticleInTransit,
    BobConfirmed,
    ParticleLost,
    AliceMeasured,
    BobBS2Done,
    BobCnotDone,
    BobMeasured,
    Corrected,
    Recovered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MessageKind {
    ReceiptConfirm,
    LossReport,
    AliceOutcomes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Party {
    Alice,
    Bob,
}

/// Classical bits exchanged between the parties. `m2` is the z-basis result
/// on the input spin, `ma` the x-basis result on the auxiliary spin; both are
/// present only on `AliceOutcomes`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalMessage {
    pub kind: MessageKind,
    pub from: Party,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m2: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ma: Option<u8>,
}

impl ClassicalMessage {
    pub fn receipt() -> Self {
        Self {
            kind: MessageKind::ReceiptConfirm,
            from: Party::Bob,
            m2: None,
            ma: None,
        }
    }

    pub fn loss() -> Self {
        Self {
            kind: MessageKind::LossReport,
            from: Party::Bob,
            m2: None,
            ma: None,
        }
    }

    pub fn alice_outcomes(m2: u8, ma: u8) -> Self {
        Self {
            kind: MessageKind::AliceOutcomes,
            from: Party::Alice,
            m2: Some(m2),
            ma: Some(ma),
        }
    }
}

/// Bob's which-port and x-spin results. Path bit 0 is port `a`, 1 is `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BobOutcome {
    pub path_bit: u8,
    pub spin_bit: u8,
}

impl BobOutcome {
    pub fn new(path_bit: u8, spin_bit: u8) -> Self {
        Self {
            path_bit: path_bit & 1,
            spin_bit: spin_bit & 1,
        }
    }

    /// All four outcomes: (a,0), (a,1), (b,0), (b,1).
    pub fn all() -> [BobOutcome; 4] {
        [
            Self::new(0, 0),
            Self::new(0, 1),
            Self::new(1, 0),
            Self::new(1, 1),
        ]
    }

    pub fn port(&self) -> char {
        if self.path_bit == 0 {
            'a'
        } else {
            'b'
        }
    }
}

impl fmt::Display for BobOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}>_p |{}_x>_s", self.port(), self.spin_bit)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasurementEvent {
    pub party: Party,
    pub qubit: String,
    pub basis: MeasurementBasis,
    pub outcome: u8,
    pub probability: f64,
}

impl MeasurementEvent {
    pub fn new(
        party: Party,
        qubit: QubitLabel,
        basis: MeasurementBasis,
        outcome: u8,
        probability: f64,
    ) -> Self {
        Self {
            party,
            qubit: qubit.to_string(),
            basis,
            outcome,
            probability,
        }
    }
}

/// Ordered record of one run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Transcript {
    pub phases: Vec<ProtocolPhase>,
    pub messages: Vec<ClassicalMessage>,
    pub measurements: Vec<MeasurementEvent>,
}
