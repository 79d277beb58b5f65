use rand::{Rng, RngCore};

use super::{
    BobOutcome, ClassicalMessage, CorrectionTable, MeasurementEvent, Party, ProtocolConfig,
    ProtocolPhase, Transcript,
};
use crate::error::{Error, Result};
use crate::gates::{self, Pauli};
use crate::scalar::Scalar;
use crate::statevec::{ket, Amplitude, DensityMatrix, MeasurementBasis, QubitLabel, StateVector};

use ProtocolPhase as P;

/// Where a measurement outcome comes from: fixed by the caller (for
/// exhaustive enumeration) or drawn from the Born distribution.
pub enum Selector<'r, O> {
    Forced(O),
    Sample(&'r mut dyn RngCore),
}

/// Alice's announced bits and their joint probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AliceReport<T> {
    pub m2: u8,
    pub ma: u8,
    pub probability: T,
}

/// Result of the loss-recovery path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Recovery<T> {
    pub aux_outcome: u8,
    pub probability: T,
    pub recovered: [Amplitude<T>; 2],
}

/// One protocol run as a state machine. Each step checks the current phase
/// and fails with [`Error::ProtocolOrderViolation`] when called out of turn.
#[derive(Clone, Debug)]
pub struct Session<T: Scalar> {
    config: ProtocolConfig<T>,
    phase: ProtocolPhase,
    state: StateVector<T>,
    transcript: Transcript,
    alice: Option<AliceReport<T>>,
    bob: Option<(BobOutcome, T)>,
    correction: Option<Pauli>,
    output: Option<[Amplitude<T>; 2]>,
    eve_view: Option<DensityMatrix<T>>,
}

/// Draws a bit with `P(0) = p0`, never returning an outcome whose
/// probability is below the zero-branch cutoff.
fn draw<T: Scalar>(rng: &mut dyn RngCore, p0: T, p1: T) -> u8 {
    if p0 < T::ZERO_PROB {
        return 1;
    }
    if p1 < T::ZERO_PROB {
        return 0;
    }
    let u: f64 = rng.random();
    if u < (p0 / (p0 + p1)).as_f64() {
        0
    } else {
        1
    }
}

impl<T: Scalar> Session<T> {
    /// Fresh run: particle 1 in the transmitted port with spin up, the input
    /// qubit on particle 2, and the auxiliary and Bob's spins up.
    pub fn new(config: ProtocolConfig<T>) -> Result<Self> {
        let state = StateVector::prepare_product(&[
            (QubitLabel::P1_PATH, ket(1)),
            (QubitLabel::P1_SPIN, ket(0)),
            (QubitLabel::P2_SPIN, config.input_state()),
            (QubitLabel::AUX_SPIN, ket(0)),
            (QubitLabel::P3_SPIN, ket(0)),
        ])?;
        Ok(Self {
            config,
            phase: P::Initial,
            state,
            transcript: Transcript {
                phases: vec![P::Initial],
                ..Default::default()
            },
            alice: None,
            bob: None,
            correction: None,
            output: None,
            eve_view: None,
        })
    }

    /// Runs Alice's preparation up to the point where particle 1 is ready to
    /// leave.
    pub fn prepare(config: ProtocolConfig<T>) -> Result<Self> {
        let mut s = Self::new(config)?;
        s.apply_bs1()?;
        s.apply_spin_flip()?;
        s.apply_aux_cnot()?;
        s.apply_input_cnot()?;
        Ok(s)
    }

    pub fn config(&self) -> &ProtocolConfig<T> {
        &self.config
    }

    pub fn phase(&self) -> ProtocolPhase {
        self.phase
    }

    pub fn state(&self) -> &StateVector<T> {
        &self.state
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn alice(&self) -> Option<AliceReport<T>> {
        self.alice
    }

    pub fn bob(&self) -> Option<(BobOutcome, T)> {
        self.bob
    }

    pub fn correction(&self) -> Option<Pauli> {
        self.correction
    }

    pub fn output(&self) -> Option<[Amplitude<T>; 2]> {
        self.output
    }

    /// Eve's (path, spin) state of particle 1, if it was intercepted.
    pub fn eve_view(&self) -> Option<&DensityMatrix<T>> {
        self.eve_view.as_ref()
    }

    fn require(&self, operation: &'static str, allowed: ProtocolPhase) -> Result<()> {
        if self.phase == allowed {
            Ok(())
        } else {
            Err(Error::ProtocolOrderViolation {
                operation,
                phase: self.phase,
            })
        }
    }

    fn enter(&mut self, phase: ProtocolPhase) {
        self.phase = phase;
        self.transcript.phases.push(phase);
    }

    fn gate_step(
        &mut self,
        operation: &'static str,
        from: ProtocolPhase,
        to: ProtocolPhase,
        targets: &[QubitLabel],
        gate: &gates::Gate<T>,
    ) -> Result<()> {
        self.require(operation, from)?;
        self.state = self.state.apply_gate(targets, gate)?;
        self.enter(to);
        Ok(())
    }

    pub fn apply_bs1(&mut self) -> Result<()> {
        let bs = gates::bs_general(self.config.splitter());
        self.gate_step(
            "beam splitter 1",
            P::Initial,
            P::AfterBS1,
            &[QubitLabel::P1_PATH],
            &bs,
        )
    }

    pub fn apply_spin_flip(&mut self) -> Result<()> {
        self.gate_step(
            "spin flip",
            P::AfterBS1,
            P::AfterSpinFlip,
            &[QubitLabel::P1_PATH, QubitLabel::P1_SPIN],
            &gates::spin_flipper(),
        )
    }

    pub fn apply_aux_cnot(&mut self) -> Result<()> {
        self.gate_step(
            "auxiliary cnot",
            P::AfterSpinFlip,
            P::AfterAuxCnot,
            &[QubitLabel::P1_SPIN, QubitLabel::AUX_SPIN],
            &gates::cnot(),
        )
    }

    pub fn apply_input_cnot(&mut self) -> Result<()> {
        self.gate_step(
            "input cnot",
            P::AfterAuxCnot,
            P::AfterInputCnot,
            &[QubitLabel::P1_SPIN, QubitLabel::P2_SPIN],
            &gates::cnot(),
        )
    }

    /// Sends particle 1. On loss or interception Bob reports the loss; an
    /// interceptor receives particle 1's reduced (path, spin) state.
    pub fn transmit(&mut self, lose_particle: bool, intercept: bool) -> Result<ProtocolPhase> {
        self.require("transmit", P::AfterInputCnot)?;
        self.enter(P::ParticleInTransit);
        if intercept {
            self.eve_view = Some(
                self.state
                    .reduced_density(&[QubitLabel::P1_PATH, QubitLabel::P1_SPIN])?,
            );
        }
        if lose_particle || intercept {
            self.transcript.messages.push(ClassicalMessage::loss());
            self.enter(P::ParticleLost);
        } else {
            self.transcript.messages.push(ClassicalMessage::receipt());
            self.enter(P::BobConfirmed);
        }
        Ok(self.phase)
    }

    fn measure(
        &mut self,
        party: Party,
        qubit: QubitLabel,
        basis: MeasurementBasis,
        selector: &mut Selector<'_, u8>,
    ) -> Result<(u8, T)> {
        let outcome = match selector {
            Selector::Forced(o) => *o & 1,
            Selector::Sample(rng) => {
                let p0 = self.state.outcome_probability(qubit, basis, 0)?;
                let p1 = self.state.outcome_probability(qubit, basis, 1)?;
                draw(&mut **rng, p0, p1)
            }
        };
        let (p, post) = self.state.project(qubit, basis, outcome)?;
        self.state = post;
        self.transcript.measurements.push(MeasurementEvent::new(
            party,
            qubit,
            basis,
            outcome,
            p.as_f64(),
        ));
        Ok((outcome, p))
    }

    /// Alice measures the input spin in z and the auxiliary spin in x, then
    /// announces both bits.
    pub fn alice_measure(&mut self, selector: Selector<'_, (u8, u8)>) -> Result<AliceReport<T>> {
        self.require("alice_measure", P::BobConfirmed)?;
        let (mut s2, mut sa) = match selector {
            Selector::Forced((m2, ma)) => (Selector::Forced(m2), Selector::Forced(ma)),
            Selector::Sample(rng) => {
                // Both draws share the caller's generator, one after the other.
                let (b2, ba) = self.sample_alice(rng)?;
                (Selector::Forced(b2), Selector::Forced(ba))
            }
        };
        let (m2, p2) = self.measure(
            Party::Alice,
            QubitLabel::P2_SPIN,
            MeasurementBasis::Z,
            &mut s2,
        )?;
        let (ma, pa) = self.measure(
            Party::Alice,
            QubitLabel::AUX_SPIN,
            MeasurementBasis::X,
            &mut sa,
        )?;
        let report = AliceReport {
            m2,
            ma,
            probability: p2 * pa,
        };
        self.alice = Some(report);
        self.transcript
            .messages
            .push(ClassicalMessage::alice_outcomes(m2, ma));
        self.enter(P::AliceMeasured);
        Ok(report)
    }

    fn sample_alice(&self, rng: &mut dyn RngCore) -> Result<(u8, u8)> {
        let s = &self.state;
        let p0 = s.outcome_probability(QubitLabel::P2_SPIN, MeasurementBasis::Z, 0)?;
        let p1 = s.outcome_probability(QubitLabel::P2_SPIN, MeasurementBasis::Z, 1)?;
        let m2 = draw(rng, p0, p1);
        let (_, post) = s.project(QubitLabel::P2_SPIN, MeasurementBasis::Z, m2)?;
        let q0 = post.outcome_probability(QubitLabel::AUX_SPIN, MeasurementBasis::X, 0)?;
        let q1 = post.outcome_probability(QubitLabel::AUX_SPIN, MeasurementBasis::X, 1)?;
        Ok((m2, draw(rng, q0, q1)))
    }

    pub fn bob_beam_splitter(&mut self) -> Result<()> {
        self.gate_step(
            "bob beam splitter",
            P::AliceMeasured,
            P::BobBS2Done,
            &[QubitLabel::P1_PATH],
            &gates::bs_5050(),
        )
    }

    /// Copies particle 1's spin onto Bob's spin (control particle 1).
    pub fn bob_cnot(&mut self) -> Result<()> {
        self.gate_step(
            "bob cnot",
            P::BobBS2Done,
            P::BobCnotDone,
            &[QubitLabel::P1_SPIN, QubitLabel::P3_SPIN],
            &gates::cnot(),
        )
    }

    pub fn bob_receive_and_process(&mut self) -> Result<()> {
        self.bob_beam_splitter()?;
        self.bob_cnot()
    }

    /// Which-port measurement on particle 1 followed by its x-spin.
    pub fn bob_measure(&mut self, selector: Selector<'_, BobOutcome>) -> Result<(BobOutcome, T)> {
        self.require("bob_measure", P::BobCnotDone)?;
        let (mut sp, mut ss) = match selector {
            Selector::Forced(b) => (Selector::Forced(b.path_bit), Selector::Forced(b.spin_bit)),
            Selector::Sample(rng) => {
                let s = &self.state;
                let p0 = s.outcome_probability(QubitLabel::P1_PATH, MeasurementBasis::PathAB, 0)?;
                let p1 = s.outcome_probability(QubitLabel::P1_PATH, MeasurementBasis::PathAB, 1)?;
                let path = draw(rng, p0, p1);
                let (_, post) = s.project(QubitLabel::P1_PATH, MeasurementBasis::PathAB, path)?;
                let q0 = post.outcome_probability(QubitLabel::P1_SPIN, MeasurementBasis::X, 0)?;
                let q1 = post.outcome_probability(QubitLabel::P1_SPIN, MeasurementBasis::X, 1)?;
                (Selector::Forced(path), Selector::Forced(draw(rng, q0, q1)))
            }
        };
        let (path, pp) = self.measure(
            Party::Bob,
            QubitLabel::P1_PATH,
            MeasurementBasis::PathAB,
            &mut sp,
        )?;
        let (spin, ps) = self.measure(
            Party::Bob,
            QubitLabel::P1_SPIN,
            MeasurementBasis::X,
            &mut ss,
        )?;
        let outcome = (BobOutcome::new(path, spin), pp * ps);
        self.bob = Some(outcome);
        self.enter(P::BobMeasured);
        Ok(outcome)
    }

    /// Applies the Pauli selected by `table` to Bob's spin and returns the
    /// delivered qubit.
    pub fn apply_correction(&mut self, table: &CorrectionTable) -> Result<[Amplitude<T>; 2]> {
        self.require("apply_correction", P::BobMeasured)?;
        let (alice, (bob, _)) = match (self.alice, self.bob) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Internal("measurement record missing".into())),
        };
        let pauli = table.lookup(alice.m2, alice.ma, bob);
        self.state = self
            .state
            .apply_gate(&[QubitLabel::P3_SPIN], &gates::pauli(pauli))?;
        let out = self.state.qubit_state(QubitLabel::P3_SPIN)?;
        self.correction = Some(pauli);
        self.output = Some(out);
        self.enter(P::Corrected);
        Ok(out)
    }

    /// After a reported loss, Alice measures the auxiliary spin in z and
    /// undoes the bit flip on particle 2 when it reads `|1⟩`.
    pub fn recover_after_loss(&mut self, selector: Selector<'_, u8>) -> Result<Recovery<T>> {
        self.require("recover_after_loss", P::ParticleLost)?;
        let mut sel = selector;
        let (aux, p) = self.measure(
            Party::Alice,
            QubitLabel::AUX_SPIN,
            MeasurementBasis::Z,
            &mut sel,
        )?;
        if aux == 1 {
            self.state = self
                .state
                .apply_gate(&[QubitLabel::P2_SPIN], &gates::pauli(Pauli::X))?;
        }
        let recovered = self.state.qubit_state(QubitLabel::P2_SPIN)?;
        self.enter(P::Recovered);
        Ok(Recovery {
            aux_outcome: aux,
            probability: p,
            recovered,
        })
    }

    /// Drives a confirmed delivery to completion with the given selectors.
    pub fn complete(
        &mut self,
        alice: Selector<'_, (u8, u8)>,
        bob: Selector<'_, BobOutcome>,
        table: &CorrectionTable,
    ) -> Result<[Amplitude<T>; 2]> {
        self.alice_measure(alice)?;
        self.bob_receive_and_process()?;
        self.bob_measure(bob)?;
        self.apply_correction(table)
    }
}
