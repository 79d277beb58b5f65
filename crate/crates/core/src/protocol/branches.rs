use serde::Serialize;

use super::{BobOutcome, CorrectionTable, ProtocolConfig, Selector, Session};
use crate::error::{Error, Result};
use crate::gates::Pauli;
use crate::scalar::Scalar;
use crate::statevec::{qubit_fidelity, Amplitude};

/// One complete measurement branch. Branches that cannot occur carry
/// probability zero and no output state or fidelity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchRecord<T> {
    pub m2: u8,
    pub ma: u8,
    pub bob: BobOutcome,
    pub probability: T,
    pub correction: Pauli,
    #[serde(skip)]
    pub output_state: Option<[Amplitude<T>; 2]>,
    pub fidelity: Option<T>,
}

impl<T: Scalar> BranchRecord<T> {
    pub(crate) fn from_session(s: &Session<T>) -> Result<Self> {
        let (alice, (bob, p_bob), correction, out) =
            match (s.alice(), s.bob(), s.correction(), s.output()) {
                (Some(a), Some(b), Some(c), Some(o)) => (a, b, c, o),
                _ => return Err(Error::Internal("run not completed".into())),
            };
        Ok(Self {
            m2: alice.m2,
            ma: alice.ma,
            bob,
            probability: alice.probability * p_bob,
            correction,
            output_state: Some(out),
            fidelity: Some(qubit_fidelity(&s.config().input_state(), &out)),
        })
    }

    /// Stable position of this branch in the 16-branch ordering.
    pub fn id(&self) -> usize {
        ((self.m2 as usize) << 3)
            | ((self.ma as usize) << 2)
            | ((self.bob.path_bit as usize) << 1)
            | self.bob.spin_bit as usize
    }
}

/// All 16 branches with the standard correction table.
pub fn enumerate_branches<T: Scalar>(config: &ProtocolConfig<T>) -> Result<Vec<BranchRecord<T>>> {
    enumerate_branches_with(config, &CorrectionTable::STANDARD)
}

/// Exhaustive forced-outcome traversal, ordered by (m2, ma, path, spin).
pub fn enumerate_branches_with<T: Scalar>(
    config: &ProtocolConfig<T>,
    table: &CorrectionTable,
) -> Result<Vec<BranchRecord<T>>> {
    let mut confirmed = Session::prepare(config.clone())?;
    confirmed.transmit(false, false)?;

    let mut records = Vec::with_capacity(16);
    for m2 in 0..2u8 {
        for ma in 0..2u8 {
            let mut after_alice = confirmed.clone();
            match after_alice.alice_measure(Selector::Forced((m2, ma))) {
                Ok(_) => {}
                Err(Error::ZeroProbabilityBranch { .. }) => {
                    records.extend(BobOutcome::all().into_iter().map(|bob| BranchRecord {
                        m2,
                        ma,
                        bob,
                        probability: T::zero(),
                        correction: table.lookup(m2, ma, bob),
                        output_state: None,
                        fidelity: None,
                    }));
                    continue;
                }
                Err(e) => return Err(e),
            }
            after_alice.bob_receive_and_process()?;
            for bob in BobOutcome::all() {
                let mut run = after_alice.clone();
                run.bob_measure(Selector::Forced(bob))
                    .map_err(|e| match e {
                        Error::ZeroProbabilityBranch { probability } => Error::Internal(format!(
                            "Bob outcome {bob} has probability {probability:e} in a live branch"
                        )),
                        other => other,
                    })?;
                run.apply_correction(table)?;
                records.push(BranchRecord::from_session(&run)?);
            }
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_splitter_gives_unit_fidelity_everywhere() {
        let cfg = ProtocolConfig::new(std::f64::consts::FRAC_1_SQRT_2, 0.6).unwrap();
        let branches = enumerate_branches(&cfg).unwrap();
        assert_eq!(branches.len(), 16);
        for b in &branches {
            assert!((b.fidelity.unwrap() - 1.0).abs() < 1e-10, "{b:?}");
        }
    }

    #[test]
    fn first_branch_probability() {
        let cfg = ProtocolConfig::<f64>::new(0.6, 0.8).unwrap();
        let branches = enumerate_branches(&cfg).unwrap();
        // Alice (0,0) weight (α²γ² + β²δ²)/2, times 1/4 for Bob's outcome.
        let expected: f64 = (0.36 * 0.64 + 0.64 * 0.36) / 2.0 / 4.0;
        assert!((expected - 0.0576).abs() < 1e-15);
        assert!((branches[0].probability - expected).abs() < 1e-12);
        assert_eq!(branches[0].id(), 0);
        assert_eq!(branches[15].id(), 15);
    }

    #[test]
    fn weighted_fidelity_matches_average_formula() {
        for (alpha, gamma) in [(0.6, 0.8), (0.2, 0.3), (0.9, 0.5)] {
            let cfg = ProtocolConfig::new(alpha, gamma).unwrap();
            let (beta, delta) = (cfg.beta(), cfg.delta());
            let sum: f64 = enumerate_branches(&cfg)
                .unwrap()
                .iter()
                .filter_map(|b| b.fidelity.map(|f| f * b.probability))
                .sum();
            let g2 = gamma * gamma;
            let d2 = delta * delta;
            let formula = g2 * g2 + d2 * d2 + 4.0 * alpha * beta * g2 * d2;
            assert!(
                (sum - formula).abs() < 1e-12,
                "{alpha} {gamma}: {sum} vs {formula}"
            );
        }
    }

    #[test]
    fn impossible_branches_are_recorded_with_zero_weight() {
        let cfg = ProtocolConfig::new(1.0, 1.0).unwrap();
        let branches = enumerate_branches(&cfg).unwrap();
        let dead: Vec<_> = branches.iter().filter(|b| b.fidelity.is_none()).collect();
        assert_eq!(dead.len(), 8);
        assert!(dead.iter().all(|b| b.m2 == 1 && b.probability == 0.0));
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
