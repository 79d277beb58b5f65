use std::fmt;

use serde::Serialize;

use super::eve::eve_information;
use super::formulas::{
    alice_conditional_state, alice_outcome_probability, average_fidelity_formula,
    bob_joint_state_after_cnot, bob_target_state, fidelity_case,
};
use crate::error::{Error, Result};
use crate::protocol::{
    enumerate_branches_with, BobOutcome, CorrectionTable, ProtocolConfig, Selector, Session,
};
use crate::scalar::Scalar;
use crate::statevec::{
    ket, max_abs_diff, qubit_fidelity, MeasurementBasis, QubitLabel, StateVector,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifySummary {
    pub grid_points: usize,
    pub branches: usize,
    pub checks: usize,
}

impl fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} branches × {} grid points verified",
            self.branches, self.grid_points
        )
    }
}

/// First check that did not hold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyFailure {
    pub item: String,
    pub alpha: f64,
    pub gamma: f64,
    pub detail: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at alpha={}, gamma={}: {}",
            self.item, self.alpha, self.gamma, self.detail
        )
    }
}

struct Checker<'c, T: Scalar> {
    config: &'c ProtocolConfig<T>,
    tol: T,
    checks: usize,
}

impl<T: Scalar> Checker<'_, T> {
    fn fail(&self, item: impl Into<String>, detail: impl Into<String>) -> VerifyFailure {
        VerifyFailure {
            item: item.into(),
            alpha: self.config.alpha().as_f64(),
            gamma: self.config.gamma().as_f64(),
            detail: detail.into(),
        }
    }

    fn close(&mut self, item: &str, got: T, want: T) -> Result<(), VerifyFailure> {
        self.checks += 1;
        let gap = (got - want).abs();
        if gap > self.tol || gap.is_nan() {
            return Err(self.fail(item, format!("got {got}, expected {want} (|Δ| = {gap:e})")));
        }
        Ok(())
    }

    fn same_ray(
        &mut self,
        item: &str,
        got: &StateVector<T>,
        want: &StateVector<T>,
    ) -> Result<(), VerifyFailure> {
        self.checks += 1;
        let gap = got
            .phase_canonical()
            .and_then(|g| want.phase_canonical().and_then(|w| g.max_abs_diff(&w)))
            .map_err(|e| self.fail(item, e.to_string()))?;
        if gap > self.tol {
            return Err(self.fail(item, format!("state differs by {gap:e} after phase fixing")));
        }
        Ok(())
    }

    fn internal(&self, item: &str) -> impl Fn(Error) -> VerifyFailure + '_ {
        let item = item.to_string();
        move |e| self.fail(item.clone(), e.to_string())
    }
}

fn branch_name(m2: u8, ma: u8, bob: BobOutcome) -> String {
    format!(
        "branch (m2={m2}, ma={ma}, path={}, spin={})",
        bob.port(),
        bob.spin_bit
    )
}

/// Every check of the suite at one parameter point. Returns the number of
/// individual comparisons made.
pub fn verify_point<T: Scalar>(
    config: &ProtocolConfig<T>,
    tol: T,
    table: &CorrectionTable,
) -> Result<usize, VerifyFailure> {
    let mut ck = Checker {
        config,
        tol,
        checks: 0,
    };
    let quarter = T::of(0.25);

    let mut confirmed = Session::prepare(config.clone()).map_err(ck.internal("prepare"))?;
    confirmed
        .transmit(false, false)
        .map_err(ck.internal("transmit"))?;

    for m2 in 0..2u8 {
        for ma in 0..2u8 {
            let item = format!("Alice outcome (m2={m2}, ma={ma})");
            let want_p = alice_outcome_probability(m2, config);
            let mut s = confirmed.clone();
            match s.alice_measure(Selector::Forced((m2, ma))) {
                Ok(rep) => ck.close(&format!("{item} probability"), rep.probability, want_p)?,
                Err(Error::ZeroProbabilityBranch { probability }) => {
                    ck.close(&format!("{item} probability"), T::of(probability), want_p)?;
                    continue;
                }
                Err(e) => return Err(ck.fail(item, e.to_string())),
            }

            // Particle 1 carries the closed-form conditional state; the
            // measured spins sit in their eigenstates.
            let rest = StateVector::prepare_product(&[
                (QubitLabel::P2_SPIN, ket(m2)),
                (QubitLabel::AUX_SPIN, MeasurementBasis::X.vector(ma)),
                (QubitLabel::P3_SPIN, ket(0)),
            ])
            .map_err(ck.internal(&item))?;
            let want = alice_conditional_state(m2, ma, config)
                .and_then(|p1| p1.tensor(&rest))
                .map_err(ck.internal(&item))?;
            ck.same_ray(&format!("{item} conditional state"), s.state(), &want)?;

            s.bob_receive_and_process().map_err(ck.internal(&item))?;
            if m2 == 0 && ma == 0 {
                let rest = StateVector::prepare_product(&[
                    (QubitLabel::P2_SPIN, ket(0)),
                    (QubitLabel::AUX_SPIN, MeasurementBasis::X.vector(0)),
                ])
                .map_err(ck.internal("joint state after Bob's cnot"))?;
                let want = bob_joint_state_after_cnot(config)
                    .and_then(|j| j.tensor(&rest))
                    .map_err(ck.internal("joint state after Bob's cnot"))?;
                ck.checks += 1;
                let gap = max_abs_diff(s.state().amplitudes(), want.amplitudes());
                if gap > tol {
                    return Err(ck.fail(
                        "joint state after Bob's cnot",
                        format!("entrywise gap {gap:e}"),
                    ));
                }
            }

            for bob in BobOutcome::all() {
                let name = branch_name(m2, ma, bob);
                let mut run = s.clone();
                let (_, p) = run
                    .bob_measure(Selector::Forced(bob))
                    .map_err(ck.internal(&name))?;
                ck.close(&format!("{name} Bob probability"), p, quarter)?;
                let out = run.apply_correction(table).map_err(ck.internal(&name))?;
                let want = bob_target_state(m2, config).map_err(ck.internal(&name))?;
                let as_state = |v: [crate::Amplitude<T>; 2]| {
                    StateVector::from_amplitudes(vec![QubitLabel::P3_SPIN], v.to_vec())
                };
                let got = as_state(out).map_err(ck.internal(&name))?;
                let want_state = as_state(want).map_err(ck.internal(&name))?;
                ck.same_ray(&format!("{name} corrected state"), &got, &want_state)?;
                let fid = qubit_fidelity(&config.input_state(), &out);
                let want_f = fidelity_case(m2, config).map_err(ck.internal(&name))?;
                ck.close(&format!("{name} fidelity"), fid, want_f)?;
            }
        }
    }

    let branches = enumerate_branches_with(config, table).map_err(ck.internal("enumeration"))?;
    let total = branches.iter().fold(T::zero(), |a, b| a + b.probability);
    ck.close("total branch probability", total, T::one())?;
    if config.input_phase().is_zero() {
        let avg = branches
            .iter()
            .filter_map(|b| b.fidelity.map(|f| f * b.probability))
            .fold(T::zero(), |a, b| a + b);
        let want = average_fidelity_formula(config).map_err(ck.internal("average fidelity"))?;
        ck.close("average fidelity", avg, want)?;
    }

    // Interception: Eve holds diag(α², β²) on |1⟩_p|0⟩_s, |0⟩_p|1⟩_s.
    let (rho, independence) = eve_information(config).map_err(ck.internal("interception"))?;
    let a2 = config.alpha() * config.alpha();
    for r in 0..4 {
        for c in 0..4 {
            let want = match (r, c) {
                (0b10, 0b10) => a2,
                (0b01, 0b01) => T::one() - a2,
                _ => T::zero(),
            };
            ck.close("interceptor state", rho.get(r, c).norm(), want)?;
        }
    }
    ck.close("interceptor input independence", independence, T::zero())?;

    // Loss recovery.
    for aux in 0..2u8 {
        let item = format!("loss recovery (aux={aux})");
        let want_p = if aux == 0 { a2 } else { T::one() - a2 };
        let mut s = Session::prepare(config.clone()).map_err(ck.internal(&item))?;
        s.transmit(true, false).map_err(ck.internal(&item))?;
        match s.recover_after_loss(Selector::Forced(aux)) {
            Ok(r) => {
                ck.close(&format!("{item} probability"), r.probability, want_p)?;
                let f = qubit_fidelity(&config.input_state(), &r.recovered);
                ck.close(&format!("{item} fidelity"), f, T::one())?;
            }
            Err(Error::ZeroProbabilityBranch { probability }) => {
                ck.close(&format!("{item} probability"), T::of(probability), want_p)?;
            }
            Err(e) => return Err(ck.fail(item, e.to_string())),
        }
    }

    Ok(ck.checks)
}

/// Runs [`verify_point`] on a `steps × steps` grid uniform in (alpha, gamma)
/// over [0, 1]², endpoints included, stopping at the first failure.
pub fn verify_grid<T: Scalar>(
    steps: usize,
    tol: T,
    table: &CorrectionTable,
) -> Result<VerifySummary, VerifyFailure> {
    let axis = super::sweep::amplitude_axis::<T>(steps);
    let mut checks = 0;
    for &alpha in &axis {
        for &gamma in &axis {
            let config = ProtocolConfig::new(alpha, gamma).map_err(|e| VerifyFailure {
                item: "grid point".into(),
                alpha: alpha.as_f64(),
                gamma: gamma.as_f64(),
                detail: e.to_string(),
            })?;
            checks += verify_point(&config, tol, table)?;
        }
    }
    Ok(VerifySummary {
        grid_points: axis.len() * axis.len(),
        branches: 16,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::Pauli;

    #[test]
    fn small_grid_passes() {
        let s = verify_grid::<f64>(5, 1e-10, &CorrectionTable::STANDARD).unwrap();
        assert_eq!(s.grid_points, 25);
        assert_eq!(s.to_string(), "16 branches × 25 grid points verified");
    }

    #[test]
    fn corrupted_table_is_named() {
        let bob = BobOutcome::new(1, 0);
        let table = CorrectionTable::STANDARD.with_entry(1, 0, bob, Pauli::X);
        let err = verify_grid::<f64>(5, 1e-10, &table).unwrap_err();
        assert!(err.item.contains("(m2=1, ma=0, path=b, spin=0)"), "{err}");
    }

    #[test]
    fn impossible_tolerance_fails() {
        assert!(verify_grid::<f64>(5, 1e-30, &CorrectionTable::STANDARD).is_err());
    }
}
