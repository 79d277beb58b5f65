use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::protocol::{ProtocolConfig, Session};
use crate::scalar::Scalar;
use crate::statevec::{DensityMatrix, MeasurementBasis, QubitLabel};

const PROBE_SEED: u64 = 0x5eed_0e7e;
const RANDOM_PROBES: usize = 50;

/// Input qubits `(gamma, phase)` used to probe what an interceptor can learn:
/// the six axis states followed by 50 Haar-random states from a fixed seed.
pub fn probe_inputs<T: Scalar>() -> Vec<(T, T)> {
    let h = T::FRAC_1_SQRT_2();
    let pi = T::PI();
    let half_pi = T::FRAC_PI_2();
    let mut probes = vec![
        (T::one(), T::zero()),
        (T::zero(), T::zero()),
        (h, T::zero()),
        (h, pi),
        (h, half_pi),
        (h, -half_pi),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    for _ in 0..RANDOM_PROBES {
        // cos θ uniform on [-1, 1] gives the Haar measure on the Bloch sphere.
        let cos_theta: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let gamma = ((1.0 + cos_theta) / 2.0).sqrt().min(1.0);
        probes.push((T::of(gamma), T::of(phi)));
    }
    probes
}

fn intercepted_view<T: Scalar>(config: &ProtocolConfig<T>) -> Result<DensityMatrix<T>> {
    let mut s = Session::prepare(config.clone())?;
    s.transmit(false, true)?;
    Ok(s.eve_view().cloned().expect("intercept records the view"))
}

/// Particle 1's (path, spin) state as seen by an interceptor, and the
/// largest entrywise distance between such states over the probe inputs.
pub fn eve_information<T: Scalar>(config: &ProtocolConfig<T>) -> Result<(DensityMatrix<T>, T)> {
    let rho = intercepted_view(config)?;
    let mut views = vec![rho.clone()];
    for (gamma, phase) in probe_inputs::<T>() {
        views.push(intercepted_view(&config.with_input(gamma, phase)?)?);
    }
    let mut worst = T::zero();
    for (i, a) in views.iter().enumerate() {
        for b in &views[i + 1..] {
            worst = worst.max(a.distance(b)?);
        }
    }
    Ok((rho, worst))
}

/// Eve's conditional (path, spin) states when Alice measures before sending,
/// one per outcome pair `(m2, ma)`; `None` for outcomes that cannot occur.
fn premature_views<T: Scalar>(config: &ProtocolConfig<T>) -> Result<Vec<Option<DensityMatrix<T>>>> {
    let s = Session::prepare(config.clone())?;
    let state = s.state();
    let mut views = Vec::with_capacity(4);
    for m2 in 0..2u8 {
        for ma in 0..2u8 {
            let after = state
                .project(QubitLabel::P2_SPIN, MeasurementBasis::Z, m2)
                .and_then(|(_, st)| st.project(QubitLabel::AUX_SPIN, MeasurementBasis::X, ma));
            views.push(match after {
                Ok((_, st)) => {
                    Some(st.reduced_density(&[QubitLabel::P1_PATH, QubitLabel::P1_SPIN])?)
                }
                Err(crate::Error::ZeroProbabilityBranch { .. }) => None,
                Err(e) => return Err(e),
            });
        }
    }
    Ok(views)
}

/// What Eve could learn if Alice measured particles 2 and a before sending:
/// the largest distance between Eve's conditional states for the config's
/// input and the probe input `(probe_gamma, probe_phase)`, over the Alice
/// outcomes possible for both.
pub fn premature_measurement_leak<T: Scalar>(
    config: &ProtocolConfig<T>,
    probe_gamma: T,
    probe_phase: T,
) -> Result<T> {
    let ours = premature_views(config)?;
    let theirs = premature_views(&config.with_input(probe_gamma, probe_phase)?)?;
    let mut worst = T::zero();
    for (a, b) in ours.iter().zip(&theirs) {
        if let (Some(a), Some(b)) = (a, b) {
            worst = worst.max(a.distance(b)?);
        }
    }
    Ok(worst)
}
