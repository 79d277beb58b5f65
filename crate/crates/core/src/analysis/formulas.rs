use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::protocol::ProtocolConfig;
use crate::scalar::Scalar;
use crate::statevec::{Amplitude, QubitLabel, StateVector};

fn weights<T: Scalar>(m2: u8, c: &ProtocolConfig<T>) -> (T, T) {
    // Coefficients of |1⟩_p|0⟩_s and |0⟩_p|1⟩_s in Alice's conditional state.
    if m2 & 1 == 0 {
        (c.alpha() * c.gamma(), c.beta() * c.delta())
    } else {
        (c.alpha() * c.delta(), c.beta() * c.gamma())
    }
}

/// Joint probability of Alice reading `(m2, ma)`; independent of `ma`.
pub fn alice_outcome_probability<T: Scalar>(m2: u8, config: &ProtocolConfig<T>) -> T {
    let (u, v) = weights(m2, config);
    (u * u + v * v) / T::of(2.0)
}

/// Particle 1's (path, spin) state after Alice reads `(m2, ma)`:
/// `u|1⟩_p|0⟩_s ± i v|0⟩_p|1⟩_s`, sign `+` for `ma = 0`. Real inputs only.
pub fn alice_conditional_state<T: Scalar>(
    m2: u8,
    ma: u8,
    config: &ProtocolConfig<T>,
) -> Result<StateVector<T>> {
    let (u, v) = weights(m2, config);
    let sign = if ma & 1 == 0 { T::one() } else { -T::one() };
    let z = Complex::zero();
    StateVector::normalized(
        vec![QubitLabel::P1_PATH, QubitLabel::P1_SPIN],
        vec![
            z,
            Complex::new(T::zero(), sign * v),
            Complex::new(u, T::zero()),
            z,
        ],
    )
}

/// Particle 1 and Bob's spin after Bob's beam splitter and CNOT, for Alice's
/// outcome (0, 0):
/// `[αγ|b⟩|0⟩|0⟩ − βδ|b⟩|1⟩|1⟩ + iαγ|a⟩|0⟩|0⟩ + iβδ|a⟩|1⟩|1⟩] / √(2N)`.
pub fn bob_joint_state_after_cnot<T: Scalar>(config: &ProtocolConfig<T>) -> Result<StateVector<T>> {
    let (ag, bd) = weights(0, config);
    let n = ag * ag + bd * bd;
    let s = (T::of(2.0) * n).sqrt();
    if s.is_zero() {
        return Err(Error::DegenerateBranch { denominator: 0.0 });
    }
    let mut amps = vec![Complex::zero(); 8];
    // index bits: path (a=0, b=1), spin 1, spin 3
    amps[0b100] = Complex::new(ag / s, T::zero());
    amps[0b111] = Complex::new(-bd / s, T::zero());
    amps[0b000] = Complex::new(T::zero(), ag / s);
    amps[0b011] = Complex::new(T::zero(), bd / s);
    StateVector::from_amplitudes(
        vec![
            QubitLabel::P1_PATH,
            QubitLabel::P1_SPIN,
            QubitLabel::P3_SPIN,
        ],
        amps,
    )
}

/// Bob's corrected qubit: `(αγ, βδ)/√N` for `m2 = 0`, `(βγ, αδ)/√N'` for `m2 = 1`,
/// with the input phase carried on the `|1⟩` amplitude.
pub fn bob_target_state<T: Scalar>(
    m2: u8,
    config: &ProtocolConfig<T>,
) -> Result<[Amplitude<T>; 2]> {
    let (a, b, g, d) = (
        config.alpha(),
        config.beta(),
        config.gamma(),
        config.delta(),
    );
    let (x, y) = if m2 & 1 == 0 {
        (a * g, b * d)
    } else {
        (b * g, a * d)
    };
    let n = (x * x + y * y).sqrt();
    if n * n < T::ZERO_PROB {
        return Err(Error::DegenerateBranch {
            denominator: (n * n).as_f64(),
        });
    }
    Ok([
        Complex::new(x / n, T::zero()),
        Complex::from_polar(y / n, config.input_phase()),
    ])
}

/// Transfer fidelity given Alice's `m2`:
/// `(αγ² + βδ²)² / (α²γ² + β²δ²)` for `m2 = 0`,
/// `(βγ² + αδ²)² / (β²γ² + α²δ²)` for `m2 = 1`.
pub fn fidelity_case<T: Scalar>(m2: u8, config: &ProtocolConfig<T>) -> Result<T> {
    let (a, b, g, d) = (
        config.alpha(),
        config.beta(),
        config.gamma(),
        config.delta(),
    );
    let (p, q) = if m2 & 1 == 0 { (a, b) } else { (b, a) };
    let denominator = p * p * g * g + q * q * d * d;
    if denominator < T::ZERO_PROB {
        return Err(Error::DegenerateBranch {
            denominator: denominator.as_f64(),
        });
    }
    let num = p * g * g + q * d * d;
    Ok(num * num / denominator)
}

/// `F_av = γ⁴ + δ⁴ + 4αβγ²δ²`, valid for real inputs.
pub fn average_fidelity_formula<T: Scalar>(config: &ProtocolConfig<T>) -> Result<T> {
    if !config.input_phase().is_zero() {
        return Err(Error::FormulaDomain {
            phase: config.input_phase().as_f64(),
        });
    }
    let g2 = config.gamma() * config.gamma();
    let d2 = config.delta() * config.delta();
    Ok(g2 * g2 + d2 * d2 + T::of(4.0) * config.alpha() * config.beta() * g2 * d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    fn cfg(a: f64, g: f64) -> ProtocolConfig<f64> {
        ProtocolConfig::new(a, g).unwrap()
    }

    #[test]
    fn case_fidelity_examples() {
        for g in [0.0, 0.3, 0.8, 1.0] {
            for m2 in 0..2 {
                assert!((fidelity_case(m2, &cfg(H, g)).unwrap() - 1.0).abs() < 1e-12);
            }
        }
        // (0.6·0.5 + 0.8·0.5)² / 0.5
        let f = fidelity_case(0, &cfg(0.6, H)).unwrap();
        assert!((f - 0.98).abs() < 1e-12);
        assert!((fidelity_case(0, &cfg(0.6, 1.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            fidelity_case(1, &cfg(1.0, 1.0)),
            Err(Error::DegenerateBranch { .. })
        ));
    }

    #[test]
    fn average_formula_examples() {
        for g in [0.1, 0.5, 0.9] {
            assert!((average_fidelity_formula(&cfg(H, g)).unwrap() - 1.0).abs() < 1e-12);
        }
        for a in [0.0, 0.4, 1.0] {
            assert!((average_fidelity_formula(&cfg(a, 0.0)).unwrap() - 1.0).abs() < 1e-15);
            assert!((average_fidelity_formula(&cfg(a, 1.0)).unwrap() - 1.0).abs() < 1e-15);
        }
        // 0.25 + 0.25 + 4·0.48·0.25
        assert!((average_fidelity_formula(&cfg(0.6, H)).unwrap() - 0.98).abs() < 1e-12);
        // γ⁴ + δ⁴ at β = 0
        assert!((average_fidelity_formula(&cfg(1.0, 0.8)).unwrap() - 0.5392).abs() < 1e-12);
        let phased = cfg(0.6, 0.8).with_phase(0.3).unwrap();
        assert!(matches!(
            average_fidelity_formula(&phased),
            Err(Error::FormulaDomain { .. })
        ));
    }

    #[test]
    fn case_fidelity_swap_symmetries() {
        // Flipping m2 is undone by swapping either α ↔ β or γ ↔ δ.
        for (a, g) in [(0.3, 0.2), (0.6, 0.8), (0.95, 0.4)] {
            let c = cfg(a, g);
            let splitter_swapped = cfg(c.beta(), g);
            let input_swapped = cfg(a, c.delta());
            for m2 in 0..2u8 {
                let f = fidelity_case(m2, &c).unwrap();
                assert!((f - fidelity_case(1 - m2, &splitter_swapped).unwrap()).abs() < 1e-12);
                assert!((f - fidelity_case(1 - m2, &input_swapped).unwrap()).abs() < 1e-12);
            }
        }
    }
}
