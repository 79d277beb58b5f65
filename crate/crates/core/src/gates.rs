//! Unitary gates used by the protocol.
//!
//! Matrices are row-major over the computational basis. For two-qubit gates
//! the first target qubit is the high bit of the local index, so `cnot()`
//! applied to `[control, target]` flips `target` when `control` is `|1⟩`.

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::statevec::Amplitude;

/// Validated 2×2 or 4×4 unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate<T> {
    dim: usize,
    entries: Vec<Amplitude<T>>,
}

impl<T: Scalar> Gate<T> {
    pub fn new(dim: usize, entries: Vec<Amplitude<T>>) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: dim,
            });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if let Some(index) = entries
            .iter()
            .position(|a| !(a.re.is_finite() && a.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        let gate = Self { dim, entries };
        let deviation = gate.unitarity_defect();
        if deviation > T::GATE_TOL {
            return Err(Error::NonUnitary {
                deviation: deviation.as_f64(),
            });
        }
        Ok(gate)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Amplitude<T> {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Amplitude<T>] {
        &self.entries
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for r in 0..n {
            for c in 0..n {
                let v = (0..n).fold(Complex::<T>::zero(), |acc, k| {
                    acc + self.entry(k, r).conj() * self.entry(k, c)
                });
                let target = if r == c {
                    Complex::one()
                } else {
                    Complex::zero()
                };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        let entries = (0..n * n)
            .map(|i| {
                let (r, c) = (i / n, i % n);
                (0..n).fold(Complex::zero(), |acc, k| {
                    acc + self.entry(r, k) * rhs.entry(k, c)
                })
            })
            .collect();
        Self::new(n, entries)
    }

    /// `U · v` for a vector of matching length.
    pub fn apply_to(&self, v: &[Amplitude<T>]) -> Vec<Amplitude<T>> {
        (0..self.dim)
            .map(|r| (0..self.dim).fold(Complex::zero(), |acc, c| acc + self.entry(r, c) * v[c]))
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        crate::statevec::max_abs_diff(&self.entries, &other.entries)
    }
}

/// Beam splitter amplitudes: reflection `alpha`, transmission `beta`, both
/// real and non-negative with `alpha² + beta² = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitterParams<T> {
    alpha: T,
    beta: T,
}

impl<T: Scalar> SplitterParams<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v >= T::zero() && v <= T::one()) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v.as_f64(),
                    reason: "must lie in [0, 1]",
                });
            }
        }
        if (alpha * alpha + beta * beta - T::one()).abs() > T::GATE_TOL {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: beta.as_f64(),
                reason: "alpha² + beta² must equal 1",
            });
        }
        Ok(Self { alpha, beta })
    }

    /// Derives `beta = √(1 − alpha²)`.
    pub fn from_alpha(alpha: T) -> Result<Self> {
        if !(alpha >= T::zero() && alpha <= T::one()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha.as_f64(),
                reason: "must lie in [0, 1]",
            });
        }
        Self::new(alpha, (T::one() - alpha * alpha).max(T::zero()).sqrt())
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }
}

fn c<T: Scalar>(re: T, im: T) -> Amplitude<T> {
    Complex::new(re, im)
}

/// Tunable beam splitter on the path qubit:
/// `|1⟩ → α|1⟩ + iβ|0⟩`, `|0⟩ → −β|1⟩ + iα|0⟩`.
pub fn bs_general<T: Scalar>(p: SplitterParams<T>) -> Gate<T> {
    let (a, b, z) = (p.alpha, p.beta, T::zero());
    // Columns are the images of |0⟩ and |1⟩.
    Gate::new(2, vec![c(z, a), c(z, b), c(-b, z), c(a, z)])
        .expect("beam splitter with valid params is unitary")
}

/// Balanced beam splitter closing Bob's interferometer, with output ports
/// `a ≡ |0⟩_p`, `b ≡ |1⟩_p`: `|0⟩ → (|a⟩ + i|b⟩)/√2`, `|1⟩ → (i|a⟩ + |b⟩)/√2`.
pub fn bs_5050<T: Scalar>() -> Gate<T> {
    let h = T::FRAC_1_SQRT_2();
    let z = T::zero();
    Gate::new(2, vec![c(h, z), c(z, h), c(z, h), c(h, z)]).expect("balanced splitter is unitary")
}

/// Spin flip in the reflected arm: X on the spin when the path is `|0⟩_p`.
/// Acts on `[path, spin]`.
pub fn spin_flipper<T: Scalar>() -> Gate<T> {
    let (o, z) = (c(T::one(), T::zero()), Complex::zero());
    Gate::new(
        4,
        vec![
            z, o, z, z, //
            o, z, z, z, //
            z, z, o, z, //
            z, z, z, o,
        ],
    )
    .expect("spin flipper is a permutation")
}

/// Controlled-NOT acting on `[control, target]`.
pub fn cnot<T: Scalar>() -> Gate<T> {
    let (o, z) = (c(T::one(), T::zero()), Complex::zero());
    Gate::new(
        4,
        vec![
            o, z, z, z, //
            z, o, z, z, //
            z, z, z, o, //
            z, z, o, z,
        ],
    )
    .expect("cnot is a permutation")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "I" => Some(Pauli::I),
            "X" => Some(Pauli::X),
            "Y" => Some(Pauli::Y),
            "Z" => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

/// Pauli matrix, with `Y = [[0, −i], [i, 0]]`.
pub fn pauli<T: Scalar>(which: Pauli) -> Gate<T> {
    let (o, z) = (T::one(), T::zero());
    let entries = match which {
        Pauli::I => vec![c(o, z), c(z, z), c(z, z), c(o, z)],
        Pauli::X => vec![c(z, z), c(o, z), c(o, z), c(z, z)],
        Pauli::Y => vec![c(z, z), c(z, -o), c(z, o), c(z, z)],
        Pauli::Z => vec![c(o, z), c(z, z), c(z, z), c(-o, z)],
    };
    Gate::new(2, entries).expect("pauli matrices are unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::{QubitLabel, StateVector};
    use proptest::prelude::*;

    fn cx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn close(a: &[Complex<f64>], b: &[Complex<f64>]) -> bool {
        crate::statevec::max_abs_diff(a, b) < 1e-12
    }

    #[test]
    fn fully_reflecting_limit() {
        let u = bs_general(SplitterParams::from_alpha(1.0).unwrap());
        assert!(close(
            &u.apply_to(&[cx(0.0, 0.0), cx(1.0, 0.0)]),
            &[cx(0.0, 0.0), cx(1.0, 0.0)]
        ));
        assert!(close(
            &u.apply_to(&[cx(1.0, 0.0), cx(0.0, 0.0)]),
            &[cx(0.0, 1.0), cx(0.0, 0.0)]
        ));
    }

    #[test]
    fn balanced_general_splitter_on_transmitted_port() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = bs_general(SplitterParams::from_alpha(h).unwrap());
        // |1⟩ → (|1⟩ + i|0⟩)/√2
        let out = u.apply_to(&[cx(0.0, 0.0), cx(1.0, 0.0)]);
        assert!(close(&out, &[cx(0.0, h), cx(h, 0.0)]));
    }

    #[test]
    fn general_splitter_column_for_reflected_port() {
        let p = SplitterParams::new(0.6, 0.8).unwrap();
        let out = bs_general(p).apply_to(&[cx(1.0, 0.0), cx(0.0, 0.0)]);
        // |0⟩ → −β|1⟩ + iα|0⟩
        assert!(close(&out, &[cx(0.0, 0.6), cx(-0.8, 0.0)]));
    }

    #[test]
    fn splitter_params_validation() {
        assert!(SplitterParams::new(0.6, 0.6).is_err());
        assert!(SplitterParams::new(-0.6, 0.8).is_err());
        assert!(SplitterParams::<f64>::from_alpha(1.5).is_err());
        assert!(SplitterParams::<f64>::from_alpha(f64::NAN).is_err());
    }

    #[test]
    fn balanced_splitter_ports() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = bs_5050::<f64>();
        assert!(close(
            &u.apply_to(&[cx(1.0, 0.0), cx(0.0, 0.0)]),
            &[cx(h, 0.0), cx(0.0, h)]
        ));
        assert!(close(
            &u.apply_to(&[cx(0.0, 0.0), cx(1.0, 0.0)]),
            &[cx(0.0, h), cx(h, 0.0)]
        ));
        assert!(u.unitarity_defect() < 1e-12);
    }

    #[test]
    fn spin_flipper_basis_action() {
        let f = spin_flipper::<f64>();
        let e = |i: usize| {
            let mut v = vec![cx(0.0, 0.0); 4];
            v[i] = cx(1.0, 0.0);
            v
        };
        assert!(close(&f.apply_to(&e(0)), &e(1))); // |0⟩_p|0⟩_s → |0⟩_p|1⟩_s
        assert!(close(&f.apply_to(&e(2)), &e(2))); // |1⟩_p|0⟩_s unchanged
    }

    #[test]
    fn splitter_then_flipper_yields_path_spin_entangled_vector() {
        let (a, b) = (0.6, 0.8);
        let s = StateVector::basis_state(&[QubitLabel::P1_PATH, QubitLabel::P1_SPIN], &[1, 0])
            .unwrap()
            .apply_gate(
                &[QubitLabel::P1_PATH],
                &bs_general(SplitterParams::new(a, b).unwrap()),
            )
            .unwrap()
            .apply_gate(&[QubitLabel::P1_PATH, QubitLabel::P1_SPIN], &spin_flipper())
            .unwrap();
        assert!(close(
            s.amplitudes(),
            &[cx(0.0, 0.0), cx(0.0, b), cx(a, 0.0), cx(0.0, 0.0)]
        ));
    }

    #[test]
    fn cnot_basis_action() {
        let g = cnot::<f64>();
        let out = g.apply_to(&[cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)]);
        assert!(close(
            &out,
            &[cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)]
        ));
        let out = g.apply_to(&[cx(0.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)]);
        assert!(close(
            &out,
            &[cx(0.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)]
        ));
    }

    #[test]
    fn pauli_actions_and_phase_convention() {
        let (a, b) = (0.6, 0.8);
        let z = pauli::<f64>(Pauli::Z).apply_to(&[cx(a, 0.0), cx(b, 0.0)]);
        assert!(close(&z, &[cx(a, 0.0), cx(-b, 0.0)]));
        let y = pauli::<f64>(Pauli::Y).apply_to(&[cx(1.0, 0.0), cx(0.0, 0.0)]);
        assert!(close(&y, &[cx(0.0, 0.0), cx(0.0, 1.0)]));

        let xz = pauli::<f64>(Pauli::X).compose(&pauli(Pauli::Z)).unwrap();
        let minus_i_y: Vec<_> = pauli::<f64>(Pauli::Y)
            .entries()
            .iter()
            .map(|e| e * cx(0.0, -1.0))
            .collect();
        assert!(close(xz.entries(), &minus_i_y));
    }

    #[test]
    fn x_correction_reorders_swapped_branch() {
        // X(αδ|0⟩ + βγ|1⟩) = βγ|0⟩ + αδ|1⟩
        let (al, be, ga, de) = (0.6, 0.8, 0.8, 0.6);
        let out = pauli::<f64>(Pauli::X).apply_to(&[cx(al * de, 0.0), cx(be * ga, 0.0)]);
        assert!(close(&out, &[cx(be * ga, 0.0), cx(al * de, 0.0)]));
    }

    #[test]
    fn gate_rejects_non_unitary_and_bad_dims() {
        let m = vec![cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)];
        assert!(matches!(Gate::new(2, m), Err(Error::NonUnitary { .. })));
        assert!(Gate::<f64>::new(3, vec![cx(0.0, 0.0); 9]).is_err());
        assert!(Gate::<f64>::new(2, vec![cx(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn f32_gates_validate() {
        let g = bs_general(SplitterParams::<f32>::from_alpha(0.3).unwrap());
        assert!(g.unitarity_defect() < 1e-6);
    }

    proptest! {
        #[test]
        fn general_splitter_is_unitary(alpha in 0.0f64..=1.0) {
            let g = bs_general(SplitterParams::from_alpha(alpha).unwrap());
            prop_assert!(g.unitarity_defect() < 1e-12);
        }

        #[test]
        fn flipper_maps_split_state_exactly(alpha in 0.0f64..=1.0) {
            let beta = (1.0 - alpha * alpha).sqrt();
            // α|1⟩|0⟩ + iβ|0⟩|0⟩  →  α|1⟩|0⟩ + iβ|0⟩|1⟩
            let before = [cx(0.0, beta), cx(0.0, 0.0), cx(alpha, 0.0), cx(0.0, 0.0)];
            let after = spin_flipper::<f64>().apply_to(&before);
            prop_assert_eq!(after, vec![cx(0.0, 0.0), cx(0.0, beta), cx(alpha, 0.0), cx(0.0, 0.0)]);
        }
    }
}
