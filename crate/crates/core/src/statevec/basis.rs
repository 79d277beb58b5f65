use num_complex::Complex;
use serde::Serialize;

use super::{Amplitude, Dof, QubitLabel};
use crate::scalar::Scalar;

/// Measurement basis for a single qubit.
///
/// `PathAB` is the which-channel measurement after Bob's beam splitter, with
/// output port `a` identified with `|0⟩_p` and `b` with `|1⟩_p`. `X` uses
/// `|0_x⟩ = (|0⟩+|1⟩)/√2`, `|1_x⟩ = (|0⟩−|1⟩)/√2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MeasurementBasis {
    Z,
    X,
    PathAB,
}

impl MeasurementBasis {
    pub fn valid_for(self, qubit: QubitLabel) -> bool {
        match self {
            MeasurementBasis::Z => true,
            MeasurementBasis::X => qubit.dof() == Dof::Spin,
            MeasurementBasis::PathAB => qubit.dof() == Dof::Path,
        }
    }

    /// Basis vector for `outcome`, in the computational basis.
    pub fn vector<T: Scalar>(self, outcome: u8) -> [Amplitude<T>; 2] {
        let one = outcome & 1 == 1;
        match self {
            MeasurementBasis::Z | MeasurementBasis::PathAB => super::ket(outcome),
            MeasurementBasis::X => {
                let h = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
                if one {
                    [h, -h]
                } else {
                    [h, h]
                }
            }
        }
    }
}
