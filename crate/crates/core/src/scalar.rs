//! Floating-point scalar abstraction.
//!
//! Every numeric routine in the crate is written against [`Scalar`], so the
//! same code runs in `f32` or `f64`. The tolerances attached to each type are
//! the ones the simulator uses when it validates states, gates and branches.
//! There is no exact or rational instantiation: the protocol needs square roots
//! and complex phases throughout.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// A real floating-point type usable as the amplitude component type.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Allowed deviation of `Σ|amp|²` from one when a state is constructed.
    const NORM_TOL: Self;
    /// Allowed unitarity defect of a gate, and allowed norm drift per gate.
    const GATE_TOL: Self;
    /// Branch probabilities below this are treated as analytic zeros.
    const ZERO_PROB: Self;
    /// Entrywise tolerance for phase-canonical state comparison.
    const STATE_EQ_TOL: Self;
    /// Amplitudes at or below this magnitude never fix the global phase.
    const PHASE_EPS: Self;
    /// Tolerance on Hermiticity of reduced density matrices.
    const HERMITIAN_TOL: Self;
    /// Most negative eigenvalue accepted for a density matrix.
    const EIGEN_TOL: Self;

    /// Converts an `f64` literal. Infallible for the provided impls.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar representable as f64")
    }
}

impl Scalar for f64 {
    const NORM_TOL: Self = 1e-10;
    const GATE_TOL: Self = 1e-12;
    const ZERO_PROB: Self = 1e-14;
    const STATE_EQ_TOL: Self = 1e-8;
    const PHASE_EPS: Self = 1e-12;
    const HERMITIAN_TOL: Self = 1e-12;
    const EIGEN_TOL: Self = 1e-10;
}

impl Scalar for f32 {
    const NORM_TOL: Self = 1e-5;
    const GATE_TOL: Self = 1e-5;
    const ZERO_PROB: Self = 1e-10;
    const STATE_EQ_TOL: Self = 1e-4;
    const PHASE_EPS: Self = 1e-6;
    const HERMITIAN_TOL: Self = 1e-5;
    const EIGEN_TOL: Self = 1e-5;
}
