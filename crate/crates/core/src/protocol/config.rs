use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::SplitterParams;
use crate::scalar::Scalar;
use crate::statevec::Amplitude;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Mode {
    #[default]
    Enumerate,
    Sample,
}

/// Protocol parameters. Only the reflection amplitude `alpha` and the input
/// amplitude `gamma` are free; `beta` and `|delta|` follow from normalization.
/// The input qubit is `gamma|0⟩ + |delta| e^{i·input_phase}|1⟩`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolConfig<T> {
    alpha: T,
    gamma: T,
    input_phase: T,
    seed: u64,
    mode: Mode,
}

fn unit_interval<T: Scalar>(name: &'static str, v: T) -> Result<T> {
    if v >= T::zero() && v <= T::one() {
        Ok(v)
    } else {
        Err(Error::InvalidParameter {
            name,
            value: v.as_f64(),
            reason: "must lie in [0, 1]",
        })
    }
}

impl<T: Scalar> ProtocolConfig<T> {
    pub fn new(alpha: T, gamma: T) -> Result<Self> {
        Ok(Self {
            alpha: unit_interval("alpha", alpha)?,
            gamma: unit_interval("gamma", gamma)?,
            input_phase: T::zero(),
            seed: 0,
            mode: Mode::Enumerate,
        })
    }

    pub fn with_phase(mut self, phase: T) -> Result<Self> {
        if !phase.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phase",
                value: phase.as_f64(),
                reason: "must be finite",
            });
        }
        self.input_phase = phase;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// Same splitter and seed, different input qubit.
    pub fn with_input(&self, gamma: T, phase: T) -> Result<Self> {
        Self::new(self.alpha, gamma)?
            .with_phase(phase)
            .map(|c| c.with_seed(self.seed).with_mode(self.mode))
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        (T::one() - self.alpha * self.alpha).max(T::zero()).sqrt()
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// Magnitude of the `|1⟩` amplitude of the input.
    pub fn delta(&self) -> T {
        (T::one() - self.gamma * self.gamma).max(T::zero()).sqrt()
    }

    pub fn input_phase(&self) -> T {
        self.input_phase
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn splitter(&self) -> SplitterParams<T> {
        SplitterParams::new(self.alpha, self.beta()).expect("alpha validated on construction")
    }

    /// The qubit Alice wants to transfer.
    pub fn input_state(&self) -> [Amplitude<T>; 2] {
        [
            Complex::new(self.gamma, T::zero()),
            Complex::from_polar(self.delta(), self.input_phase),
        ]
    }
}
