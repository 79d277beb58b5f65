//! Dense state vectors over the fixed five-qubit register.
//!
//! The register holds, in this order, the path and spin of particle 1, the
//! spin carrying the input qubit (particle 2), Alice's auxiliary spin, and
//! Bob's spin (particle 3). A state may cover any subset of these labels; the
//! labels are always kept in register order and the first label is the most
//! significant bit of the amplitude index.
//!
//! Values are immutable. Every operation returns a fresh state.

mod basis;
mod density;

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::scalar::Scalar;

pub use basis::MeasurementBasis;
pub use density::DensityMatrix;

/// Complex probability amplitude.
pub type Amplitude<T> = Complex<T>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Particle {
    P1,
    P2,
    Aux,
    P3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Dof {
    Path,
    Spin,
}

/// One qubit of the register: a degree of freedom of a particle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QubitLabel {
    particle: Particle,
    dof: Dof,
}

impl QubitLabel {
    pub const P1_PATH: Self = Self {
        particle: Particle::P1,
        dof: Dof::Path,
    };
    pub const P1_SPIN: Self = Self {
        particle: Particle::P1,
        dof: Dof::Spin,
    };
    pub const P2_SPIN: Self = Self {
        particle: Particle::P2,
        dof: Dof::Spin,
    };
    pub const AUX_SPIN: Self = Self {
        particle: Particle::Aux,
        dof: Dof::Spin,
    };
    pub const P3_SPIN: Self = Self {
        particle: Particle::P3,
        dof: Dof::Spin,
    };

    /// The full register in index order (most significant first).
    pub const REGISTER: [Self; 5] = [
        Self::P1_PATH,
        Self::P1_SPIN,
        Self::P2_SPIN,
        Self::AUX_SPIN,
        Self::P3_SPIN,
    ];

    pub fn new(particle: Particle, dof: Dof) -> Result<Self> {
        if dof == Dof::Path && particle != Particle::P1 {
            return Err(Error::InvalidLabel);
        }
        Ok(Self { particle, dof })
    }

    pub fn particle(self) -> Particle {
        self.particle
    }

    pub fn dof(self) -> Dof {
        self.dof
    }

    /// Position of this label in the global register.
    pub fn slot(self) -> usize {
        match (self.particle, self.dof) {
            (Particle::P1, Dof::Path) => 0,
            (Particle::P1, Dof::Spin) => 1,
            (Particle::P2, _) => 2,
            (Particle::Aux, _) => 3,
            (Particle::P3, _) => 4,
        }
    }
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let particle = match self.particle {
            Particle::P1 => "P1",
            Particle::P2 => "P2",
            Particle::Aux => "Aux",
            Particle::P3 => "P3",
        };
        let dof = match self.dof {
            Dof::Path => "path",
            Dof::Spin => "spin",
        };
        write!(f, "{particle}.{dof}")
    }
}

/// Normalized pure state over a subset of the register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    labels: Vec<QubitLabel>,
    amps: Vec<Amplitude<T>>,
}

fn check_labels(labels: &[QubitLabel]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(*l));
        }
    }
    Ok(())
}

fn check_amps<T: Scalar>(amps: &[Amplitude<T>], tol: T) -> Result<()> {
    if let Some(index) = amps
        .iter()
        .position(|a| !(a.re.is_finite() && a.im.is_finite()))
    {
        return Err(Error::NonFinite { index });
    }
    let norm_sqr = amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
    if (norm_sqr - T::one()).abs() > tol {
        return Err(Error::NotNormalized {
            norm_sqr: norm_sqr.as_f64(),
        });
    }
    Ok(())
}

impl<T: Scalar> StateVector<T> {
    /// Tensor product of single-qubit states, placed in register order.
    ///
    /// Each factor must already be normalized; nothing is rescaled here.
    pub fn prepare_product(factors: &[(QubitLabel, [Amplitude<T>; 2])]) -> Result<Self> {
        let labels: Vec<_> = factors.iter().map(|(l, _)| *l).collect();
        check_labels(&labels)?;
        for (_, v) in factors {
            check_amps(v, T::NORM_TOL)?;
        }
        let mut sorted: Vec<_> = factors.to_vec();
        sorted.sort_by_key(|(l, _)| l.slot());

        let mut amps = vec![Complex::one()];
        for (_, v) in &sorted {
            amps = amps.iter().flat_map(|a| [*a * v[0], *a * v[1]]).collect();
        }
        Ok(Self {
            labels: sorted.into_iter().map(|(l, _)| l).collect(),
            amps,
        })
    }

    /// Builds a state from raw amplitudes. Labels must be listed in register
    /// order and the amplitudes must already be normalized.
    pub fn from_amplitudes(labels: Vec<QubitLabel>, amps: Vec<Amplitude<T>>) -> Result<Self> {
        check_labels(&labels)?;
        if labels.windows(2).any(|w| w[0].slot() > w[1].slot()) {
            return Err(Error::RegisterMismatch);
        }
        let expected = 1usize << labels.len();
        if amps.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: amps.len(),
            });
        }
        check_amps(&amps, T::NORM_TOL)?;
        Ok(Self { labels, amps })
    }

    /// Like [`from_amplitudes`](Self::from_amplitudes) but rescales a nonzero
    /// vector to unit norm first.
    pub fn normalized(labels: Vec<QubitLabel>, amps: Vec<Amplitude<T>>) -> Result<Self> {
        let norm = amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
            .sqrt();
        if norm.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::ZeroVector);
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Self::from_amplitudes(labels, amps)
    }

    /// Computational basis state; `bits` follow the label order.
    pub fn basis_state(labels: &[QubitLabel], bits: &[u8]) -> Result<Self> {
        if labels.len() != bits.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: bits.len(),
            });
        }
        let factors: Vec<_> = labels
            .iter()
            .zip(bits)
            .map(|(l, b)| (*l, ket(*b)))
            .collect();
        Self::prepare_product(&factors)
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Amplitude<T>] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Amplitude index for the given bits, listed in label order.
    pub fn index_of(&self, bits: &[u8]) -> usize {
        bits.iter().fold(0, |acc, b| (acc << 1) | (*b as usize & 1))
    }

    pub fn amplitude(&self, bits: &[u8]) -> Amplitude<T> {
        self.amps[self.index_of(bits)]
    }

    fn mask(&self, label: QubitLabel) -> Result<usize> {
        let pos = self
            .labels
            .iter()
            .position(|l| *l == label)
            .ok_or(Error::UnknownLabel(label))?;
        Ok(1 << (self.labels.len() - 1 - pos))
    }

    /// Applies `gate` to `targets`; the first target is the most significant
    /// bit of the gate's local index (the control, for controlled gates).
    pub fn apply_gate(&self, targets: &[QubitLabel], gate: &Gate<T>) -> Result<Self> {
        let expected = 1usize << targets.len();
        if targets.is_empty() || targets.len() > 2 || gate.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected: gate.dim(),
                found: expected,
            });
        }
        check_labels(targets)?;
        let masks = targets
            .iter()
            .map(|t| self.mask(*t))
            .collect::<Result<Vec<_>>>()?;
        let all: usize = masks.iter().sum();

        // Offsets of the local basis states relative to the base index.
        let offsets: Vec<usize> = (0..expected)
            .map(|local| {
                masks
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| local >> (masks.len() - 1 - k) & 1 == 1)
                    .map(|(_, m)| m)
                    .sum()
            })
            .collect();

        let mut out = self.amps.clone();
        let mut local = vec![Complex::zero(); expected];
        for base in (0..self.amps.len()).filter(|i| i & all == 0) {
            for (slot, off) in local.iter_mut().zip(&offsets) {
                *slot = self.amps[base + off];
            }
            for (r, off) in offsets.iter().enumerate() {
                out[base + off] =
                    (0..expected).fold(Complex::zero(), |acc, c| acc + gate.entry(r, c) * local[c]);
            }
        }

        let norm_sqr = out.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
        if (norm_sqr - self.norm_sqr()).abs() > T::GATE_TOL {
            return Err(Error::NormDrift {
                norm_sqr: norm_sqr.as_f64(),
            });
        }
        Ok(Self {
            labels: self.labels.clone(),
            amps: out,
        })
    }

    /// Unnormalized projection onto one outcome; returns the branch weight.
    fn project_raw(
        &self,
        qubit: QubitLabel,
        basis: MeasurementBasis,
        outcome: u8,
    ) -> Result<(T, Vec<Amplitude<T>>)> {
        if !basis.valid_for(qubit) {
            return Err(Error::InvalidBasis { qubit, basis });
        }
        let mask = self.mask(qubit)?;
        let v = basis.vector::<T>(outcome);
        let mut out = vec![Complex::zero(); self.amps.len()];
        let mut prob = T::zero();
        for i0 in (0..self.amps.len()).filter(|i| i & mask == 0) {
            let i1 = i0 | mask;
            let c = v[0].conj() * self.amps[i0] + v[1].conj() * self.amps[i1];
            prob += c.norm_sqr();
            out[i0] = v[0] * c;
            out[i1] = v[1] * c;
        }
        Ok((prob, out))
    }

    /// Born-rule probability of `outcome` when measuring `qubit` in `basis`.
    pub fn outcome_probability(
        &self,
        qubit: QubitLabel,
        basis: MeasurementBasis,
        outcome: u8,
    ) -> Result<T> {
        self.project_raw(qubit, basis, outcome).map(|(p, _)| p)
    }

    /// Projective measurement with a forced outcome. The post-measurement
    /// state is renormalized; branches below the zero-probability cutoff are
    /// reported as errors.
    pub fn project(
        &self,
        qubit: QubitLabel,
        basis: MeasurementBasis,
        outcome: u8,
    ) -> Result<(T, Self)> {
        let (prob, amps) = self.project_raw(qubit, basis, outcome)?;
        if prob < T::ZERO_PROB {
            return Err(Error::ZeroProbabilityBranch {
                probability: prob.as_f64(),
            });
        }
        let scale = prob.sqrt();
        let amps = amps.into_iter().map(|a| a / scale).collect();
        Ok((
            prob,
            Self {
                labels: self.labels.clone(),
                amps,
            },
        ))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Amplitude<T>> {
        if self.labels != other.labels {
            return Err(Error::RegisterMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * *b))
    }

    /// Squared overlap `|⟨self|other⟩|²`.
    pub fn fidelity_pure(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr().min(T::one()))
    }

    /// Partial trace onto `keep`. The result's basis follows register order
    /// of the kept labels, not the order they were passed in.
    pub fn reduced_density(&self, keep: &[QubitLabel]) -> Result<DensityMatrix<T>> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        check_labels(keep)?;
        let mut kept: Vec<QubitLabel> = keep.to_vec();
        kept.sort_by_key(|l| l.slot());
        let kept_masks = kept
            .iter()
            .map(|l| self.mask(*l))
            .collect::<Result<Vec<_>>>()?;

        let dim = 1 << kept.len();
        let env_dim = self.amps.len() / dim;
        // table[k][e]: full index with kept bits k and the e-th environment
        // configuration (environment configurations visited in index order).
        let mut table = vec![vec![0usize; env_dim]; dim];
        let mut env_counter = vec![0usize; dim];
        for i in 0..self.amps.len() {
            let k = kept_masks
                .iter()
                .fold(0, |acc, m| (acc << 1) | usize::from(i & m != 0));
            table[k][env_counter[k]] = i;
            env_counter[k] += 1;
        }

        let mut rho = vec![Complex::zero(); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                rho[r * dim + c] = (0..env_dim).fold(Complex::zero(), |acc, e| {
                    acc + self.amps[table[r][e]] * self.amps[table[c][e]].conj()
                });
            }
        }
        DensityMatrix::new(kept, rho)
    }

    /// Removes the global phase: the first amplitude with magnitude above
    /// [`Scalar::PHASE_EPS`] becomes real and positive.
    pub fn phase_canonical(&self) -> Result<Self> {
        Ok(Self {
            labels: self.labels.clone(),
            amps: canonical_phase(&self.amps)?,
        })
    }

    /// Equality up to global phase, entrywise within `tol`.
    pub fn approx_eq_up_to_phase(&self, other: &Self, tol: T) -> Result<bool> {
        if self.labels != other.labels {
            return Err(Error::RegisterMismatch);
        }
        Ok(max_abs_diff(
            &self.phase_canonical()?.amps,
            &other.phase_canonical()?.amps,
        ) <= tol)
    }

    /// Largest entrywise difference to `other` (no phase fixing).
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.labels != other.labels {
            return Err(Error::RegisterMismatch);
        }
        Ok(max_abs_diff(&self.amps, &other.amps))
    }

    /// Multiplies every amplitude by a unit-modulus phase.
    pub fn with_global_phase(&self, theta: T) -> Self {
        let p = Complex::from_polar(T::one(), theta);
        Self {
            labels: self.labels.clone(),
            amps: self.amps.iter().map(|a| a * p).collect(),
        }
    }

    /// Extracts the single-qubit factor of `label`, provided the qubit is in
    /// a product state with the rest of the register.
    pub fn qubit_state(&self, label: QubitLabel) -> Result<[Amplitude<T>; 2]> {
        let mask = self.mask(label)?;
        let rho = self.reduced_density(&[label])?;
        if (T::one() - rho.purity()).abs() > T::NORM_TOL {
            return Err(Error::NotProduct(label));
        }
        // Pick the environment configuration with the largest weight.
        let base = (0..self.amps.len())
            .filter(|i| i & mask == 0)
            .max_by(|a, b| {
                let wa = self.amps[*a].norm_sqr() + self.amps[a | mask].norm_sqr();
                let wb = self.amps[*b].norm_sqr() + self.amps[b | mask].norm_sqr();
                wa.partial_cmp(&wb).unwrap_or(std::cmp::Ordering::Equal)
            })
            .ok_or(Error::ZeroVector)?;
        let pair = [self.amps[base], self.amps[base | mask]];
        let norm = (pair[0].norm_sqr() + pair[1].norm_sqr()).sqrt();
        Ok([pair[0] / norm, pair[1] / norm])
    }

    /// Tensor product `self ⊗ other`, re-sorted into register order.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        check_labels(&labels)?;
        let amps: Vec<_> = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        let joined = Self { labels, amps };
        let mut order = joined.labels.clone();
        order.sort_by_key(|l| l.slot());
        joined.permuted(&order)
    }

    fn permuted(&self, order: &[QubitLabel]) -> Result<Self> {
        let n = self.labels.len();
        let src_masks = order
            .iter()
            .map(|l| self.mask(*l))
            .collect::<Result<Vec<_>>>()?;
        let mut amps = vec![Complex::zero(); self.amps.len()];
        for (dst, amp) in amps.iter_mut().enumerate() {
            let src = src_masks
                .iter()
                .enumerate()
                .filter(|(k, _)| dst >> (n - 1 - k) & 1 == 1)
                .map(|(_, m)| m)
                .sum::<usize>();
            *amp = self.amps[src];
        }
        Ok(Self {
            labels: order.to_vec(),
            amps,
        })
    }
}

/// Computational basis ket `|bit⟩`.
pub fn ket<T: Scalar>(bit: u8) -> [Amplitude<T>; 2] {
    if bit & 1 == 0 {
        [Complex::one(), Complex::zero()]
    } else {
        [Complex::zero(), Complex::one()]
    }
}

/// Global-phase-normalized copy of an amplitude vector.
pub fn canonical_phase<T: Scalar>(amps: &[Amplitude<T>]) -> Result<Vec<Amplitude<T>>> {
    let lead = amps
        .iter()
        .find(|a| a.norm() > T::PHASE_EPS)
        .ok_or(Error::ZeroVector)?;
    let rot = lead.conj() / lead.norm();
    Ok(amps.iter().map(|a| a * rot).collect())
}

pub fn max_abs_diff<T: Scalar>(a: &[Amplitude<T>], b: &[Amplitude<T>]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc.max((x - y).norm()))
}

/// Squared overlap of two normalized single-qubit states.
pub fn qubit_fidelity<T: Scalar>(a: &[Amplitude<T>; 2], b: &[Amplitude<T>; 2]) -> T {
    (a[0].conj() * b[0] + a[1].conj() * b[1])
        .norm_sqr()
        .min(T::one())
}
