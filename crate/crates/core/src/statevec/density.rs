use num_complex::Complex;

use super::{Amplitude, QubitLabel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reduced density matrix over a subset of the register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    labels: Vec<QubitLabel>,
    dim: usize,
    entries: Vec<Amplitude<T>>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(labels: Vec<QubitLabel>, entries: Vec<Amplitude<T>>) -> Result<Self> {
        let dim = 1usize << labels.len();
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let rho = Self {
            labels,
            dim,
            entries,
        };
        for r in 0..dim {
            for c in 0..dim {
                if (rho.get(r, c) - rho.get(c, r).conj()).norm() > T::HERMITIAN_TOL {
                    return Err(Error::InvalidDensity("not Hermitian"));
                }
            }
        }
        if (rho.trace() - T::one()).abs() > T::NORM_TOL {
            return Err(Error::InvalidDensity("trace differs from one"));
        }
        if rho
            .eigenvalues()
            .first()
            .is_some_and(|e| *e < -T::EIGEN_TOL)
        {
            return Err(Error::InvalidDensity("negative eigenvalue"));
        }
        Ok(rho)
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude<T> {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Amplitude<T>] {
        &self.entries
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.get(i, i).re)
    }

    /// `tr(ρ²)`; equals one exactly for pure states.
    pub fn purity(&self) -> T {
        // ρ Hermitian, so tr(ρ²) = Σ |ρ_ij|².
        self.entries
            .iter()
            .fold(T::zero(), |acc, e| acc + e.norm_sqr())
    }

    /// Maximum absolute entrywise difference.
    pub fn distance(&self, other: &Self) -> Result<T> {
        if self.labels != other.labels {
            return Err(Error::RegisterMismatch);
        }
        Ok(super::max_abs_diff(&self.entries, &other.entries))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(self.dim, &self.entries)
    }
}

/// Eigenvalues of a Hermitian matrix `H = A + iB` via the real symmetric
/// embedding `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every
/// eigenvalue doubled. Cyclic Jacobi sweeps on the embedding.
pub(crate) fn hermitian_eigenvalues<T: Scalar>(dim: usize, h: &[Complex<T>]) -> Vec<T> {
    let n = 2 * dim;
    let mut m = vec![T::zero(); n * n];
    for r in 0..dim {
        for c in 0..dim {
            let z = h[r * dim + c];
            m[r * n + c] = z.re;
            m[(r + dim) * n + (c + dim)] = z.re;
            m[r * n + (c + dim)] = -z.im;
            m[(r + dim) * n + c] = z.im;
        }
    }

    for _sweep in 0..100 {
        let off = (0..n)
            .flat_map(|r| (0..n).filter(move |c| *c != r).map(move |c| (r, c)))
            .fold(T::zero(), |acc, (r, c)| acc + m[r * n + c] * m[r * n + c]);
        if off <= T::epsilon() * T::epsilon() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.is_zero() {
                    continue;
                }
                let two = T::one() + T::one();
                let theta = (m[q * n + q] - m[p * n + p]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }

    let mut diag: Vec<T> = (0..n).map(|i| m[i * n + i]).collect();
    diag.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    diag.into_iter().step_by(2).collect()
}
