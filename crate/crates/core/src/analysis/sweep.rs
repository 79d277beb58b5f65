use rayon::prelude::*;
use serde::Serialize;

use super::formulas::average_fidelity_formula;
use super::report::cross_validate;
use crate::error::{Error, Result};
use crate::protocol::ProtocolConfig;
use crate::scalar::Scalar;

/// Average fidelity over an (alpha, gamma) grid; `values[i][j]` belongs to
/// `alphas[i]`, `gammas[j]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepGrid<T> {
    pub alphas: Vec<T>,
    pub gammas: Vec<T>,
    pub values: Vec<Vec<T>>,
    /// Largest formula/enumeration gap, when validation was requested.
    pub max_disagreement: Option<T>,
}

/// `steps` amplitudes evenly spaced on [0, 1].
pub fn amplitude_axis<T: Scalar>(steps: usize) -> Vec<T> {
    let last = T::of((steps.max(2) - 1) as f64);
    (0..steps).map(|i| T::of(i as f64) / last).collect()
}

/// Amplitudes whose squares are evenly spaced on [0, 1].
pub fn probability_axis<T: Scalar>(steps: usize) -> Vec<T> {
    amplitude_axis::<T>(steps)
        .into_iter()
        .map(|p| p.sqrt())
        .collect()
}

pub fn sweep<T: Scalar>(alphas: &[T], gammas: &[T], validate: bool) -> Result<SweepGrid<T>> {
    if alphas.is_empty() || gammas.is_empty() {
        return Err(Error::InvalidParameter {
            name: "axis",
            value: 0.0,
            reason: "must be non-empty",
        });
    }
    let rows: Vec<(Vec<T>, T)> = alphas
        .par_iter()
        .map(|&alpha| {
            let mut gap = T::zero();
            let row = gammas
                .iter()
                .map(|&gamma| {
                    let cfg = ProtocolConfig::new(alpha, gamma)?;
                    let f = average_fidelity_formula(&cfg)?;
                    if validate {
                        let r = cross_validate(&cfg)?;
                        gap = gap
                            .max(r.max_abs_disagreement)
                            .max(r.max_branch_disagreement);
                    }
                    Ok(f)
                })
                .collect::<Result<Vec<T>>>()?;
            Ok((row, gap))
        })
        .collect::<Result<_>>()?;

    let max_disagreement = validate.then(|| rows.iter().fold(T::zero(), |m, (_, g)| m.max(*g)));
    Ok(SweepGrid {
        alphas: alphas.to_vec(),
        gammas: gammas.to_vec(),
        values: rows.into_iter().map(|(r, _)| r).collect(),
        max_disagreement,
    })
}
