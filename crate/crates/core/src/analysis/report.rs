use serde::Serialize;

use super::formulas::{average_fidelity_formula, fidelity_case};
use crate::error::{Error, Result};
use crate::protocol::{enumerate_branches, ProtocolConfig};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchFidelity<T> {
    pub id: usize,
    pub probability: T,
    pub fidelity: Option<T>,
}

/// Closed-form fidelities next to the enumerated ones.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FidelityReport<T> {
    pub per_branch: Vec<BranchFidelity<T>>,
    /// `None` when the case cannot occur (zero denominator).
    pub case_fidelity_m2_0: Option<T>,
    pub case_fidelity_m2_1: Option<T>,
    pub average_formula: T,
    pub average_enumerated: T,
    /// `|average_formula − average_enumerated|`.
    pub max_abs_disagreement: T,
    /// Largest per-branch gap between enumerated and closed-form fidelity.
    pub max_branch_disagreement: T,
}

fn optional<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::DegenerateBranch { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Enumerates all branches and compares them with the closed forms.
/// Disagreement is reported in the result, never raised.
pub fn cross_validate<T: Scalar>(config: &ProtocolConfig<T>) -> Result<FidelityReport<T>> {
    let average_formula = average_fidelity_formula(config)?;
    let case = [
        optional(fidelity_case(0, config))?,
        optional(fidelity_case(1, config))?,
    ];
    let branches = enumerate_branches(config)?;

    let mut average_enumerated = T::zero();
    let mut max_branch_disagreement = T::zero();
    let per_branch = branches
        .iter()
        .map(|b| {
            if let Some(f) = b.fidelity {
                average_enumerated += b.probability * f;
                let gap = match case[b.m2 as usize] {
                    Some(expected) => (f - expected).abs(),
                    None => T::infinity(),
                };
                max_branch_disagreement = max_branch_disagreement.max(gap);
            }
            BranchFidelity {
                id: b.id(),
                probability: b.probability,
                fidelity: b.fidelity,
            }
        })
        .collect();

    Ok(FidelityReport {
        per_branch,
        case_fidelity_m2_0: case[0],
        case_fidelity_m2_1: case[1],
        average_formula,
        average_enumerated,
        max_abs_disagreement: (average_formula - average_enumerated).abs(),
        max_branch_disagreement,
    })
}
