use pathspin_core::analysis::{verify_grid, VerifyFailure, VerifySummary};
use pathspin_core::{BobOutcome, CorrectionTable, Pauli};
use serde::Serialize;

use crate::cli::VerifyArgs;
use crate::error::CliError;
use crate::output::{self, Format, Output, SCHEMA_VERSION};
use crate::settings::Settings;

const GRID_STEPS: usize = 21;

#[derive(Serialize)]
struct Document<'a> {
    schema_version: u32,
    tolerance: f64,
    passed: bool,
    summary: Option<&'a VerifySummary>,
    failure: Option<&'a VerifyFailure>,
}

/// Parses `M2,MA,PATH,SPIN` (bits; PATH also accepts `a`/`b`) and swaps that
/// entry of the standard table for a wrong Pauli.
fn faulty_table(fault: &str) -> Result<CorrectionTable, CliError> {
    let bad = || CliError::invalid("inject-fault", fault, "expected M2,MA,PATH,SPIN");
    let fields: Vec<&str> = fault.split(',').map(str::trim).collect();
    if fields.len() != 4 {
        return Err(bad());
    }
    let bit = |s: &str| match s {
        "0" | "a" => Ok(0u8),
        "1" | "b" => Ok(1u8),
        _ => Err(bad()),
    };
    let (m2, ma, path, spin) = (
        bit(fields[0])?,
        bit(fields[1])?,
        bit(fields[2])?,
        bit(fields[3])?,
    );
    let bob = BobOutcome::new(path, spin);
    let table = CorrectionTable::STANDARD;
    let wrong = match table.lookup(m2, ma, bob) {
        Pauli::I => Pauli::X,
        Pauli::X => Pauli::Y,
        Pauli::Y => Pauli::Z,
        Pauli::Z => Pauli::I,
    };
    Ok(table.with_entry(m2, ma, bob, wrong))
}

pub fn run(settings: &Settings, format: Format, args: &VerifyArgs) -> Result<Output, CliError> {
    let tolerance = settings.pick_or(args.tolerance, "tolerance", 1e-10)?;
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(CliError::invalid(
            "tolerance",
            tolerance,
            "must be positive",
        ));
    }
    let table = match &args.inject_fault {
        Some(fault) => faulty_table(fault)?,
        None => CorrectionTable::STANDARD,
    };

    let result = verify_grid::<f64>(GRID_STEPS, tolerance, &table);
    let (summary, failure) = match &result {
        Ok(s) => (Some(s), None),
        Err(f) => (None, Some(f)),
    };
    let text = match format {
        Format::Json => output::json(&Document {
            schema_version: SCHEMA_VERSION,
            tolerance,
            passed: failure.is_none(),
            summary,
            failure,
        })?,
        Format::Csv => {
            let mut csv = output::Csv::new(&[
                "passed",
                "grid_points",
                "branches",
                "checks",
                "failed_item",
                "alpha",
                "gamma",
                "detail",
            ])?;
            match &result {
                Ok(s) => csv.row([
                    "true".into(),
                    s.grid_points.to_string(),
                    s.branches.to_string(),
                    s.checks.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ])?,
                Err(f) => csv.row([
                    "false".into(),
                    String::new(),
                    String::new(),
                    String::new(),
                    f.item.clone(),
                    output::num(f.alpha),
                    output::num(f.gamma),
                    f.detail.clone(),
                ])?,
            }
            csv.finish()?
        }
        Format::Table => match &result {
            Ok(s) => format!("{s} ({} checks, tolerance {tolerance:e})\n", s.checks),
            Err(f) => format!("FAILED: {f}\n"),
        },
    };
    let failure = failure.map(|f| format!("verification failed: {}", f.item));
    Ok(Output {
        text,
        dest: None,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_argument_parsing() {
        let t = faulty_table("1,0,b,0").unwrap();
        assert_ne!(t, CorrectionTable::STANDARD);
        assert_eq!(faulty_table("1, 0, 1, 0").unwrap(), t);
        assert!(faulty_table("1,0,c,0").is_err());
        assert!(faulty_table("1,0,1").is_err());
    }
}
