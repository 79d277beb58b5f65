use pathspin_core::analysis::{amplitude_axis, probability_axis, sweep};
use serde::Serialize;

use crate::cli::{Spacing, SweepArgs};
use crate::error::CliError;
use crate::output::{self, num, Csv, Format, Output, SCHEMA_VERSION};
use crate::settings::Settings;

/// Enumeration and closed form must agree this closely under `--validate`.
const VALIDATE_TOL: f64 = 1e-10;

#[derive(Serialize)]
struct Point {
    alpha: f64,
    gamma: f64,
    f_avg: f64,
}

#[derive(Serialize)]
struct Document {
    schema_version: u32,
    spacing: &'static str,
    alpha_steps: usize,
    gamma_steps: usize,
    points: Vec<Point>,
    max_disagreement: Option<f64>,
}

fn steps(settings: &Settings, flag: Option<usize>, key: &str) -> Result<usize, CliError> {
    let n = settings.pick_or(flag, key, 21)?;
    if n < 2 {
        return Err(CliError::invalid(key, n, "must be at least 2"));
    }
    Ok(n)
}

pub fn run(settings: &Settings, format: Format, args: SweepArgs) -> Result<Output, CliError> {
    let alpha_steps = steps(settings, args.alpha_steps, "alpha-steps")?;
    let gamma_steps = steps(settings, args.gamma_steps, "gamma-steps")?;
    let spacing = settings.pick_or(args.spacing, "spacing", Spacing::Probability)?;
    let validate = settings.switch(args.validate, "validate")?;
    let dest = output::dest(settings.pick(args.out, "out")?);

    let axis = |n| match spacing {
        Spacing::Probability => probability_axis::<f64>(n),
        Spacing::Amplitude => amplitude_axis::<f64>(n),
    };
    let grid = sweep(&axis(alpha_steps), &axis(gamma_steps), validate)?;
    let points: Vec<Point> = grid
        .alphas
        .iter()
        .zip(&grid.values)
        .flat_map(|(&alpha, row)| {
            grid.gammas
                .iter()
                .zip(row)
                .map(move |(&gamma, &f_avg)| Point {
                    alpha,
                    gamma,
                    f_avg,
                })
        })
        .collect();

    let text = match format {
        Format::Json => output::json(&Document {
            schema_version: SCHEMA_VERSION,
            spacing: match spacing {
                Spacing::Probability => "probability",
                Spacing::Amplitude => "amplitude",
            },
            alpha_steps,
            gamma_steps,
            points,
            max_disagreement: grid.max_disagreement,
        })?,
        Format::Csv => {
            let mut csv = Csv::new(&["alpha", "gamma", "f_avg"])?;
            for p in &points {
                csv.row([num(p.alpha), num(p.gamma), num(p.f_avg)])?;
            }
            csv.finish()?
        }
        Format::Table => {
            let mut header = vec!["alpha \\ gamma".to_string()];
            header.extend(grid.gammas.iter().map(|g| format!("{g:.4}")));
            let body: Vec<Vec<String>> = grid
                .alphas
                .iter()
                .zip(&grid.values)
                .map(|(a, row)| {
                    let mut cells = vec![format!("{a:.4}")];
                    cells.extend(row.iter().map(|f| format!("{f:.6}")));
                    cells
                })
                .collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            output::table(&header, &body)
        }
    };

    let failure = grid
        .max_disagreement
        .filter(|gap| *gap > VALIDATE_TOL)
        .map(|gap| format!("enumeration disagrees with the closed form by {gap:e}"));
    Ok(Output {
        text,
        dest,
        failure,
    })
}
