use std::f64::consts::FRAC_1_SQRT_2;

use pathspin_core::analysis::{eve_information, premature_measurement_leak};
use pathspin_core::ProtocolConfig64;
use serde::Serialize;

use crate::cli::EveArgs;
use crate::error::CliError;
use crate::output::{self, num, ConfigBlock, Csv, Format, Output, SCHEMA_VERSION};
use crate::settings::Settings;

/// Basis labels |path spin> of particle 1, in matrix index order.
const BASIS: [&str; 4] = ["00", "01", "10", "11"];

#[derive(Serialize)]
struct Document {
    schema_version: u32,
    config: ConfigBlock,
    /// Row-major, each entry `[re, im]`.
    rho_eve: Vec<Vec<[f64; 2]>>,
    diagonal: Vec<f64>,
    input_independence: f64,
    probe: Probe,
    premature_leak: f64,
}

#[derive(Serialize)]
struct Probe {
    gamma: f64,
    phase: f64,
}

pub fn run(settings: &Settings, format: Format, args: &EveArgs) -> Result<Output, CliError> {
    use super::{finite, unit_interval};
    let alpha = unit_interval("alpha", settings.require(args.alpha, "alpha")?)?;
    let gamma = unit_interval(
        "gamma",
        settings.pick_or(args.gamma, "gamma", FRAC_1_SQRT_2)?,
    )?;
    let phase = finite("phase", settings.pick_or(args.phase, "phase", 0.0)?)?;
    let probe_gamma = unit_interval(
        "probe-gamma",
        settings.pick_or(args.probe_gamma, "probe-gamma", 1.0)?,
    )?;
    let probe_phase = finite(
        "probe-phase",
        settings.pick_or(args.probe_phase, "probe-phase", 0.0)?,
    )?;

    let config = ProtocolConfig64::new(alpha, gamma)?.with_phase(phase)?;
    let (rho, independence) = eve_information(&config)?;
    let leak = premature_measurement_leak(&config, probe_gamma, probe_phase)?;

    let dim = rho.dim();
    let matrix: Vec<Vec<[f64; 2]>> = (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| [rho.get(r, c).re, rho.get(r, c).im])
                .collect()
        })
        .collect();
    let diagonal: Vec<f64> = (0..dim).map(|i| rho.get(i, i).re).collect();

    let text = match format {
        Format::Json => output::json(&Document {
            schema_version: SCHEMA_VERSION,
            config: ConfigBlock::new(&config, None),
            rho_eve: matrix,
            diagonal,
            input_independence: independence,
            probe: Probe {
                gamma: probe_gamma,
                phase: probe_phase,
            },
            premature_leak: leak,
        })?,
        Format::Csv => {
            let mut csv = Csv::new(&["quantity", "value"])?;
            for (r, row) in matrix.iter().enumerate() {
                for (c, [re, im]) in row.iter().enumerate() {
                    csv.row([format!("rho_{}_{}_re", BASIS[r], BASIS[c]), num(*re)])?;
                    csv.row([format!("rho_{}_{}_im", BASIS[r], BASIS[c]), num(*im)])?;
                }
            }
            csv.row(["input_independence".to_string(), num(independence)])?;
            csv.row(["premature_leak".to_string(), num(leak)])?;
            csv.finish()?
        }
        Format::Table => {
            let mut header = vec!["|path spin>".to_string()];
            header.extend(BASIS.iter().map(|b| format!("<{b}|")));
            let body: Vec<Vec<String>> = matrix
                .iter()
                .enumerate()
                .map(|(r, row)| {
                    let mut cells = vec![format!("|{}>", BASIS[r])];
                    cells.extend(row.iter().map(|[re, im]| {
                        if im.abs() < 5e-7 {
                            format!("{re:.6}")
                        } else {
                            format!("{re:.6}{im:+.6}i")
                        }
                    }));
                    cells
                })
                .collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut out = String::from("Particle 1 as seen by an interceptor:\n\n");
            out.push_str(&output::table(&header, &body));
            out.push_str(&format!(
                "\nsupport: |10> {:.6}, |01> {:.6}\n\
                 largest change over probe inputs: {independence:.3e}\n\
                 premature-measurement leak (probe gamma {probe_gamma:.6}, phase {probe_phase:.6}): {leak:.6}\n",
                diagonal[0b10], diagonal[0b01]
            ));
            out
        }
    };
    Ok(Output::stdout(text))
}
