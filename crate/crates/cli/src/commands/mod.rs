mod enumerate;
mod eve;
mod simulate;
mod sweep;
mod verify;

use pathspin_core::ProtocolConfig64;

use crate::cli::{Cli, Command, InputArgs};
use crate::error::CliError;
use crate::output::{Format, Output};
use crate::settings::Settings;

pub fn run(cli: Cli) -> Result<Output, CliError> {
    let settings = Settings::load(cli.config.as_deref())?;
    let format = settings.pick(cli.format, "format")?;
    match cli.command {
        Command::Enumerate(args) => {
            enumerate::run(&settings, format.unwrap_or(Format::Table), &args)
        }
        Command::Simulate(args) => simulate::run(&settings, format.unwrap_or(Format::Table), &args),
        Command::Sweep(args) => sweep::run(&settings, format.unwrap_or(Format::Csv), args),
        Command::Verify(args) => verify::run(&settings, format.unwrap_or(Format::Table), &args),
        Command::Eve(args) => eve::run(&settings, format.unwrap_or(Format::Table), &args),
    }
}

pub(crate) fn unit_interval(flag: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(CliError::invalid(flag, value, "must lie in [0, 1]"))
    }
}

pub(crate) fn finite(flag: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::invalid(flag, value, "must be finite"))
    }
}

pub(crate) fn protocol_config(
    settings: &Settings,
    input: &InputArgs,
) -> Result<ProtocolConfig64, CliError> {
    let alpha = unit_interval("alpha", settings.require(input.alpha, "alpha")?)?;
    let gamma = unit_interval("gamma", settings.require(input.gamma, "gamma")?)?;
    let phase = finite("phase", settings.pick_or(input.phase, "phase", 0.0)?)?;
    Ok(ProtocolConfig64::new(alpha, gamma)?.with_phase(phase)?)
}
