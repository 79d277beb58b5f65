use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use pathspin_core::statevec::canonical_phase;
use pathspin_core::{Amplitude, BranchRecord64, ProtocolConfig64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// What a subcommand produced. `failure` turns into exit code 1 after the
/// report has been written.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub dest: Option<PathBuf>,
    pub failure: Option<String>,
}

impl Output {
    pub fn stdout(text: String) -> Self {
        Self {
            text,
            dest: None,
            failure: None,
        }
    }

    pub fn emit(&self) -> Result<(), CliError> {
        match &self.dest {
            Some(path) => std::fs::write(path, &self.text).map_err(|e| CliError::io(path, e)),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(self.text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| CliError::io("<stdout>", e))
            }
        }
    }
}

/// `x` rounded to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// CSV cell: 15 significant digits, shortest spelling.
pub fn num(x: f64) -> String {
    format!("{:?}", round15(x))
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub struct Csv {
    writer: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header).map_err(csv_failure)?;
        Ok(Self { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(csv_failure)
    }

    pub fn finish(self) -> Result<String, CliError> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| CliError::Failed(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Failed(e.to_string()))
    }
}

fn csv_failure(e: csv::Error) -> CliError {
    CliError::Failed(format!("csv: {e}"))
}

pub fn json<T: Serialize>(doc: &T) -> Result<String, CliError> {
    let mut text =
        serde_json::to_string_pretty(doc).map_err(|e| CliError::Failed(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

#[derive(Debug, Serialize)]
pub struct ConfigBlock {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub phase: f64,
    pub seed: Option<u64>,
}

impl ConfigBlock {
    pub fn new(config: &ProtocolConfig64, seed: Option<u64>) -> Self {
        Self {
            alpha: config.alpha(),
            beta: config.beta(),
            gamma: config.gamma(),
            delta: config.delta(),
            phase: config.input_phase(),
            seed,
        }
    }
}

/// Output amplitudes with the global phase removed, as `[re, im, re, im]`.
pub fn flat_state(state: &[Amplitude<f64>; 2]) -> Option<[f64; 4]> {
    let c = canonical_phase(state).ok()?;
    Some([c[0].re, c[0].im, c[1].re, c[1].im])
}

#[derive(Debug, Serialize)]
pub struct BranchRow {
    pub m2: u8,
    pub ma: u8,
    pub path: String,
    pub spin: u8,
    pub probability: f64,
    pub correction: String,
    pub output: Option<[f64; 4]>,
    pub fidelity: Option<f64>,
}

pub const BRANCH_COLUMNS: [&str; 11] = [
    "m2",
    "ma",
    "bob_path",
    "bob_spin",
    "probability",
    "correction",
    "out_amp0_re",
    "out_amp0_im",
    "out_amp1_re",
    "out_amp1_im",
    "fidelity",
];

impl BranchRow {
    pub fn new(b: &BranchRecord64) -> Self {
        Self {
            m2: b.m2,
            ma: b.ma,
            path: b.bob.port().to_string(),
            spin: b.bob.spin_bit,
            probability: b.probability,
            correction: b.correction.to_string(),
            output: b.output_state.as_ref().and_then(flat_state),
            fidelity: b.fidelity,
        }
    }

    pub fn csv_fields(&self) -> Vec<String> {
        let mut f = vec![
            self.m2.to_string(),
            self.ma.to_string(),
            self.path.clone(),
            self.spin.to_string(),
            num(self.probability),
            self.correction.clone(),
        ];
        match self.output {
            Some(o) => f.extend(o.iter().map(|x| num(*x))),
            None => f.extend(std::iter::repeat_n(String::new(), 4)),
        }
        f.push(opt_num(self.fidelity));
        f
    }
}

/// `0.6|0> + 0.8|1>` style ket for the human tables.
pub fn ket(output: Option<[f64; 4]>) -> String {
    let Some([r0, i0, r1, i1]) = output else {
        return "-".into();
    };
    let amp = |re: f64, im: f64| {
        if im.abs() < 5e-7 {
            format!("{re:.6}")
        } else {
            format!("({re:.6}{im:+.6}i)")
        }
    };
    format!("{}|0> + {}|1>", amp(r0, i0), amp(r1, i1))
}

/// Left-aligned plain-text table.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    let rules: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&line(rules.iter().map(String::as_str).collect()));
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn dest(path: Option<PathBuf>) -> Option<PathBuf> {
    path.filter(|p| p != Path::new("-"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(num(0.0576), "0.0576");
        assert_eq!(num(1.0), "1.0");
        assert_eq!(num(1.0 / 3.0), "0.333333333333333");
        assert_eq!(num(2.0f64.sqrt() * 1e-20), "1.4142135623731e-20");
        assert_eq!(num(-0.5), "-0.5");
    }

    #[test]
    fn round_trip_within_one_ulp_of_rounded_value() {
        for x in [
            std::f64::consts::PI,
            0.1 + 0.2,
            1e-300,
            123456.78901234568,
            0.98,
        ] {
            let back: f64 = num(x).parse().unwrap();
            assert_eq!(back, round15(x));
            assert!(((back - x) / x).abs() < 1e-14);
        }
    }

    #[test]
    fn csv_quotes_and_uses_lf() {
        let mut c = Csv::new(&["a", "b"]).unwrap();
        c.row(["x,y", "1"]).unwrap();
        assert_eq!(c.finish().unwrap(), "a,b\n\"x,y\",1\n");
    }

    #[test]
    fn ket_rendering() {
        assert_eq!(ket(Some([0.6, 0.0, 0.8, 0.0])), "0.600000|0> + 0.800000|1>");
        assert_eq!(
            ket(Some([1.0, 0.0, 0.0, -0.5])),
            "1.000000|0> + (0.000000-0.500000i)|1>"
        );
        assert_eq!(ket(None), "-");
    }
}
