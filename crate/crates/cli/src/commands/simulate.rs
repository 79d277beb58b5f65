use pathspin_core::analysis::average_fidelity_formula;
use pathspin_core::protocol::{enumerate_branches, run_sampled, Transcript};
use pathspin_core::{ProtocolConfig64, RunRecord64};
use serde::Serialize;

use crate::cli::SimulateArgs;
use crate::error::CliError;
use crate::output::{
    self, num, BranchRow, ConfigBlock, Csv, Format, Output, BRANCH_COLUMNS, SCHEMA_VERSION,
};
use crate::settings::Settings;

#[derive(Serialize)]
struct RunRow<'a> {
    run: u64,
    #[serde(flatten)]
    branch: BranchRow,
    #[serde(skip_serializing_if = "Option::is_none")]
    transcript: Option<&'a Transcript>,
}

#[derive(Serialize)]
struct RunsDocument<'a> {
    schema_version: u32,
    config: ConfigBlock,
    runs: Vec<RunRow<'a>>,
}

#[derive(Serialize)]
struct BranchCount {
    m2: u8,
    ma: u8,
    path: String,
    spin: u8,
    count: u64,
    frequency: f64,
    expected_probability: f64,
}

#[derive(Serialize)]
struct AggregateSummary {
    mean_fidelity: f64,
    standard_error: f64,
    f_avg_enumerated: f64,
    f_avg_formula: Option<f64>,
}

#[derive(Serialize)]
struct AggregateDocument {
    schema_version: u32,
    config: ConfigBlock,
    runs: u64,
    branches: Vec<BranchCount>,
    summary: AggregateSummary,
}

pub fn run(settings: &Settings, format: Format, args: &SimulateArgs) -> Result<Output, CliError> {
    let seed = settings.pick_or(args.seed, "seed", 0)?;
    let config = super::protocol_config(settings, &args.input)?.with_seed(seed);
    let runs = settings.require(args.runs, "runs")?;
    if runs == 0 {
        return Err(CliError::invalid("runs", runs, "must be at least 1"));
    }
    let aggregate = settings.switch(args.aggregate, "aggregate")?;
    let transcript = settings.switch(args.transcript, "transcript")?;
    if transcript && (aggregate || format != Format::Json) {
        return Err(CliError::Usage(
            "'--transcript' needs per-run JSON output".into(),
        ));
    }

    let records = run_sampled(&config, runs)?;
    let text = if aggregate {
        aggregated(&config, runs, &records, format)?
    } else {
        per_run(&config, &records, format, transcript)?
    };
    Ok(Output::stdout(text))
}

fn per_run(
    config: &ProtocolConfig64,
    records: &[RunRecord64],
    format: Format,
    transcript: bool,
) -> Result<String, CliError> {
    let rows: Vec<RunRow> = records
        .iter()
        .map(|r| RunRow {
            run: r.run_index,
            branch: BranchRow::new(&r.branch),
            transcript: transcript.then_some(&r.transcript),
        })
        .collect();
    match format {
        Format::Json => output::json(&RunsDocument {
            schema_version: SCHEMA_VERSION,
            config: ConfigBlock::new(config, Some(config.seed())),
            runs: rows,
        }),
        Format::Csv => {
            let mut header = vec!["run"];
            header.extend(BRANCH_COLUMNS);
            let mut csv = Csv::new(&header)?;
            for row in &rows {
                let mut fields = vec![row.run.to_string()];
                fields.extend(row.branch.csv_fields());
                csv.row(fields)?;
            }
            csv.finish()
        }
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let b = &r.branch;
                    vec![
                        r.run.to_string(),
                        format!("|{}>_2 |{}_x>_a", b.m2, b.ma),
                        format!("|{}>_p |{}_x>_s", b.path, b.spin),
                        b.correction.clone(),
                        output::ket(b.output),
                        b.fidelity
                            .map(|f| format!("{f:.6}"))
                            .unwrap_or_else(|| "-".into()),
                    ]
                })
                .collect();
            Ok(output::table(
                &["Run", "Alice", "Bob", "Unitary", "Final state", "Fidelity"],
                &body,
            ))
        }
    }
}

fn aggregated(
    config: &ProtocolConfig64,
    runs: u64,
    records: &[RunRecord64],
    format: Format,
) -> Result<String, CliError> {
    let expected = enumerate_branches(config)?;
    let mut counts = [0u64; 16];
    for r in records {
        counts[r.branch.id()] += 1;
    }
    let n = runs as f64;
    let fidelities: Vec<f64> = records.iter().filter_map(|r| r.branch.fidelity).collect();
    let mean = fidelities.iter().sum::<f64>() / n;
    let var = if runs > 1 {
        fidelities.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let summary = AggregateSummary {
        mean_fidelity: mean,
        standard_error: (var / n).sqrt(),
        f_avg_enumerated: expected
            .iter()
            .filter_map(|b| b.fidelity.map(|f| f * b.probability))
            .sum(),
        f_avg_formula: average_fidelity_formula(config).ok(),
    };
    let branches: Vec<BranchCount> = expected
        .iter()
        .map(|b| BranchCount {
            m2: b.m2,
            ma: b.ma,
            path: b.bob.port().to_string(),
            spin: b.bob.spin_bit,
            count: counts[b.id()],
            frequency: counts[b.id()] as f64 / n,
            expected_probability: b.probability,
        })
        .collect();

    match format {
        Format::Json => output::json(&AggregateDocument {
            schema_version: SCHEMA_VERSION,
            config: ConfigBlock::new(config, Some(config.seed())),
            runs,
            branches,
            summary,
        }),
        Format::Csv => {
            let mut csv = Csv::new(&[
                "m2",
                "ma",
                "bob_path",
                "bob_spin",
                "count",
                "frequency",
                "expected_probability",
            ])?;
            for b in &branches {
                csv.row([
                    b.m2.to_string(),
                    b.ma.to_string(),
                    b.path.clone(),
                    b.spin.to_string(),
                    b.count.to_string(),
                    num(b.frequency),
                    num(b.expected_probability),
                ])?;
            }
            csv.finish()
        }
        Format::Table => {
            let body: Vec<Vec<String>> = branches
                .iter()
                .map(|b| {
                    vec![
                        format!("|{}>_2 |{}_x>_a", b.m2, b.ma),
                        format!("|{}>_p |{}_x>_s", b.path, b.spin),
                        b.count.to_string(),
                        format!("{:.6}", b.frequency),
                        format!("{:.6}", b.expected_probability),
                    ]
                })
                .collect();
            let mut out = format!("{runs} runs, seed {}\n\n", config.seed());
            out.push_str(&output::table(
                &["Alice", "Bob", "Count", "Frequency", "Expected"],
                &body,
            ));
            out.push_str(&format!(
                "\nmean fidelity {:.8} +/- {:.2e} (standard error); enumerated average {:.8}\n",
                summary.mean_fidelity, summary.standard_error, summary.f_avg_enumerated
            ));
            Ok(out)
        }
    }
}
