use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{BranchRecord, CorrectionTable, ProtocolConfig, Selector, Session, Transcript};
use crate::error::Result;
use crate::scalar::Scalar;

/// One sampled run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord<T> {
    pub run_index: u64,
    pub branch: BranchRecord<T>,
    pub transcript: Transcript,
}

/// Generator for run `index`: ChaCha8 keyed by `seed`, on stream `index`.
/// Runs therefore do not depend on how many threads executed them.
pub fn run_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn single_run<T: Scalar>(config: &ProtocolConfig<T>, index: u64) -> Result<RunRecord<T>> {
    let mut rng = run_rng(config.seed(), index);
    let mut s = Session::prepare(config.clone())?;
    s.transmit(false, false)?;
    s.alice_measure(Selector::Sample(&mut rng))?;
    s.bob_receive_and_process()?;
    s.bob_measure(Selector::Sample(&mut rng))?;
    s.apply_correction(&CorrectionTable::STANDARD)?;
    Ok(RunRecord {
        run_index: index,
        branch: BranchRecord::from_session(&s)?,
        transcript: s.transcript().clone(),
    })
}

/// `n_runs` independent Born-rule runs, seeded from the config. Output order
/// follows the run index.
pub fn run_sampled<T: Scalar>(
    config: &ProtocolConfig<T>,
    n_runs: u64,
) -> Result<Vec<RunRecord<T>>> {
    (0..n_runs)
        .into_par_iter()
        .map(|i| single_run(config, i))
        .collect()
}
