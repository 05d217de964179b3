use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::anneal::{simulated_annealing, AnnealSchedule};
use crate::error::{Error, Result};
use crate::output::fmt_f64;
use crate::qubo::QuadraticModel;

/// One annealing run of a batch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub best_energy: f64,
    pub success: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuccessStats {
    pub runs: usize,
    pub successes: usize,
    pub p_hat: f64,
    pub threshold: f64,
    pub records: Vec<RunRecord>,
    /// Wall-clock time of the batch; excluded from serialized output so
    /// reruns stay byte-identical.
    #[serde(skip)]
    pub wall_seconds: f64,
}

impl PartialEq for SuccessStats {
    /// Timing is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.runs == other.runs
            && self.successes == other.successes
            && self.p_hat == other.p_hat
            && self.threshold == other.threshold
            && self.records == other.records
    }
}

/// Energies within this distance of the threshold count as reaching it, so
/// degenerate optima summed in a different order are not lost to rounding.
pub fn success_tolerance(threshold: f64) -> f64 {
    if threshold.is_finite() {
        1e-9 * (1.0 + threshold.abs())
    } else {
        0.0
    }
}

/// Runs `runs` independent anneals with seeds `base_seed + run` and counts
/// those whose best energy reaches `threshold`.
pub fn estimate_success_probability(
    model: &QuadraticModel,
    schedule: &AnnealSchedule,
    runs: usize,
    threshold: f64,
    base_seed: u64,
) -> Result<SuccessStats> {
    if runs == 0 {
        return Err(Error::argument("need at least one run"));
    }
    if threshold.is_nan() {
        return Err(Error::argument("threshold is NaN"));
    }
    let clock = Instant::now();
    let limit = threshold + success_tolerance(threshold);
    let records: Vec<RunRecord> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let seed = base_seed.wrapping_add(run as u64);
            let r = simulated_annealing(model, schedule, seed);
            RunRecord { run, seed, best_energy: r.energy, success: r.energy <= limit }
        })
        .collect();
    let successes = records.iter().filter(|r| r.success).count();
    Ok(SuccessStats {
        runs,
        successes,
        p_hat: successes as f64 / runs as f64,
        threshold,
        records,
        wall_seconds: clock.elapsed().as_secs_f64(),
    })
}

/// `run,seed,best_energy,success` rows.
pub fn write_batch_csv<W: Write>(stats: &SuccessStats, mut out: W) -> Result<()> {
    writeln!(out, "run,seed,best_energy,success")?;
    for r in &stats.records {
        writeln!(out, "{},{},{},{}", r.run, r.seed, fmt_f64(r.best_energy), u8::from(r.success))?;
    }
    Ok(())
}
