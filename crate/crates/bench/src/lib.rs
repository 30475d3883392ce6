//! Timing sweeps over the CP-ABE and KP-ABE schemes: per-operation
//! wall-clock measurements across attribute counts and security levels,
//! with CSV output and per-cell statistics.

use std::path::{Path, PathBuf};

use aben_core::error::{AbeError, PairingError};
use thiserror::Error;

pub mod plan;
pub mod report;
pub mod runner;

pub use plan::{BenchPlan, Op, Scheme, SchemeChoice, Shape};
pub use report::{emit_records, emit_summaries, linear_fit, read_records, summarize, summarize_plan, CellSummary};
pub use runner::{run_plan, workload, BenchRecord};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("plan infeasible: {0}")]
    PlanInfeasible(String),
    #[error("no records for cell {0}")]
    EmptyCell(String),
    #[error(transparent)]
    Abe(#[from] AbeError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        source: csv::Error,
    },
}

/// `results.csv` → `results.<suffix>`.
pub fn sibling_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

/// Describes the run in `key=value` lines. Kept out of the CSV itself so
/// that the data files hold only the header and rows.
pub fn plan_metadata(plan: &BenchPlan) -> String {
    let join = |v: Vec<String>| v.join(",");
    format!(
        "schemes={}\nops={}\nlevels={}\nattr_counts={}\nreps={}\nwarmup={}\nseed={}\nshape={}\ntimer=monotonic wall clock, one operation per timed region\nsizes=serialized output (setup: public key, keygen: private key, encrypt and decrypt: header)\n",
        join(plan.schemes.iter().map(|s| s.to_string()).collect()),
        join(plan.ops.iter().map(|o| o.to_string()).collect()),
        join(plan.levels.iter().map(|l| l.bits().to_string()).collect()),
        join(plan.attr_counts.iter().map(|n| n.to_string()).collect()),
        plan.reps,
        plan.warmup,
        plan.seed,
        plan.shape.describe(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_paths() {
        assert_eq!(sibling_path(Path::new("out/r.csv"), "summary.csv"), PathBuf::from("out/r.summary.csv"));
        assert_eq!(sibling_path(Path::new("r"), "meta.txt"), PathBuf::from("r.meta.txt"));
    }
}
