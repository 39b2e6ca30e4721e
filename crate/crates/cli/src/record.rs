//! The report schema and its JSON and CSV writers.

use std::io::Write;

use duality_core::report::{Mode, Status, VerificationReport};
use serde::Serialize;

use crate::config::Format;

/// One line of the report. The field set is fixed; NaN residuals (a check
/// that errored) serialize as JSON null.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub case: String,
    pub mode: Mode,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub tolerance: f64,
    pub status: Status,
    pub wall_time_ms: f64,
    pub seed: Option<u64>,
}

pub const FIELDS: [&str; 8] =
    ["case", "mode", "max_abs_residual", "max_rel_residual", "tolerance", "status", "wall_time_ms", "seed"];

impl From<&VerificationReport> for Record {
    fn from(r: &VerificationReport) -> Self {
        Record {
            case: r.case.clone(),
            mode: r.mode,
            max_abs_residual: r.max_abs_residual,
            max_rel_residual: r.max_rel_residual,
            tolerance: r.tolerance,
            status: r.status,
            wall_time_ms: r.wall_time_ms,
            seed: r.seed,
        }
    }
}

impl Record {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub fn write_records<W: Write>(w: W, records: &[Record], format: Format) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let mut w = w;
            serde_json::to_writer_pretty(&mut w, records)?;
            writeln!(w)
        }
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            if records.is_empty() {
                out.write_record(FIELDS)?;
            }
            for r in records {
                out.serialize(r)?;
            }
            out.flush()
        }
    }
}
