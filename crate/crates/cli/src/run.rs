use std::fs::File;
use std::io::{self, BufWriter, Write};

use duality_core::report::VerificationReport;

use crate::catalog::list_cases;
use crate::config::{Command, Format, RunConfig};
use crate::record::{write_records, Record};
use crate::suites;

pub struct Outcome {
    pub reports: Vec<VerificationReport>,
    pub records: Vec<Record>,
}

/// Exit status of a set of records: 0 iff every check passed.
pub fn exit_status(records: &[Record]) -> i32 {
    if records.iter().all(Record::passed) {
        0
    } else {
        1
    }
}

/// Runs the suites of `cfg.command` in a fixed order.
pub fn execute(cfg: &RunConfig) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let algebra = |out: &mut Vec<VerificationReport>| out.extend(suites::algebra_suite(cfg));
    let duality = |out: &mut Vec<VerificationReport>| {
        out.extend(suites::generator_suite(cfg));
        out.extend(suites::duality_suite(cfg));
        out.extend(suites::intertwining_suite(cfg));
    };
    let ortho = |out: &mut Vec<VerificationReport>| {
        out.extend(suites::orthogonality_suite(cfg));
        out.extend(suites::cross_suite(cfg));
    };
    match cfg.command {
        Command::VerifyAlgebra => algebra(&mut out),
        Command::VerifyDuality => duality(&mut out),
        Command::VerifyOrthogonality => ortho(&mut out),
        Command::Simulate => out.extend(suites::montecarlo_suite(cfg)),
        Command::All => {
            algebra(&mut out);
            duality(&mut out);
            ortho(&mut out);
            out.extend(suites::montecarlo_suite(cfg));
        }
        Command::ListCases => {}
    }
    out
}

/// Runs `cfg`, writes the report, and returns the records with the exit
/// status. Failing records are listed on stderr.
pub fn run(cfg: &RunConfig) -> io::Result<(Outcome, i32)> {
    if cfg.command == Command::ListCases {
        write_catalog(cfg)?;
        return Ok((Outcome { reports: Vec::new(), records: Vec::new() }, 0));
    }
    let reports = execute(cfg);
    let records: Vec<Record> = reports.iter().map(Record::from).collect();
    match &cfg.output {
        Some(path) => write_records(BufWriter::new(File::create(path)?), &records, cfg.format)?,
        None => write_records(io::stdout().lock(), &records, cfg.format)?,
    }
    let failing: Vec<&VerificationReport> = reports.iter().filter(|r| !r.passed()).collect();
    if !failing.is_empty() {
        let mut err = io::stderr().lock();
        writeln!(err, "{} of {} checks failed:", failing.len(), reports.len())?;
        for r in failing {
            writeln!(
                err,
                "  {} [{}] abs {:e} rel {:e} tolerance {:e}",
                r.case,
                serde_json::to_string(&r.mode).unwrap_or_default().trim_matches('"'),
                r.max_abs_residual,
                r.max_rel_residual,
                r.tolerance
            )?;
            for n in &r.notes {
                writeln!(err, "      {n}")?;
            }
        }
    }
    let status = exit_status(&records);
    Ok((Outcome { reports, records }, status))
}

fn write_catalog(cfg: &RunConfig) -> io::Result<()> {
    let entries = list_cases();
    let sink: Box<dyn Write> = match &cfg.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match cfg.format {
        Format::Json => {
            let mut w = sink;
            serde_json::to_writer_pretty(&mut w, &entries)?;
            writeln!(w)?;
            w.flush()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            for e in &entries {
                w.serialize(e)?;
            }
            w.flush()
        }
    }
}
