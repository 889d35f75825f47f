use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::ExperimentConfig;
use super::sweep::{SweepReport, SweepRow};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "N,N_star,max_error,bound,at_floor";

/// Fixed-column CSV with every float printed to 17 significant digits.
pub fn write_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(',')).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.n.to_string(),
            format!("{:.16e}", r.n_star),
            format!("{:.16e}", r.max_error),
            format!("{:.16e}", r.bound),
            r.at_floor.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

#[derive(Serialize)]
struct Summary<'a> {
    config: &'a ExperimentConfig,
    report: &'a SweepReport,
}

pub fn summary_json(cfg: &ExperimentConfig, report: &SweepReport) -> String {
    serde_json::to_string_pretty(&Summary { config: cfg, report }).expect("report serializes")
}

/// Write the CSV and JSON summary under `dir`; returns their paths.
pub fn write_outputs(cfg: &ExperimentConfig, report: &SweepReport, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let io = |p: &Path, e: std::io::Error| Error::Config(format!("cannot write {}: {e}", p.display()));
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let csv = dir.join(&cfg.output.csv);
    let summary = dir.join(&cfg.output.summary);
    std::fs::write(&csv, write_csv(&report.rows)).map_err(|e| io(&csv, e))?;
    std::fs::write(&summary, summary_json(cfg, report) + "\n").map_err(|e| io(&summary, e))?;
    Ok((csv, summary))
}
