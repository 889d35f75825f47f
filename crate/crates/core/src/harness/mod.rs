//! Configuration-driven experiments: convergence sweeps, rate fits, bound
//! checks and report files.

mod config;
mod fit;
mod report;
mod sweep;

pub use config::{
    parse_complex, ExperimentConfig, OutputPaths, ProductWindowSpec, RegularizerConfig, SequenceConfig, SignalConfig,
};
pub use fit::{fit_free_exponent, fit_rate, FreeExponentFit, LineFit, MIN_FIT_POINTS};
pub use report::{summary_json, write_csv, write_outputs, CSV_HEADER};
pub use sweep::{sweep, sweep_row, BoundKind, RowDetail, SweepReport, SweepRow};
