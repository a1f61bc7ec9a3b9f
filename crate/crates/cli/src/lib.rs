//! Batch pipeline over the `atlas-core` algorithms: config handling, the
//! design and graph sweeps, report emission, a canonical-form cache and
//! fixture verification.

pub mod cache;
pub mod config;
pub mod error;
pub mod pipeline;
pub mod report;
pub mod verify;

pub use config::{RowFilter, RunConfig};
pub use error::{CliError, CliResult};
pub use pipeline::{run_design_classification, run_srg_search, Session};
pub use report::{emit_report, Format, Report, ReportKind, ReportRow};
