//! Configuration, initial conditions, the run loop and output formats.

mod config;
mod ic;
mod run;
mod snapshot;
mod trace;

pub use config::{load_config, parse_config, IcConfig, OutputConfig, RunConfig};
pub use ic::{initial_condition, IcKind};
pub use run::{run_observed, run_simulation, RunSummary, StepReport, DIVERGENCE_TOL};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot, SnapshotField, MAGIC};
pub use trace::{parse_trace, TraceRow, TraceWriter, TRACE_HEADER};
