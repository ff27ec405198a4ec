//! Monte Carlo BER sweeps over the waveforms in `wavebench-core`.
//!
//! A sweep is described by a flat `key = value` config file ([`config`]), run
//! in parallel with deterministic per-trial random streams ([`stream`],
//! [`sweep`]) and written out as CSV and an SVG chart ([`report`]).

pub mod config;
mod error;
pub mod report;
pub mod stream;
pub mod sweep;

pub use config::SweepConfig;
pub use error::BenchError;
pub use report::{emit_csv, emit_plot};
pub use stream::derive_trial_stream;
pub use sweep::{run_sweep, BerRecord, SweepOutcome};
