//! Batch front-end for the rPPG toolkit: dataset manifests, method
//! evaluation, preservation suites, driving-video selection, and report
//! emission. The `rppg` binary wraps these operations as subcommands.

pub mod config;
pub mod error;
pub mod eval;
pub mod preserve;
pub mod report;
pub mod synthset;

pub use config::{DatasetManifest, EvalWindow, ManifestEntry, RunConfig, SynthParams};
pub use error::{HarnessError, Result, VideoFailure};
pub use eval::{run_evaluation, EvalOutcome};
pub use preserve::{run_preservation_suite, PreservationOutcome};
pub use report::{emit_report, ReportFormat};
pub use synthset::generate_synthetic_dataset;
