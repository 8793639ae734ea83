//! Config-driven experiment runner behind the `nldiff` binary.

pub mod config;
pub mod runner;

pub use config::{Check, DatumSpec, ExperimentConfig, GridSpec, KernelSpec, TimeSpec, Tolerances};
pub use runner::{emit_plotdata, run, run_path, write_snapshots, ManifestEntry, RunManifest, Status, VERSION};
