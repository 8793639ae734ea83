//! Runs a config file through the experiment harness.
//!
//! `cargo run --release --example run_config -- crates/core/examples/configs/quick.cfg`

use std::path::PathBuf;

use nldiff::experiment::run_path;

fn main() -> nldiff::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/quick.cfg")), PathBuf::from);
    let manifest = run_path(&path, Some(PathBuf::from("target/run_config")), None)?;
    for e in &manifest.entries {
        println!("{:<18} {:<8} {}", e.check.name(), e.status.label(), e.detail);
    }
    std::process::exit(manifest.exit_code());
}
