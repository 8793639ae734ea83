//! Kernel from a two-column `z, J(z)` table.
//!
//! `cargo run --example sampled_kernel -- [table.csv]`

use std::path::PathBuf;

use nldiff::{check_admissibility, AdmissibilityConfig, Kernel};

fn main() -> nldiff::Result<()> {
    let kernel = match std::env::args().nth(1) {
        Some(path) => Kernel::load(&PathBuf::from(path))?,
        None => {
            let z: Vec<f64> = (0..=400).map(|i| -2.0 + 0.01 * f64::from(i)).collect();
            let j: Vec<f64> = z.iter().map(|z| (1.0 - z.abs() / 2.0).max(0.0) / 2.0).collect();
            Kernel::from_table(&z, &j)?
        }
    };
    println!("{}  mass {:.12}  A = {:.6}", kernel.id(), kernel.mass(), kernel.second_moment());
    let r = check_admissibility(&kernel, &AdmissibilityConfig::default())?;
    println!(
        "a estimated {:.6}  m = {:.3}  hyp1 {}  hyp2 {}",
        r.a_estimated, r.decay_exponent_m, r.passes_hyp1, r.passes_hyp2
    );
    Ok(())
}
