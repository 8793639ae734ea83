//! Evolves a box datum and dumps `x, u, v` snapshots.
//!
//! `cargo run --example evolve -- [out_dir]`

use std::path::PathBuf;

use nldiff::experiment::write_snapshots;
use nldiff::{Field, Grid, Kernel, Norm, PropagatorPlan};

fn main() -> nldiff::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("target/evolve"), PathBuf::from);
    std::fs::create_dir_all(&out)?;
    let grid = Grid::new(2048, 80.0)?;
    let u0 = Field::box_cell_average(grid, 0.0, 1.0, 1.0)?;
    let plan = PropagatorPlan::new(&Kernel::gaussian(1.0)?, &u0)?;
    for t in [0.5, 2.0, 8.0, 32.0] {
        let s = plan.evolve(&u0, t)?;
        println!(
            "t = {t:>4}  mass = {:.15}  max u = {:.6}  rough = {:.3e}",
            s.u.integral(),
            s.u.lp_norm(Norm::Inf),
            s.rough.lp_norm(Norm::Inf)
        );
    }
    for p in write_snapshots(&plan, &u0, &[2.0, 32.0], &out)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
