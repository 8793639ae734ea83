//! Decay rates of `u` and `v` and the distance to the heat profile.
//!
//! `cargo run --release --example decay -- [out_dir]`

use std::path::PathBuf;

use nldiff::asymptotics::{decay_sweep, dyadic_times};
use nldiff::experiment::emit_plotdata;
use nldiff::{Field, Grid, Kernel, Norm, PropagatorPlan};

fn main() -> nldiff::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("target/decay"), PathBuf::from);
    std::fs::create_dir_all(&out)?;
    let u0 = Field::box_cell_average(Grid::auto(0.5, 256.0, 0.5)?, 0.0, 1.0, 1.0)?;
    let plan = PropagatorPlan::new(&Kernel::gaussian(1.0)?, &u0)?;
    let times = dyadic_times(4.0, 256.0);
    for p in [Norm::L1, Norm::L2, Norm::Inf] {
        let report = decay_sweep(&plan, &u0, p, &times)?;
        let slope = report.slope_between(16.0, 256.0, |r| r.raw_v).unwrap_or(f64::NAN);
        println!("p = {:<3}  fitted rate {:+.4}  raw slope {slope:+.4}", p.label(), report.fitted_rate);
        report.to_table().write(&out.join(format!("decay_p{}.csv", p.label())))?;
        println!("wrote {}", emit_plotdata(&report, &out)?.display());
    }
    Ok(())
}
