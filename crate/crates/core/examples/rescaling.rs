//! Both sides of the parabolic rescaling identity for the distance to the
//! heat profile.

use nldiff::asymptotics::rescaling_identity;
use nldiff::{Field, Grid, Kernel, Norm, PropagatorPlan};

fn main() -> nldiff::Result<()> {
    let u0 = Field::box_cell_average(Grid::new(4096, 160.0)?, 0.0, 1.0, 1.0)?;
    let plan = PropagatorPlan::new(&Kernel::gaussian(1.0)?, &u0)?;
    for p in [Norm::L1, Norm::L2, Norm::Inf] {
        for lambda in [2.0, 4.0, 8.0] {
            let (lhs, rhs) = rescaling_identity(&plan, &u0, p, lambda)?;
            println!("p = {:<3} λ = {lambda}  lhs {lhs:.6e}  rhs {rhs:.6e}", p.label());
        }
    }
    Ok(())
}
