//! Excess tail mass of `v` over the source term.

use nldiff::asymptotics::{dyadic_times, verify_tail_bound};
use nldiff::{Field, Grid, Kernel, PropagatorPlan};

fn main() -> nldiff::Result<()> {
    let u0 = Field::box_cell_average(Grid::new(4096, 160.0)?, 0.0, 1.0, 1.0)?;
    let plan = PropagatorPlan::new(&Kernel::gaussian(1.0)?, &u0)?;
    let times = dyadic_times(1.0, 64.0);
    let report = verify_tail_bound(&plan, &u0, &times, &[5.0, 10.0, 20.0])?;
    print!("{}", report.to_table().render());
    println!("C = {:.4}  C (t/R² only) = {:.4}", report.constant(), report.quadratic_constant());
    Ok(())
}
