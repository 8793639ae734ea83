//! Convergence of the rescaled nonlocal operator to `A∂²` and of the
//! delta-source functional.

use nldiff::asymptotics::{operator_limit_sweep, verify_delta_source};
use nldiff::{Field, Grid, Kernel, PropagatorPlan};

fn main() -> nldiff::Result<()> {
    let kernel = Kernel::gaussian(1.0)?;
    let phi = Field::from_fn(Grid::new(1024, 8.0)?, |x| (-x * x).exp())?;
    let lambdas = [2.0, 4.0, 8.0, 16.0, 32.0];
    let op = operator_limit_sweep(&kernel, &phi, &lambdas)?;
    print!("{}", op.to_table().render());
    println!("operator limit order {:.3}", op.fitted_order);

    let u0 = Field::box_cell_average(Grid::new(2048, 40.0)?, 0.0, 1.0, 1.0)?;
    let plan = PropagatorPlan::new(&kernel, &u0)?;
    let bump = |x: f64, t: f64| nldiff::asymptotics::testfn::bump(x) * (-t).exp();
    let ds = verify_delta_source(&plan, &u0, bump, &[4.0, 8.0, 16.0, 32.0])?;
    print!("{}", ds.to_table().render());
    println!("delta source order {:.3}", ds.fitted_order);
    Ok(())
}
