//! Spectral propagator against an independent RK4 quadrature solver.

use nldiff::{oracle_evolve, Field, Grid, Kernel, Norm, PropagatorPlan};

fn main() -> nldiff::Result<()> {
    let kernel = Kernel::gaussian(1.0)?;
    let u0 = Field::from_fn(Grid::new(512, 20.0)?, |x| (-x * x).exp())?;
    let plan = PropagatorPlan::new(&kernel, &u0)?;
    let spectral = plan.evolve(&u0, 1.0)?.u;
    for dt in [0.1, 0.05, 0.025, 0.0125] {
        let rk = oracle_evolve(&kernel, &u0, 1.0, dt)?;
        let err = spectral.sub(&rk)?.lp_norm(Norm::Inf) / spectral.lp_norm(Norm::Inf);
        println!("dt = {dt:<6} relative sup difference {err:.3e}");
    }
    Ok(())
}
