//! Randomized checks of the symmetrization identity and the two
//! nonlocal-versus-local bounds.

use nldiff::asymptotics::{verify_dirichlet_bound, verify_laplacian_bound, verify_symmetrization, BandLimitedNoise};
use nldiff::{Grid, Kernel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nldiff::Result<()> {
    let kernel = Kernel::gaussian(1.0)?;
    let grid = Grid::new(1024, 8.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..4 {
        let phi = BandLimitedNoise::random(&mut rng, 4.0).field(grid)?;
        let psi = BandLimitedNoise::random(&mut rng, 4.0).field(grid)?;
        let (lhs, rhs) = verify_symmetrization(&kernel, &phi, &psi)?;
        println!("case {case}: identity residual {:.2e}", (lhs - rhs).abs());
        for lambda in [1.0, 4.0, 16.0] {
            let d = verify_dirichlet_bound(&kernel, &phi, lambda)?;
            let l = verify_laplacian_bound(&kernel, &phi, lambda)?;
            println!("  λ = {lambda:>4}  dirichlet ratio {:.4}  laplacian ratio {:.4}", d.ratio, l.ratio);
        }
    }
    Ok(())
}
