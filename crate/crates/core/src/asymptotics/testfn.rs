//! Smooth test functions: compact bumps, plateaus and seeded band-limited noise.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::Result;
use crate::grid::{Field, Grid};

/// `exp(-1/(1-x²))` on `|x| < 1`, zero elsewhere.
pub fn bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

/// C^∞ transition from 0 (`s ≤ 0`) to 1 (`s ≥ 1`).
pub fn smooth_step(s: f64) -> f64 {
    let f = |s: f64| if s <= 0.0 { 0.0 } else { (-1.0 / s).exp() };
    let a = f(s);
    let b = f(1.0 - s);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// 1 on `|x| ≤ inner`, 0 on `|x| ≥ outer`, smooth in between.
pub fn plateau(x: f64, inner: f64, outer: f64) -> f64 {
    1.0 - smooth_step((x.abs() - inner) / (outer - inner))
}

/// `bump(x/W) · Σ_{k<K} (a_k cos(kπx/W) + b_k sin(kπx/W))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandLimitedNoise {
    pub window: f64,
    pub cos_coeffs: Vec<f64>,
    pub sin_coeffs: Vec<f64>,
}

/// Number of harmonics used by [`BandLimitedNoise::random`].
pub const NOISE_HARMONICS: usize = 16;

impl BandLimitedNoise {
    /// The lowest [`NOISE_HARMONICS`] harmonics with coefficients uniform in `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, window: f64) -> Self {
        let cos_coeffs = (0..NOISE_HARMONICS).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let sin_coeffs = (0..NOISE_HARMONICS).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        Self {
            window,
            cos_coeffs,
            sin_coeffs,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let w = bump(x / self.window);
        if w == 0.0 {
            return 0.0;
        }
        let base = PI * x / self.window;
        let s: f64 = self
            .cos_coeffs
            .iter()
            .zip(&self.sin_coeffs)
            .enumerate()
            .map(|(k, (a, b))| {
                let (sn, cs) = (k as f64 * base).sin_cos();
                a * cs + b * sn
            })
            .sum();
        w * s
    }

    pub fn field(&self, grid: Grid) -> Result<Field> {
        Field::from_fn(grid, |x| self.eval(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bump_and_plateau_shapes() {
        assert_eq!(bump(1.0), 0.0);
        assert!((bump(0.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert_eq!(plateau(0.5, 1.0, 2.0), 1.0);
        assert_eq!(plateau(2.5, 1.0, 2.0), 0.0);
        assert!((plateau(1.5, 1.0, 2.0) - 0.5).abs() < 1e-15);
        assert!((smooth_step(0.3) + smooth_step(0.7) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn noise_is_reproducible_and_windowed() {
        let a = BandLimitedNoise::random(&mut ChaCha8Rng::seed_from_u64(7), 4.0);
        let b = BandLimitedNoise::random(&mut ChaCha8Rng::seed_from_u64(7), 4.0);
        assert_eq!(a, b);
        assert_eq!(a.eval(4.0), 0.0);
        assert_eq!(a.eval(-5.0), 0.0);
        assert!(a.eval(0.3) != 0.0);
    }
}
