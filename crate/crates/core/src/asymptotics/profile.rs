//! The target profile `M·G_{At}` and the parabolic rescaling
//! `v_λ(x, t) = λ v(λx, λ²t)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{fourier_interpolate, lp_norm, Field, Grid, Norm};
use crate::semigroup::Propagator;

/// `m · G_{a t}` with `G_s(x) = exp(-x²/4s) / √(4πs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatProfile {
    pub m: f64,
    pub a: f64,
    pub t: f64,
}

impl HeatProfile {
    pub fn new(m: f64, a: f64, t: f64) -> Result<Self> {
        if !(a > 0.0 && t > 0.0 && a.is_finite() && t.is_finite() && m.is_finite()) {
            return Err(Error::Argument(format!(
                "heat profile needs a > 0, t > 0 (got a={a}, t={t})"
            )));
        }
        Ok(Self { m, a, t })
    }

    pub fn value(&self, x: f64) -> f64 {
        let s = self.a * self.t;
        self.m * (-x * x / (4.0 * s)).exp() / (4.0 * PI * s).sqrt()
    }

    pub fn peak(&self) -> f64 {
        self.value(0.0)
    }

    /// Standard deviation `√(2at)`.
    pub fn width(&self) -> f64 {
        (2.0 * self.a * self.t).sqrt()
    }

    pub fn realize(&self, grid: Grid) -> Result<Field> {
        if self.width() < 4.0 * grid.dx() {
            return Err(Error::Resolution(format!(
                "profile width {} is below 4dx = {}",
                self.width(),
                4.0 * grid.dx()
            )));
        }
        Field::from_fn(grid, |x| self.value(x))
    }
}

/// Samples of `m·G_{at}` on `grid`.
pub fn heat_profile(m: f64, a: f64, t: f64, grid: Grid) -> Result<Field> {
    HeatProfile::new(m, a, t)?.realize(grid)
}

/// Target grid for [`rescale`] when none is given: same node count, domain shrunk by `λ`.
pub fn rescaled_grid(source: &Grid, lambda: f64) -> Result<Grid> {
    Grid::new(source.n(), source.half_length() / lambda)
}

/// `λ · v(λx_j, λ²t)` on `target`, where `v_at(s)` returns the source field at time `s`.
///
/// With `target = None` the grid is [`rescaled_grid`], whose nodes map onto
/// the source nodes exactly.
pub fn rescale<F>(v_at: F, lambda: f64, t: f64, target: Option<Grid>) -> Result<Field>
where
    F: Fn(f64) -> Result<Field>,
{
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Argument(format!("λ must be positive, got {lambda}")));
    }
    let source = v_at(lambda * lambda * t)?;
    let target = match target {
        Some(g) => g,
        None => rescaled_grid(source.grid(), lambda)?,
    };
    let reach = lambda * target.half_length();
    if reach > source.grid().half_length() * (1.0 + 1e-12) {
        return Err(Error::DomainTooSmall(format!(
            "rescaled window λL = {reach} exceeds source domain {}",
            source.grid().half_length()
        )));
    }
    let points: Vec<f64> = target
        .nodes()
        .iter()
        .map(|x| (lambda * x).clamp(-source.grid().half_length(), source.grid().half_length()))
        .collect();
    let values = fourier_interpolate(&source, &points)?;
    Field::new(target, values.into_iter().map(|v| lambda * v).collect())
}

/// Both sides of `‖v_λ(1) − MG_A‖_p = λ^{1−1/p}‖v(λ²) − MG_{Aλ²}‖_p`.
pub fn rescaling_identity<P: Propagator + ?Sized>(
    prop: &P,
    u0: &Field,
    p: Norm,
    lambda: f64,
) -> Result<(f64, f64)> {
    let m = u0.integral();
    let a = prop.diffusivity();
    let v_at = |s: f64| prop.evolve(u0, s).map(|e| e.v);
    let scaled = rescale(v_at, lambda, 1.0, None)?;
    let lhs = lp_norm(&scaled.sub(&heat_profile(m, a, 1.0, *scaled.grid())?)?, p);
    let l2 = lambda * lambda;
    let far = v_at(l2)?;
    let rhs = lambda.powf(p.conjugate_fraction())
        * lp_norm(&far.sub(&heat_profile(m, a, l2, *far.grid())?)?, p);
    Ok((lhs, rhs))
}
