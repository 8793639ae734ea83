//! Exact Fourier-space evolution of `u_t = J∗u − u`, the split
//! `u = e^{-t}u₀ + v`, the regular kernel `K_t`, and an independent
//! real-space Runge–Kutta oracle.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{to_spectral, Field, Grid, SpectralField};
use crate::kernels::{Kernel, TRUNCATION_EPS};

/// `K̂_t` must fall below this fraction of `K̂_t(0)` near the Nyquist band.
const KT_BANDWIDTH_TOL: f64 = 1e-10;

/// Kernel transform sampled on a grid, together with the mass of the
/// initial datum the plan was built for.
#[derive(Debug, Clone)]
pub struct PropagatorPlan {
    kernel: Kernel,
    grid: Grid,
    jhat: Vec<f64>,
    initial_mass: f64,
}

/// Solution at time `t` and its rough/smooth parts.
#[derive(Debug, Clone)]
pub struct EvolutionSnapshot {
    pub t: f64,
    pub u: Field,
    /// `e^{-t}u₀`
    pub rough: Field,
    /// Smooth part `v = K_t ∗ u₀`.
    pub v: Field,
}

/// Anything that evolves an initial datum to a snapshot at time `t`.
pub trait Propagator {
    fn grid(&self) -> &Grid;

    /// Diffusivity of the limiting heat equation.
    fn diffusivity(&self) -> f64;

    fn evolve(&self, u0: &Field, t: f64) -> Result<EvolutionSnapshot>;
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!("time must be finite and ≥ 0, got {t}")))
    }
}

/// `e^{t(Ĵ-1)} − e^{-t}` without cancellation at small `t` or overflow at large `t`.
fn smooth_multiplier(jhat: f64, t: f64) -> f64 {
    let tj = t * jhat;
    if tj > 30.0 {
        (t * (jhat - 1.0)).exp() - (-t).exp()
    } else {
        (-t).exp() * tj.exp_m1()
    }
}

impl PropagatorPlan {
    pub fn new(kernel: &Kernel, u0: &Field) -> Result<Self> {
        let grid = *u0.grid();
        if let Some(limit) = kernel.max_resolvable_frequency() {
            if grid.nyquist() > limit {
                return Err(Error::Resolution(format!(
                    "grid Nyquist {} exceeds the kernel table's band {limit}",
                    grid.nyquist()
                )));
            }
        }
        let jhat = kernel.fourier_many(&grid.frequencies())?;
        if (jhat[0] - 1.0).abs() > 1e-12 || jhat.iter().any(|j| j.abs() > 1.0 + 1e-12) {
            return Err(Error::Data("kernel transform is not normalized on this grid".into()));
        }
        Ok(Self {
            kernel: kernel.clone(),
            grid,
            jhat,
            initial_mass: u0.integral(),
        })
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `Ĵ(ξ_k)` in FFT order.
    pub fn jhat_on_grid(&self) -> &[f64] {
        &self.jhat
    }

    /// `M = ∫u₀`.
    pub fn initial_mass(&self) -> f64 {
        self.initial_mass
    }

    fn check_grid(&self, f: &Field) -> Result<()> {
        if f.grid() != &self.grid {
            return Err(Error::Argument(format!(
                "field grid {} differs from plan grid {}",
                f.grid(),
                self.grid
            )));
        }
        Ok(())
    }

    /// `J ∗ f`.
    pub fn convolve(&self, f: &Field) -> Result<Field> {
        self.check_grid(f)?;
        to_spectral(f)?.apply_real(&self.jhat).to_field()
    }

    /// Exact solution at time `t`: `û(t) = e^{t(Ĵ-1)}û₀`, `v̂ = (e^{t(Ĵ-1)} − e^{-t})û₀`.
    pub fn evolve(&self, u0: &Field, t: f64) -> Result<EvolutionSnapshot> {
        check_time(t)?;
        self.check_grid(u0)?;
        let s0 = to_spectral(u0)?;
        let mu: Vec<f64> = self.jhat.iter().map(|j| (t * (j - 1.0)).exp()).collect();
        let mv: Vec<f64> = self.jhat.iter().map(|&j| smooth_multiplier(j, t)).collect();
        let u = s0.apply_real(&mu).to_field()?;
        let v = s0.apply_real(&mv).to_field()?;
        u.check_tail()?;
        v.check_tail()?;
        Ok(EvolutionSnapshot {
            t,
            u,
            rough: u0.scale((-t).exp()),
            v,
        })
    }

    /// The regular kernel `K_t = F⁻¹[e^{t(Ĵ-1)} − e^{-t}]`, with `∫K_t = 1 − e^{-t}`.
    pub fn kernel_kt(&self, t: f64) -> Result<Field> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Argument(format!("K_t needs t > 0, got {t}")));
        }
        let m: Vec<f64> = self.jhat.iter().map(|&j| smooth_multiplier(j, t)).collect();
        let peak = m[0].abs();
        let edge = self
            .grid
            .frequencies()
            .iter()
            .zip(&m)
            .filter(|(xi, _)| xi.abs() >= 0.9 * self.grid.nyquist())
            .fold(0.0f64, |acc, (_, v)| acc.max(v.abs()));
        if edge > KT_BANDWIDTH_TOL * peak {
            return Err(Error::Resolution(format!(
                "K_t at t={t} is not band-limited on grid {} (|K̂_t| near Nyquist = {edge:e})",
                self.grid
            )));
        }
        let k = SpectralField::from_real(self.grid, &m).to_field()?;
        k.check_tail()?;
        Ok(k)
    }

    /// Forcing of the smooth-part equation, `e^{-t}(J ∗ u₀)`.
    pub fn source_term(&self, u0: &Field, t: f64) -> Result<Field> {
        check_time(t)?;
        Ok(self.convolve(u0)?.scale((-t).exp()))
    }
}

impl Propagator for PropagatorPlan {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn diffusivity(&self) -> f64 {
        self.kernel.second_moment()
    }

    fn evolve(&self, u0: &Field, t: f64) -> Result<EvolutionSnapshot> {
        PropagatorPlan::evolve(self, u0, t)
    }
}

/// The local heat equation `u_t = A u_xx`, evolved by its exact multiplier.
/// It has no rough part: `v = u`.
#[derive(Debug, Clone, Copy)]
pub struct LocalHeat {
    pub a: f64,
    pub grid: Grid,
}

impl Propagator for LocalHeat {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn diffusivity(&self) -> f64 {
        self.a
    }

    fn evolve(&self, u0: &Field, t: f64) -> Result<EvolutionSnapshot> {
        check_time(t)?;
        let a = self.a;
        let u = to_spectral(u0)?
            .apply(|xi| Complex64::new((-a * t * xi * xi).exp(), 0.0))
            .to_field()?;
        u.check_tail()?;
        Ok(EvolutionSnapshot {
            t,
            rough: Field::zeros(self.grid),
            v: u.clone(),
            u,
        })
    }
}

pub fn evolve(plan: &PropagatorPlan, u0: &Field, t: f64) -> Result<EvolutionSnapshot> {
    plan.evolve(u0, t)
}

pub fn kernel_kt(plan: &PropagatorPlan, t: f64) -> Result<Field> {
    plan.kernel_kt(t)
}

pub fn source_term(plan: &PropagatorPlan, u0: &Field, t: f64) -> Result<Field> {
    plan.source_term(u0, t)
}

/// Largest time step accepted by [`oracle_evolve`].
pub const ORACLE_MAX_DT: f64 = 0.1;

/// Classical RK4 integration of `u' = J∗u − u` with a real-space quadrature
/// convolution against the truncated kernel. Nothing here touches frequency
/// space, so it cross-checks [`PropagatorPlan::evolve`] independently.
pub fn oracle_evolve(kernel: &Kernel, u0: &Field, t: f64, dt: f64) -> Result<Field> {
    check_time(t)?;
    if !(dt > 0.0 && dt <= ORACLE_MAX_DT) {
        return Err(Error::Argument(format!(
            "oracle step must be in (0, {ORACLE_MAX_DT}], got {dt}"
        )));
    }
    u0.check_tail()?;
    let grid = *u0.grid();
    let dx = grid.dx();
    let radius = kernel.truncation_radius(TRUNCATION_EPS);
    if radius >= grid.half_length() {
        return Err(Error::DomainTooSmall(format!(
            "kernel support radius {radius} does not fit in [-{L}, {L}]",
            L = grid.half_length()
        )));
    }
    let s = (radius / dx).ceil() as i64;
    let weights: Vec<f64> = (-s..=s).map(|m| kernel.value(m as f64 * dx) * dx).collect();

    let n = grid.n() as i64;
    let rhs = |u: &[f64], out: &mut [f64]| {
        for j in 0..n {
            let lo = (j - s).max(0);
            let hi = (j + s).min(n - 1);
            let mut acc = 0.0;
            for i in lo..=hi {
                // weight index of offset m = j - i
                acc += weights[(j - i + s) as usize] * u[i as usize];
            }
            out[j as usize] = acc - u[j as usize];
        }
    };

    let mut u = u0.samples().to_vec();
    if t == 0.0 {
        return Ok(u0.clone());
    }
    let steps = (t / dt).ceil() as usize;
    let h = t / steps as f64;
    let len = u.len();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    let mut tmp = vec![0.0; len];
    for _ in 0..steps {
        rhs(&u, &mut k1);
        for i in 0..len {
            tmp[i] = u[i] + 0.5 * h * k1[i];
        }
        rhs(&tmp, &mut k2);
        for i in 0..len {
            tmp[i] = u[i] + 0.5 * h * k2[i];
        }
        rhs(&tmp, &mut k3);
        for i in 0..len {
            tmp[i] = u[i] + h * k3[i];
        }
        rhs(&tmp, &mut k4);
        for i in 0..len {
            u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(Field::new(grid, u)?.with_guard(u0.guard()))
}
