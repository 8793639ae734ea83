//! Distance of the solution to its Gaussian profile over a time sweep, plus
//! the scaled norms of `v` and `v_x` whose suprema are the measured decay
//! constants.

use crate::csv::CsvTable;
use crate::error::{Error, Result};
use crate::grid::{lp_norm, spectral_derivative, Field, Norm};
use crate::quadrature::loglog_slope;
use crate::semigroup::Propagator;

use super::profile::HeatProfile;

#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub t: f64,
    /// `‖u(t) − M G_{At}‖_p`
    pub raw_u: f64,
    /// `t^{(1−1/p)/2} · raw_u`
    pub scaled_u: f64,
    pub raw_v: f64,
    pub scaled_v: f64,
    /// `t^{(1−1/p)/2} ‖v(t)‖_p / ‖u₀‖₁`
    pub v_ratio: f64,
    /// `t^{(1−1/p)/2 + 1/2} ‖v_x(t)‖_p / ‖u₀‖₁`
    pub vx_ratio: f64,
    /// `‖v_x(t)‖_p`
    pub vx_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub p: Norm,
    pub rows: Vec<DecayRow>,
    /// Log–log slope of `raw_u` over the upper half of the sweep.
    pub fitted_rate: f64,
    /// `sup_t` of [`DecayRow::v_ratio`].
    pub v_constant: f64,
    /// `sup_t` of [`DecayRow::vx_ratio`].
    pub vx_constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepOptions {
    /// Compare against `M G_{A(t + shift)}` instead of `M G_{At}`.
    pub profile_time_shift: f64,
}

/// Evolves `u0` to each time in `times` and tabulates the decay metrics in `p`.
pub fn decay_sweep<P: Propagator + ?Sized>(
    prop: &P,
    u0: &Field,
    p: Norm,
    times: &[f64],
) -> Result<DecayReport> {
    decay_sweep_with(prop, u0, p, times, SweepOptions::default())
}

pub fn decay_sweep_with<P: Propagator + ?Sized>(
    prop: &P,
    u0: &Field,
    p: Norm,
    times: &[f64],
    opts: SweepOptions,
) -> Result<DecayReport> {
    if times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::Argument("sweep times must be positive".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Argument("sweep times must be strictly increasing".into()));
    }
    let m = u0.integral();
    let l1 = lp_norm(u0, Norm::L1);
    if l1 == 0.0 {
        return Err(Error::Argument("initial datum is identically zero".into()));
    }
    let a = prop.diffusivity();
    let grid = *prop.grid();
    let q = 0.5 * p.conjugate_fraction();

    let mut rows = Vec::with_capacity(times.len());
    for &t in times {
        let snap = prop.evolve(u0, t)?;
        let target = HeatProfile::new(m, a, t + opts.profile_time_shift)?.realize(grid)?;
        let raw_u = lp_norm(&snap.u.sub(&target)?, p);
        let raw_v = lp_norm(&snap.v.sub(&target)?, p);
        let vx_norm = lp_norm(&spectral_derivative(&snap.v)?, p);
        let w = t.powf(q);
        rows.push(DecayRow {
            t,
            raw_u,
            scaled_u: w * raw_u,
            raw_v,
            scaled_v: w * raw_v,
            v_ratio: w * lp_norm(&snap.v, p) / l1,
            vx_ratio: w * t.sqrt() * vx_norm / l1,
            vx_norm,
        });
    }

    let upper = &rows[rows.len() / 2..];
    let fitted_rate = loglog_slope(
        &upper.iter().map(|r| r.t).collect::<Vec<_>>(),
        &upper.iter().map(|r| r.raw_u).collect::<Vec<_>>(),
    )
    .map_or(f64::NAN, |f| f.slope);

    Ok(DecayReport {
        p,
        v_constant: rows.iter().map(|r| r.v_ratio).fold(0.0, f64::max),
        vx_constant: rows.iter().map(|r| r.vx_ratio).fold(0.0, f64::max),
        rows,
        fitted_rate,
    })
}

impl DecayReport {
    /// Log–log slope of `column(row)` over rows with `t ∈ [t_lo, t_hi]`.
    pub fn slope_between(&self, t_lo: f64, t_hi: f64, column: impl Fn(&DecayRow) -> f64) -> Option<f64> {
        let sel: Vec<&DecayRow> = self.rows.iter().filter(|r| r.t >= t_lo && r.t <= t_hi).collect();
        loglog_slope(
            &sel.iter().map(|r| r.t).collect::<Vec<_>>(),
            &sel.iter().map(|r| column(r)).collect::<Vec<_>>(),
        )
        .map(|f| f.slope)
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new([
            "t", "raw_u", "scaled_u", "raw_v", "scaled_v", "v_ratio", "vx_ratio",
        ])
        .titled(format!(
            "decay p={} fitted_rate={} v_constant={} vx_constant={}",
            self.p,
            crate::csv::fmt_num(self.fitted_rate),
            crate::csv::fmt_num(self.v_constant),
            crate::csv::fmt_num(self.vx_constant)
        ));
        for r in &self.rows {
            t.push(vec![
                r.t.into(),
                r.raw_u.into(),
                r.scaled_u.into(),
                r.raw_v.into(),
                r.scaled_v.into(),
                r.v_ratio.into(),
                r.vx_ratio.into(),
            ]);
        }
        t
    }

    /// Plot-ready columns `(t, raw, scaled, log t, log raw)`; data only.
    pub fn plot_table(&self) -> CsvTable {
        let mut t = CsvTable::new(["t", "raw", "scaled", "log_t", "log_raw"]);
        for r in &self.rows {
            t.push(vec![
                r.t.into(),
                r.raw_u.into(),
                r.scaled_u.into(),
                r.t.ln().into(),
                r.raw_u.ln().into(),
            ]);
        }
        t
    }
}

/// `[start, 2·start, 4·start, …] ≤ end`.
pub fn dyadic_times(start: f64, end: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut t = start;
    while t <= end * (1.0 + 1e-12) {
        out.push(t);
        t *= 2.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::kernels::Kernel;
    use crate::semigroup::{LocalHeat, PropagatorPlan};

    #[test]
    fn local_heat_surrogate_has_zero_distance() {
        let g = Grid::new(1024, 60.0).unwrap();
        let (m, a, t0) = (1.7, 0.5, 2.0);
        let u0 = HeatProfile::new(m, a, t0).unwrap().realize(g).unwrap();
        let heat = LocalHeat { a, grid: g };
        let opts = SweepOptions { profile_time_shift: t0 };
        for p in [Norm::L1, Norm::L2, Norm::Inf] {
            let r = decay_sweep_with(&heat, &u0, p, &[1.0, 2.0, 4.0, 8.0], opts).unwrap();
            for row in &r.rows {
                assert!(row.raw_u < 1e-12, "{p} {}: {}", row.t, row.raw_u);
            }
        }
    }

    #[test]
    fn rows_sorted_and_scaling_consistent() {
        let g = Grid::new(1024, 40.0).unwrap();
        let u0 = Field::box_cell_average(g, 0.0, 1.0, 1.0).unwrap();
        let plan = PropagatorPlan::new(&Kernel::gaussian(1.0).unwrap(), &u0).unwrap();
        let r = decay_sweep(&plan, &u0, Norm::L2, &dyadic_times(1.0, 8.0)).unwrap();
        assert_eq!(r.rows.len(), 4);
        for row in &r.rows {
            assert!((row.scaled_u - row.t.powf(0.25) * row.raw_u).abs() <= 1e-12 * row.scaled_u);
        }
        assert!(decay_sweep(&plan, &u0, Norm::L2, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn empty_sweep_gives_header_only_plot() {
        let g = Grid::new(64, 10.0).unwrap();
        let u0 = Field::box_cell_average(g, 0.0, 1.0, 1.0).unwrap();
        let plan = PropagatorPlan::new(&Kernel::gaussian(1.0).unwrap(), &u0).unwrap();
        let r = decay_sweep(&plan, &u0, Norm::L1, &[]).unwrap();
        assert_eq!(r.plot_table().render(), "t,raw,scaled,log_t,log_raw\n");
    }

    #[test]
    fn dyadic() {
        assert_eq!(dyadic_times(4.0, 256.0), vec![4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0]);
    }
}
