//! Mass of the smooth part far from the origin.

use crate::csv::{fmt_num, CsvTable};
use crate::error::{Error, Result};
use crate::grid::Field;
use crate::semigroup::PropagatorPlan;

/// `∫_{|x|>r} |v|` as a node sum.
pub fn tail_mass(v: &Field, r: f64) -> Result<f64> {
    let g = v.grid();
    if !(r >= 0.0) || r > g.half_length() {
        return Err(Error::Range(format!(
            "tail radius {r} outside [0, {}]",
            g.half_length()
        )));
    }
    Ok(g
        .nodes()
        .iter()
        .zip(v.samples())
        .filter(|(x, _)| x.abs() > r)
        .map(|(_, s)| s.abs())
        .sum::<f64>()
        * g.dx())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailRow {
    pub t: f64,
    pub r: f64,
    /// `∫_{|x|>2R} |v(t)|`
    pub tail: f64,
    /// `∫_{|x|>R} J∗u₀`
    pub source_tail: f64,
    /// `tail − source_tail`
    pub excess: f64,
    /// `excess / (t/R² + √t/R)`
    pub ratio: f64,
    /// `excess / (t/R²)`
    pub ratio_quadratic: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    pub rows: Vec<TailRow>,
}

impl TailReport {
    /// Measured constant under the two-term normalizer, over rows with `t ≤ t_max`.
    pub fn constant_up_to(&self, t_max: f64) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.t <= t_max)
            .map(|r| r.ratio)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Measured constant under the `t/R²` normalizer, over rows with `t ≤ t_max`.
    pub fn quadratic_constant_up_to(&self, t_max: f64) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.t <= t_max)
            .map(|r| r.ratio_quadratic)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn constant(&self) -> f64 {
        self.constant_up_to(f64::INFINITY)
    }

    pub fn quadratic_constant(&self) -> f64 {
        self.quadratic_constant_up_to(f64::INFINITY)
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new([
            "t", "R", "tail_2R", "source_tail_R", "excess", "ratio", "ratio_quadratic",
        ])
        .titled(format!(
            "tail C={} C_quadratic={}",
            fmt_num(self.constant()),
            fmt_num(self.quadratic_constant())
        ));
        for r in &self.rows {
            t.push(vec![
                r.t.into(),
                r.r.into(),
                r.tail.into(),
                r.source_tail.into(),
                r.excess.into(),
                r.ratio.into(),
                r.ratio_quadratic.into(),
            ]);
        }
        t
    }
}

/// Excess tail mass `∫_{|x|>2R}|v(t)| − ∫_{|x|>R}J∗u₀` over all `(t, R)` pairs.
pub fn verify_tail_bound(plan: &PropagatorPlan, u0: &Field, times: &[f64], radii: &[f64]) -> Result<TailReport> {
    let ju = plan.convolve(u0)?;
    let mut rows = Vec::with_capacity(times.len() * radii.len());
    for &t in times {
        let v = plan.evolve(u0, t)?.v;
        for &r in radii {
            if !(r > 0.0) {
                return Err(Error::Argument(format!("radius must be positive, got {r}")));
            }
            let tail = tail_mass(&v, 2.0 * r)?;
            let source_tail = tail_mass(&ju, r)?;
            let excess = tail - source_tail;
            let q = t / (r * r);
            rows.push(TailRow {
                t,
                r,
                tail,
                source_tail,
                excess,
                ratio: excess / (q + t.sqrt() / r),
                ratio_quadratic: excess / q,
            });
        }
    }
    Ok(TailReport { rows })
}
