//! Scaling limits: the operator limit `λ²(J_λ∗φ − φ) → Aφ_xx` and the
//! concentration of the source term at the origin.

use crate::csv::{fmt_num, CsvTable};
use crate::error::{Error, Result};
use crate::grid::Field;
use crate::kernels::Kernel;
use crate::quadrature::{gauss_laguerre, loglog_slope};
use crate::semigroup::PropagatorPlan;

use super::inequalities::operator_limit_error;

/// Laguerre nodes for the time integral, and the coarser rule it is checked against.
pub const TIME_NODES: usize = 40;
pub const TIME_NODES_CHECK: usize = 20;
/// Largest tolerated `|I₄₀ − I₂₀|` relative to `max(|I|, |Mφ(0,0)|, 1)`.
pub const TIME_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorLimitReport {
    pub lambdas: Vec<f64>,
    pub errors: Vec<f64>,
    /// `−slope` of `log err` against `log λ`.
    pub fitted_order: f64,
}

/// `err(λ) = ‖λ²(J_λ∗φ − φ) − Aφ_xx‖_∞` over `lambdas`, with the fitted order.
pub fn operator_limit_sweep(kernel: &Kernel, phi: &Field, lambdas: &[f64]) -> Result<OperatorLimitReport> {
    let errors = lambdas
        .iter()
        .map(|&l| operator_limit_error(kernel, phi, l))
        .collect::<Result<Vec<_>>>()?;
    let fitted_order = loglog_slope(lambdas, &errors).map_or(f64::NAN, |f| -f.slope);
    Ok(OperatorLimitReport {
        lambdas: lambdas.to_vec(),
        errors,
        fitted_order,
    })
}

impl OperatorLimitReport {
    /// `log₂(err(λ_i)/err(λ_{i+1}))` for consecutive entries.
    pub fn local_orders(&self) -> Vec<f64> {
        self.errors
            .windows(2)
            .zip(self.lambdas.windows(2))
            .map(|(e, l)| (e[0] / e[1]).ln() / (l[1] / l[0]).ln())
            .collect()
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(["lambda", "error"])
            .titled(format!("oplimit fitted_order={}", fmt_num(self.fitted_order)));
        for (l, e) in self.lambdas.iter().zip(&self.errors) {
            t.push(vec![(*l).into(), (*e).into()]);
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSourceRow {
    pub lambda: f64,
    pub integral: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSourceReport {
    /// `M·φ(0, 0)`.
    pub target: f64,
    pub rows: Vec<DeltaSourceRow>,
    /// `−slope` of `log gap` against `log λ`.
    pub fitted_order: f64,
}

impl DeltaSourceReport {
    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(["lambda", "integral", "gap"]).titled(format!(
            "deltasource target={} fitted_order={}",
            fmt_num(self.target),
            fmt_num(self.fitted_order)
        ));
        for r in &self.rows {
            t.push(vec![r.lambda.into(), r.integral.into(), r.gap.into()]);
        }
        t
    }
}

/// `I(λ) = ∫₀^∞ e^{-t} ∫ (J∗u₀)(x) φ(x/λ, t/λ²) dx dt` for each `λ`, and the
/// gap `|I(λ) − M·φ(0,0)|`.
///
/// The time integral uses Gauss–Laguerre; a coarser rule that disagrees
/// beyond [`TIME_TOLERANCE`] raises an accuracy error.
pub fn verify_delta_source<F>(
    plan: &PropagatorPlan,
    u0: &Field,
    phi: F,
    lambdas: &[f64],
) -> Result<DeltaSourceReport>
where
    F: Fn(f64, f64) -> f64,
{
    if lambdas.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
        return Err(Error::Argument("λ values must be positive".into()));
    }
    let ju = plan.convolve(u0)?;
    let grid = *ju.grid();
    let nodes = grid.nodes();
    let dx = grid.dx();
    let target = u0.integral() * phi(0.0, 0.0);
    let rules = [gauss_laguerre(TIME_NODES), gauss_laguerre(TIME_NODES_CHECK)];

    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let l2 = lambda * lambda;
        let space = |s: f64| -> f64 {
            nodes
                .iter()
                .zip(ju.samples())
                .map(|(x, v)| v * phi(x / lambda, s / l2))
                .sum::<f64>()
                * dx
        };
        let mut vals = [0.0; 2];
        for (val, (ts, ws)) in vals.iter_mut().zip(&rules) {
            *val = ts.iter().zip(ws).map(|(t, w)| w * space(*t)).sum();
        }
        let scale = vals[0].abs().max(target.abs()).max(1.0);
        if !vals[0].is_finite() || (vals[0] - vals[1]).abs() > TIME_TOLERANCE * scale {
            return Err(Error::Accuracy(format!(
                "time quadrature unresolved at λ = {lambda}: {} vs {}",
                vals[0], vals[1]
            )));
        }
        rows.push(DeltaSourceRow {
            lambda,
            integral: vals[0],
            gap: (vals[0] - target).abs(),
        });
    }
    let fitted_order = loglog_slope(
        &rows.iter().map(|r| r.lambda).collect::<Vec<_>>(),
        &rows.iter().map(|r| r.gap).collect::<Vec<_>>(),
    )
    .map_or(f64::NAN, |f| -f.slope);
    Ok(DeltaSourceReport {
        target,
        rows,
        fitted_order,
    })
}
