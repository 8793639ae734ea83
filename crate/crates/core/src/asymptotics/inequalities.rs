//! Discrete checks of the symmetrization identity, the nonlocal Dirichlet
//! bound and the nonlocal Laplacian bound.

use crate::csv::CsvTable;
use crate::error::{Error, Result};
use crate::grid::{fourier_interpolate, spectral_derivative, spectral_second_derivative, Field, Grid, Translator};
use crate::kernels::{Kernel, TRUNCATION_EPS};

/// Relative slack for the Dirichlet-form bound.
pub const DIRICHLET_SLACK: f64 = 1e-8;
/// Relative slack for the Laplacian bound.
pub const LAPLACIAN_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
}

impl InequalityCheck {
    fn new(lhs: f64, rhs: f64, slack: f64) -> Self {
        let ratio = if rhs != 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self {
            lhs,
            rhs,
            ratio,
            pass: lhs <= rhs * (1.0 + slack),
        }
    }
}

/// One CSV table per lemma: `case, lambda, lhs, rhs, ratio, pass`.
pub fn inequality_table(lemma: &str, rows: &[(usize, f64, InequalityCheck)]) -> CsvTable {
    let mut t = CsvTable::new(["case", "lambda", "lhs", "rhs", "ratio", "pass"]).titled(lemma);
    for (case, lambda, c) in rows {
        t.push(vec![
            (*case).into(),
            (*lambda).into(),
            c.lhs.into(),
            c.rhs.into(),
            c.ratio.into(),
            c.pass.into(),
        ]);
    }
    t
}

/// Both sides of
/// `∬J(x−y)(φ(y)−φ(x))ψ(x) = −½∬J(x−y)(φ(y)−φ(x))(ψ(y)−ψ(x))`
/// as double sums with weights `J(m·dx)·dx`, `|m| ≤ ⌈r/dx⌉`, indices periodic.
pub fn verify_symmetrization(kernel: &Kernel, phi: &Field, psi: &Field) -> Result<(f64, f64)> {
    if phi.grid() != psi.grid() {
        return Err(Error::Data("φ and ψ live on different grids".into()));
    }
    let g = phi.grid();
    let n = g.n();
    let dx = g.dx();
    let reach = (kernel.truncation_radius(TRUNCATION_EPS) / dx).ceil() as usize;
    if 2 * reach >= n {
        return Err(Error::DomainTooSmall(format!(
            "kernel support spans {} nodes on a grid of {n}",
            2 * reach + 1
        )));
    }
    let (f, h) = (phi.samples(), psi.samples());
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for m in -(reach as i64)..=reach as i64 {
        let w = kernel.value(m as f64 * dx) * dx;
        if w == 0.0 {
            continue;
        }
        let shift = m.rem_euclid(n as i64) as usize;
        let (mut sl, mut sr) = (0.0, 0.0);
        for i in 0..n {
            let j = (i + shift) % n;
            let dphi = f[j] - f[i];
            sl += dphi * h[i];
            sr += dphi * (h[j] - h[i]);
        }
        lhs += w * sl;
        rhs += w * sr;
    }
    Ok((lhs * dx, -0.5 * rhs * dx))
}

fn check_scale(kernel: &Kernel, grid: &Grid, lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Argument(format!("λ must be positive, got {lambda}")));
    }
    let support = kernel.truncation_radius(TRUNCATION_EPS) / lambda;
    if support < 4.0 * grid.dx() {
        return Err(Error::Resolution(format!(
            "J_λ support {support} is below 4dx = {} at λ = {lambda}",
            4.0 * grid.dx()
        )));
    }
    Ok(())
}

/// `λ²∬J_λ(x−y)(u(y)−u(x))²` against `(∫Jz²)·∫u_x²`.
pub fn verify_dirichlet_bound(kernel: &Kernel, u: &Field, lambda: f64) -> Result<InequalityCheck> {
    let g = *u.grid();
    check_scale(kernel, &g, lambda)?;
    let quad = kernel.quadrature();
    let max_shift = quad.iter().map(|(z, _)| z.abs()).fold(0.0, f64::max) / lambda;
    let tr = Translator::new(u, max_shift)?;
    let base = u.samples();
    let mut lhs = 0.0;
    for (z, w) in &quad {
        let s: f64 = tr
            .shifted(z / lambda)
            .iter()
            .zip(base)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        lhs += w * s;
    }
    lhs *= lambda * lambda * g.dx();
    let ux = spectral_derivative(u)?;
    let energy: f64 = ux.samples().iter().map(|v| v * v).sum::<f64>() * g.dx();
    Ok(InequalityCheck::new(lhs, 2.0 * kernel.second_moment() * energy, DIRICHLET_SLACK))
}

/// `λ²(J_λ∗φ − φ)` on the grid of `φ`.
pub fn nonlocal_to_local(kernel: &Kernel, phi: &Field, lambda: f64) -> Result<Field> {
    let g = *phi.grid();
    check_scale(kernel, &g, lambda)?;
    let quad = kernel.quadrature();
    let max_shift = quad.iter().map(|(z, _)| z.abs()).fold(0.0, f64::max) / lambda;
    let tr = Translator::new(phi, max_shift)?;
    let base = phi.samples();
    let mut acc = vec![0.0; g.n()];
    for (z, w) in &quad {
        for ((a, s), b) in acc.iter_mut().zip(tr.shifted(-z / lambda)).zip(base) {
            *a += w * (s - b);
        }
    }
    let l2 = lambda * lambda;
    Field::new(g, acc.into_iter().map(|a| l2 * a).collect())
}

/// `‖λ²(J_λ∗φ − φ) − A·φ_xx‖_∞` at the grid nodes.
pub fn operator_limit_error(kernel: &Kernel, phi: &Field, lambda: f64) -> Result<f64> {
    let approx = nonlocal_to_local(kernel, phi, lambda)?;
    let exact = spectral_second_derivative(phi)?.scale(kernel.second_moment());
    Ok(approx
        .samples()
        .iter()
        .zip(exact.samples())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// `‖λ²(J_λ∗ψ − ψ)‖_∞` against `½(∫Jz²)·‖ψ_xx‖_∞`.
pub fn verify_laplacian_bound(kernel: &Kernel, psi: &Field, lambda: f64) -> Result<InequalityCheck> {
    let lhs = nonlocal_to_local(kernel, psi, lambda)?.samples().iter().map(|v| v.abs()).fold(0.0, f64::max);
    let psi_xx = spectral_second_derivative(psi)?.periodic();
    let rhs = kernel.second_moment() * sup_norm_refined(&psi_xx)?;
    Ok(InequalityCheck::new(lhs, rhs, LAPLACIAN_SLACK))
}

/// Sup norm of the trigonometric interpolant, refined around the largest sample.
pub fn sup_norm_refined(f: &Field) -> Result<f64> {
    let s = f.samples();
    let Some((j, &v)) = s
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
    else {
        return Ok(0.0);
    };
    if v == 0.0 {
        return Ok(0.0);
    }
    let g = f.grid();
    let l = g.half_length();
    let at = |x: f64| -> Result<f64> { Ok(fourier_interpolate(f, &[x])?[0].abs()) };
    let (mut a, mut b) = ((g.node(j) - g.dx()).max(-l), (g.node(j) + g.dx()).min(l));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (at(c)?, at(d)?);
    for _ in 0..50 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = at(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = at(d)?;
        }
    }
    Ok(v.abs().max(fc).max(fd))
}
