//! Convolution kernels `J`: values, Fourier transforms, moments and the
//! small/large frequency admissibility checks.
//!
//! Transform convention: `Ĵ(ξ) = ∫ J(z) e^{-iξz} dz`, which is real because
//! every kernel here is even.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use statrs::function::erf::erfc;

use crate::csv::{Cell, CsvTable};
use crate::error::{Error, Result};
use crate::quadrature::{fit_line, gauss_legendre, loglog_slope};

/// Tail mass below which a kernel is considered exhausted when truncating it.
pub const TRUNCATION_EPS: f64 = 1e-12;
/// Tail mass dropped by the Gaussian quadrature rule.
const QUADRATURE_EPS: f64 = 1e-17;

const SAMPLED_EDGE_TOL: f64 = 1e-8;
const GL_POINTS: usize = 10;

/// A sampled kernel, stored as a symmetric piecewise-linear table of unit mass.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTable {
    z: Vec<f64>,
    values: Vec<f64>,
}

impl SampledTable {
    pub fn nodes(&self) -> &[f64] {
        &self.z
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn max_spacing(&self) -> f64 {
        self.z
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    fn eval(&self, z: f64) -> f64 {
        piecewise_linear(&self.z, &self.values, z)
    }

    /// `∫ J(z) g(z) dz` with a Gauss–Legendre rule on every table segment.
    fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        let (gx, gw) = gauss_legendre(GL_POINTS);
        let mut total = 0.0;
        for (zs, vs) in self.z.windows(2).zip(self.values.windows(2)) {
            let (a, b) = (zs[0], zs[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let mut seg = 0.0;
            for (x, w) in gx.iter().zip(&gw) {
                let z = mid + half * x;
                let t = (z - a) / (b - a);
                let j = vs[0] + t * (vs[1] - vs[0]);
                seg += w * j * g(z);
            }
            total += seg * half;
        }
        total
    }
}

fn piecewise_linear(z: &[f64], v: &[f64], x: f64) -> f64 {
    if x < z[0] || x > z[z.len() - 1] {
        return 0.0;
    }
    let i = match z.binary_search_by(|p| p.total_cmp(&x)) {
        Ok(i) => return v[i],
        Err(i) => i,
    };
    let (a, b) = (z[i - 1], z[i]);
    let t = (x - a) / (b - a);
    v[i - 1] + t * (v[i] - v[i - 1])
}

/// Shape of `J`.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelForm {
    /// `J(z) = exp(-z²/2σ²) / (σ√(2π))`
    Gaussian { sigma: f64 },
    /// `J(z) = 1/(2h)` on `[-h, h]`
    Box { half_width: f64 },
    /// `J(z) = (1 - |z|/h)₊ / h`
    Hat { half_width: f64 },
    Sampled(SampledTable),
}

/// An even, nonnegative, unit-mass convolution kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    form: KernelForm,
    second_moment_a: f64,
    mass: f64,
    fourth_moment: Option<f64>,
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            KernelForm::Gaussian { sigma } => write!(f, "gaussian({sigma})"),
            KernelForm::Box { half_width } => write!(f, "box({half_width})"),
            KernelForm::Hat { half_width } => write!(f, "hat({half_width})"),
            KernelForm::Sampled(t) => write!(f, "sampled({} nodes)", t.z.len()),
        }
    }
}

fn check_scale(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!("{name} must be positive and finite, got {v}")))
    }
}

impl Kernel {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        check_scale("sigma", sigma)?;
        let s2 = sigma * sigma;
        Ok(Self {
            form: KernelForm::Gaussian { sigma },
            second_moment_a: 0.5 * s2,
            mass: 1.0,
            fourth_moment: Some(3.0 * s2 * s2),
        })
    }

    pub fn box_kernel(half_width: f64) -> Result<Self> {
        check_scale("half width", half_width)?;
        let h2 = half_width * half_width;
        Ok(Self {
            form: KernelForm::Box { half_width },
            second_moment_a: h2 / 6.0,
            mass: 1.0,
            fourth_moment: Some(h2 * h2 / 5.0),
        })
    }

    pub fn hat(half_width: f64) -> Result<Self> {
        check_scale("half width", half_width)?;
        let h2 = half_width * half_width;
        Ok(Self {
            form: KernelForm::Hat { half_width },
            second_moment_a: h2 / 12.0,
            mass: 1.0,
            fourth_moment: Some(h2 * h2 / 15.0),
        })
    }

    /// Builds a kernel from a table of `(z, J(z))` samples in ascending `z`.
    ///
    /// The piecewise-linear interpolant is symmetrized, `J(z) ← (J(z)+J(-z))/2`,
    /// and renormalized to unit mass.
    pub fn from_table(z: &[f64], values: &[f64]) -> Result<Self> {
        if z.len() != values.len() || z.len() < 3 {
            return Err(Error::Data("kernel table needs at least 3 (z, J) rows".into()));
        }
        if z.iter().chain(values).any(|v| !v.is_finite()) {
            return Err(Error::Data("kernel table contains non-finite values".into()));
        }
        if z.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Data("kernel table must be strictly ascending in z".into()));
        }
        if values.iter().any(|&v| v < 0.0) {
            return Err(Error::Data("kernel values must be nonnegative".into()));
        }
        let peak = values.iter().cloned().fold(0.0, f64::max);
        if peak <= 0.0 {
            return Err(Error::Data("kernel table is identically zero".into()));
        }
        if values[0] > SAMPLED_EDGE_TOL * peak || values[values.len() - 1] > SAMPLED_EDGE_TOL * peak {
            return Err(Error::Truncation(format!(
                "kernel table does not decay at its ends (J = {:e}, {:e}; peak {peak:e})",
                values[0],
                values[values.len() - 1]
            )));
        }

        let mut nodes: Vec<f64> = z.iter().flat_map(|&x| [x, -x]).collect();
        nodes.sort_by(f64::total_cmp);
        let scale = nodes.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * scale);
        let sym: Vec<f64> = nodes
            .iter()
            .map(|&x| 0.5 * (piecewise_linear(z, values, x) + piecewise_linear(z, values, -x)))
            .collect();

        let mut table = SampledTable { z: nodes, values: sym };
        let mass = table.integrate(|_| 1.0);
        if mass <= 0.0 {
            return Err(Error::Data("kernel table has zero mass".into()));
        }
        for v in &mut table.values {
            *v /= mass;
        }
        let m2 = table.integrate(|z| z * z);
        let m4 = table.integrate(|z| z.powi(4));
        let unit = table.integrate(|_| 1.0);
        if !(m2 > 0.0) {
            return Err(Error::Data("kernel has vanishing second moment".into()));
        }
        Ok(Self {
            form: KernelForm::Sampled(table),
            second_moment_a: 0.5 * m2,
            mass: unit,
            fourth_moment: Some(m4),
        })
    }

    /// Loads a two-column whitespace-separated `(z, J(z))` text file.
    pub fn load(path: &Path) -> Result<Self> {
        let (z, v) = crate::grid::read_two_columns(path)?;
        Self::from_table(&z, &v)
    }

    pub fn form(&self) -> &KernelForm {
        &self.form
    }

    /// Short identifier used in reports, e.g. `gaussian(1)`.
    pub fn id(&self) -> String {
        self.to_string()
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `A = ½ ∫ z² J(z) dz`, the effective diffusivity.
    pub fn second_moment(&self) -> f64 {
        self.second_moment_a
    }

    /// `∫ z⁴ J(z) dz`.
    pub fn fourth_moment(&self) -> Option<f64> {
        self.fourth_moment
    }

    pub fn value(&self, z: f64) -> f64 {
        match &self.form {
            KernelForm::Gaussian { sigma } => {
                let s = z / sigma;
                (-0.5 * s * s).exp() / (sigma * (2.0 * PI).sqrt())
            }
            KernelForm::Box { half_width } => {
                if z.abs() <= *half_width {
                    0.5 / half_width
                } else {
                    0.0
                }
            }
            KernelForm::Hat { half_width } => (1.0 - z.abs() / half_width).max(0.0) / half_width,
            KernelForm::Sampled(t) => t.eval(z),
        }
    }

    /// `‖J‖_∞`, attained at the origin.
    pub fn sup(&self) -> f64 {
        match &self.form {
            KernelForm::Sampled(t) => t.values.iter().cloned().fold(0.0, f64::max),
            _ => self.value(0.0),
        }
    }

    /// Largest frequency at which `Ĵ` is meaningful. `None` for analytic forms.
    pub fn max_resolvable_frequency(&self) -> Option<f64> {
        match &self.form {
            KernelForm::Sampled(t) => Some(PI / t.max_spacing()),
            _ => None,
        }
    }

    fn check_frequency(&self, xi: f64) -> Result<()> {
        if !xi.is_finite() {
            return Err(Error::Data(format!("non-finite frequency {xi}")));
        }
        if let Some(limit) = self.max_resolvable_frequency() {
            if xi.abs() > limit * (1.0 + 1e-12) {
                return Err(Error::Resolution(format!(
                    "|ξ| = {} exceeds the sampled kernel's resolvable band {limit}",
                    xi.abs()
                )));
            }
        }
        Ok(())
    }

    /// `Ĵ(ξ)`.
    pub fn fourier(&self, xi: f64) -> Result<f64> {
        self.check_frequency(xi)?;
        Ok(match &self.form {
            KernelForm::Gaussian { sigma } => {
                let s = sigma * xi;
                (-0.5 * s * s).exp()
            }
            KernelForm::Box { half_width } => sinc(half_width * xi),
            KernelForm::Hat { half_width } => {
                let s = sinc(0.5 * half_width * xi);
                s * s
            }
            KernelForm::Sampled(t) => t.integrate(|z| (xi * z).cos()),
        })
    }

    /// `1 - Ĵ(ξ)`, evaluated without cancellation at small `ξ`.
    pub fn one_minus_fourier(&self, xi: f64) -> Result<f64> {
        self.check_frequency(xi)?;
        Ok(match &self.form {
            KernelForm::Gaussian { sigma } => {
                let s = sigma * xi;
                -(-0.5 * s * s).exp_m1()
            }
            KernelForm::Box { half_width } => one_minus_sinc(half_width * xi),
            KernelForm::Hat { half_width } => {
                let x = 0.5 * half_width * xi;
                let d = one_minus_sinc(x);
                d * (2.0 - d)
            }
            KernelForm::Sampled(t) => t.integrate(|z| {
                let s = (0.5 * xi * z).sin();
                2.0 * s * s
            }),
        })
    }

    /// `Ĵ` over an array of frequencies.
    pub fn fourier_many(&self, xi: &[f64]) -> Result<Vec<f64>> {
        xi.iter().map(|&x| self.fourier(x)).collect()
    }

    /// `∫_{|z|>r} J(z) dz`.
    pub fn tail_mass_beyond(&self, r: f64) -> f64 {
        let r = r.abs();
        match &self.form {
            KernelForm::Gaussian { sigma } => erfc(r / (sigma * std::f64::consts::SQRT_2)),
            KernelForm::Box { half_width } => (1.0 - r / half_width).max(0.0),
            KernelForm::Hat { half_width } => {
                let s = (1.0 - r / half_width).max(0.0);
                s * s
            }
            KernelForm::Sampled(t) => t.integrate(|z| if z.abs() > r { 1.0 } else { 0.0 }),
        }
    }

    /// Smallest `r` with `∫_{|z|>r} J < eps` (the support radius for compact kernels).
    pub fn truncation_radius(&self, eps: f64) -> f64 {
        match &self.form {
            KernelForm::Box { half_width } | KernelForm::Hat { half_width } => *half_width,
            KernelForm::Sampled(t) => {
                let nodes = &t.z;
                let mut r = nodes[nodes.len() - 1];
                // walk inwards while the dropped tail stays below eps
                for &z in nodes.iter().rev() {
                    if z <= 0.0 || self.tail_mass_beyond(z) >= eps {
                        break;
                    }
                    r = z;
                }
                r
            }
            KernelForm::Gaussian { sigma } => {
                let (mut lo, mut hi) = (0.0, 40.0 * sigma);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.tail_mass_beyond(mid) < eps {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                hi
            }
        }
    }

    /// Nodes and weights `(z_q, w_q)` with `Σ w_q g(z_q) ≈ ∫ J(z) g(z) dz` for
    /// smooth `g`; the kernel values are folded into the weights.
    ///
    /// Gaussian: trapezoid with step σ/8 on the truncated support (spectrally
    /// accurate). Compact and sampled kernels: Gauss–Legendre panels on each
    /// piece where `J` is polynomial, so moments up to high order are exact.
    pub fn quadrature(&self) -> Vec<(f64, f64)> {
        let (gx, gw) = gauss_legendre(GL_POINTS);
        let panels = |pieces: &[(f64, f64)], sub: usize| -> Vec<(f64, f64)> {
            let mut out = Vec::new();
            for &(a, b) in pieces {
                let h = (b - a) / sub as f64;
                for k in 0..sub {
                    let lo = a + k as f64 * h;
                    for (x, w) in gx.iter().zip(&gw) {
                        let z = lo + 0.5 * h * (x + 1.0);
                        out.push((z, 0.5 * h * w * self.value(z)));
                    }
                }
            }
            out
        };
        match &self.form {
            KernelForm::Gaussian { sigma } => {
                let r = self.truncation_radius(QUADRATURE_EPS);
                let h = sigma / 8.0;
                let m = (r / h).ceil() as i64;
                (-m..=m)
                    .map(|k| {
                        let z = k as f64 * h;
                        (z, h * self.value(z))
                    })
                    .collect()
            }
            KernelForm::Box { half_width } => panels(&[(-half_width, *half_width)], 8),
            KernelForm::Hat { half_width } => {
                panels(&[(-half_width, 0.0), (0.0, *half_width)], 4)
            }
            KernelForm::Sampled(t) => {
                let pieces: Vec<(f64, f64)> = t.z.windows(2).map(|w| (w[0], w[1])).collect();
                panels(&pieces, 1)
            }
        }
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn one_minus_sinc(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    } else {
        1.0 - x.sin() / x
    }
}

/// Fit windows and tolerances for [`check_admissibility`].
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityConfig {
    /// Small-frequency window `[ξ_min, ξ_small]` for recovering `A`.
    pub small_window: (f64, f64),
    pub small_points: usize,
    /// Allowed `|a_estimated - a_moment|`.
    pub a_tolerance: f64,
    /// Upper end of the band for analytic kernels; sampled kernels use their
    /// Nyquist frequency.
    pub analytic_xi_max: f64,
    /// Samples across the large-frequency window.
    pub large_points: usize,
}

impl Default for AdmissibilityConfig {
    fn default() -> Self {
        Self {
            small_window: (1e-4, 1e-2),
            small_points: 64,
            a_tolerance: 1e-6,
            analytic_xi_max: 1e3,
            large_points: 8192,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub kernel_id: String,
    pub a_estimated: f64,
    pub a_moment: f64,
    /// Large-frequency decay exponent; `f64::INFINITY` for super-polynomial decay.
    pub decay_exponent_m: f64,
    pub decay_exponent_stderr: f64,
    /// Envelope prefactor `C` in `|Ĵ| ≈ C|ξ|^{-m}`. Informational only.
    pub decay_prefactor: f64,
    pub passes_hyp1: bool,
    pub passes_hyp2: bool,
}

impl AdmissibilityReport {
    pub const COLUMNS: [&'static str; 6] =
        ["kernel_id", "a_estimated", "a_moment", "m", "passes_hyp1", "passes_hyp2"];

    pub fn csv_row(&self) -> Vec<Cell> {
        vec![
            self.kernel_id.clone().into(),
            self.a_estimated.into(),
            self.a_moment.into(),
            self.decay_exponent_m.into(),
            self.passes_hyp1.into(),
            self.passes_hyp2.into(),
        ]
    }

    pub fn to_table(reports: &[AdmissibilityReport]) -> CsvTable {
        let mut t = CsvTable::new(Self::COLUMNS).titled("admissibility");
        for r in reports {
            t.push(r.csv_row());
        }
        t
    }
}

/// Values below this are treated as underflow, i.e. super-polynomial decay.
const UNDERFLOW: f64 = 1e-300;
/// Values below this are floating-point noise relative to `Ĵ(0) = 1`.
const NOISE: f64 = 1e-14;

/// Checks the small-frequency expansion `Ĵ = 1 - Aξ² + o(ξ²)` and the
/// polynomial decay `|Ĵ(ξ)| ≤ C|ξ|^{-m}`, `m > 2`.
pub fn check_admissibility(kernel: &Kernel, cfg: &AdmissibilityConfig) -> Result<AdmissibilityReport> {
    let a_moment = kernel.second_moment();
    let a_estimated = estimate_a(kernel, cfg)?;
    let (m, stderr, prefactor) = fit_decay_exponent(kernel, cfg)?;
    Ok(AdmissibilityReport {
        kernel_id: kernel.id(),
        a_estimated,
        a_moment,
        decay_exponent_m: m,
        decay_exponent_stderr: stderr,
        decay_prefactor: prefactor,
        passes_hyp1: (a_estimated - a_moment).abs() <= cfg.a_tolerance,
        passes_hyp2: m.is_infinite() || m > 2.0 + stderr,
    })
}

/// Least-squares fit of `(1 - Ĵ(ξ))/ξ² = a + bξ²` on log-spaced `ξ`; returns `a`.
fn estimate_a(kernel: &Kernel, cfg: &AdmissibilityConfig) -> Result<f64> {
    let (lo, hi) = cfg.small_window;
    if !(lo > 0.0 && hi > lo) || cfg.small_points < 3 {
        return Err(Error::Argument("invalid small-frequency fit window".into()));
    }
    let n = cfg.small_points;
    let ratio = (hi / lo).ln();
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for i in 0..n {
        let xi = lo * (ratio * i as f64 / (n - 1) as f64).exp();
        let q = kernel.one_minus_fourier(xi)? / (xi * xi);
        xs.push(xi * xi);
        ys.push(q);
    }
    fit_line(&xs, &ys)
        .map(|f| f.intercept)
        .ok_or_else(|| Error::Fit("small-frequency fit is degenerate".into()))
}

/// Log–log fit of the envelope of `|Ĵ|` over the upper decade of the band.
fn fit_decay_exponent(kernel: &Kernel, cfg: &AdmissibilityConfig) -> Result<(f64, f64, f64)> {
    let xi_max = kernel
        .max_resolvable_frequency()
        .unwrap_or(cfg.analytic_xi_max);
    let xi_min = xi_max / 10.0;
    let n = cfg.large_points.max(16);
    let h = (xi_max - xi_min) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| xi_min + i as f64 * h).collect();
    let mags: Vec<f64> = xs
        .iter()
        .map(|&x| kernel.fourier(x.min(xi_max)).map(f64::abs))
        .collect::<Result<_>>()?;

    let top = mags.iter().cloned().fold(0.0, f64::max);
    if top < UNDERFLOW {
        return Ok((f64::INFINITY, 0.0, 0.0));
    }
    if top < NOISE {
        return Err(Error::Fit(format!(
            "all |Ĵ| samples on [{xi_min}, {xi_max}] are below floating noise"
        )));
    }

    // oscillating transforms: fit the refined local maxima (the envelope)
    let mut px = Vec::new();
    let mut py = Vec::new();
    for i in 1..n - 1 {
        if mags[i] > mags[i - 1] && mags[i] >= mags[i + 1] && mags[i] > NOISE {
            let (x, y) = refine_peak(|x| kernel.fourier(x).map(f64::abs), xs[i - 1], xs[i + 1])?;
            px.push(x);
            py.push(y);
        }
    }
    if px.len() < 3 {
        px.clear();
        py.clear();
        for (x, m) in xs.iter().zip(&mags) {
            if *m > NOISE {
                px.push(*x);
                py.push(*m);
            }
        }
    }
    let fit = loglog_slope(&px, &py)
        .ok_or_else(|| Error::Fit("large-frequency fit has fewer than two usable samples".into()))?;
    Ok((-fit.slope, fit.slope_stderr, fit.intercept.exp()))
}

fn refine_peak(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..80 {
        if (b - a).abs() <= 1e-12 * b.abs().max(1.0) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}
