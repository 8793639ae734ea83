//! Uniform periodic sampling of a truncated line, fields on it, and the
//! spectral machinery (transform, norms, differentiation, interpolation).
//!
//! The transform approximates the continuous one,
//! `coeffs[k] ≈ ∫ f(x) e^{-iξ_k x} dx` with `ξ_k = πk/L`, `k ∈ [-n/2, n/2)`.
//! Coefficients are stored in FFT order: index `k < n/2` holds wavenumber `k`,
//! index `k ≥ n/2` holds `k - n`.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::fft_in_place;

/// Relative boundary-band mass allowed before a field is rejected.
pub const DEFAULT_TAIL_GUARD: f64 = 1e-10;
/// Fraction of the nodes on each side that forms the boundary band.
pub const BOUNDARY_BAND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    half_length: f64,
    dx: f64,
}

impl Grid {
    /// `n ≥ 16` nodes (a power of two) on `[-L, L)`.
    pub fn new(n: usize, half_length: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::Argument(format!(
                "grid size must be a power of two and at least 16, got {n}"
            )));
        }
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::Argument(format!(
                "half length must be positive, got {half_length}"
            )));
        }
        Ok(Self {
            n,
            half_length,
            dx: 2.0 * half_length / n as f64,
        })
    }

    /// Grid sized for runs up to `t_max` with diffusivity `a`:
    /// `L = 10√(2a·t_max) + support_radius` and the smallest power-of-two `n`
    /// giving `dx ≤ 0.1`.
    pub fn auto(a: f64, t_max: f64, support_radius: f64) -> Result<Self> {
        let half_length = 10.0 * (2.0 * a * t_max).sqrt() + support_radius;
        let mut n = 16;
        while 2.0 * half_length / n as f64 > 0.1 {
            n *= 2;
        }
        Self::new(n, half_length)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.dx
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Frequency spacing `π/L`.
    pub fn dxi(&self) -> f64 {
        PI / self.half_length
    }

    /// Signed wavenumber of FFT index `k`.
    pub fn wavenumber(&self, k: usize) -> i64 {
        if k < self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    /// `ξ` at FFT index `k`.
    pub fn frequency(&self, k: usize) -> f64 {
        self.wavenumber(k) as f64 * self.dxi()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.frequency(k)).collect()
    }

    /// `|ξ|` of the Nyquist mode, `πn/(2L)`.
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / (2.0 * self.half_length)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= -self.half_length && x <= self.half_length
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} L={}", self.n, self.half_length)
    }
}

/// Whether a field is expected to vanish near the domain boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailGuard {
    /// Boundary-band mass must not exceed this fraction of the total mass.
    Relative(f64),
    /// Genuinely periodic data (resolved harmonics); never checked.
    Disabled,
}

impl Default for TailGuard {
    fn default() -> Self {
        TailGuard::Relative(DEFAULT_TAIL_GUARD)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Norm {
    L1,
    L2,
    Inf,
}

impl Norm {
    /// `p` as a number (`∞` for [`Norm::Inf`]).
    pub fn exponent(self) -> f64 {
        match self {
            Norm::L1 => 1.0,
            Norm::L2 => 2.0,
            Norm::Inf => f64::INFINITY,
        }
    }

    /// `1 - 1/p`.
    pub fn conjugate_fraction(self) -> f64 {
        match self {
            Norm::L1 => 0.0,
            Norm::L2 => 0.5,
            Norm::Inf => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Norm::L1 => "1",
            Norm::L2 => "2",
            Norm::Inf => "inf",
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Norm::L1),
            "2" => Ok(Norm::L2),
            "inf" | "Inf" | "INF" => Ok(Norm::Inf),
            other => Err(Error::Argument(format!("unsupported norm `{other}` (use 1, 2 or inf)"))),
        }
    }
}

/// Real samples of a function at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    samples: Vec<f64>,
    guard: TailGuard,
}

impl Field {
    pub fn new(grid: Grid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(Error::Data(format!(
                "expected {} samples, got {}",
                grid.n(),
                samples.len()
            )));
        }
        if let Some(j) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("non-finite sample at node {j}")));
        }
        Ok(Self {
            grid,
            samples,
            guard: TailGuard::default(),
        })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().into_iter().map(f).collect())
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            samples: vec![0.0; grid.n()],
            guard: TailGuard::default(),
        }
    }

    /// Cell-averaged indicator of `[center - width/2, center + width/2]`
    /// scaled by `height`, so the discrete mass equals `width·height`.
    pub fn box_cell_average(grid: Grid, center: f64, width: f64, height: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::Argument("box width must be positive".into()));
        }
        let (a, b) = (center - 0.5 * width, center + 0.5 * width);
        let dx = grid.dx();
        Self::from_fn(grid, |x| {
            let lo = (x - 0.5 * dx).max(a);
            let hi = (x + 0.5 * dx).min(b);
            height * (hi - lo).max(0.0) / dx
        })
    }

    pub fn with_guard(mut self, guard: TailGuard) -> Self {
        self.guard = guard;
        self
    }

    /// Marks the field as periodic data; whole-line checks are skipped.
    pub fn periodic(self) -> Self {
        self.with_guard(TailGuard::Disabled)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn guard(&self) -> TailGuard {
        self.guard
    }

    /// Rectangle-rule integral `Σ f_j dx`.
    pub fn integral(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.grid.dx()
    }

    pub fn lp_norm(&self, p: Norm) -> f64 {
        lp_norm(self, p)
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// `Σ |f_j| dx` over the outer 5% of nodes on each side.
    pub fn boundary_band_mass(&self) -> f64 {
        let n = self.grid.n();
        let band = ((n as f64 * BOUNDARY_BAND).ceil() as usize).max(1);
        let left: f64 = self.samples[..band].iter().map(|v| v.abs()).sum();
        let right: f64 = self.samples[n - band..].iter().map(|v| v.abs()).sum();
        (left + right) * self.grid.dx()
    }

    pub fn check_tail(&self) -> Result<()> {
        if let TailGuard::Relative(tol) = self.guard {
            let total = lp_norm(self, Norm::L1);
            let band = self.boundary_band_mass();
            if band > tol * total {
                return Err(Error::DomainTooSmall(format!(
                    "boundary-band mass {band:e} exceeds {tol:e} of total {total:e} on grid {}",
                    self.grid
                )));
            }
        }
        Ok(())
    }

    fn same_grid(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Argument(format!(
                "fields live on different grids ({} vs {})",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Field, op: impl Fn(f64, f64) -> f64) -> Result<Field> {
        self.same_grid(other)?;
        Ok(Field {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| op(*a, *b))
                .collect(),
            guard: self.guard,
        })
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Field {
        self.map(|v| v * s)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid,
            samples: self.samples.iter().map(|&v| f(v)).collect(),
            guard: self.guard,
        }
    }

    /// Writes `x value` rows.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        for (j, v) in self.samples.iter().enumerate() {
            writeln!(out, "{} {}", crate::csv::fmt_num(self.grid.node(j)), crate::csv::fmt_num(*v))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a field written by [`Field::save`]; the grid is recovered from the nodes.
    pub fn load(path: &Path) -> Result<Self> {
        let (xs, vs) = read_two_columns(path)?;
        let n = xs.len();
        if n < 2 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                message: "need at least two rows".into(),
            });
        }
        let half_length = -xs[0];
        let grid = Grid::new(n, half_length)?;
        for (j, x) in xs.iter().enumerate() {
            if (x - grid.node(j)).abs() > 1e-9 * half_length {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    message: format!("row {} is not a node of a uniform grid on [-L, L)", j + 1),
                });
            }
        }
        Field::new(grid, vs)
    }

    /// Linear interpolation of an `(x, value)` table onto `grid`, zero outside.
    pub fn resample_table(grid: Grid, xs: &[f64], vs: &[f64]) -> Result<Self> {
        if xs.len() != vs.len() || xs.len() < 2 || xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Data("table must have ≥ 2 rows with strictly ascending x".into()));
        }
        Self::from_fn(grid, |x| {
            if x < xs[0] || x > xs[xs.len() - 1] {
                return 0.0;
            }
            let i = xs.partition_point(|&p| p <= x).min(xs.len() - 1).max(1);
            let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
            vs[i - 1] + t * (vs[i] - vs[i - 1])
        })
    }
}

/// Parses whitespace-separated two-column numeric text; `#` starts a comment.
pub fn read_two_columns(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse {
            path: path.to_path_buf(),
            message: format!("line {}: expected two numbers, got `{line}`", lineno + 1),
        };
        if cols.len() != 2 {
            return Err(bad());
        }
        a.push(cols[0].parse::<f64>().map_err(|_| bad())?);
        b.push(cols[1].parse::<f64>().map_err(|_| bad())?);
    }
    Ok((a, b))
}

/// `(Σ|f_j|^p dx)^{1/p}` for `p ∈ {1, 2}`, `max_j |f_j|` for `p = ∞`.
pub fn lp_norm(f: &Field, p: Norm) -> f64 {
    let dx = f.grid.dx();
    match p {
        Norm::L1 => f.samples.iter().map(|v| v.abs()).sum::<f64>() * dx,
        Norm::L2 => (f.samples.iter().map(|v| v * v).sum::<f64>() * dx).sqrt(),
        Norm::Inf => f.samples.iter().fold(0.0, |m, v| m.max(v.abs())),
    }
}

/// Frequency-space companion of a [`Field`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
    guard: TailGuard,
}

impl SpectralField {
    /// Spectral field with real coefficients `values` (FFT order), e.g. a
    /// multiplier whose inverse transform is wanted.
    pub fn from_real(grid: Grid, values: &[f64]) -> SpectralField {
        assert_eq!(values.len(), grid.n());
        SpectralField {
            grid,
            coeffs: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            guard: TailGuard::default(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Coefficients in FFT order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient at `ξ = 0`, i.e. the integral of the field.
    pub fn mass(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Multiplies every coefficient by `m(ξ_k)`.
    pub fn apply(&self, m: impl Fn(f64) -> Complex64) -> SpectralField {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * m(self.grid.frequency(k)))
            .collect();
        SpectralField {
            grid: self.grid,
            coeffs,
            guard: self.guard,
        }
    }

    /// Multiplies coefficient `k` by the precomputed real factor `m[k]`.
    pub fn apply_real(&self, m: &[f64]) -> SpectralField {
        debug_assert_eq!(m.len(), self.coeffs.len());
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(m).map(|(c, f)| c * f).collect(),
            guard: self.guard,
        }
    }

    /// Inverse transform; the imaginary residue is discarded.
    pub fn to_field(&self) -> Result<Field> {
        let mut buf: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { *c } else { -c })
            .collect();
        fft_in_place(&mut buf, true);
        let scale = 1.0 / (2.0 * self.grid.half_length());
        let samples = buf.iter().map(|c| c.re * scale).collect();
        Ok(Field::new(self.grid, samples)?.with_guard(self.guard))
    }

    /// `(1/2π) Σ |coeffs|² dξ`, the frequency-side squared L² norm.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.dxi() / (2.0 * PI)
    }
}

/// Forward transform, after checking the tail guard.
pub fn to_spectral(f: &Field) -> Result<SpectralField> {
    f.check_tail()?;
    Ok(transform_unchecked(f))
}

fn transform_unchecked(f: &Field) -> SpectralField {
    let mut buf: Vec<Complex64> = f.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(&mut buf, false);
    let dx = f.grid.dx();
    for (k, c) in buf.iter_mut().enumerate() {
        *c *= if k % 2 == 0 { dx } else { -dx };
    }
    SpectralField {
        grid: f.grid,
        coeffs: buf,
        guard: f.guard,
    }
}

/// `f'` via the multiplier `iξ`; the Nyquist mode is dropped to keep the result real.
pub fn spectral_derivative(f: &Field) -> Result<Field> {
    let s = to_spectral(f)?;
    let nyq = f.grid.n() / 2;
    let mut d = s.apply(|xi| Complex64::new(0.0, xi));
    d.coeffs[nyq] = Complex64::new(0.0, 0.0);
    d.to_field()
}

/// `f''` via the multiplier `-ξ²`.
pub fn spectral_second_derivative(f: &Field) -> Result<Field> {
    to_spectral(f)?
        .apply(|xi| Complex64::new(-xi * xi, 0.0))
        .to_field()
}

/// Band-limited (trigonometric) interpolation of `f` at arbitrary points in `[-L, L]`.
pub fn fourier_interpolate(f: &Field, points: &[f64]) -> Result<Vec<f64>> {
    if let Some(p) = points.iter().find(|p| !f.grid.contains(**p)) {
        return Err(Error::Range(format!(
            "interpolation point {p} outside [-{L}, {L}]",
            L = f.grid.half_length()
        )));
    }
    let s = to_spectral(f)?;
    let n = f.grid.n();
    let half = n / 2;
    let dxi = f.grid.dxi();
    let inv_len = 1.0 / (2.0 * f.grid.half_length());
    let c = &s.coeffs;
    Ok(points
        .iter()
        .map(|&x| {
            let mut acc = c[0].re;
            let step = Complex64::from_polar(1.0, dxi * x);
            let mut phase = Complex64::new(1.0, 0.0);
            for k in 1..half {
                // re-seed the rotation periodically to bound accumulated rounding
                phase = if k % 64 == 0 {
                    Complex64::from_polar(1.0, dxi * x * k as f64)
                } else {
                    phase * step
                };
                acc += 2.0 * (c[k] * phase).re;
            }
            acc += c[half].re * (dxi * x * half as f64).cos();
            acc * inv_len
        })
        .collect())
}

/// Evaluates `f(x_j + s)` for many shifts `s`, treating `f` as zero outside
/// the grid (zero-padded band-limited translation, no wrap-around).
pub struct Translator {
    grid: Grid,
    padded: Grid,
    offset: usize,
    spectrum: Vec<Complex64>,
}

impl Translator {
    /// Pads enough to shift by up to `max_shift` without aliasing.
    pub fn new(f: &Field, max_shift: f64) -> Result<Self> {
        f.check_tail()?;
        let grid = f.grid;
        let extra = (max_shift.abs() / grid.dx()).ceil() as usize + 1;
        let mut m = grid.n();
        while m < grid.n() + 2 * extra {
            m *= 2;
        }
        let offset = (m - grid.n()) / 2;
        let padded = Grid::new(m, grid.dx() * m as f64 / 2.0)?;
        let mut samples = vec![0.0; m];
        samples[offset..offset + grid.n()].copy_from_slice(&f.samples);
        let spectrum = transform_unchecked(&Field {
            grid: padded,
            samples,
            guard: TailGuard::Disabled,
        })
        .coeffs;
        Ok(Self {
            grid,
            padded,
            offset,
            spectrum,
        })
    }

    /// Samples of `x ↦ f(x + shift)` at the original nodes.
    pub fn shifted(&self, shift: f64) -> Vec<f64> {
        let p = &self.padded;
        let nyq = p.n() / 2;
        let coeffs: Vec<Complex64> = self
            .spectrum
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k == nyq {
                    c * (p.frequency(k) * shift).cos()
                } else {
                    c * Complex64::from_polar(1.0, p.frequency(k) * shift)
                }
            })
            .collect();
        let out = SpectralField {
            grid: *p,
            coeffs,
            guard: TailGuard::Disabled,
        }
        .to_field()
        .expect("padded inverse transform is finite");
        out.samples[self.offset..self.offset + self.grid.n()].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heat(t: f64) -> impl Fn(f64) -> f64 {
        move |x: f64| (-x * x / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(1000, 1.0).is_err());
        assert!(Grid::new(8, 1.0).is_err());
        let g = Grid::new(1024, 40.0).unwrap();
        assert_eq!(g.dx() * 1024.0, 80.0);
        assert_eq!(g.node(0), -40.0);
        assert_eq!(g.frequency(512), -PI * 512.0 / 40.0);
    }

    #[test]
    fn auto_grid_rule() {
        let g = Grid::auto(0.5, 256.0, 0.5).unwrap();
        assert!((g.half_length() - 160.5).abs() < 1e-12);
        assert_eq!(g.n(), 4096);
        assert!(g.dx() <= 0.1);
    }

    #[test]
    fn zero_field_transforms_to_zero() {
        let g = Grid::new(64, 5.0).unwrap();
        let s = to_spectral(&Field::zeros(g)).unwrap();
        assert!(s.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn heat_kernel_has_unit_mass_coefficient() {
        let g = Grid::new(1024, 40.0).unwrap();
        let f = Field::from_fn(g, heat(1.0)).unwrap();
        let s = to_spectral(&f).unwrap();
        assert!((s.mass() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_transform_matches_closed_form() {
        let g = Grid::new(1024, 40.0).unwrap();
        let f = Field::from_fn(g, |x| (-x * x / 2.0).exp()).unwrap();
        let s = to_spectral(&f).unwrap();
        for (k, c) in s.coeffs().iter().enumerate() {
            let xi = g.frequency(k);
            if xi.abs() <= 10.0 {
                let exact = (2.0 * PI).sqrt() * (-xi * xi / 2.0).exp();
                assert!((c - Complex64::new(exact, 0.0)).norm() < 1e-8, "ξ={xi}");
            }
        }
    }

    #[test]
    fn round_trip_and_hermitian_symmetry() {
        let g = Grid::new(256, 10.0).unwrap();
        let f = Field::from_fn(g, |x| (-(x - 1.0) * (x - 1.0)).exp() * (1.0 + 0.3 * x)).unwrap();
        let s = to_spectral(&f).unwrap();
        for k in 1..g.n() {
            let a = s.coeffs()[k];
            let b = s.coeffs()[g.n() - k];
            assert!((a - b.conj()).norm() < 1e-14);
        }
        let back = s.to_field().unwrap();
        let scale = lp_norm(&f, Norm::Inf);
        for (a, b) in back.samples().iter().zip(f.samples()) {
            assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn norm_examples() {
        let g = Grid::new(1024, 40.0).unwrap();
        let zero = Field::zeros(g);
        for p in [Norm::L1, Norm::L2, Norm::Inf] {
            assert_eq!(lp_norm(&zero, p), 0.0);
        }
        let b = Field::box_cell_average(g, 0.0, 1.0, 1.0).unwrap();
        assert!((lp_norm(&b, Norm::L1) - 1.0).abs() < 1e-12);
        assert!((lp_norm(&b, Norm::L2) - 1.0).abs() < g.dx());
        assert!((lp_norm(&b, Norm::Inf) - 1.0).abs() < 1e-12);
        let h = Field::from_fn(g, heat(1.0)).unwrap();
        assert!((lp_norm(&h, Norm::Inf) - 0.2820948).abs() < 1e-7);
    }

    #[test]
    fn parseval() {
        let g = Grid::new(512, 20.0).unwrap();
        let f = Field::from_fn(g, |x| (-x * x / 3.0).exp() * (2.0 * x).cos()).unwrap();
        let l2 = lp_norm(&f, Norm::L2).powi(2);
        let s = to_spectral(&f).unwrap();
        assert!((l2 - s.energy()).abs() <= 1e-10 * l2);
    }

    #[test]
    fn quadrature_converges_for_gaussian() {
        let exact = (2.0 * PI).sqrt();
        let mut prev = f64::INFINITY;
        for n in [16, 32, 64] {
            let g = Grid::new(n, 40.0).unwrap();
            let f = Field::from_fn(g, |x| (-x * x / 2.0).exp()).unwrap();
            let err = (lp_norm(&f, Norm::L1) - exact).abs();
            if prev > 1e-13 {
                assert!(err * 4.0 <= prev, "n={n}: {err} vs {prev}");
            }
            prev = err;
        }
    }

    #[test]
    fn derivative_examples() {
        let g = Grid::new(1024, 40.0).unwrap();
        let l = g.half_length();
        let s = Field::from_fn(g, |x| (PI * x / l).sin()).unwrap().periodic();
        let d = spectral_derivative(&s).unwrap();
        for (j, v) in d.samples().iter().enumerate() {
            let x = g.node(j);
            assert!((v - PI / l * (PI * x / l).cos()).abs() < 1e-10);
        }
        let e = Field::from_fn(g, |x| (-x * x).exp()).unwrap();
        let d = spectral_derivative(&e).unwrap();
        let err = d
            .samples()
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let x = g.node(j);
                (v + 2.0 * x * (-x * x).exp()).abs()
            })
            .fold(0.0, f64::max);
        assert!(err <= 1e-8, "{err}");
    }

    #[test]
    fn derivative_of_flat_bump_vanishes_inside() {
        let g = Grid::new(1024, 40.0).unwrap();
        // plateau on |x| < 10 with smooth shoulders out to 20
        let f = Field::from_fn(g, |x| crate::asymptotics::testfn::plateau(x, 10.0, 20.0)).unwrap();
        let d = spectral_derivative(&f).unwrap();
        for (j, v) in d.samples().iter().enumerate() {
            if g.node(j).abs() < 8.0 {
                assert!(v.abs() < 1e-8, "{v}");
            }
        }
    }

    #[test]
    fn tail_guard_rejects_wide_fields() {
        let g = Grid::new(64, 5.0).unwrap();
        let f = Field::from_fn(g, |x| (-x * x / 8.0).exp()).unwrap();
        assert!(matches!(to_spectral(&f), Err(Error::DomainTooSmall(_))));
        assert!(to_spectral(&f.clone().periodic()).is_ok());
        assert!(matches!(
            Field::new(g, vec![f64::NAN; 64]),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn interpolation_examples() {
        let g = Grid::new(256, 10.0).unwrap();
        let f = Field::from_fn(g, |x| (-x * x).exp() * (1.0 + x)).unwrap();
        let v = fourier_interpolate(&f, &g.nodes()).unwrap();
        for (a, b) in v.iter().zip(f.samples()) {
            assert!((a - b).abs() < 1e-12);
        }
        let l = g.half_length();
        let c = Field::from_fn(g, |x| (2.0 * PI * x / l).cos()).unwrap().periodic();
        let pts: Vec<f64> = (0..g.n() - 1).map(|j| g.node(j) + 0.5 * g.dx()).collect();
        let v = fourier_interpolate(&c, &pts).unwrap();
        for (x, y) in pts.iter().zip(v) {
            assert!((y - (2.0 * PI * x / l).cos()).abs() < 1e-10);
        }
        assert!(matches!(fourier_interpolate(&f, &[10.5]), Err(Error::Range(_))));
    }

    #[test]
    fn translator_shifts_without_wraparound() {
        let g = Grid::new(256, 8.0).unwrap();
        let f = Field::from_fn(g, |x| (-x * x).exp()).unwrap();
        let tr = Translator::new(&f, 7.5).unwrap();
        for s in [0.0, 0.37, -2.0, 7.5] {
            let v = tr.shifted(s);
            for (j, y) in v.iter().enumerate() {
                let x = g.node(j) + s;
                assert!((y - (-x * x).exp()).abs() < 1e-12, "s={s} x={x}");
            }
        }
    }

    #[test]
    fn field_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.txt");
        let g = Grid::new(32, 3.0).unwrap();
        let f = Field::from_fn(g, |x| x * x).unwrap();
        f.save(&p).unwrap();
        let back = Field::load(&p).unwrap();
        assert_eq!(back.grid(), f.grid());
        assert_eq!(back.samples(), f.samples());
    }
}
