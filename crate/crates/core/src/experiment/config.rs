//! Line-oriented `key = value` experiment configuration.
//!
//! ```text
//! # comment
//! kernel    = gaussian(1)          # gaussian(σ) | box(h) | hat(h) | file(path)
//! datum     = box(1)               # box(w[, c]) | gaussian(s[, c]) | hat(h[, c]) | file(path)
//! n         = 2048                 # with L; both omitted means auto grid
//! L         = 160
//! times     = dyadic(4, 256)       # or a list: 4, 8, 16
//! norms     = 1, 2, inf
//! checks    = decay, lemma2        # or all
//! out       = results
//! seed      = 7
//! snapshots = 16, 64              # x, u, v dumps
//! tol.oracle = 1e-6
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid, Norm};
use crate::kernels::Kernel;
use crate::asymptotics::dyadic_times;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Admissibility,
    Decay,
    Lemma1,
    Lemma2,
    Lemma4,
    Lemma5,
    Id1,
    Tail,
    OpLimit,
    DeltaSource,
    OracleCrosscheck,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::Admissibility,
        Check::Decay,
        Check::Lemma1,
        Check::Lemma2,
        Check::Lemma4,
        Check::Lemma5,
        Check::Id1,
        Check::Tail,
        Check::OpLimit,
        Check::DeltaSource,
        Check::OracleCrosscheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Admissibility => "admissibility",
            Check::Decay => "decay",
            Check::Lemma1 => "lemma1",
            Check::Lemma2 => "lemma2",
            Check::Lemma4 => "lemma4",
            Check::Lemma5 => "lemma5",
            Check::Id1 => "id1",
            Check::Tail => "tail",
            Check::OpLimit => "oplimit",
            Check::DeltaSource => "deltasource",
            Check::OracleCrosscheck => "oracle-crosscheck",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Check::Admissibility => "fit A and the decay exponent of the kernel transform",
            Check::Decay => "distance of u(t) to M·G_{At} in each norm over the time sweep",
            Check::Lemma1 => "scaled norms of v(t) and of the regular kernel K_t stay bounded",
            Check::Lemma2 => "decay exponent of ‖v_x(t)‖_p",
            Check::Lemma4 => "nonlocal Dirichlet form bounded by the H¹ seminorm (random suite)",
            Check::Lemma5 => "nonlocal Laplacian bounded by A‖ψ_xx‖_∞ (random suite)",
            Check::Id1 => "symmetrization identity for the nonlocal form (random suite)",
            Check::Tail => "excess tail mass against t/R² + √t/R",
            Check::OpLimit => "second-order convergence of λ²(J_λ∗φ − φ) to Aφ_xx",
            Check::DeltaSource => "concentration of the rescaled source term at the origin",
            Check::OracleCrosscheck => "spectral solution against a real-space RK4 oracle",
        }
    }

    /// Checks that draw random test functions and therefore need a seed.
    pub fn is_randomized(self) -> bool {
        matches!(self, Check::Lemma4 | Check::Lemma5 | Check::Id1)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    Gaussian(f64),
    Box(f64),
    Hat(f64),
    File(PathBuf),
}

impl KernelSpec {
    pub fn build(&self) -> Result<Kernel> {
        match self {
            KernelSpec::Gaussian(s) => Kernel::gaussian(*s),
            KernelSpec::Box(h) => Kernel::box_kernel(*h),
            KernelSpec::Hat(h) => Kernel::hat(*h),
            KernelSpec::File(p) => Kernel::load(p),
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Gaussian(s) => write!(f, "gaussian({s})"),
            KernelSpec::Box(h) => write!(f, "box({h})"),
            KernelSpec::Hat(h) => write!(f, "hat({h})"),
            KernelSpec::File(p) => write!(f, "file({})", p.display()),
        }
    }
}

/// Unit-mass initial data.
#[derive(Debug, Clone, PartialEq)]
pub enum DatumSpec {
    /// Width and center; height `1/width`.
    Box { width: f64, center: f64 },
    /// Standard deviation and center.
    Gaussian { sigma: f64, center: f64 },
    /// Half-width and center; peak `1/half_width`.
    Hat { half_width: f64, center: f64 },
    /// Two-column `x value` table, linearly interpolated onto the grid.
    File(PathBuf),
}

impl DatumSpec {
    /// Radius of a centered interval holding the datum (numerically) entirely.
    pub fn support_radius(&self) -> Result<f64> {
        Ok(match self {
            DatumSpec::Box { width, center } => 0.5 * width + center.abs(),
            DatumSpec::Gaussian { sigma, center } => 8.0 * sigma + center.abs(),
            DatumSpec::Hat { half_width, center } => half_width + center.abs(),
            DatumSpec::File(p) => {
                let (xs, vs) = crate::grid::read_two_columns(p)?;
                xs.iter()
                    .zip(&vs)
                    .filter(|(_, v)| **v != 0.0)
                    .map(|(x, _)| x.abs())
                    .fold(0.0, f64::max)
            }
        })
    }

    pub fn realize(&self, grid: Grid) -> Result<Field> {
        match self {
            DatumSpec::Box { width, center } => Field::box_cell_average(grid, *center, *width, 1.0 / width),
            DatumSpec::Gaussian { sigma, center } => Field::from_fn(grid, |x| {
                let z = (x - center) / sigma;
                (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            }),
            DatumSpec::Hat { half_width, center } => {
                Field::from_fn(grid, |x| (1.0 - ((x - center) / half_width).abs()).max(0.0) / half_width)
            }
            DatumSpec::File(p) => {
                let (xs, vs) = crate::grid::read_two_columns(p)?;
                Field::resample_table(grid, &xs, &vs)
            }
        }
    }
}

impl fmt::Display for DatumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatumSpec::Box { width, center } => write!(f, "box({width}, {center})"),
            DatumSpec::Gaussian { sigma, center } => write!(f, "gaussian({sigma}, {center})"),
            DatumSpec::Hat { half_width, center } => write!(f, "hat({half_width}, {center})"),
            DatumSpec::File(p) => write!(f, "file({})", p.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    Auto,
    Fixed { n: usize, half_length: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum TimeSpec {
    List(Vec<f64>),
    Dyadic { start: f64, end: f64 },
}

impl TimeSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            TimeSpec::List(v) => v.clone(),
            TimeSpec::Dyadic { start, end } => dyadic_times(*start, *end),
        }
    }
}

impl fmt::Display for TimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeSpec::List(v) => write!(f, "{}", join(v)),
            TimeSpec::Dyadic { start, end } => write!(f, "dyadic({start}, {end})"),
        }
    }
}

/// Pass/fail thresholds; every entry can be overridden with `tol.<name> = value`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Sup-norm agreement between solver and oracle.
    pub oracle: f64,
    /// Allowed deviation of a fitted exponent from its predicted value.
    pub slope: f64,
    /// Allowed deviation of the operator-limit order from 2.
    pub order: f64,
    /// Relative residual of the symmetrization identity.
    pub identity: f64,
    pub dirichlet: f64,
    pub laplacian: f64,
    /// Largest tolerated max/min ratio for measured constants.
    pub stability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            oracle: 1e-6,
            slope: 0.1,
            order: 0.3,
            identity: 1e-12,
            dirichlet: crate::asymptotics::inequalities::DIRICHLET_SLACK,
            laplacian: crate::asymptotics::inequalities::LAPLACIAN_SLACK,
            stability: 2.0,
        }
    }
}

impl Tolerances {
    fn set(&mut self, name: &str, v: f64) -> std::result::Result<(), String> {
        let slot = match name {
            "oracle" => &mut self.oracle,
            "slope" => &mut self.slope,
            "order" => &mut self.order,
            "identity" => &mut self.identity,
            "dirichlet" => &mut self.dirichlet,
            "laplacian" => &mut self.laplacian,
            "stability" => &mut self.stability,
            _ => return Err(format!("unknown tolerance `{name}`")),
        };
        *slot = v;
        Ok(())
    }

    fn entries(&self) -> [(&'static str, f64); 7] {
        [
            ("oracle", self.oracle),
            ("slope", self.slope),
            ("order", self.order),
            ("identity", self.identity),
            ("dirichlet", self.dirichlet),
            ("laplacian", self.laplacian),
            ("stability", self.stability),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kernel: KernelSpec,
    pub datum: DatumSpec,
    pub grid: GridSpec,
    pub times: TimeSpec,
    pub norms: Vec<Norm>,
    pub checks: Vec<Check>,
    pub out: PathBuf,
    pub seed: Option<u64>,
    /// Random test functions per randomized suite.
    pub cases: usize,
    /// Scale factors for the inequality suites.
    pub lambdas: Vec<f64>,
    /// Scale factors for the operator-limit check.
    pub limit_lambdas: Vec<f64>,
    /// Scale factors for the source-term check.
    pub source_lambdas: Vec<f64>,
    /// Radii `R` for the tail check.
    pub radii: Vec<f64>,
    /// Times at which `x, u, v` are dumped.
    pub snapshots: Vec<f64>,
    pub oracle_time: f64,
    pub oracle_dt: f64,
    /// Grid for the inequality suites and the operator limit.
    pub verifier_n: usize,
    pub verifier_half_length: f64,
    /// Half-width of the window of the random test functions.
    pub noise_window: f64,
    pub tolerances: Tolerances,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kernel: KernelSpec::Gaussian(1.0),
            datum: DatumSpec::Box { width: 1.0, center: 0.0 },
            grid: GridSpec::Auto,
            times: TimeSpec::Dyadic { start: 4.0, end: 256.0 },
            norms: vec![Norm::L1, Norm::L2, Norm::Inf],
            checks: Check::ALL.to_vec(),
            out: PathBuf::from("results"),
            seed: None,
            cases: 100,
            lambdas: vec![1.0, 2.0, 4.0, 8.0, 16.0],
            limit_lambdas: vec![2.0, 4.0, 8.0, 16.0, 32.0],
            source_lambdas: vec![4.0, 8.0, 16.0, 32.0],
            radii: vec![5.0, 10.0, 20.0],
            snapshots: Vec::new(),
            oracle_time: 1.0,
            oracle_dt: 0.01,
            verifier_n: 1024,
            verifier_half_length: 8.0,
            noise_window: 4.0,
            tolerances: Tolerances::default(),
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// `name(a, b, ...)` → `(name, [a, b, ...])`.
fn call(s: &str) -> std::result::Result<(&str, Vec<&str>), String> {
    let open = s.find('(').ok_or_else(|| format!("expected `name(args)`, got `{s}`"))?;
    let inner = s[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| format!("missing `)` in `{s}`"))?;
    let args = inner.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
    Ok((s[..open].trim(), args))
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` must be positive"))
    }
}

fn number(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` must be finite"))
    }
}

fn positive_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| positive(x.trim())).collect()
}

fn parse_kernel(v: &str, base: &Path) -> std::result::Result<KernelSpec, String> {
    let (name, args) = call(v)?;
    let one = |args: &[&str]| -> std::result::Result<f64, String> {
        match args {
            [a] => positive(a),
            _ => Err(format!("`{name}` takes one parameter")),
        }
    };
    match name {
        "gaussian" => Ok(KernelSpec::Gaussian(one(&args)?)),
        "box" => Ok(KernelSpec::Box(one(&args)?)),
        "hat" => Ok(KernelSpec::Hat(one(&args)?)),
        "file" => match args.as_slice() {
            [p] => Ok(KernelSpec::File(base.join(p))),
            _ => Err("`file` takes one path".into()),
        },
        _ => Err(format!("unknown kernel family `{name}`")),
    }
}

fn parse_datum(v: &str, base: &Path) -> std::result::Result<DatumSpec, String> {
    let (name, args) = call(v)?;
    if name == "file" {
        return match args.as_slice() {
            [p] => Ok(DatumSpec::File(base.join(p))),
            _ => Err("`file` takes one path".into()),
        };
    }
    let (a, center) = match args.as_slice() {
        [a] => (positive(a)?, 0.0),
        [a, c] => (positive(a)?, number(c)?),
        _ => return Err(format!("`{name}` takes a size and an optional center")),
    };
    match name {
        "box" => Ok(DatumSpec::Box { width: a, center }),
        "gaussian" => Ok(DatumSpec::Gaussian { sigma: a, center }),
        "hat" => Ok(DatumSpec::Hat { half_width: a, center }),
        _ => Err(format!("unknown datum `{name}`")),
    }
}

fn parse_times(v: &str) -> std::result::Result<TimeSpec, String> {
    if v.starts_with("dyadic") {
        let (_, args) = call(v)?;
        return match args.as_slice() {
            [a, b] => {
                let (start, end) = (positive(a)?, positive(b)?);
                if end < start {
                    return Err("dyadic range needs start ≤ end".into());
                }
                Ok(TimeSpec::Dyadic { start, end })
            }
            _ => Err("`dyadic` takes start and end".into()),
        };
    }
    let list = positive_list(v)?;
    if list.windows(2).any(|w| w[1] <= w[0]) {
        return Err("times must be strictly increasing".into());
    }
    Ok(TimeSpec::List(list))
}

fn power_of_two(v: &str) -> std::result::Result<usize, String> {
    let n: usize = v.parse().map_err(|_| format!("`{v}` is not a positive integer"))?;
    if n < 16 || !n.is_power_of_two() {
        return Err(format!("n must be a power of two ≥ 16, got {n}"));
    }
    Ok(n)
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Self::load_with(path, None, None)
    }

    /// Reads a config file, applies the output and seed overrides, then validates.
    pub fn load_with(path: &Path, out: Option<PathBuf>, seed: Option<u64>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::parse_unvalidated(&text, path.parent().unwrap_or(Path::new(".")))?;
        if let Some(o) = out {
            cfg.out = o;
        }
        if seed.is_some() {
            cfg.seed = seed;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses and validates config text; relative file paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let cfg = Self::parse_unvalidated(text, base)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses config text without the cross-key checks.
    pub fn parse_unvalidated(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut n: Option<(usize, usize)> = None;
        let mut half: Option<(usize, f64)> = None;
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |key: &str, message: String| Error::Config {
                line,
                key: key.to_string(),
                message,
            };
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(content, "expected `key = value`".into()))?;
            if seen.iter().any(|k| k == key) {
                return Err(err(key, "duplicate key".into()));
            }
            seen.push(key.to_string());
            let r: std::result::Result<(), String> = (|| {
                match key {
                    "kernel" => cfg.kernel = parse_kernel(value, base)?,
                    "datum" => cfg.datum = parse_datum(value, base)?,
                    "n" => n = Some((line, power_of_two(value)?)),
                    "L" => half = Some((line, positive(value)?)),
                    "times" => cfg.times = parse_times(value)?,
                    "norms" => {
                        cfg.norms = value
                            .split(',')
                            .map(|s| s.trim().parse::<Norm>().map_err(|e| e.to_string()))
                            .collect::<std::result::Result<_, _>>()?;
                        if cfg.norms.is_empty() {
                            return Err("at least one norm is required".into());
                        }
                    }
                    "checks" => {
                        cfg.checks = if value == "all" {
                            Check::ALL.to_vec()
                        } else {
                            let mut c: Vec<Check> = value
                                .split(',')
                                .map(|s| s.trim().parse::<Check>())
                                .collect::<std::result::Result<_, _>>()?;
                            c.sort();
                            c.dedup();
                            c
                        };
                    }
                    "out" => cfg.out = base.join(value),
                    "seed" => cfg.seed = Some(value.parse().map_err(|_| format!("`{value}` is not a u64"))?),
                    "cases" => {
                        cfg.cases = value.parse().map_err(|_| format!("`{value}` is not a count"))?;
                        if cfg.cases == 0 {
                            return Err("cases must be at least 1".into());
                        }
                    }
                    "lambdas" => cfg.lambdas = positive_list(value)?,
                    "limit_lambdas" => cfg.limit_lambdas = positive_list(value)?,
                    "source_lambdas" => cfg.source_lambdas = positive_list(value)?,
                    "radii" => cfg.radii = positive_list(value)?,
                    "snapshots" => cfg.snapshots = positive_list(value)?,
                    "oracle_time" => cfg.oracle_time = positive(value)?,
                    "oracle_dt" => cfg.oracle_dt = positive(value)?,
                    "verifier_n" => cfg.verifier_n = power_of_two(value)?,
                    "verifier_L" => cfg.verifier_half_length = positive(value)?,
                    "noise_window" => cfg.noise_window = positive(value)?,
                    k if k.starts_with("tol.") => cfg.tolerances.set(&k[4..], positive(value)?)?,
                    _ => return Err("unknown key".into()),
                }
                Ok(())
            })();
            r.map_err(|m| err(key, m))?;
        }
        cfg.grid = match (n, half) {
            (Some((_, n)), Some((_, l))) => GridSpec::Fixed { n, half_length: l },
            (None, None) => GridSpec::Auto,
            (Some((line, _)), None) => {
                return Err(Error::Config {
                    line,
                    key: "n".into(),
                    message: "`n` needs `L` (omit both for the auto grid)".into(),
                })
            }
            (None, Some((line, _))) => {
                return Err(Error::Config {
                    line,
                    key: "L".into(),
                    message: "`L` needs `n` (omit both for the auto grid)".into(),
                })
            }
        };
        Ok(cfg)
    }

    /// Cross-key constraints.
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, message: String| Error::Config {
            line: 0,
            key: key.into(),
            message,
        };
        if self.seed.is_none() {
            if let Some(c) = self.checks.iter().find(|c| c.is_randomized()) {
                return Err(bad("seed", format!("check `{c}` is randomized and needs a seed")));
            }
        }
        for (name, v) in self.tolerances.entries() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(bad(&format!("tol.{name}"), "tolerances must be positive".into()));
            }
        }
        if self.noise_window >= 0.95 * self.verifier_half_length {
            return Err(bad(
                "noise_window",
                "the noise window must fit inside the verifier grid".into(),
            ));
        }
        Ok(())
    }

    /// Largest time any check evolves to.
    pub fn t_max(&self) -> f64 {
        self.times
            .values()
            .into_iter()
            .chain(self.snapshots.iter().copied())
            .chain([self.oracle_time])
            .fold(1.0, f64::max)
    }

    /// Solver grid: the fixed grid, or the auto rule for kernel `kernel`.
    pub fn solver_grid(&self, kernel: &Kernel) -> Result<Grid> {
        match self.grid {
            GridSpec::Fixed { n, half_length } => Grid::new(n, half_length),
            GridSpec::Auto => Grid::auto(kernel.second_moment(), self.t_max(), self.datum.support_radius()?),
        }
    }

    /// Canonical `key = value` rendering of everything but `out`; parsing it
    /// yields the same settings.
    pub fn echo(&self) -> String {
        let mut lines = vec![
            format!("kernel = {}", self.kernel),
            format!("datum = {}", self.datum),
        ];
        if let GridSpec::Fixed { n, half_length } = self.grid {
            lines.push(format!("n = {n}"));
            lines.push(format!("L = {half_length}"));
        }
        lines.push(format!("times = {}", self.times));
        lines.push(format!(
            "norms = {}",
            self.norms.iter().map(|p| p.label()).collect::<Vec<_>>().join(", ")
        ));
        lines.push(format!(
            "checks = {}",
            self.checks.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
        ));
        if let Some(s) = self.seed {
            lines.push(format!("seed = {s}"));
        }
        lines.push(format!("cases = {}", self.cases));
        lines.push(format!("lambdas = {}", join(&self.lambdas)));
        lines.push(format!("limit_lambdas = {}", join(&self.limit_lambdas)));
        lines.push(format!("source_lambdas = {}", join(&self.source_lambdas)));
        lines.push(format!("radii = {}", join(&self.radii)));
        if !self.snapshots.is_empty() {
            lines.push(format!("snapshots = {}", join(&self.snapshots)));
        }
        lines.push(format!("oracle_time = {}", self.oracle_time));
        lines.push(format!("oracle_dt = {}", self.oracle_dt));
        lines.push(format!("verifier_n = {}", self.verifier_n));
        lines.push(format!("verifier_L = {}", self.verifier_half_length));
        lines.push(format!("noise_window = {}", self.noise_window));
        for (name, v) in self.tolerances.entries() {
            lines.push(format!("tol.{name} = {v}"));
        }
        lines.join("\n") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::parse(s, Path::new("/base"))
    }

    #[test]
    fn minimal_config() {
        let c = parse("checks = admissibility\nkernel = gaussian(1)\n").unwrap();
        assert_eq!(c.checks, vec![Check::Admissibility]);
        assert_eq!(c.grid, GridSpec::Auto);
        assert_eq!(c.times.values(), vec![4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0]);
    }

    #[test]
    fn full_config() {
        let text = "# demo\nkernel = box(0.5)\ndatum = gaussian(1, 0.25)\nn = 1024  # nodes\nL = 40\n\
                    times = 1, 2, 3\nnorms = 2, inf\nchecks = lemma4, decay\nseed = 9\nout = res\ntol.slope = 0.2\n";
        let c = parse(text).unwrap();
        assert_eq!(c.kernel, KernelSpec::Box(0.5));
        assert_eq!(c.datum, DatumSpec::Gaussian { sigma: 1.0, center: 0.25 });
        assert_eq!(c.grid, GridSpec::Fixed { n: 1024, half_length: 40.0 });
        assert_eq!(c.times, TimeSpec::List(vec![1.0, 2.0, 3.0]));
        assert_eq!(c.norms, vec![Norm::L2, Norm::Inf]);
        assert_eq!(c.checks, vec![Check::Decay, Check::Lemma4]);
        assert_eq!(c.out, PathBuf::from("/base/res"));
        assert_eq!(c.tolerances.slope, 0.2);
        let mut again = parse(&c.echo()).unwrap();
        again.out = c.out.clone();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_non_power_of_two() {
        match parse("checks = decay\nn = 1000\nL = 40\n") {
            Err(Error::Config { line, key, message }) => {
                assert_eq!((line, key.as_str()), (2, "n"));
                assert!(message.contains("power of two"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        let e = parse("kernel = gaussian(1)\ncolour = blue\n").unwrap_err();
        assert!(matches!(e, Error::Config { line: 2, ref key, .. } if key == "colour"));
        assert!(parse("tol.oracle = 0\n").is_err());
        assert!(parse("tol.oracle = -1\n").is_err());
        assert!(parse("tol.nothing = 1\n").is_err());
        assert!(parse("kernel = cauchy(1)\n").is_err());
        assert!(parse("times = 4, 2\n").is_err());
        assert!(parse("n = 1024\n").is_err());
        assert!(parse("kernel = gaussian(1)\nkernel = box(1)\n").is_err());
        assert!(parse("just words\n").is_err());
    }

    #[test]
    fn randomized_checks_need_seed() {
        let e = parse("checks = id1\n").unwrap_err();
        assert!(matches!(e, Error::Config { ref key, .. } if key == "seed"));
        assert!(parse("checks = id1\nseed = 1\n").is_ok());
        // default check list includes randomized suites
        assert!(parse("").is_err());
    }

    #[test]
    fn auto_grid_rule() {
        let c = parse("checks = decay\n").unwrap();
        let g = c.solver_grid(&Kernel::gaussian(1.0).unwrap()).unwrap();
        assert_eq!(g.n(), 4096);
        assert!((g.half_length() - 160.5).abs() < 1e-12);
    }
}
