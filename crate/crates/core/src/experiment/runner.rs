//! Executes the checks of an [`ExperimentConfig`] and writes the reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{Check, ExperimentConfig};
use crate::asymptotics::testfn::{bump, BandLimitedNoise};
use crate::asymptotics::{
    decay_sweep, inequality_table, operator_limit_sweep, verify_delta_source, verify_dirichlet_bound,
    verify_laplacian_bound, verify_symmetrization, verify_tail_bound, DecayReport,
};
use crate::csv::{fmt_num, CsvTable};
use crate::error::{Error, Result};
use crate::grid::{lp_norm, Field, Grid, Norm};
use crate::kernels::{check_admissibility, AdmissibilityConfig, AdmissibilityReport, Kernel};
use crate::quadrature::loglog_slope;
use crate::semigroup::{oracle_evolve, PropagatorPlan};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail(_) => "fail",
            Status::Skipped(_) => "skipped",
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Status::Fail(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub check: Check,
    pub status: Status,
    /// Key measured quantities, or the failure/skip reason.
    pub detail: String,
    pub seconds: f64,
    /// Files written by this check, relative to the output directory.
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub version: String,
    pub config_echo: String,
    pub entries: Vec<ManifestEntry>,
}

impl RunManifest {
    pub fn all_passed(&self) -> bool {
        !self.entries.iter().any(|e| e.status.is_failure())
    }

    /// 0 when no check failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn entry(&self, check: Check) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.check == check)
    }

    /// The manifest table; wall-clock times are kept out so reruns are byte-identical.
    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(["check", "status", "detail", "files"])
            .titled(format!("nldiff {} | {}", self.version, self.config_echo.trim_end().replace('\n', "; ")));
        for e in &self.entries {
            t.push(vec![
                e.check.name().into(),
                e.status.label().into(),
                e.detail.clone().into(),
                e.files.join(" ").into(),
            ]);
        }
        t
    }

    pub fn timing_text(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{} {:.3}\n", e.check.name(), e.seconds))
            .collect()
    }
}

struct Outcome {
    pass: bool,
    detail: String,
    tables: Vec<(String, CsvTable)>,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self {
            pass,
            detail,
            tables: Vec::new(),
        }
    }

    fn with(mut self, name: impl Into<String>, table: CsvTable) -> Self {
        self.tables.push((name.into(), table));
        self
    }
}

enum CheckError {
    Skip(String),
    Fail(Error),
}

impl From<Error> for CheckError {
    fn from(e: Error) -> Self {
        CheckError::Fail(e)
    }
}

type CheckResult = std::result::Result<Outcome, CheckError>;

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    kernel: Kernel,
    times: Vec<f64>,
    setup: std::result::Result<(PropagatorPlan, Field), String>,
}

impl Context<'_> {
    fn plan(&self) -> std::result::Result<(&PropagatorPlan, &Field), CheckError> {
        match &self.setup {
            Ok((p, u)) => Ok((p, u)),
            Err(e) => Err(CheckError::Skip(format!("solver unavailable: {e}"))),
        }
    }

    fn rng(&self, check: Check) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed.unwrap_or(0));
        rng.set_stream(check as u64);
        rng
    }

    fn verifier_grid(&self) -> Result<Grid> {
        Grid::new(self.cfg.verifier_n, self.cfg.verifier_half_length)
    }

    fn need_times(&self) -> std::result::Result<(), CheckError> {
        if self.times.is_empty() {
            Err(CheckError::Skip("empty time list".into()))
        } else {
            Ok(())
        }
    }

    fn sweeps(&self) -> std::result::Result<Vec<DecayReport>, CheckError> {
        let (plan, u0) = self.plan()?;
        Ok(self
            .cfg
            .norms
            .iter()
            .map(|&p| decay_sweep(plan, u0, p, &self.times))
            .collect::<Result<Vec<_>>>()?)
    }
}

/// Loads `path`, applies the overrides, runs it and writes all artifacts.
pub fn run_path(path: &Path, out: Option<PathBuf>, seed: Option<u64>) -> Result<RunManifest> {
    run(&ExperimentConfig::load_with(path, out, seed)?)
}

/// Runs every requested check; check-level failures are recorded, I/O errors abort.
pub fn run(cfg: &ExperimentConfig) -> Result<RunManifest> {
    cfg.validate()?;
    let kernel = cfg.kernel.build()?;
    fs::create_dir_all(&cfg.out)?;
    let setup = (|| -> Result<(PropagatorPlan, Field)> {
        let grid = cfg.solver_grid(&kernel)?;
        let u0 = cfg.datum.realize(grid)?;
        Ok((PropagatorPlan::new(&kernel, &u0)?, u0))
    })()
    .map_err(|e| e.to_string());
    let ctx = Context {
        cfg,
        times: cfg.times.values(),
        kernel,
        setup,
    };

    let mut entries = Vec::with_capacity(cfg.checks.len());
    for &check in &cfg.checks {
        let start = Instant::now();
        let result = match check {
            Check::Admissibility => admissibility(&ctx),
            Check::Decay => decay(&ctx),
            Check::Lemma1 => lemma1(&ctx),
            Check::Lemma2 => lemma2(&ctx),
            Check::Lemma4 => lemma4(&ctx),
            Check::Lemma5 => lemma5(&ctx),
            Check::Id1 => id1(&ctx),
            Check::Tail => tail(&ctx),
            Check::OpLimit => oplimit(&ctx),
            Check::DeltaSource => deltasource(&ctx),
            Check::OracleCrosscheck => oracle(&ctx),
        };
        let (status, detail, files) = match result {
            Ok(o) => {
                let mut files = Vec::new();
                for (name, table) in &o.tables {
                    table.write(&cfg.out.join(name))?;
                    files.push(name.clone());
                }
                let status = if o.pass {
                    Status::Pass
                } else {
                    Status::Fail(o.detail.clone())
                };
                (status, o.detail, files)
            }
            Err(CheckError::Skip(r)) => (Status::Skipped(r.clone()), r, Vec::new()),
            Err(CheckError::Fail(e)) => (Status::Fail(e.to_string()), e.to_string(), Vec::new()),
        };
        entries.push(ManifestEntry {
            check,
            status,
            detail,
            seconds: start.elapsed().as_secs_f64(),
            files,
        });
    }

    if let Ok((plan, u0)) = &ctx.setup {
        write_snapshots(plan, u0, &cfg.snapshots, &cfg.out)?;
    }

    let manifest = RunManifest {
        version: VERSION.to_string(),
        config_echo: cfg.echo(),
        entries,
    };
    fs::write(cfg.out.join("config.resolved"), &manifest.config_echo)?;
    fs::write(cfg.out.join("timing.txt"), manifest.timing_text())?;
    manifest.to_table().write(&cfg.out.join("manifest.csv"))?;
    Ok(manifest)
}

/// Writes `plot_p<p>.csv` with columns `t, raw, scaled, log_t, log_raw`.
pub fn emit_plotdata(report: &DecayReport, dir: &Path) -> Result<PathBuf> {
    let path = dir.join(plot_file(report.p));
    report.plot_table().write(&path)?;
    Ok(path)
}

fn plot_file(p: Norm) -> String {
    format!("plot_p{}.csv", p.label())
}

/// `snapshot_t=<t>.csv` with columns `x, u, v` for each requested time.
pub fn write_snapshots(plan: &PropagatorPlan, u0: &Field, times: &[f64], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for &t in times {
        let s = plan.evolve(u0, t)?;
        let mut table = CsvTable::new(["x", "u", "v"]).titled(format!("t={}", fmt_num(t)));
        for ((x, u), v) in plan.grid().nodes().iter().zip(s.u.samples()).zip(s.v.samples()) {
            table.push(vec![(*x).into(), (*u).into(), (*v).into()]);
        }
        let path = dir.join(format!("snapshot_t={t}.csv"));
        table.write(&path)?;
        out.push(path);
    }
    Ok(out)
}

fn admissibility(ctx: &Context) -> CheckResult {
    let r = check_admissibility(&ctx.kernel, &AdmissibilityConfig::default())?;
    let detail = format!(
        "a_estimated={} m={} hyp1={} hyp2={}",
        fmt_num(r.a_estimated),
        fmt_num(r.decay_exponent_m),
        r.passes_hyp1,
        r.passes_hyp2
    );
    Ok(Outcome::new(r.passes_hyp1 && r.passes_hyp2, detail)
        .with("admissibility.csv", AdmissibilityReport::to_table(std::slice::from_ref(&r))))
}

fn decay(ctx: &Context) -> CheckResult {
    let reports = ctx.sweeps()?;
    let mut out = Outcome::new(true, String::new());
    let mut notes = Vec::new();
    for r in &reports {
        out.tables.push((plot_file(r.p), r.plot_table()));
        out.tables.push((format!("decay_p{}.csv", r.p.label()), r.to_table()));
    }
    if ctx.times.is_empty() {
        return Ok(Outcome {
            pass: true,
            detail: "empty time list".into(),
            tables: out.tables,
        });
    }
    for r in &reports {
        let decreasing = r.rows.windows(2).all(|w| w[1].scaled_u < w[0].scaled_u);
        out.pass &= decreasing;
        notes.push(format!(
            "p={}: rate={} decreasing={}",
            r.p,
            fmt_num(r.fitted_rate),
            decreasing
        ));
    }
    out.detail = notes.join("; ");
    Ok(out)
}

fn lemma1(ctx: &Context) -> CheckResult {
    ctx.need_times()?;
    let (plan, _) = ctx.plan()?;
    let reports = ctx.sweeps()?;
    let stab = ctx.cfg.tolerances.stability;
    let mut table = CsvTable::new(["p", "t", "v_ratio", "kt_scaled"]).titled("lemma1");
    let kt: Vec<Field> = ctx.times.iter().map(|&t| plan.kernel_kt(t)).collect::<Result<_>>()?;
    let mut pass = true;
    let mut notes = Vec::new();
    for r in &reports {
        let q = 0.5 * r.p.conjugate_fraction();
        let kts: Vec<f64> = r
            .rows
            .iter()
            .zip(&kt)
            .map(|(row, k)| row.t.powf(q) * lp_norm(k, r.p))
            .collect();
        for (row, k) in r.rows.iter().zip(&kts) {
            table.push(vec![r.p.label().into(), row.t.into(), row.v_ratio.into(), (*k).into()]);
        }
        let v_first = r.rows[0].v_ratio;
        let v_ok = r.v_constant.is_finite() && r.v_constant <= stab * v_first;
        let kmax = kts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let kmin = kts.iter().copied().fold(f64::INFINITY, f64::min);
        let k_ok = kmax.is_finite() && kmin > 0.0 && kmax / kmin <= stab;
        pass &= v_ok && k_ok;
        notes.push(format!(
            "p={}: C={} kt_max/min={}",
            r.p,
            fmt_num(r.v_constant),
            fmt_num(kmax / kmin)
        ));
    }
    Ok(Outcome::new(pass, notes.join("; ")).with("lemma1.csv", table))
}

/// Predicted log–log slope of `‖v_x(t)‖_p`.
pub fn lemma2_exponent(p: Norm) -> f64 {
    -0.5 * p.conjugate_fraction() - 0.5
}

/// Start of the window used to fit the `‖v_x‖_p` exponent.
pub const LEMMA2_FIT_START: f64 = 16.0;

fn lemma2(ctx: &Context) -> CheckResult {
    ctx.need_times()?;
    let reports = ctx.sweeps()?;
    let mut table = CsvTable::new(["p", "t", "vx_norm", "vx_ratio"]).titled("lemma2");
    let mut pass = true;
    let mut notes = Vec::new();
    for r in &reports {
        for row in &r.rows {
            table.push(vec![r.p.label().into(), row.t.into(), row.vx_norm.into(), row.vx_ratio.into()]);
        }
        let sel: Vec<_> = r.rows.iter().filter(|row| row.t >= LEMMA2_FIT_START).collect();
        let sel = if sel.len() >= 2 { sel } else { r.rows.iter().collect() };
        let slope = loglog_slope(
            &sel.iter().map(|row| row.t).collect::<Vec<_>>(),
            &sel.iter().map(|row| row.vx_norm).collect::<Vec<_>>(),
        )
        .map_or(f64::NAN, |f| f.slope);
        let ok = (slope - lemma2_exponent(r.p)).abs() <= ctx.cfg.tolerances.slope && r.vx_constant.is_finite();
        pass &= ok;
        notes.push(format!(
            "p={}: slope={} expected={} C={}",
            r.p,
            fmt_num(slope),
            fmt_num(lemma2_exponent(r.p)),
            fmt_num(r.vx_constant)
        ));
    }
    Ok(Outcome::new(pass, notes.join("; ")).with("lemma2.csv", table))
}

fn random_fields(ctx: &Context, check: Check, count: usize) -> Result<Vec<Field>> {
    let g = ctx.verifier_grid()?;
    let mut rng = ctx.rng(check);
    (0..count)
        .map(|_| BandLimitedNoise::random(&mut rng, ctx.cfg.noise_window).field(g))
        .collect()
}

fn lemma4(ctx: &Context) -> CheckResult {
    let slack = ctx.cfg.tolerances.dirichlet;
    let mut rows = Vec::new();
    for (case, u) in random_fields(ctx, Check::Lemma4, ctx.cfg.cases)?.iter().enumerate() {
        for &lam in &ctx.cfg.lambdas {
            let mut c = verify_dirichlet_bound(&ctx.kernel, u, lam)?;
            c.pass = c.lhs <= c.rhs * (1.0 + slack);
            rows.push((case, lam, c));
        }
    }
    Ok(suite_outcome("lemma4", rows))
}

fn lemma5(ctx: &Context) -> CheckResult {
    let slack = ctx.cfg.tolerances.laplacian;
    let g = ctx.verifier_grid()?;
    let mut fields = vec![Field::from_fn(g, bump)?];
    fields.extend(random_fields(ctx, Check::Lemma5, ctx.cfg.cases)?);
    let mut rows = Vec::new();
    for (case, psi) in fields.iter().enumerate() {
        for &lam in &ctx.cfg.lambdas {
            let mut c = verify_laplacian_bound(&ctx.kernel, psi, lam)?;
            c.pass = c.lhs <= c.rhs * (1.0 + slack);
            rows.push((case, lam, c));
        }
    }
    Ok(suite_outcome("lemma5", rows))
}

fn suite_outcome(name: &str, rows: Vec<(usize, f64, crate::asymptotics::InequalityCheck)>) -> Outcome {
    let failed = rows.iter().filter(|r| !r.2.pass).count();
    let worst = rows.iter().map(|r| r.2.ratio).fold(0.0, f64::max);
    Outcome::new(
        failed == 0,
        format!("cases={} failed={} max_ratio={}", rows.len(), failed, fmt_num(worst)),
    )
    .with(format!("{name}.csv"), inequality_table(name, &rows))
}

fn id1(ctx: &Context) -> CheckResult {
    let fields = random_fields(ctx, Check::Id1, 2 * ctx.cfg.cases)?;
    let tol = ctx.cfg.tolerances.identity;
    let mut table = CsvTable::new(["case", "lhs", "rhs", "residual", "pass"]).titled("id1");
    let mut failed = 0;
    let mut worst: f64 = 0.0;
    for (case, pair) in fields.chunks(2).enumerate() {
        let (l, r) = verify_symmetrization(&ctx.kernel, &pair[0], &pair[1])?;
        let residual = (l - r).abs() / (l.abs() + 1.0);
        let ok = residual <= tol;
        failed += usize::from(!ok);
        worst = worst.max(residual);
        table.push(vec![case.into(), l.into(), r.into(), residual.into(), ok.into()]);
    }
    Ok(Outcome::new(
        failed == 0,
        format!("pairs={} failed={} max_residual={}", ctx.cfg.cases, failed, fmt_num(worst)),
    )
    .with("id1.csv", table))
}

fn tail(ctx: &Context) -> CheckResult {
    ctx.need_times()?;
    let (plan, u0) = ctx.plan()?;
    let r = verify_tail_bound(plan, u0, &ctx.times, &ctx.cfg.radii)?;
    let t_max = ctx.times[ctx.times.len() - 1];
    let full = r.constant();
    let half = r.constant_up_to(0.5 * t_max);
    let pass = if ctx.times.len() < 2 {
        full.is_finite()
    } else {
        full.is_finite() && half > 0.0 && full / half <= ctx.cfg.tolerances.stability
    };
    let detail = format!(
        "C={} C_first_half={} C_quadratic={}",
        fmt_num(full),
        fmt_num(half),
        fmt_num(r.quadratic_constant())
    );
    Ok(Outcome::new(pass, detail).with("tail.csv", r.to_table()))
}

fn oplimit(ctx: &Context) -> CheckResult {
    let phi = Field::from_fn(ctx.verifier_grid()?, |x| (-x * x).exp())?;
    let r = operator_limit_sweep(&ctx.kernel, &phi, &ctx.cfg.limit_lambdas)?;
    let pass = (r.fitted_order - 2.0).abs() <= ctx.cfg.tolerances.order;
    Ok(Outcome::new(pass, format!("order={}", fmt_num(r.fitted_order))).with("oplimit.csv", r.to_table()))
}

fn deltasource(ctx: &Context) -> CheckResult {
    let (plan, u0) = ctx.plan()?;
    let r = verify_delta_source(plan, u0, |x, t| bump(x) * (-t).exp(), &ctx.cfg.source_lambdas)?;
    Ok(
        Outcome::new(r.fitted_order >= 1.0, format!("order={}", fmt_num(r.fitted_order)))
            .with("deltasource.csv", r.to_table()),
    )
}

fn oracle(ctx: &Context) -> CheckResult {
    let (plan, u0) = ctx.plan()?;
    let t = ctx.cfg.oracle_time;
    let spectral = plan.evolve(u0, t)?.u;
    let direct = oracle_evolve(&ctx.kernel, u0, t, ctx.cfg.oracle_dt)?;
    let diff = lp_norm(&spectral.sub(&direct)?, Norm::Inf);
    let mut table = CsvTable::new(["t", "dt", "sup_difference"]).titled("oracle-crosscheck");
    table.push(vec![t.into(), ctx.cfg.oracle_dt.into(), diff.into()]);
    Ok(Outcome::new(diff <= ctx.cfg.tolerances.oracle, format!("sup_difference={}", fmt_num(diff)))
        .with("oracle-crosscheck.csv", table))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str, dir: &Path) -> ExperimentConfig {
        let mut c = ExperimentConfig::parse(text, dir).unwrap();
        c.out = dir.to_path_buf();
        c
    }

    #[test]
    fn admissibility_only_run() {
        let dir = tempfile::tempdir().unwrap();
        let m = run(&cfg("checks = admissibility\nkernel = gaussian(1)\n", dir.path())).unwrap();
        assert_eq!(m.exit_code(), 0);
        assert_eq!(m.entries.len(), 1);
        let text = fs::read_to_string(dir.path().join("admissibility.csv")).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(dir.path().join("manifest.csv").exists());
    }

    #[test]
    fn box_kernel_fails_admissibility() {
        let dir = tempfile::tempdir().unwrap();
        let m = run(&cfg("checks = admissibility\nkernel = box(1)\n", dir.path())).unwrap();
        assert_eq!(m.exit_code(), 1);
    }

    #[test]
    fn plot_files_per_norm() {
        let dir = tempfile::tempdir().unwrap();
        let c = cfg("checks = decay\nnorms = 1, 2\ntimes = 4, 8, 16\nn = 1024\nL = 80\n", dir.path());
        let m = run(&c).unwrap();
        assert_eq!(m.exit_code(), 0, "{m:?}");
        let a = fs::read_to_string(dir.path().join("plot_p1.csv")).unwrap();
        let b = fs::read_to_string(dir.path().join("plot_p2.csv")).unwrap();
        assert_eq!(a.lines().count(), 4);
        assert_eq!(a.lines().count(), b.lines().count());
    }

    #[test]
    fn empty_times_give_header_only_plot() {
        let dir = tempfile::tempdir().unwrap();
        let c = cfg("checks = decay, lemma1\nnorms = 1\ntimes =\nn = 512\nL = 40\n", dir.path());
        let m = run(&c).unwrap();
        assert_eq!(
            fs::read_to_string(dir.path().join("plot_p1.csv")).unwrap(),
            "t,raw,scaled,log_t,log_raw\n"
        );
        assert_eq!(m.entry(Check::Lemma1).unwrap().status.label(), "skipped");
    }

    #[test]
    fn module_errors_are_reported_per_check() {
        let dir = tempfile::tempdir().unwrap();
        let c = cfg("checks = decay, admissibility\ntimes = 4, 400\nn = 256\nL = 20\n", dir.path());
        let m = run(&c).unwrap();
        assert!(m.entry(Check::Decay).unwrap().status.is_failure());
        assert_eq!(m.entry(Check::Admissibility).unwrap().status, Status::Pass);
        assert_eq!(m.exit_code(), 1);
    }

    #[test]
    fn snapshots_written() {
        let dir = tempfile::tempdir().unwrap();
        let c = cfg("checks = admissibility\nsnapshots = 2\nn = 256\nL = 20\n", dir.path());
        run(&c).unwrap();
        let text = fs::read_to_string(dir.path().join("snapshot_t=2.csv")).unwrap();
        assert!(text.starts_with("# t=2.0000000000000000e0\nx,u,v\n"));
        assert_eq!(text.lines().count(), 2 + 256);
    }
}
