//! Acceptance criteria. Each criterion prints one `[PASS]`/`[FAIL]` line.

use std::cell::RefCell;
use std::fs;
use std::panic;
use std::process::ExitCode;
use std::time::Instant;

use nldiff::asymptotics::testfn::bump;
use nldiff::asymptotics::{
    decay_sweep, dyadic_times, operator_limit_sweep, rescaling_identity, verify_delta_source,
    verify_dirichlet_bound, verify_laplacian_bound, verify_symmetrization, BandLimitedNoise, DecayReport,
};
use nldiff::experiment::{run, Check, ExperimentConfig};
use nldiff::grid::lp_norm;
use nldiff::{
    check_admissibility, oracle_evolve, AdmissibilityConfig, Field, Grid, Kernel, Norm, PropagatorPlan,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

thread_local! {
    static LINE: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn report(id: u32, name: &str, pass: bool, detail: String) {
    let line = format!("criterion {id:>2} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    LINE.with(|l| *l.borrow_mut() = Some(line));
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

const CRITERIA: [(&str, fn()); 11] = [
    ("spectral solver vs oracle", c01_spectral_solver_matches_rk4_oracle),
    ("mass identities", c02_mass_identities),
    ("decay toward heat profile", c03_decay_toward_heat_profile),
    ("gradient exponent", c04_gradient_exponent),
    ("inequality suites", c05_inequality_suites),
    ("operator limit order", c06_operator_limit_order),
    ("delta source", c07_delta_source_concentration),
    ("rescaling identity", c08_rescaling_identity),
    ("admissibility gate", c09_admissibility_gate),
    ("regular kernel profile", c10_regular_kernel_profile),
    ("determinism", c11_full_suite_is_deterministic),
];

fn panic_text(e: &(dyn std::any::Any + Send)) -> String {
    e.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| e.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panicked".into())
}

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let results: Vec<(usize, Option<String>, Result<(), String>)> = std::thread::scope(|s| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .enumerate()
            .filter(|(i, (name, _))| {
                filter.is_empty() || filter.iter().any(|f| name.contains(f.as_str()) || *f == (i + 1).to_string())
            })
            .map(|(i, &(_, f))| {
                let h = s.spawn(move || {
                    let r = panic::catch_unwind(f).map_err(|e| panic_text(&*e));
                    (LINE.with(|l| l.borrow_mut().take()), r)
                });
                (i, h)
            })
            .collect();
        handles
            .into_iter()
            .map(|(i, h)| {
                let (line, r) = h.join().expect("criterion thread");
                (i, line, r)
            })
            .collect()
    });
    let mut failed = 0;
    for (i, line, r) in &results {
        match (line, r) {
            (Some(line), Ok(())) => println!("{line}"),
            (Some(line), Err(_)) => {
                failed += 1;
                println!("{line}");
            }
            (None, r) => {
                failed += 1;
                let why = r.as_ref().err().cloned().unwrap_or_else(|| "no result reported".into());
                println!("criterion {:>2} [FAIL] {}: {why}", i + 1, CRITERIA[*i].0);
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn gaussian() -> Kernel {
    Kernel::gaussian(1.0).unwrap()
}

fn unit_box(g: Grid) -> Field {
    Field::box_cell_average(g, 0.0, 1.0, 1.0).unwrap()
}

fn c01_spectral_solver_matches_rk4_oracle() {
    let start = Instant::now();
    let g = Grid::new(1024, 40.0).unwrap();
    let u0 = unit_box(g);
    let plan = PropagatorPlan::new(&gaussian(), &u0).unwrap();
    let spectral = plan.evolve(&u0, 1.0).unwrap().u;
    let oracle = oracle_evolve(&gaussian(), &u0, 1.0, 0.01).unwrap();
    let diff = lp_norm(&spectral.sub(&oracle).unwrap(), Norm::Inf);
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "cross-validation",
        diff <= 1e-6 && secs < 5.0,
        format!("sup difference {diff:.3e}, {secs:.2} s"),
    );
}

fn c02_mass_identities() {
    let g = Grid::auto(0.5, 100.0, 0.5).unwrap();
    let u0 = unit_box(g);
    let plan = PropagatorPlan::new(&gaussian(), &u0).unwrap();
    let m = u0.integral();
    let mut worst: f64 = 0.0;
    for t in [0.1, 1.0, 10.0, 100.0] {
        let s = plan.evolve(&u0, t).unwrap();
        let mv = (1.0 - (-t).exp()) * m;
        worst = worst
            .max((s.u.integral() - m).abs() / m)
            .max((s.v.integral() - mv).abs() / mv);
    }
    report(2, "conservation", worst <= 1e-10, format!("worst relative error {worst:.3e}"));
}

fn c03_decay_toward_heat_profile() {
    let start = Instant::now();
    let k = gaussian();
    let times = dyadic_times(4.0, 256.0);
    let g = Grid::auto(k.second_moment(), 256.0, 0.5).unwrap();
    let fine = Grid::new(2 * g.n(), g.half_length()).unwrap();
    let sweep = |grid: Grid, p: Norm| {
        let u0 = unit_box(grid);
        let plan = PropagatorPlan::new(&k, &u0).unwrap();
        decay_sweep(&plan, &u0, p, &times).unwrap()
    };
    let l1 = sweep(g, Norm::L1);
    let l2 = sweep(g, Norm::L2);
    let l1_fine = sweep(fine, Norm::L1);
    let l2_fine = sweep(fine, Norm::L2);

    let holds = |l1: &DecayReport, l2: &DecayReport| {
        let raw: Vec<f64> = l1.rows.iter().map(|r| r.raw_u).collect();
        let at = |t: f64| l1.rows.iter().find(|r| r.t == t).unwrap().raw_u;
        raw.windows(2).all(|w| w[1] < w[0])
            && at(256.0) <= 0.5 * at(16.0)
            && l2.rows.windows(2).all(|w| w[1].scaled_u < w[0].scaled_u)
    };
    let coarse_ok = holds(&l1, &l2);
    let fine_ok = holds(&l1_fine, &l2_fine);
    let raw: Vec<f64> = l1.rows.iter().map(|r| r.raw_u).collect();
    let at = |t: f64| l1.rows.iter().find(|r| r.t == t).unwrap().raw_u;
    let drift = l1
        .rows
        .iter()
        .zip(&l1_fine.rows)
        .chain(l2.rows.iter().zip(&l2_fine.rows))
        .map(|(a, b)| (a.raw_u - b.raw_u).abs() / b.raw_u)
        .fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    report(
        3,
        "decay surrogate",
        coarse_ok && fine_ok && drift < 1e-3 && secs < 60.0,
        format!(
            "L1 {:.3e} -> {:.3e}, ratio(256/16) {:.3}, thresholds hold on auto grid {coarse_ok} \
             and at 2x resolution {fine_ok}, drift {drift:.1e}, {secs:.2} s",
            raw[0],
            raw[raw.len() - 1],
            at(256.0) / at(16.0)
        ),
    );
}

fn c04_gradient_exponent() {
    let g = Grid::auto(0.5, 256.0, 0.5).unwrap();
    let u0 = unit_box(g);
    let plan = PropagatorPlan::new(&gaussian(), &u0).unwrap();
    let r = decay_sweep(&plan, &u0, Norm::L2, &dyadic_times(4.0, 256.0)).unwrap();
    let slope = r.slope_between(16.0, 256.0, |row| row.vx_norm).unwrap();
    report(
        4,
        "gradient decay exponent",
        (slope + 0.75).abs() <= 0.1,
        format!("slope {slope:.4} (expected -0.75)"),
    );
}

fn c05_inequality_suites() {
    let k = gaussian();
    let g = Grid::new(1024, 8.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20240501);
    let lambdas = [1.0, 2.0, 4.0, 8.0, 16.0];
    let (mut dirichlet_fail, mut laplacian_fail, mut identity_fail) = (0, 0, 0);
    let (mut r4, mut r5, mut resid): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..100 {
        let u = BandLimitedNoise::random(&mut rng, 4.0).field(g).unwrap();
        let v = BandLimitedNoise::random(&mut rng, 4.0).field(g).unwrap();
        for &lam in &lambdas {
            let c4 = verify_dirichlet_bound(&k, &u, lam).unwrap();
            let c5 = verify_laplacian_bound(&k, &v, lam).unwrap();
            dirichlet_fail += usize::from(!(c4.lhs <= c4.rhs * (1.0 + 1e-8)));
            laplacian_fail += usize::from(!(c5.lhs <= c5.rhs * (1.0 + 1e-6)));
            r4 = r4.max(c4.ratio);
            r5 = r5.max(c5.ratio);
        }
        let (l, r) = verify_symmetrization(&k, &u, &v).unwrap();
        let e = (l - r).abs() / (l.abs() + 1.0);
        identity_fail += usize::from(e > 1e-12);
        resid = resid.max(e);
    }
    report(
        5,
        "inequality suites",
        dirichlet_fail == 0 && laplacian_fail == 0 && identity_fail == 0,
        format!(
            "dirichlet failures {dirichlet_fail} (max ratio {r4:.4}), laplacian failures {laplacian_fail} \
             (max ratio {r5:.4}), identity failures {identity_fail} (max residual {resid:.1e})"
        ),
    );
}

fn c06_operator_limit_order() {
    let k = gaussian();
    let g = Grid::new(1024, 10.0).unwrap();
    let phi = Field::from_fn(g, |x| (-x * x).exp()).unwrap();
    let r = operator_limit_sweep(&k, &phi, &[2.0, 4.0, 8.0, 16.0, 32.0]).unwrap();
    // next Taylor term: (∫Jz⁴ / 24λ²)·φ'''' with sup|φ''''| = 12 at the origin
    let predicted = k.fourth_moment().unwrap() / (24.0 * 32.0 * 32.0) * 12.0;
    let last = r.errors[r.errors.len() - 1];
    let close = (last / predicted - 1.0).abs() < 0.05;
    report(
        6,
        "operator limit",
        (r.fitted_order - 2.0).abs() <= 0.3 && close,
        format!(
            "fitted order {:.4}, err(32) {last:.4e} vs expansion {predicted:.4e}",
            r.fitted_order
        ),
    );
}

fn c07_delta_source_concentration() {
    let g = Grid::new(2048, 40.0).unwrap();
    let u0 = unit_box(g);
    let plan = PropagatorPlan::new(&gaussian(), &u0).unwrap();
    let r = verify_delta_source(&plan, &u0, |x, t| bump(x) * (-t).exp(), &[4.0, 8.0, 16.0, 32.0]).unwrap();
    let gaps: Vec<String> = r.rows.iter().map(|row| format!("{:.3e}", row.gap)).collect();
    report(
        7,
        "delta source",
        r.fitted_order >= 1.0,
        format!("fitted order {:.4}, gaps {gaps:?}", r.fitted_order),
    );
}

fn c08_rescaling_identity() {
    let g = Grid::auto(0.5, 16.0, 0.5).unwrap();
    let u0 = unit_box(g);
    let plan = PropagatorPlan::new(&gaussian(), &u0).unwrap();
    let mut worst: f64 = 0.0;
    for lam in [2.0, 4.0] {
        let (a, b) = rescaling_identity(&plan, &u0, Norm::L1, lam).unwrap();
        worst = worst.max((a - b).abs() / b);
    }
    report(8, "rescaling identity", worst <= 1e-6, format!("worst relative gap {worst:.3e}"));
}

fn c09_admissibility_gate() {
    let cfg = AdmissibilityConfig::default();
    let g = check_admissibility(&gaussian(), &cfg).unwrap();
    let b = check_admissibility(&Kernel::box_kernel(1.0).unwrap(), &cfg).unwrap();
    let pass = g.passes_hyp1
        && (g.a_estimated - 0.5).abs() <= 1e-6
        && !b.passes_hyp2
        && (0.8..=1.2).contains(&b.decay_exponent_m);
    report(
        9,
        "admissibility gate",
        pass,
        format!(
            "gaussian a={:.9} hyp1={}, box m={:.4} hyp2={}",
            g.a_estimated, g.passes_hyp1, b.decay_exponent_m, b.passes_hyp2
        ),
    );
}

fn c10_regular_kernel_profile() {
    let g = Grid::new(2048, 160.0).unwrap();
    let u0 = unit_box(g);
    let plan = PropagatorPlan::new(&gaussian(), &u0).unwrap();
    let scaled: Vec<f64> = dyadic_times(1.0, 64.0)
        .iter()
        .map(|&t| t.powf(0.25) * lp_norm(&plan.kernel_kt(t).unwrap(), Norm::L2))
        .collect();
    let max = scaled.iter().copied().fold(f64::MIN, f64::max);
    let min = scaled.iter().copied().fold(f64::MAX, f64::min);
    report(
        10,
        "K_t profile",
        max.is_finite() && max / min <= 2.0,
        format!("t^(1/4)|K_t|_2 in [{min:.4}, {max:.4}], ratio {:.4}", max / min),
    );
}

fn c11_full_suite_is_deterministic() {
    let text = "kernel = gaussian(1)\ndatum = box(1)\nn = 2048\nL = 160\ntimes = dyadic(4, 256)\n\
                checks = all\nseed = 11\nsnapshots = 16\n";
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut manifests = Vec::new();
    for d in &dirs {
        let mut cfg = ExperimentConfig::parse(text, d.path()).unwrap();
        cfg.out = d.path().to_path_buf();
        manifests.push(run(&cfg).unwrap());
    }
    let mut names: Vec<String> = fs::read_dir(dirs[0].path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    let differing: Vec<&String> = names
        .iter()
        .filter(|n| fs::read(dirs[0].path().join(n)).unwrap() != fs::read(dirs[1].path().join(n)).unwrap())
        .collect();
    let complete = manifests[0].entries.len() == Check::ALL.len();
    report(
        11,
        "determinism",
        differing.is_empty() && complete && names.len() > 10,
        format!(
            "{} CSV files compared, {} differ, all checks passed {}",
            names.len(),
            differing.len(),
            manifests[0].all_passed()
        ),
    );
}
