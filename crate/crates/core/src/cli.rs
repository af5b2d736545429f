//! The `torus-scatter` command line: trajectory export, verification suites,
//! pole analysis and entanglement-power tables.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error. Errors are written to standard error as a JSON object.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::causality::{quadrant_exit_audit, tangent_vector_audit};
use crate::config::RunConfig;
use crate::ere::TwoChannelModel;
use crate::error::ScatterError;
use crate::geometry::{eom_residual, overdetermination_2d, solvable_system, Lapse};
use crate::poles::{poles_closed_form, poles_numeric, verify_lower_half, PoleParameter, PoleReport};
use crate::report::{Check, VerificationReport};
use crate::spin::{build_s_operator, entanglement_power_closed, entanglement_power_mc, ProductState};
use crate::symmetry::{
    expected_map, verify_density_map, verify_ep_invariance, verify_phase_difference, verify_phase_map, RhoClass,
};
use crate::torus::{quadrant, sample_trajectory, TorusPoint};

#[derive(Debug, Parser)]
#[command(name = "torus-scatter", version, about = "Two-channel scattering trajectories on the flat torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the trajectory on the configured momentum grid as CSV.
    Traj(Common),
    /// Run a verification suite and write a JSON report.
    Verify(VerifyArgs),
    /// Locate and classify S-matrix poles (JSON).
    Poles(Common),
    /// Tabulate the entanglement power along the trajectory (CSV).
    Ep(Common),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override every tolerance of the verification checks.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Symmetry,
    Eom,
    Wigner,
    Poles,
    Ep,
    All,
}

impl Suite {
    fn name(&self) -> &'static str {
        match self {
            Suite::Symmetry => "symmetry",
            Suite::Eom => "eom",
            Suite::Wigner => "wigner",
            Suite::Poles => "poles",
            Suite::Ep => "ep",
            Suite::All => "all",
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Config(String),
    Inapplicable(String),
    Compute(ScatterError),
    Io(String),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Config(_) => "config",
            Failure::Inapplicable(_) => "inapplicable_suite",
            Failure::Compute(_) => "computation",
            Failure::Io(_) => "io",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Config(m) | Failure::Inapplicable(m) | Failure::Io(m) => m.clone(),
            Failure::Compute(e) => e.to_string(),
        }
    }
}

impl From<ScatterError> for Failure {
    fn from(e: ScatterError) -> Self {
        match e {
            ScatterError::InvalidParameter { .. }
            | ScatterError::SignConstraint { .. }
            | ScatterError::InvalidRow { .. }
            | ScatterError::BadGrid(_) => Failure::Config(e.to_string()),
            _ => Failure::Compute(e),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Serialize)]
struct ErrorJson {
    error: &'static str,
    message: String,
}

fn report_failure(f: &Failure) {
    let body = ErrorJson { error: f.kind(), message: f.message() };
    let _ = writeln!(io::stderr(), "{}", serde_json::to_string(&body).expect("error serializes"));
}

/// Entry point used by the binary; returns the process exit code.
pub fn main() -> i32 {
    run(std::env::args_os())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            report_failure(&Failure::Usage(e.to_string().trim().to_string()));
            return 2;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            report_failure(&f);
            2
        }
    }
}

fn dispatch(command: Command) -> CliResult<i32> {
    match command {
        Command::Traj(c) => {
            let cfg = load_config(&c.config)?;
            emit(c.out.as_deref(), &traj_csv(&cfg)?)?;
            Ok(0)
        }
        Command::Ep(c) => {
            let cfg = load_config(&c.config)?;
            emit(c.out.as_deref(), &ep_csv(&cfg)?)?;
            Ok(0)
        }
        Command::Poles(c) => {
            let cfg = load_config(&c.config)?;
            let report = pole_report(&cfg)?;
            emit(c.out.as_deref(), &to_json(&report))?;
            Ok(0)
        }
        Command::Verify(v) => {
            let cfg = load_config(&v.common.config)?;
            let report = verify(&cfg, v.suite, v.common.tol)?;
            emit(v.common.out.as_deref(), &to_json(&report))?;
            Ok(if report.pass { 0 } else { 1 })
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg = RunConfig::from_json(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    cfg.validate()?;
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

/// 17 significant digits, round-trip exact.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(header).map_err(io_err)?;
    for r in rows {
        w.write_record(&r).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub const TRAJ_HEADER: [&str; 8] = ["p", "phi", "theta", "dphi_dp", "dtheta_dp", "kappa", "V", "quadrant"];

/// Trajectory table. kappa and V are left empty where the lapse or the
/// potential is singular, or where the model has no closed-form potential
/// (V) or lapse (kappa).
pub fn traj_csv(cfg: &RunConfig) -> CliResult<String> {
    let model = cfg.model()?;
    let grid = cfg.grid()?;
    let system = solvable_system(&model, cfg.c1).ok();
    let lapse = match (system, model.dimension()) {
        (Some((_, l)), _) => Some(l),
        (None, 3) => model.lengths().map(|(a0, a1)| Lapse::sine(cfg.c1, crate::geometry::epsilon_for(a0, a1))),
        (None, _) => None,
    };
    let mut rows = Vec::with_capacity(grid.len());
    for &p in &grid {
        let jets = model.jets(p)?;
        let [s, t] = &jets;
        let point = TorusPoint::new(s.value, t.value);
        let kappa = lapse.and_then(|l| {
            let (n, dn) = l.jet(p, &jets);
            (n.abs() >= crate::geometry::LAPSE_SINGULARITY_TOL).then(|| fmt(dn / n))
        });
        let v =
            system.map(|(v, _)| v).filter(|v| !v.is_singular(s.value, t.value)).map(|v| fmt(v.value(s.value, t.value)));
        rows.push(vec![
            fmt(p),
            fmt(s.value),
            fmt(t.value),
            fmt(s.d1),
            fmt(t.d1),
            kappa.unwrap_or_default(),
            v.unwrap_or_default(),
            quadrant(point).as_str().to_string(),
        ]);
    }
    csv_text(&TRAJ_HEADER, rows)
}

/// Entanglement power along the trajectory; with `ep_samples > 0` a seeded
/// Monte Carlo estimate is added per row.
pub fn ep_csv(cfg: &RunConfig) -> CliResult<String> {
    let model = cfg.model()?;
    let grid = cfg.grid()?;
    let mc = cfg.ep_samples > 0;
    let mut header = vec!["p", "phi", "theta", "ep"];
    if mc {
        header.extend(["ep_mc", "ep_mc_std_error"]);
    }
    let mut rows = Vec::with_capacity(grid.len());
    for (i, &p) in grid.iter().enumerate() {
        let s = model.phase_shifts(p)?;
        let mut row = vec![fmt(p), fmt(s.phi), fmt(s.theta), fmt(entanglement_power_closed(s.phi, s.theta))];
        if mc {
            let est = entanglement_power_mc(s.phi, s.theta, cfg.ep_samples, cfg.seed.wrapping_add(i as u64))?;
            row.extend([fmt(est.mean), fmt(est.std_error)]);
        }
        rows.push(row);
    }
    csv_text(&header, rows)
}

pub fn pole_report(cfg: &RunConfig) -> CliResult<PoleReport> {
    let spec = cfg.poles.ok_or_else(|| Failure::Config("config has no \"poles\" entry".into()))?;
    match (spec.lambda, spec.r) {
        (Some(l), None) => Ok(PoleReport::new(spec.a, PoleParameter::Lambda, l, poles_closed_form(spec.a, l)?)),
        (None, Some(r)) => Ok(PoleReport::new(spec.a, PoleParameter::R, r, poles_numeric(spec.a, r)?)),
        _ => Err(Failure::Config("give exactly one of lambda or r".into())),
    }
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    model: TwoChannelModel,
    grid: Vec<f64>,
    tol: Option<f64>,
}

impl Ctx<'_> {
    fn tol(&self, key: &str) -> f64 {
        self.tol.unwrap_or_else(|| self.cfg.tolerance(key))
    }
}

/// Run a suite. Suites that do not apply to the configured model are a
/// usage error, except under `all`, where they are listed as skipped.
pub fn verify(cfg: &RunConfig, suite: Suite, tol: Option<f64>) -> CliResult<VerificationReport> {
    if let Some(t) = tol {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Failure::Usage(format!("--tol must be positive and finite, got {t}")));
        }
    }
    let ctx = Ctx { cfg, model: cfg.model()?, grid: cfg.grid()?, tol };
    let run_one = |s: Suite| -> CliResult<VerificationReport> {
        match s {
            Suite::Symmetry => symmetry_suite(&ctx),
            Suite::Eom => eom_suite(&ctx),
            Suite::Wigner => wigner_suite(&ctx),
            Suite::Poles => poles_suite(&ctx),
            Suite::Ep => ep_suite(&ctx),
            Suite::All => unreachable!(),
        }
    };
    if suite != Suite::All {
        return run_one(suite);
    }
    let mut all = VerificationReport::new("all");
    for s in [Suite::Symmetry, Suite::Eom, Suite::Wigner, Suite::Poles, Suite::Ep] {
        match run_one(s) {
            Ok(r) => all.extend(r),
            Err(Failure::Inapplicable(why)) => all.skipped.push(format!("{}: {why}", s.name())),
            Err(e) => return Err(e),
        }
    }
    Ok(all)
}

fn seeded_states(seed: u64, n: usize) -> Vec<ProductState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = vec![ProductState::up_down()];
    states.extend((0..n).map(|_| ProductState::haar(&mut rng)));
    states
}

fn symmetry_suite(ctx: &Ctx) -> CliResult<VerificationReport> {
    let family = ctx
        .model
        .family
        .ok_or_else(|| Failure::Inapplicable("symmetry checks need a family tag in the config".into()))?;
    let mut r = VerificationReport::new("symmetry");
    let tol = ctx.tol("symmetry");
    let phase = verify_phase_map(&ctx.model, &ctx.grid, tol)?;
    r.push(Check::within("phase_map", phase.max_dev, tol));
    let density = verify_density_map(&ctx.model, &seeded_states(ctx.cfg.seed, 4), &ctx.grid, tol)?;
    let mut c = Check::within("density_map", density.report.max_dev, tol);
    if let Some(cross) = density.cross_block {
        c = c.with_detail(serde_json::json!({ "rho_class": density.rho_class, "cross_block": cross }));
    }
    r.push(c);
    // EP depends on φ − θ only; mixed classes do not fix that combination
    if matches!(expected_map(family.table, family.row)?.rho_class, RhoClass::Rho | RhoClass::RhoBar) {
        let diff = verify_phase_difference(&ctx.model, &ctx.grid, tol)?;
        r.push(Check::within("phase_difference", diff.max_dev, tol));
        let ep_tol = ctx.tol("ep");
        let ep = verify_ep_invariance(&ctx.model, &ctx.grid, ep_tol)?;
        r.push(Check::within("ep_invariance", ep.max_dev, ep_tol));
    }
    Ok(r)
}

fn eom_suite(ctx: &Ctx) -> CliResult<VerificationReport> {
    if ctx.model.family.is_none() {
        return Err(Failure::Inapplicable("eom checks need a family tag with a closed-form potential".into()));
    }
    let (v, lapse) = solvable_system(&ctx.model, ctx.cfg.c1).map_err(|e| Failure::Inapplicable(e.to_string()))?;
    let mut r = VerificationReport::new("eom");
    let tol = ctx.tol("eom");
    let res = eom_residual(&ctx.model, &v, &lapse, &ctx.grid)?;
    r.push(
        Check::within("eom_residual", res.max_norm, tol)
            .with_detail(serde_json::json!({ "evaluated": res.rows.len(), "excluded": res.excluded })),
    );
    if ctx.model.dimension() == 2 {
        let od = overdetermination_2d(&ctx.model, ctx.cfg.c1, &ctx.grid)?;
        let otol = ctx.tol("overdetermination");
        r.push(Check::within("overdetermination_spread", od.relative_spread, otol));
        let amp = (od.implied_amplitude / od.closed_form_amplitude - 1.0).abs();
        r.push(Check::within("overdetermination_amplitude", amp, otol).with_detail(&od));
    }
    Ok(r)
}

fn wigner_suite(ctx: &Ctx) -> CliResult<VerificationReport> {
    if ctx.model.dimension() != 3 {
        return Err(Failure::Inapplicable("tangent and quadrant audits are three-dimensional".into()));
    }
    let mut r = VerificationReport::new("wigner");
    let tol = ctx.tol("wigner");
    let tangent = tangent_vector_audit(&ctx.model, &ctx.grid, tol)?;
    let worst = tangent.violations.iter().map(|v| v.excess).fold(0.0, f64::max);
    let mut c = Check::within("tangent_vector", worst, tol);
    if !tangent.violations.is_empty() {
        c = c
            .with_detail(serde_json::json!({ "violations": tangent.violations.len(), "first": tangent.violations[0] }));
    }
    r.push(c);
    let exits = quadrant_exit_audit(&sample_trajectory(&ctx.model, &ctx.grid)?)?;
    r.push(Check::within("quadrant_exit", exits.forbidden as f64, 0.0).with_detail(&exits.crossings));
    Ok(r)
}

fn poles_suite(ctx: &Ctx) -> CliResult<VerificationReport> {
    let (s, t) = ctx
        .model
        .channels_3d()
        .map_err(|_| Failure::Inapplicable("pole analysis covers 3D effective-range models".into()))?;
    let mut r = VerificationReport::new("poles");
    let tol = ctx.tol("poles");
    for (name, ch) in [("singlet", s), ("triplet", t)] {
        let Some(a) = ch.a.finite() else {
            r.skipped.push(format!("{name}: infinite scattering length"));
            continue;
        };
        if a >= 0.0 || ch.r > 0.0 {
            r.skipped.push(format!("{name}: a = {a}, r = {} outside the causal family", ch.r));
            continue;
        }
        let numeric = poles_numeric(a, ch.r)?;
        if ch.r < 0.0 {
            let closed = poles_closed_form(a, ch.r / (2.0 * a))?;
            r.push(Check::within(format!("{name}_closed_vs_numeric"), numeric.distance(&closed), tol));
        }
        let lower = verify_lower_half(&numeric);
        r.push(Check::within(format!("{name}_lower_half"), if lower { 0.0 } else { 1.0 }, 0.0).with_detail(&numeric));
    }
    if r.checks.is_empty() {
        return Err(Failure::Inapplicable(format!("no causal channel to analyse ({})", r.skipped.join("; "))));
    }
    Ok(r)
}

fn ep_suite(ctx: &Ctx) -> CliResult<VerificationReport> {
    let mut r = VerificationReport::new("ep");
    let samples = if ctx.cfg.ep_samples > 0 { ctx.cfg.ep_samples } else { 20_000 };
    let sigma = ctx.cfg.tolerance("mc_sigma");
    let n = ctx.grid.len();
    let picks: Vec<usize> = if n <= 5 { (0..n).collect() } else { (0..5).map(|k| k * (n - 1) / 4).collect() };
    let mut worst_sigma: f64 = 0.0;
    let mut worst_unitarity: f64 = 0.0;
    for (k, &i) in picks.iter().enumerate() {
        let s = ctx.model.phase_shifts(ctx.grid[i])?;
        let est = entanglement_power_mc(s.phi, s.theta, samples, ctx.cfg.seed.wrapping_add(k as u64))?;
        let closed = entanglement_power_closed(s.phi, s.theta);
        let z = if est.std_error > 0.0 { (est.mean - closed).abs() / est.std_error } else { (est.mean - closed).abs() };
        worst_sigma = worst_sigma.max(z);
        worst_unitarity = worst_unitarity.max(build_s_operator(s.phi, s.theta).unitarity_deviation());
    }
    r.push(Check::within("ep_closed_vs_mc_sigmas", worst_sigma, sigma));
    r.push(Check::within("s_unitarity", worst_unitarity, ctx.tol("ep")));
    let peak = (entanglement_power_closed(0.0, std::f64::consts::FRAC_PI_2) - 1.0 / 6.0).abs();
    r.push(Check::within("ep_maximum", peak, ctx.tol("ep")));
    Ok(r)
}
