//! Command-line laboratory: regime classification, radial groundstate
//! solves, counterexample families, verification suites, and parameter
//! sweeps. Outputs are written atomically together with a run manifest;
//! identical manifests reproduce byte-identical numeric outputs.
//!
//! Exit codes: 0 success, 1 usage, 2 nonconvergence, 3 assertion failure,
//! 4 I/O.

use clap::{Args, Parser, Subcommand};
use spslab::error::Error;
use spslab::families::{FamilyKind, FamilySpec};
use spslab::grid::{RadialFunction, RadialGrid};
use spslab::io::{
    atomic_write, family_report_csv, parse_sweep_config, profile_to_csv, profile_to_json, GridSpec,
    RunManifest,
};
use spslab::regime::{self, Classification};
use spslab::riesz::KernelMatrix;
use spslab::scalar::Scalar;
use spslab::solver::{self, InitProfile, SolverConfig};
use spslab::verify;
use spslab::Params;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "spslab",
    version,
    about = "Schrödinger–Poisson–Slater laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a parameter point or sweep a (p, q) grid.
    Regime(RegimeArgs),
    /// Compute a radial groundstate by constrained minimisation.
    Solve(SolveArgs),
    /// Run a test/counterexample family and fit its growth rates.
    Family(FamilyArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Solve a grid of parameter points from a JSON config.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ParamFlags {
    #[arg(long)]
    n: u32,
    /// Riesz order α (exact rationals accepted: "2", "3/2", "1.5").
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: Option<String>,
}

impl ParamFlags {
    fn params(&self) -> Result<Params, Error> {
        let parse = |s: &str| -> Result<Scalar, Error> { s.parse().map_err(Error::InvalidParams) };
        let q = match &self.q {
            Some(q) => parse(q)?,
            None => return Err(Error::InvalidParams("missing --q".into())),
        };
        Params::new(self.n, parse(&self.alpha)?, parse(&self.p)?, q)
    }

    fn params_with_default_q(&self, q_default: &str) -> Result<Params, Error> {
        let parse = |s: &str| -> Result<Scalar, Error> { s.parse().map_err(Error::InvalidParams) };
        let q = match &self.q {
            Some(q) => parse(q)?,
            None => parse(q_default)?,
        };
        Params::new(self.n, parse(&self.alpha)?, parse(&self.p)?, q)
    }
}

#[derive(Args)]
struct GridFlags {
    #[arg(long, default_value_t = 1e-3)]
    r_min: f64,
    #[arg(long, default_value_t = 1e3)]
    r_max: f64,
    #[arg(long, default_value_t = 2048)]
    m: usize,
}

impl GridFlags {
    fn build(&self, n: u32) -> Result<Arc<RadialGrid>, Error> {
        RadialGrid::new(self.r_min, self.r_max, self.m, n)
    }
    fn spec(&self, n: u32) -> GridSpec {
        GridSpec {
            r_min: self.r_min,
            r_max: self.r_max,
            m: self.m,
            n,
        }
    }
}

#[derive(Args)]
struct RegimeArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Sweep specification lo:hi:steps for p (enables the CSV grid).
    #[arg(long)]
    sweep_p: Option<String>,
    /// Sweep specification lo:hi:steps for q.
    #[arg(long)]
    sweep_q: Option<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    grid: GridFlags,
    /// Constraint value ∫|u|^q = c.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Initial profile: gaussian:WIDTH or annular:CENTER,WIDTH.
    #[arg(long, default_value = "gaussian:1.0")]
    init: String,
    #[arg(long, default_value_t = 1e-6)]
    tol_grad: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol_energy: f64,
    #[arg(long, default_value_t = 20000)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Kernel cache directory (default: $SPSLAB_CACHE_DIR if set).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct FamilyArgs {
    /// One of: sobolev, annular, chain, cube, cantor, bumps, log-tail.
    kind: String,
    #[command(flatten)]
    params: ParamFlags,
    /// Comma-separated family parameter values (R, n, k, spacing, r_max).
    #[arg(long, visible_alias = "R")]
    range: String,
    /// L^q exponent probed in the report (defaults to q).
    #[arg(long)]
    q_probe: Option<f64>,
    /// Lattice dimension (cube arrays).
    #[arg(long)]
    lattice_dim: Option<u32>,
    /// Contraction ratio ρ (cantor cascades).
    #[arg(long)]
    rho: Option<f64>,
    /// Chain radius R (chains) or bump count (translated bumps).
    #[arg(long)]
    aux: Option<f64>,
    /// Tail exponent δ (log tails).
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: interpolation, average, weighted-log, power-exterior,
    /// radial-decay, brezis-lieb.
    suite: String,
    #[command(flatten)]
    params: ParamFlags,
    #[command(flatten)]
    grid: GridFlags,
    /// Suite preset (brezis-lieb: escaping-bump, strong, cantor-gap).
    #[arg(long, default_value = "default")]
    preset: String,
    /// Weight exponent γ (weighted-log).
    #[arg(long)]
    gamma: Option<f64>,
    /// Weight power β (power-exterior).
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON configuration file (see the documented schema).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let result = match cli.command {
        Command::Regime(args) => cmd_regime(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Family(args) => cmd_family(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Nonconvergence(_) | Error::BoundaryMass { .. } => 2,
        Error::CheckFailed(_) | Error::Hypothesis(_) => 3,
        Error::Io(_) => 4,
        _ => 1,
    }
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

fn parse_sweep_range(spec: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidParams(format!(
            "bad sweep spec `{spec}`, want lo:hi:steps"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::InvalidParams("bad sweep lo".into()))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidParams("bad sweep hi".into()))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| Error::InvalidParams("bad sweep steps".into()))?;
    if steps < 2 || hi <= lo {
        return Err(Error::InvalidParams(
            "sweep needs hi > lo and steps >= 2".into(),
        ));
    }
    Ok((0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn parse_list(spec: &str) -> Result<Vec<f64>, Error> {
    let vals: Result<Vec<f64>, _> = spec.split(',').map(|s| s.trim().parse::<f64>()).collect();
    vals.map_err(|_| Error::InvalidParams(format!("bad list `{spec}`")))
}

fn cmd_regime(args: RegimeArgs) -> Result<(), Error> {
    let mut manifest = RunManifest::new("regime");
    match (&args.sweep_p, &args.sweep_q) {
        (None, None) => {
            let params = args.params.params()?;
            manifest.params = Some(params);
            let report = regime::classify(&params);
            let exponents = regime::critical_exponents(&params);
            println!("{}", report.classification);
            let path = args.out.join("regime.json");
            write_json(
                &path,
                &serde_json::json!({ "params": params, "report": report, "exponents": exponents }),
            )?;
            manifest.outputs.push(path.display().to_string());
        }
        (sp, sq) => {
            let base = args.params.params_with_default_q("2")?;
            let p_values = match sp {
                Some(s) => parse_sweep_range(s)?,
                None => vec![base.p.to_f64()],
            };
            let q_values = match sq {
                Some(s) => parse_sweep_range(s)?,
                None => vec![base.q.to_f64()],
            };
            let mut csv = String::from(
                "p,q,classification,q_cond,q0_cond,qrad_cond,qrad0_cond,qrad3_cond,p_cond\n",
            );
            for &p in &p_values {
                for &q in &q_values {
                    let pr =
                        match Params::new(base.n, base.alpha, Scalar::float(p), Scalar::float(q)) {
                            Ok(pr) => pr,
                            Err(_) => continue,
                        };
                    let rep = regime::classify(&pr);
                    csv.push_str(&format!(
                        "{p:.12e},{q:.12e},{},{},{},{},{},{},{}\n",
                        rep.classification,
                        rep.q_cond,
                        rep.q0_cond,
                        rep.qrad_cond,
                        rep.qrad0_cond,
                        rep.qrad3_cond,
                        rep.p_cond
                    ));
                }
            }
            let sweep_path = args.out.join("regime_sweep.csv");
            atomic_write(&sweep_path, csv.as_bytes())?;
            // exact boundary curves q_cs(p), q_rad(p), q_sobolev
            let mut bounds = String::from("p,q_cs,q_rad,q_sobolev\n");
            for &p in &p_values {
                let pr = Params::new(base.n, base.alpha, Scalar::float(p), Scalar::int(2))?;
                let q_cs = regime::q_cs(&pr).to_f64();
                let q_rad = regime::q_rad(&pr).map(|s| s.to_f64()).unwrap_or(f64::NAN);
                let q_sob = regime::q_sobolev(base.n).to_f64();
                bounds.push_str(&format!("{p:.12e},{q_cs:.12e},{q_rad:.12e},{q_sob:.12e}\n"));
            }
            let bounds_path = args.out.join("boundaries.csv");
            atomic_write(&bounds_path, bounds.as_bytes())?;
            manifest.outputs.push(sweep_path.display().to_string());
            manifest.outputs.push(bounds_path.display().to_string());
        }
    }
    write_json(&args.out.join("manifest.json"), &manifest)
}

fn parse_init(spec: &str) -> Result<InitProfile, Error> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::InvalidParams(format!("bad init `{spec}`")))?;
    match kind {
        "gaussian" => Ok(InitProfile::Gaussian {
            width: rest
                .parse()
                .map_err(|_| Error::InvalidParams("bad gaussian width".into()))?,
        }),
        "annular" => {
            let (c, w) = rest
                .split_once(',')
                .ok_or_else(|| Error::InvalidParams("annular needs CENTER,WIDTH".into()))?;
            Ok(InitProfile::Annular {
                center: c
                    .parse()
                    .map_err(|_| Error::InvalidParams("bad center".into()))?,
                width: w
                    .parse()
                    .map_err(|_| Error::InvalidParams("bad width".into()))?,
            })
        }
        other => Err(Error::InvalidParams(format!("unknown init `{other}`"))),
    }
}

fn kernel_for(
    cache_dir: Option<&Path>,
    grid: &Arc<RadialGrid>,
    alpha: f64,
) -> Result<KernelMatrix, Error> {
    let env_dir = std::env::var_os("SPSLAB_CACHE_DIR").map(PathBuf::from);
    let dir = cache_dir.or(env_dir.as_deref());
    spslab::cache::load_or_assemble(dir, grid, alpha)
}

fn cmd_solve(args: SolveArgs) -> Result<(), Error> {
    let params = args.params.params()?;
    let grid = args.grid.build(params.n)?;
    let kernel = kernel_for(args.cache_dir.as_deref(), &grid, params.alpha_f())?;
    let config = SolverConfig {
        c: args.c,
        init: parse_init(&args.init)?,
        tol_grad: args.tol_grad,
        tol_energy: args.tol_energy,
        max_iter: args.max_iter,
        seed: args.seed,
        ..Default::default()
    };
    let mut manifest = RunManifest::new("solve");
    manifest.params = Some(params);
    manifest.grid = Some(args.grid.spec(params.n));
    manifest.solver = Some(config.clone());

    let result = solver::minimize(&params, &grid, &kernel, &config)?;
    let breakdown = spslab::energy::breakdown(&result.u, &params, &kernel);
    let result_path = args.out.join("result.json");
    write_json(
        &result_path,
        &serde_json::json!({ "result": result, "breakdown": breakdown }),
    )?;
    let profile_path = args.out.join("profile.csv");
    atomic_write(&profile_path, profile_to_csv(&result.u).as_bytes())?;
    let profile_json_path = args.out.join("profile.json");
    write_json(&profile_json_path, &profile_to_json(&result.u))?;
    manifest.outputs = vec![
        result_path.display().to_string(),
        profile_path.display().to_string(),
        profile_json_path.display().to_string(),
    ];
    if let Some(rescaled) = &result.rescaled {
        let p = args.out.join("groundstate.csv");
        atomic_write(&p, profile_to_csv(rescaled).as_bytes())?;
        manifest.outputs.push(p.display().to_string());
    }
    write_json(&args.out.join("manifest.json"), &manifest)?;
    println!(
        "m_c = {:.10}  mu = {:.8}  residuals: el {:.3e}, nehari {:.3e}, pohozaev {:.3e}",
        result.m_c,
        result.mu,
        result.residuals.el,
        result.residuals.nehari,
        result.residuals.pohozaev
    );
    if !result.converged {
        return Err(Error::Nonconvergence(format!(
            "stopped after {} iterations{}",
            result.iterations,
            result
                .warning
                .as_deref()
                .map(|w| format!(" ({w})"))
                .unwrap_or_default()
        )));
    }
    Ok(())
}

fn cmd_family(args: FamilyArgs) -> Result<(), Error> {
    let kind = match args.kind.as_str() {
        "sobolev" => FamilyKind::SobolevScaling,
        "annular" => FamilyKind::Annular,
        "chain" => FamilyKind::VanishingChain,
        "cube" => FamilyKind::CubeArray,
        "cantor" => FamilyKind::CantorCascade,
        "bumps" => FamilyKind::TranslatedBumps,
        "log-tail" => FamilyKind::LogTail,
        other => return Err(Error::InvalidParams(format!("unknown family `{other}`"))),
    };
    let params = args.params.params_with_default_q("2")?;
    let spec = FamilySpec {
        kind,
        params,
        range: parse_list(&args.range)?,
        q_probe: args.q_probe,
        lattice_dim: args.lattice_dim,
        rho: args.rho,
        aux: args.aux,
        delta: args.delta,
    };
    let mut manifest = RunManifest::new(format!("family {}", args.kind));
    manifest.params = Some(params);
    let report = spec.run()?;
    let json_path = args.out.join("family.json");
    write_json(&json_path, &report)?;
    let csv_path = args.out.join("family.csv");
    atomic_write(&csv_path, family_report_csv(&report).as_bytes())?;
    manifest.outputs = vec![
        json_path.display().to_string(),
        csv_path.display().to_string(),
    ];
    write_json(&args.out.join("manifest.json"), &manifest)?;
    for (k, v) in &report.fitted_slopes {
        println!(
            "slope {k}: fitted {v:.6} predicted {:.6}",
            report.predicted_slopes[k]
        );
    }
    let failed: Vec<&String> = report
        .verdicts
        .iter()
        .filter(|(_, &ok)| !ok)
        .map(|(k, _)| k)
        .collect();
    if !failed.is_empty() {
        return Err(Error::CheckFailed(format!(
            "family verdicts failed: {failed:?}"
        )));
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Error> {
    let params = args.params.params_with_default_q("4")?;
    let grid = args.grid.build(params.n)?;
    let kernel = kernel_for(None, &grid, params.alpha_f())?;
    let mut manifest = RunManifest::new(format!("verify {}", args.suite));
    manifest.params = Some(params);
    manifest.grid = Some(args.grid.spec(params.n));

    let gaussian = RadialFunction::from_fn(&grid, |r| (-r * r).exp());
    let mut summary = String::from("check,value,threshold,pass\n");
    let mut all_pass = true;
    let mut record = |name: &str, value: f64, threshold: f64, pass: bool, all: &mut bool| {
        summary.push_str(&format!("{name},{value:.12e},{threshold:.12e},{pass}\n"));
        *all &= pass;
    };

    let report_json: serde_json::Value = match args.suite.as_str() {
        "interpolation" => {
            let rep = verify::check_interpolation(&gaussian, &params, &kernel)?;
            record(
                "quotient_positive",
                rep.quotient,
                0.0,
                rep.positive,
                &mut all_pass,
            );
            serde_json::to_value(&rep).unwrap()
        }
        "average" => {
            let rep = verify::check_average_estimate(&gaussian, params.p_f(), &kernel);
            let mut max_dev: f64 = 0.0;
            for k in [-300i64, -100, 100, 300] {
                let shifted =
                    verify::check_average_estimate(&gaussian.dilate(k), params.p_f(), &kernel);
                max_dev = max_dev.max((shifted.ratio / rep.ratio - 1.0).abs());
            }
            record(
                "dilation_invariance",
                max_dev,
                1e-4,
                max_dev <= 1e-4,
                &mut all_pass,
            );
            serde_json::to_value(&rep).unwrap()
        }
        "weighted-log" => {
            let gamma = args.gamma.unwrap_or(0.75);
            let u = spslab::families::log_tail_profile(&params, 0.75, &grid)?;
            let rep = verify::check_weighted_log(&u, params.p_f(), gamma, &kernel)?;
            record(
                "ratio_finite",
                rep.ratio,
                f64::INFINITY,
                rep.ratio.is_finite(),
                &mut all_pass,
            );
            serde_json::to_value(&rep).unwrap()
        }
        "power-exterior" => {
            let beta = args.beta.unwrap_or(1.0);
            let u = spslab::families::log_tail_profile(&params, 0.75, &grid)?;
            let radii = [10.0, 30.0, 100.0, 300.0];
            let rep = verify::check_power_exterior(&u, params.p_f(), beta, &radii, &kernel)?;
            record(
                "constants_bounded",
                rep.rows.iter().map(|r| r.constant).fold(f64::MIN, f64::max),
                f64::INFINITY,
                rep.constants_bounded,
                &mut all_pass,
            );
            serde_json::to_value(&rep).unwrap()
        }
        "radial-decay" => {
            let rep = verify::check_radial_decay(&gaussian, &params, &kernel, 5)?;
            record(
                "all_finite",
                rep.rows.len() as f64,
                0.0,
                rep.all_finite,
                &mut all_pass,
            );
            serde_json::to_value(&rep).unwrap()
        }
        "brezis-lieb" => match args.preset.as_str() {
            "escaping-bump" | "default" => {
                let steps: Vec<i64> = (1..=8).map(|i| i * 55).collect();
                let members =
                    verify::escaping_bump_sequence(&gaussian, 0.4, &steps, params.p_f(), &kernel);
                let rep = verify::check_brezis_lieb(&members, &gaussian, params.p_f(), &kernel)?;
                record(
                    "liminf_nonnegative",
                    rep.tail_min,
                    -1e-6 * rep.scale,
                    rep.liminf_nonnegative,
                    &mut all_pass,
                );
                serde_json::to_value(&rep).unwrap()
            }
            "strong" => {
                let members: Vec<RadialFunction> = (1..=6)
                    .map(|i| gaussian.scale(1.0 + 0.5 * 0.25f64.powi(i)))
                    .collect();
                let rep = verify::check_brezis_lieb(&members, &gaussian, params.p_f(), &kernel)?;
                record(
                    "converges_to_zero",
                    rep.deltas.last().copied().unwrap_or(f64::NAN),
                    1e-3 * rep.scale,
                    rep.converges_to_zero,
                    &mut all_pass,
                );
                serde_json::to_value(&rep).unwrap()
            }
            "cantor-gap" => {
                let gap =
                    spslab::families::cantor_brezis_lieb_gap(&params, &gaussian, &kernel, 0.45, 4)?;
                let min_gap = gap.gap_lower.iter().cloned().fold(f64::INFINITY, f64::min);
                record(
                    "strict_gap",
                    min_gap,
                    1e-2 * gap.scale,
                    min_gap >= 1e-2 * gap.scale,
                    &mut all_pass,
                );
                serde_json::to_value(&gap).unwrap()
            }
            other => return Err(Error::InvalidParams(format!("unknown preset `{other}`"))),
        },
        other => return Err(Error::InvalidParams(format!("unknown suite `{other}`"))),
    };

    let report_path = args.out.join("report.json");
    write_json(&report_path, &report_json)?;
    let summary_path = args.out.join("summary.csv");
    atomic_write(&summary_path, summary.as_bytes())?;
    manifest.outputs = vec![
        report_path.display().to_string(),
        summary_path.display().to_string(),
    ];
    write_json(&args.out.join("manifest.json"), &manifest)?;
    if all_pass {
        println!("verify {}: pass", args.suite);
        Ok(())
    } else {
        Err(Error::CheckFailed(format!("verify {} failed", args.suite)))
    }
}

#[derive(serde::Serialize)]
struct SweepRow {
    p: String,
    q: String,
    classification: String,
    m_c: Option<f64>,
    mu: Option<f64>,
    converged: Option<bool>,
    el: Option<f64>,
    nehari: Option<f64>,
    pohozaev: Option<f64>,
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Error> {
    let bytes = std::fs::read(&args.config)?;
    let cfg = parse_sweep_config(&bytes)?;
    let mut manifest = RunManifest::new("sweep");
    manifest.grid = Some(GridSpec {
        r_min: cfg.r_min,
        r_max: cfg.r_max,
        m: cfg.m,
        n: cfg.n,
    });
    manifest.solver = Some(cfg.solver_config());

    let grid = RadialGrid::new(cfg.r_min, cfg.r_max, cfg.m, cfg.n)?;
    let kernel = kernel_for(None, &grid, cfg.alpha.to_f64())?;
    let points: Vec<(Scalar, Scalar)> = cfg
        .p_values
        .iter()
        .flat_map(|&p| cfg.q_values.iter().map(move |&q| (p, q)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Format(e.to_string()))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        use rayon::prelude::*;
        points
            .par_iter()
            .map(|&(p, q)| {
                let params = Params::new(cfg.n, cfg.alpha, p, q).expect("validated by config");
                let report = regime::classify(&params);
                let solvable = matches!(
                    report.classification,
                    Classification::ExistenceGeneral
                        | Classification::ExistenceRadialOnly
                        | Classification::EigenvalueCritical
                );
                let mut row = SweepRow {
                    p: p.to_string(),
                    q: q.to_string(),
                    classification: report.classification.to_string(),
                    m_c: None,
                    mu: None,
                    converged: None,
                    el: None,
                    nehari: None,
                    pohozaev: None,
                };
                if solvable {
                    if let Ok(res) = solver::minimize(&params, &grid, &kernel, &cfg.solver_config())
                    {
                        row.m_c = Some(res.m_c);
                        row.mu = Some(res.mu);
                        row.converged = Some(res.converged);
                        row.el = Some(res.residuals.el);
                        row.nehari = Some(res.residuals.nehari);
                        row.pohozaev = Some(res.residuals.pohozaev);
                    }
                }
                row
            })
            .collect()
    });

    let mut csv = String::from("p,q,classification,m_c,mu,converged,el,nehari,pohozaev\n");
    for r in &rows {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.p,
            r.q,
            r.classification,
            opt(r.m_c),
            opt(r.mu),
            r.converged.map(|b| b.to_string()).unwrap_or_default(),
            opt(r.el),
            opt(r.nehari),
            opt(r.pohozaev)
        ));
    }
    let csv_path = args.out.join("sweep.csv");
    atomic_write(&csv_path, csv.as_bytes())?;
    let json_path = args.out.join("sweep.json");
    write_json(&json_path, &rows)?;
    manifest.outputs = vec![
        csv_path.display().to_string(),
        json_path.display().to_string(),
    ];
    write_json(&args.out.join("manifest.json"), &manifest)?;
    let unconverged = rows.iter().filter(|r| r.converged == Some(false)).count();
    println!("sweep: {} points, {} unconverged", rows.len(), unconverged);
    if unconverged > 0 {
        return Err(Error::Nonconvergence(format!(
            "{unconverged} sweep points unconverged"
        )));
    }
    Ok(())
}
