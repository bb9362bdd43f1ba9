use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use phasetomo::grid::Axis;
use phasetomo::io::{emit_table, sink, to_json, Format, SCHEMA_VERSION};
use phasetomo::phasespace::{wigner_from_psi, wigner_stationary};
use phasetomo::propagators::propagate_gaussian;
use phasetomo::specfun::airy_phi;
use phasetomo::states::{gaussian_ground, ComplexGaussian, PhysParams, StationaryState};
use phasetomo::tomography::{chirp_grid, tomogram_from_psi, tomogram_stationary};
use phasetomo::verify::{self, Suite};

/// Sweep rows closer than this to μ = 0 are skipped.
const SWEEP_MU_MIN: f64 = 1e-3;

#[derive(Parser, Debug)]
#[command(name = "phasetomo", version, about = "Airy states, Wigner functions and tomograms of a charge in a uniform field")]
struct Cli {
    /// Particle mass m.
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    mass: f64,
    /// Field strength F.
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    field: f64,
    /// Planck constant ħ.
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    hbar: f64,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Tolerance override for `verify` and for the oracle check of `evolve`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate Φ(x) = √π Ai(x).
    Airy(AiryArgs),
    /// Wigner function of a stationary state on a (q, p) grid.
    WignerStationary(WignerArgs),
    /// Tomogram of a stationary state: one (μ, ν) slice or a θ sweep.
    TomogramStationary(TomogramArgs),
    /// Evolve a ground-state Gaussian and write a JSON report.
    Evolve(EvolveArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Serialize)]
struct AiryArgs {
    #[arg(long, default_value_t = -12.0, allow_negative_numbers = true)]
    x_min: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    x_max: f64,
    #[arg(long, default_value_t = 1601)]
    n: usize,
}

#[derive(Args, Debug, Serialize)]
struct WignerArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    energy: f64,
    #[arg(long, default_value_t = -6.0, allow_negative_numbers = true)]
    q_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    q_max: f64,
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    p_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    p_max: f64,
    #[arg(long, default_value_t = 301)]
    nq: usize,
    #[arg(long, default_value_t = 301)]
    np: usize,
}

#[derive(Args, Debug, Serialize)]
struct TomogramArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    energy: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    nu: f64,
    /// Emit θ-rows μ = cos θ, ν = sin θ, θ = kπ/angles, instead of one slice.
    #[arg(long)]
    sweep: bool,
    #[arg(long, default_value_t = 180)]
    angles: usize,
    #[arg(long, default_value_t = -8.0, allow_negative_numbers = true)]
    x_min: f64,
    #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
    x_max: f64,
    #[arg(long, default_value_t = 801)]
    n: usize,
}

#[derive(Args, Debug, Serialize)]
struct EvolveArgs {
    /// Frequency of the spring that prepared the initial state.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    omega: f64,
    /// Evolution time.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    t: f64,
    /// Rows of the centroid/variance table.
    #[arg(long, default_value_t = 11)]
    report_points: usize,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(value_enum, default_value_t = Suite::All)]
    suite: Suite,
}

/// Everything needed to reproduce a run; written into sidecars and reports.
#[derive(Serialize)]
struct RunConfig<'a, S: Serialize> {
    command: &'static str,
    mass: f64,
    field: f64,
    hbar: f64,
    out: Option<&'a Path>,
    format: Format,
    tol: Option<f64>,
    settings: &'a S,
}

enum Failure {
    /// Bad arguments, invalid parameters or I/O trouble.
    Usage(String),
    /// A check ran and missed its tolerance.
    Check(String),
}

impl From<phasetomo::error::Error> for Failure {
    fn from(e: phasetomo::error::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match configure_threads().and_then(|_| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("PHASETOMO_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("PHASETOMO_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let params = PhysParams::new(cli.mass, cli.field, cli.hbar)?;
    if let Some(tol) = cli.tol {
        if !(tol >= 0.0) {
            return Err(Failure::Usage(format!("--tol must be ≥ 0, got {tol}")));
        }
    }
    match &cli.command {
        Command::Airy(a) => cmd_airy(cli, a),
        Command::WignerStationary(a) => cmd_wigner(cli, &params, a),
        Command::TomogramStationary(a) => cmd_tomogram(cli, &params, a),
        Command::Evolve(a) => cmd_evolve(cli, &params, a),
        Command::Verify(a) => cmd_verify(cli, &params, a),
    }
}

fn config<'a, S: Serialize>(cli: &'a Cli, command: &'static str, settings: &'a S) -> RunConfig<'a, S> {
    RunConfig {
        command,
        mass: cli.mass,
        field: cli.field,
        hbar: cli.hbar,
        out: cli.out.as_deref(),
        format: cli.format,
        tol: cli.tol,
        settings,
    }
}

fn cmd_airy(cli: &Cli, a: &AiryArgs) -> Result<(), Failure> {
    let axis = Axis::linspace(a.x_min, a.x_max, a.n)?;
    let rows = axis
        .points()
        .into_iter()
        .map(|x| Ok(vec![x, airy_phi(x)?.value]))
        .collect::<phasetomo::error::Result<Vec<_>>>()?;
    emit_table(cli.out.as_deref(), cli.format, &config(cli, "airy", a), &["x", "phi"], rows)?;
    Ok(())
}

fn cmd_wigner(cli: &Cli, params: &PhysParams, a: &WignerArgs) -> Result<(), Failure> {
    let s = StationaryState::new(a.energy, *params)?;
    let q = Axis::linspace(a.q_min, a.q_max, a.nq)?;
    let p = Axis::linspace(a.p_min, a.p_max, a.np)?;
    let rows = (0..q.len).flat_map(|i| {
        let s = &s;
        (0..p.len).map(move |j| vec![q.at(i), p.at(j), wigner_stationary(q.at(i), p.at(j), s)])
    });
    emit_table(
        cli.out.as_deref(),
        cli.format,
        &config(cli, "wigner-stationary", a),
        &["q", "p", "w"],
        rows,
    )?;
    Ok(())
}

fn cmd_tomogram(cli: &Cli, params: &PhysParams, a: &TomogramArgs) -> Result<(), Failure> {
    let s = StationaryState::new(a.energy, *params)?;
    let x = Axis::linspace(a.x_min, a.x_max, a.n)?;
    let cfg = config(cli, "tomogram-stationary", a);
    if a.sweep {
        if a.angles < 2 {
            return Err(Failure::Usage("--angles must be at least 2".into()));
        }
        // the open interval (0, π), minus the band around μ = 0
        let mut rows = Vec::new();
        for k in 1..a.angles {
            let theta = k as f64 * PI / a.angles as f64;
            let (mu, nu) = (theta.cos(), theta.sin());
            if mu.abs() < SWEEP_MU_MIN {
                continue;
            }
            for xv in x.points() {
                rows.push(vec![theta, xv, tomogram_stationary(xv, mu, nu, &s)?]);
            }
        }
        emit_table(cli.out.as_deref(), cli.format, &cfg, &["theta", "X", "w"], rows)?;
    } else {
        let rows = x
            .points()
            .into_iter()
            .map(|xv| Ok(vec![xv, tomogram_stationary(xv, a.mu, a.nu, &s)?]))
            .collect::<phasetomo::error::Result<Vec<_>>>()?;
        emit_table(cli.out.as_deref(), cli.format, &cfg, &["X", "w"], rows)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct GaussianRecord {
    n: [f64; 2],
    a: [f64; 2],
    b: [f64; 2],
}

impl From<&ComplexGaussian> for GaussianRecord {
    fn from(g: &ComplexGaussian) -> Self {
        Self {
            n: [g.n.re, g.n.im],
            a: [g.a.re, g.a.im],
            b: [g.b.re, g.b.im],
        }
    }
}

#[derive(Serialize)]
struct TrajectoryRow {
    t: f64,
    mean_q: f64,
    mean_p: f64,
    var_q: f64,
    var_p: f64,
    cov_qp: f64,
}

#[derive(Serialize)]
struct SliceRecord {
    mu: f64,
    nu: f64,
    x_axis: Axis,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct OracleRecord {
    l2_deviation: Option<f64>,
    tolerance: f64,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct WignerRecord {
    file: Option<String>,
    q_axis: Axis,
    p_axis: Axis,
    normalization: f64,
}

#[derive(Serialize)]
struct EvolveReport<'a> {
    schema_version: u32,
    config: RunConfig<'a, EvolveArgs>,
    initial: GaussianRecord,
    state: GaussianRecord,
    trajectory: Vec<TrajectoryRow>,
    wigner: WignerRecord,
    tomogram_slices: Vec<SliceRecord>,
    oracle: OracleRecord,
}

fn cmd_evolve(cli: &Cli, params: &PhysParams, a: &EvolveArgs) -> Result<(), Failure> {
    if !(a.t >= 0.0 && a.t.is_finite()) {
        return Err(Failure::Usage(format!("--t must be ≥ 0, got {}", a.t)));
    }
    if a.report_points < 2 {
        return Err(Failure::Usage("--report-points must be at least 2".into()));
    }
    let hbar = params.hbar();
    let g0 = gaussian_ground(a.omega, params)?;
    let gt = propagate_gaussian(&g0, a.t, params)?;

    let trajectory = (0..a.report_points)
        .map(|k| {
            let t = a.t * k as f64 / (a.report_points - 1) as f64;
            let m = propagate_gaussian(&g0, t, params)?.moments(hbar);
            Ok(TrajectoryRow {
                t,
                mean_q: m.mean_q,
                mean_p: m.mean_p,
                var_q: m.var_q,
                var_p: m.var_p,
                cov_qp: m.cov_qp,
            })
        })
        .collect::<phasetomo::error::Result<Vec<_>>>()?;

    let mom = gt.moments(hbar);
    let (sq, sp) = (mom.var_q.sqrt(), mom.var_p.sqrt());
    // the slices below have |μ/ν| ≤ 1
    let max_step = (sq / 20.0).min(PI * hbar / (4.0 * (mom.mean_p.abs() + 10.0 * sp)));
    let x = chirp_grid(mom.mean_q, 14.0 * sq, max_step, 1.0, 1.0, hbar)?;
    let psi = gt.sample(&x);
    let q_axis = Axis::linspace(mom.mean_q - 6.0 * sq, mom.mean_q + 6.0 * sq, 121)?;
    let p_axis = Axis::linspace(mom.mean_p - 6.0 * sp, mom.mean_p + 6.0 * sp, 121)?;
    let wigner = wigner_from_psi(&psi, &x, &q_axis, &p_axis, params)?;

    let wigner_file = cli.out.as_deref().map(|out| {
        let ext = match cli.format {
            Format::Csv => "wigner.csv",
            Format::Json => "wigner.json",
        };
        let mut s = out.as_os_str().to_owned();
        s.push(".");
        s.push(ext);
        PathBuf::from(s)
    });
    if let Some(path) = &wigner_file {
        let rows = (0..q_axis.len)
            .flat_map(|i| (0..p_axis.len).map(move |j| (i, j)))
            .map(|(i, j)| vec![q_axis.at(i), p_axis.at(j), wigner.at(i, j)]);
        let settings = serde_json::json!({ "omega": a.omega, "t": a.t });
        emit_table(
            Some(path),
            cli.format,
            &config(cli, "evolve", &settings),
            &["q", "p", "w"],
            rows,
        )?;
    }

    let mut slices = Vec::new();
    for k in 0..4 {
        let theta = k as f64 * PI / 4.0;
        let (mu, nu) = (theta.cos(), theta.sin());
        let (mu, nu) = (clean(mu), clean(nu));
        let centre = mu * mom.mean_q + nu * mom.mean_p;
        let width = (mu * mu * mom.var_q + 2.0 * mu * nu * mom.cov_qp + nu * nu * mom.var_p).sqrt();
        let axis = Axis::linspace(centre - 6.0 * width, centre + 6.0 * width, 121)?;
        let s = tomogram_from_psi(&psi, &x, mu, nu, &axis, params)?;
        slices.push(SliceRecord {
            mu,
            nu,
            x_axis: axis,
            values: s.values,
        });
    }

    let tolerance = cli.tol.unwrap_or(1e-4);
    let oracle = match verify::oracle_deviation(params, a.omega, a.t) {
        Ok(d) => OracleRecord {
            l2_deviation: Some(d),
            tolerance,
            passed: d <= tolerance,
            error: None,
        },
        Err(e) => OracleRecord {
            l2_deviation: None,
            tolerance,
            passed: false,
            error: Some(e.to_string()),
        },
    };
    let passed = oracle.passed;
    let report = EvolveReport {
        schema_version: SCHEMA_VERSION,
        config: config(cli, "evolve", a),
        initial: (&g0).into(),
        state: (&gt).into(),
        trajectory,
        wigner: WignerRecord {
            file: wigner_file
                .as_ref()
                .and_then(|p| p.file_name())
                .map(|n| n.to_string_lossy().into_owned()),
            q_axis,
            p_axis,
            normalization: wigner.normalization(hbar),
        },
        tomogram_slices: slices,
        oracle,
    };
    let mut w = sink(cli.out.as_deref())?;
    writeln!(w, "{}", to_json(&report)?)?;
    w.flush()?;
    if !passed {
        return Err(Failure::Check(format!(
            "oracle check failed: {}",
            report
                .oracle
                .error
                .clone()
                .unwrap_or_else(|| format!("L2 deviation above {tolerance:e}"))
        )));
    }
    Ok(())
}

/// Drops the rounding residue of cos(π/2) and friends.
fn clean(v: f64) -> f64 {
    if v.abs() < 1e-15 {
        0.0
    } else {
        v
    }
}

fn cmd_verify(cli: &Cli, params: &PhysParams, a: &VerifyArgs) -> Result<(), Failure> {
    let report = verify::run(a.suite, params, cli.tol);
    for c in &report.checks {
        let residual = c.residual.map_or_else(|| "error".to_string(), |r| format!("{r:.3e}"));
        eprintln!(
            "{} {}/{} residual {} tol {:.1e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            residual,
            c.tolerance
        );
    }
    let mut w = sink(cli.out.as_deref())?;
    writeln!(w, "{}", to_json(&report)?)?;
    w.flush()?;
    if let Some(out) = cli.out.as_deref() {
        log::debug!("verify report written to {}", out.display());
    }
    if report.passed {
        Ok(())
    } else {
        let names: Vec<String> = report.failures().map(|c| format!("{}/{}", c.suite, c.name)).collect();
        Err(Failure::Check(format!("failed checks: {}", names.join(", "))))
    }
}
