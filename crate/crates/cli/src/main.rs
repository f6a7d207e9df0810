use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use harvest_core::geometry::{GeodesicBranch, SpacetimeParams};
use harvest_core::harness::{self, FrequencyGrid, SweepSpec, SweepVariable};
use harvest_core::modecache::{self, GridSpec, ModeTable, Progress};
use harvest_core::radial::SolverOptions;
use harvest_core::response::{evaluate, ConvergenceControls, DetectorPairSpec, DetectorSpec};
use harvest_core::states::FieldState;
use harvest_core::validation::{run_suite, Suite, SuiteOptions};
use harvest_core::Error;

#[derive(Parser)]
#[command(name = "harvest", version, about = "Entanglement harvesting by static detectors around a Schwarzschild black hole (units M = 1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a mode table.
    Modes(ModesArgs),
    /// Evaluate L, M and the negativity for one detector pair.
    Response(ResponseArgs),
    /// Sweep gamma, delay or radius and write CSV.
    Sweep(SweepArgs),
    /// Null propagation times between detectors at equal radii.
    Geodesic(GeodesicArgs),
    /// Run the oracle suites.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ModesArgs {
    #[arg(long)]
    lmax: usize,
    #[arg(long, default_value_t = 1e-3)]
    omega_min: f64,
    #[arg(long)]
    omega_max: f64,
    #[arg(long)]
    omega_step: f64,
    /// Comma-separated radii in units of M.
    #[arg(long, value_delimiter = ',', required = true)]
    radii: Vec<f64>,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (0: all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Continue from the checkpoint left by an interrupted run.
    #[arg(long)]
    resume: bool,
    #[arg(long)]
    step_tol: Option<f64>,
}

#[derive(Args)]
struct ResponseArgs {
    #[arg(long)]
    table: PathBuf,
    /// JSON detector pair; the flags below are ignored when given.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 6.009)]
    ra: f64,
    #[arg(long)]
    rb: Option<f64>,
    #[arg(long, default_value_t = PI)]
    gamma: f64,
    #[arg(long, default_value_t = 5.0)]
    gap: f64,
    #[arg(long, default_value_t = 1.0)]
    coupling: f64,
    #[arg(long, default_value_t = 1.0)]
    width: f64,
    /// t0B - t0A.
    #[arg(long, default_value_t = 0.0)]
    delay: f64,
    #[arg(long, default_value = "boulware")]
    state: String,
    #[arg(long)]
    l_cut: Option<usize>,
    #[arg(long)]
    omega_cut: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariableArg {
    Gamma,
    Delay,
    Radius,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON sweep specification; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    variable: Option<VariableArg>,
    /// Start and end, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    range: Option<Vec<f64>>,
    #[arg(long)]
    points: Option<usize>,
    /// Comma-separated states (B, U, H).
    #[arg(long, value_delimiter = ',')]
    states: Option<Vec<String>>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delay: Option<f64>,
    /// Radius of both detectors.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    gap: Option<f64>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    proper_width: Option<f64>,
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long)]
    l_cut: Option<usize>,
    #[arg(long)]
    omega_cut: Option<f64>,
    #[arg(long)]
    omega_max: Option<f64>,
    #[arg(long)]
    omega_step: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a JSON mirror.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct GeodesicArgs {
    #[arg(long, default_value_t = 2.095)]
    r_min: f64,
    #[arg(long, default_value_t = 50.0)]
    r_max: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[arg(long, default_value_t = PI)]
    gamma: f64,
    /// Comma-separated subset of primary, secondary, tertiary.
    #[arg(long, value_delimiter = ',', default_value = "primary,secondary,tertiary")]
    branches: Vec<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Windows,
    Negativity,
    Modes,
    Quadrature,
    All,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    /// Mode table to audit in the modes suite.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
}

enum Failure {
    Validation(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Coverage(_) | Error::OffGrid(_) => 3,
        Error::Io(_) | Error::Checksum(_) | Error::VersionMismatch { .. } | Error::Json(_) | Error::Format(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Modes(a) => modes(a),
        Command::Response(a) => response(a),
        Command::Sweep(a) => sweep(a),
        Command::Geodesic(a) => geodesic(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("validation failed: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn modes(a: ModesArgs) -> Result<(), Failure> {
    let grid = GridSpec { lmax: a.lmax, omega_min: a.omega_min, omega_max: a.omega_max, omega_step: a.omega_step, radii: a.radii };
    let mut solver = SolverOptions::default();
    if let Some(t) = a.step_tol {
        solver.step_tol = t;
    }
    let report = |p: Progress| {
        if p.modes_done == p.modes_total || p.modes_done % 50_000 < 256 {
            log::info!("{} / {} modes", p.modes_done, p.modes_total);
        }
    };
    let table = modecache::build_to_file(&grid, &solver, &a.out, a.workers, a.resume, Some(&report))?;
    println!("wrote {} ({} records, checksum {})", a.out.display(), table.n_records(), table.checksum());
    Ok(())
}

fn response(a: ResponseArgs) -> Result<(), Failure> {
    let table = ModeTable::load(&a.table)?;
    let pair: DetectorPairSpec = match &a.config {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?).map_err(Error::Json)?,
        None => {
            let da = DetectorSpec { r: a.ra, gap: a.gap, coupling: a.coupling, width: a.width, center: 0.0 };
            let db = DetectorSpec { r: a.rb.unwrap_or(a.ra), center: a.delay, ..da };
            DetectorPairSpec { a: da, b: db, gamma: a.gamma, state: FieldState::parse(&a.state)? }
        }
    };
    let controls = ConvergenceControls { l_cut: a.l_cut.unwrap_or(table.grid.lmax), omega_cut: a.omega_cut, pairwise: true };
    let res = evaluate(&pair, &table, &controls)?;
    let doc = serde_json::json!({
        "code_version": modecache::CODE_VERSION,
        "table_checksum": table.checksum(),
        "pair": pair,
        "controls": controls,
        "response": res,
    });
    let text = serde_json::to_string_pretty(&doc).map_err(Error::Json)? + "\n";
    match a.out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    if res.diagnostics.tail_warning {
        log::warn!("l tail above threshold: last summand {:.3e} of the sum", res.diagnostics.last_l_relative);
    }
    Ok(())
}

fn base_spec(variable: SweepVariable) -> SweepSpec {
    let d = DetectorSpec { r: 6.009, gap: 5.0, coupling: 1.0, width: 1.0, center: 0.0 };
    SweepSpec {
        variable,
        range: [0.0, 0.0],
        points: 0,
        a: d,
        b: d,
        gamma: PI,
        proper_width: None,
        states: vec![FieldState::Boulware],
        output: None,
        json: false,
        controls: ConvergenceControls { l_cut: 40, omega_cut: None, pairwise: true },
        table: None,
        grid: FrequencyGrid::default(),
        solver: SolverOptions::default(),
        workers: 0,
    }
}

fn effective_spec(a: &SweepArgs) -> Result<SweepSpec, Failure> {
    let variable = a.variable.map(|v| match v {
        VariableArg::Gamma => SweepVariable::Gamma,
        VariableArg::Delay => SweepVariable::Delay,
        VariableArg::Radius => SweepVariable::Radius,
    });
    let mut spec = match &a.config {
        Some(p) => serde_json::from_str::<SweepSpec>(&fs::read_to_string(p)?).map_err(Error::Json)?,
        None => base_spec(variable.ok_or_else(|| Failure::Validation("--variable or --config is required".into()))?),
    };
    if let Some(v) = variable {
        spec.variable = v;
    }
    if let Some(r) = &a.range {
        if r.len() != 2 {
            return Err(Failure::Validation("--range takes start,end".into()));
        }
        spec.range = [r[0], r[1]];
    }
    if let Some(n) = a.points {
        spec.points = n;
    }
    if let Some(s) = &a.states {
        spec.states = s.iter().map(|x| FieldState::parse(x)).collect::<harvest_core::Result<_>>()?;
    }
    if let Some(g) = a.gamma {
        spec.gamma = g;
    }
    if let Some(d) = a.delay {
        spec.b.center = spec.a.center + d;
    }
    if let Some(r) = a.r {
        spec.a.r = r;
        spec.b.r = r;
    }
    if let Some(g) = a.gap {
        spec.a.gap = g;
        spec.b.gap = g;
    }
    if let Some(w) = a.width {
        spec.a.width = w;
        spec.b.width = w;
    }
    if a.proper_width.is_some() {
        spec.proper_width = a.proper_width;
    }
    if a.table.is_some() {
        spec.table = a.table.clone();
    }
    if let Some(l) = a.l_cut {
        spec.controls.l_cut = l;
    }
    if a.omega_cut.is_some() {
        spec.controls.omega_cut = a.omega_cut;
    }
    if let Some(w) = a.omega_max {
        spec.grid.omega_max = w;
    }
    if let Some(w) = a.omega_step {
        spec.grid.omega_step = w;
    }
    if a.out.is_some() {
        spec.output = a.out.clone();
    }
    if a.json {
        spec.json = true;
    }
    if let Some(w) = a.workers {
        spec.workers = w;
    }
    spec.validate()?;
    Ok(spec)
}

fn sweep(a: SweepArgs) -> Result<(), Failure> {
    let spec = effective_spec(&a)?;
    let out = spec.output.clone().ok_or_else(|| Failure::Validation("no output path (--out or \"output\")".into()))?;
    let table = harness::obtain_table(&spec)?;
    let header = harness::RunHeader::new(&table, &spec.controls);
    match spec.variable {
        SweepVariable::Delay => {
            let r = harness::run_delay_sweep(&spec, &table)?;
            harness::write_sweep(&out, &spec, &header, &r.sweep, Some(&r.peaks))?;
            report_tails(&r.sweep);
        }
        _ => {
            let r = harness::run_sweep(&spec, &table)?;
            harness::write_sweep(&out, &spec, &header, &r, None)?;
            report_tails(&r);
        }
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn report_tails(r: &harness::SweepResult) {
    let n = r.rows.iter().filter(|row| row.tail_warning).count();
    if n > 0 {
        log::warn!("{n} of {} rows carry an l-tail warning", r.rows.len());
    }
}

fn geodesic(a: GeodesicArgs) -> Result<(), Failure> {
    let branches = a
        .branches
        .iter()
        .map(|b| match b.as_str() {
            "primary" => Ok(GeodesicBranch::Primary),
            "secondary" => Ok(GeodesicBranch::Secondary),
            "tertiary" => Ok(GeodesicBranch::Tertiary),
            _ => Err(Error::Domain(format!("unknown branch '{b}'"))),
        })
        .collect::<harvest_core::Result<Vec<_>>>()?;
    let radii = harness::linspace(a.r_min, a.r_max, a.points);
    let rows = harness::run_geodesic_curve(&SpacetimeParams::default(), &radii, a.gamma, &branches)?;
    match a.out {
        Some(p) => harness::write_geodesic(&p, &rows)?,
        None => print!("{}", harness::geodesic_csv(&rows)),
    }
    Ok(())
}

fn validate(a: ValidateArgs) -> Result<(), Failure> {
    let suite = match a.suite {
        SuiteArg::Windows => Suite::Windows,
        SuiteArg::Negativity => Suite::Negativity,
        SuiteArg::Modes => Suite::Modes,
        SuiteArg::Quadrature => Suite::Quadrature,
        SuiteArg::All => Suite::All,
    };
    let table = a.table.as_deref().map(load_for_audit).transpose()?;
    let opts = SuiteOptions { window_samples: a.samples, seed: a.seed, table: table.as_ref(), ..Default::default() };
    let rep = run_suite(suite, &opts)?;
    for e in &rep.entries {
        println!("{e}");
    }
    if rep.passed() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("{} of {} checks failed", rep.failures(), rep.entries.len())))
    }
}

fn load_for_audit(p: &Path) -> harvest_core::Result<ModeTable> {
    ModeTable::load_unaudited(p)
}
