use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use serde_json::json;

use qjsd::anneal::{run_anneal, AnnealSchedule, ObjectiveKind};
use qjsd::audit::{run_audit, AuditConfig, DEFAULT_BIN_WIDTH, DEFAULT_TAIL_MAX, DEFAULT_TOLERANCE};
use qjsd::divergences::{
    d_h_closed_form, djs1_lower_bound, fidelity, hilbert_schmidt_distance, pure_triangle_scan, qjsd, qjsd_spectral,
    qjsd_sqrt, wootters_distance, DEFAULT_X_POINTS,
};
use qjsd::states::{read_state_json, state_json_value, write_state_json, StateSampler};
use qjsd::{DensityMatrix, Error, PureState};

const EXIT_COUNTEREXAMPLE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_SOFTWARE: u8 = 70;
const EXIT_IO: u8 = 74;

/// Quantum Jensen-Shannon divergence toolkit.
///
/// Verbosity is controlled by the QJSD_LOG environment variable
/// (error, warn, info, debug, trace).
#[derive(Parser)]
#[command(name = "qjsd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo audit of the triangle inequality for sqrt(QJSD).
    Audit(AuditArgs),
    /// Simulated-annealing search for the smallest triangle defect.
    Anneal(AnnealArgs),
    /// Distance table between two state files.
    Compare(CompareArgs),
    /// Draw random states from the product of Haar and simplex measures.
    Sample(SampleArgs),
    /// Grid scan of the pure-state triangle function G.
    Purescan(PurescanArgs),
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
    bin_width: f64,
    #[arg(long, default_value_t = DEFAULT_TAIL_MAX)]
    tail_max: f64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Keep only states with linear entropy at least this value.
    #[arg(long)]
    mixedness_floor: Option<f64>,
    /// Directory receiving histogram.csv and report.json; the report goes to
    /// stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnnealArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value = "symmetrized", value_parser = parse_objective)]
    objective: ObjectiveKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    #[arg(long, default_value_t = 1.0)]
    t_initial: f64,
    #[arg(long, default_value_t = 1e-6)]
    t_final: f64,
    #[arg(long, default_value_t = 0.95)]
    cooling_ratio: f64,
    /// Defaults to 200 times the number of parameters.
    #[arg(long)]
    steps_per_temperature: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    proposal_scale_ratio: f64,
    /// Output file; stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    first: PathBuf,
    second: PathBuf,
    /// Random bases tried by the measured-JSD lower bound.
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    mixedness_floor: Option<f64>,
    /// Directory receiving state_<k>.json files; a JSON array goes to stdout
    /// otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PurescanArgs {
    #[arg(long, default_value_t = 25)]
    grid_steps: usize,
    #[arg(long, default_value_t = DEFAULT_X_POINTS)]
    x_points: usize,
}

fn parse_objective(s: &str) -> Result<ObjectiveKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Core(Error),
    Io(PathBuf, io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(..) => EXIT_IO,
            Failure::Core(Error::InvalidConfig(_)) => EXIT_USAGE,
            Failure::Core(Error::Parse(_) | Error::DimMismatch(..)) => EXIT_DATA,
            Failure::Core(
                Error::NotHermitian(_)
                | Error::InvalidTrace(_)
                | Error::NotPositive(_)
                | Error::NonFinite
                | Error::NotSquare { .. },
            ) => EXIT_DATA,
            Failure::Core(_) => EXIT_SOFTWARE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn create_dir(path: &Path) -> Result<(), Failure> {
    fs::create_dir_all(path).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn print(text: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    writeln!(out, "{text}").map_err(|e| Failure::Io("<stdout>".into(), e))
}

fn cmd_audit(a: AuditArgs) -> Outcome {
    let config = AuditConfig {
        dim: a.dim,
        samples: a.samples,
        seed: a.seed,
        bin_width: a.bin_width,
        tail_max: a.tail_max,
        tolerance: a.tolerance,
        mixedness_floor: a.mixedness_floor,
        workers: a.workers,
    };
    let report = run_audit(&config)?;
    info!(
        "dim {} samples {}: violations {}, min defect {:e}",
        report.dim, report.samples, report.violations, report.min_defect
    );
    match &a.out {
        Some(dir) => {
            create_dir(dir)?;
            write_file(&dir.join("histogram.csv"), &report.histogram.to_csv())?;
            write_file(&dir.join("report.json"), &report.to_json())?;
        }
        None => print(&report.to_json())?,
    }
    if report.violations > 0 {
        warn!("{} triangle violations found", report.violations);
        return Ok(EXIT_COUNTEREXAMPLE);
    }
    Ok(0)
}

fn cmd_anneal(a: AnnealArgs) -> Outcome {
    let schedule = AnnealSchedule {
        t_initial: a.t_initial,
        t_final: a.t_final,
        cooling_ratio: a.cooling_ratio,
        steps_per_temperature: a.steps_per_temperature,
        proposal_scale_ratio: a.proposal_scale_ratio,
    };
    let result = run_anneal(a.objective, a.dim, &schedule, a.seed, a.restarts)?;
    let mixed = DensityMatrix::maximally_mixed(a.dim);
    for (name, state) in ["rho", "xi", "sigma"].iter().zip(&result.decoded_states) {
        let d = hilbert_schmidt_distance(state.hermitian(), mixed.hermitian())?;
        info!("{name}: Hilbert-Schmidt distance to I/N = {d:e}");
    }
    let json = result.to_json();
    match &a.out {
        Some(path) => write_file(path, &json)?,
        None => print(&json)?,
    }
    if result.best_objective < -DEFAULT_TOLERANCE {
        return Ok(EXIT_COUNTEREXAMPLE);
    }
    Ok(0)
}

fn read_state(path: &Path) -> Result<DensityMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))?;
    read_state_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
    .map_err(Failure::from)
}

/// Eigenvector of the largest eigenvalue.
fn dominant_vector(rho: &DensityMatrix) -> Result<PureState, Error> {
    PureState::normalized(rho.eigen().vector(rho.dim() - 1))
}

fn cmd_compare(a: CompareArgs) -> Outcome {
    let rho = read_state(&a.first)?;
    let sigma = read_state(&a.second)?;
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch(rho.dim(), sigma.dim()).into());
    }
    let mut table = json!({
        "qjsd": qjsd(&rho, &sigma)?,
        "qjsd_spectral": qjsd_spectral(&rho, &sigma)?,
        "qjsd_sqrt": qjsd_sqrt(&rho, &sigma)?,
        "hilbert_schmidt": hilbert_schmidt_distance(rho.hermitian(), sigma.hermitian())?,
        "fidelity": fidelity(&rho, &sigma)?,
        "d_h_closed_form": d_h_closed_form(&rho, &sigma)?,
        "djs1_lower_bound": djs1_lower_bound(&rho, &sigma, a.restarts, a.seed)?,
    });
    if rho.is_pure() && sigma.is_pure() {
        let w = wootters_distance(&dominant_vector(&rho)?, &dominant_vector(&sigma)?)?;
        table["wootters"] = json!(w);
    }
    print(&serde_json::to_string_pretty(&table).expect("table serializes"))?;
    Ok(0)
}

fn cmd_sample(a: SampleArgs) -> Outcome {
    if a.dim == 0 {
        return Err(Error::InvalidConfig("dimension must be positive".into()).into());
    }
    let mut sampler = StateSampler::new(a.dim, a.seed).with_mixedness_floor(a.mixedness_floor)?;
    let states = (0..a.samples)
        .map(|_| sampler.sample_state::<f64>())
        .collect::<Result<Vec<_>, _>>()?;
    match &a.out {
        Some(dir) => {
            create_dir(dir)?;
            let width = a.samples.saturating_sub(1).to_string().len().max(4);
            for (k, rho) in states.iter().enumerate() {
                write_file(&dir.join(format!("state_{k:0width$}.json")), &write_state_json(rho))?;
            }
        }
        None => {
            let values: Vec<_> = states.iter().map(state_json_value).collect();
            print(&serde_json::to_string(&values).expect("states serialize"))?;
        }
    }
    Ok(0)
}

fn cmd_purescan(a: PurescanArgs) -> Outcome {
    let r = pure_triangle_scan::<f64>(a.grid_steps, a.x_points)?;
    let report = json!({
        "grid_steps": a.grid_steps,
        "x_points": a.x_points,
        "evaluated": r.evaluated,
        "min_g": r.min_g,
        "x": r.x,
        "y": r.y,
        "z": r.z,
        "a": [r.a.re, r.a.im],
        "b": [r.b.re, r.b.im],
    });
    print(&serde_json::to_string_pretty(&report).expect("scan serializes"))?;
    if r.min_g < -1e-12 {
        return Ok(EXIT_COUNTEREXAMPLE);
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QJSD_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let outcome = match cli.command {
        Command::Audit(a) => cmd_audit(a),
        Command::Anneal(a) => cmd_anneal(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Purescan(a) => cmd_purescan(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("qjsd: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
