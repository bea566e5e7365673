//! Command-line front end for the hysteresis experiments.
//!
//! Exit status: 0 on success, 1 when a solver fails, 2 for bad arguments or
//! unreadable inputs.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vector_hysteresis::experiments::{
    bench, benchmark_material, eps_sweep_with, roundtrip, run_loop, BenchMethod, ExcitationKind, ExcitationSequence,
};
use vector_hysteresis::{io as hio, FieldVector, HysteresisError, MaterialModel, NewtonDirectionMethod, OperatorMode, SolverConfig};

#[derive(Parser)]
#[command(name = "hysteresis", version, about = "Energy-based vector hysteresis experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time-step a forward or inverse loop and write the trajectory CSV.
    Loop(LoopArgs),
    /// Regularization error against the tiny-eps reference for a list of eps.
    SweepEps(SweepArgs),
    /// Forward loop followed by inverse replay of its fluxes.
    Roundtrip(RoundtripArgs),
    /// Wall time and mean Newton iterations per (K, method).
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolverArgs {
    /// JSON file with solver settings; flags given here take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
}

impl SolverArgs {
    fn resolve(&self) -> Result<SolverConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => hio::read_config(open(path)?).map_err(Failure::usage)?,
            None => SolverConfig::default(),
        };
        if let Some(v) = self.eps {
            cfg.eps = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.rho {
            cfg.rho = v;
        }
        if let Some(v) = self.sigma {
            cfg.sigma = v;
        }
        cfg.validate().map_err(Failure::usage)?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct MaterialArgs {
    /// Number of pinning cells of the benchmark material.
    #[arg(long = "K", default_value_t = 20)]
    k: usize,
    /// JSON file with explicit cells; overrides --K.
    #[arg(long)]
    material: Option<PathBuf>,
}

impl MaterialArgs {
    fn resolve(&self) -> Result<MaterialModel, Failure> {
        match &self.material {
            Some(path) => hio::read_material(open(path)?).map_err(Failure::usage),
            None => benchmark_material(self.k).map_err(Failure::usage),
        }
    }
}

#[derive(Args)]
struct ExcitationArgs {
    /// uni, rot, or file (reads the H columns of --input-h).
    #[arg(long, default_value = "uni")]
    excitation: ExcitationKind,
    #[arg(long, default_value_t = 500)]
    steps: usize,
    /// CSV with Hx[,Hy[,Hz]] columns.
    #[arg(long)]
    input_h: Option<PathBuf>,
}

#[derive(Args)]
struct LoopArgs {
    #[arg(long, default_value = "forward")]
    mode: OperatorMode,
    #[command(flatten)]
    excitation: ExcitationArgs,
    /// CSV with Bx[,By[,Bz]] columns for inverse mode. Without it the fluxes
    /// come from a forward loop over the excitation with the same settings.
    #[arg(long)]
    input_b: Option<PathBuf>,
    #[command(flatten)]
    material: MaterialArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value = "schur")]
    method: NewtonDirectionMethod,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    excitation: ExcitationArgs,
    #[command(flatten)]
    material: MaterialArgs,
    /// Strictly descending list, e.g. 1e-2,1e-3,1e-4.
    #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4,1e-5,1e-6,1e-7,1e-8")]
    eps: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RoundtripArgs {
    #[command(flatten)]
    excitation: ExcitationArgs,
    #[command(flatten)]
    material: MaterialArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value = "schur")]
    method: NewtonDirectionMethod,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long = "K", value_delimiter = ',', default_value = "5,10,20,50,100")]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "forward,inverse-dense,inverse-schur")]
    methods: Vec<BenchMethod>,
    #[arg(long, default_value = "uni")]
    excitation: ExcitationKind,
    #[arg(long, default_value_t = 500)]
    steps: usize,
    /// Timed runs per cell after one warm-up; the fastest is reported.
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    error: HysteresisError,
}

impl Failure {
    fn usage(error: HysteresisError) -> Self {
        Failure { code: 2, error }
    }
}

impl From<HysteresisError> for Failure {
    fn from(error: HysteresisError) -> Self {
        let code = match error.root() {
            HysteresisError::InvalidParameter(_) | HysteresisError::Format(_) => 2,
            _ => 1,
        };
        Failure { code, error }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::usage(HysteresisError::Format(format!("{}: {e}", path.display()))))
}

fn write_output(out: &Option<PathBuf>, emit: impl FnOnce(&mut dyn Write) -> vector_hysteresis::Result<()>) -> Result<(), Failure> {
    let io_err = |p: &Path, e: io::Error| Failure::usage(HysteresisError::Format(format!("{}: {e}", p.display())));
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_err(path, e))?;
            let mut w = BufWriter::new(file);
            emit(&mut w)?;
            w.flush().map_err(|e| io_err(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            emit(&mut w)?;
            Ok(())
        }
    }
}

/// Field dimension of a file's `prefix` columns.
fn file_dimension(path: &Path, prefix: &str) -> Result<usize, Failure> {
    let headers = hio::read_headers(open(path)?).map_err(Failure::usage)?;
    match hio::field_dimension(&headers, prefix) {
        0 => Err(Failure::usage(HysteresisError::Format(format!(
            "{}: no {prefix}x column",
            path.display()
        )))),
        d => Ok(d),
    }
}

fn read_samples<const D: usize>(path: &Path, prefix: &str) -> Result<Vec<FieldVector<D>>, Failure> {
    let samples = hio::read_field_column::<_, D>(open(path)?, prefix).map_err(Failure::usage)?;
    if samples.is_empty() {
        return Err(Failure::usage(HysteresisError::Format(format!("{}: no data rows", path.display()))));
    }
    Ok(samples)
}

/// Dimension of the loop: from the input file when one is read, else 2.
fn excitation_dimension(args: &ExcitationArgs) -> Result<usize, Failure> {
    match args.excitation {
        ExcitationKind::File => file_dimension(required(&args.input_h, "--input-h")?, "H"),
        _ => Ok(2),
    }
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, Failure> {
    path.as_deref().ok_or_else(|| {
        Failure::usage(HysteresisError::InvalidParameter(format!("--excitation file requires {flag}")))
    })
}

fn excitation<const D: usize>(args: &ExcitationArgs) -> Result<Vec<FieldVector<D>>, Failure> {
    match args.excitation {
        ExcitationKind::File => read_samples(required(&args.input_h, "--input-h")?, "H"),
        kind => {
            if args.steps == 0 {
                return Err(Failure::usage(HysteresisError::InvalidParameter("--steps must be at least 1".into())));
            }
            let seq = ExcitationSequence::<2>::generate(kind, args.steps).map_err(Failure::usage)?;
            // generated excitations are planar; embed them in the first two axes
            Ok(seq
                .samples
                .iter()
                .map(|h| FieldVector::<D>::from_fn(|i, _| if i < 2 { h[i] } else { 0.0 }))
                .collect())
        }
    }
}

fn cmd_loop(args: &LoopArgs) -> Result<(), Failure> {
    let d = match (&args.mode, &args.input_b) {
        (OperatorMode::Inverse, Some(path)) => file_dimension(path, "B")?,
        _ => excitation_dimension(&args.excitation)?,
    };
    match d {
        1 => run_loop_cmd::<1>(args),
        2 => run_loop_cmd::<2>(args),
        _ => run_loop_cmd::<3>(args),
    }
}

fn run_loop_cmd<const D: usize>(args: &LoopArgs) -> Result<(), Failure> {
    let model = args.material.resolve()?;
    let cfg = args.solver.resolve()?;
    let inputs = match (args.mode, &args.input_b) {
        (OperatorMode::Forward, _) => excitation::<D>(&args.excitation)?,
        (OperatorMode::Inverse, Some(path)) => read_samples::<D>(path, "B")?,
        (OperatorMode::Inverse, None) => {
            let h = excitation::<D>(&args.excitation)?;
            run_loop(&model, &cfg, &h, OperatorMode::Forward, args.method)?.fluxes()
        }
    };
    let record = run_loop(&model, &cfg, &inputs, args.mode, args.method)?;
    write_output(&args.out, |w| hio::write_trajectory(w, &record))
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    match excitation_dimension(&args.excitation)? {
        1 => run_sweep::<1>(args),
        2 => run_sweep::<2>(args),
        _ => run_sweep::<3>(args),
    }
}

fn run_sweep<const D: usize>(args: &SweepArgs) -> Result<(), Failure> {
    let model = args.material.resolve()?;
    let h = excitation::<D>(&args.excitation)?;
    let rows = eps_sweep_with(&model, &h, &args.eps)?;
    write_output(&args.out, |w| hio::write_sweep(w, &rows))
}

fn cmd_roundtrip(args: &RoundtripArgs) -> Result<(), Failure> {
    match excitation_dimension(&args.excitation)? {
        1 => run_roundtrip::<1>(args),
        2 => run_roundtrip::<2>(args),
        _ => run_roundtrip::<3>(args),
    }
}

fn run_roundtrip<const D: usize>(args: &RoundtripArgs) -> Result<(), Failure> {
    let model = args.material.resolve()?;
    let cfg = args.solver.resolve()?;
    let h = excitation::<D>(&args.excitation)?;
    let report = roundtrip(&model, &cfg, &h, args.method)?;
    write_output(&args.out, |w| hio::write_roundtrip(w, &report))
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    if args.excitation == ExcitationKind::File {
        return Err(Failure::usage(HysteresisError::InvalidParameter(
            "bench uses generated excitations (uni or rot)".into(),
        )));
    }
    let cfg = args.solver.resolve()?;
    let seq = ExcitationSequence::<2>::generate(args.excitation, args.steps).map_err(Failure::usage)?;
    let rows = bench(&args.k, &args.methods, &seq.samples, &cfg, args.repeats)?;
    write_output(&args.out, |w| hio::write_bench(w, &rows))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Loop(args) => cmd_loop(args),
        Command::SweepEps(args) => cmd_sweep(args),
        Command::Roundtrip(args) => cmd_roundtrip(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("hysteresis: {}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}
