//! Command-line interface: solve, certify, plot, bench, and generators.
//!
//! Exit codes: 0 on success, 2 on unreadable or invalid input files (the
//! message includes the parse location), 3 when a feasibility guard
//! refuses the computation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use touring::approx::{solve_instance, Algorithm};
use touring::bench::{run_grid, to_csv, BenchCell};
use touring::certify::{dual_certificate, refine_local, reflection_residual};
use touring::gen::{gen_random_disjoint_balls, gen_tangent_construction, RadiusLaw};
use touring::geom::Instance;
use touring::io::{
    read_instance_file, read_result_file, write_instance_file, write_result_file, InstanceFile,
    IoError, ResultFile,
};
use touring::svg::render;

#[derive(Parser)]
#[command(name = "touring", version, about = "Approximate shortest tours through ordered regions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write the tour as a result file.
    Solve(SolveArgs),
    /// Check a result against its instance: validity, residual, dual bound.
    Certify(CertifyArgs),
    /// Render a 2D instance (and optional tour) as SVG.
    Plot(PlotArgs),
    /// Run a benchmark grid of random ball instances and emit CSV.
    Bench(BenchArgs),
    /// Generate a random disjoint-ball instance file.
    GenBalls(GenBallsArgs),
    /// Generate the tangent-disk construction with radii 1/i.
    GenTangent(GenTangentArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file to solve.
    instance: PathBuf,
    /// Relative accuracy; defaults to the instance file's eps, then 0.1.
    #[arg(long)]
    eps: Option<f64>,
    /// Pipeline to use.
    #[arg(long, default_value = "auto")]
    algorithm: Algorithm,
    /// Where to write the result file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also refine the tour and attach a dual lower bound (ball instances).
    #[arg(long)]
    certify: bool,
}

#[derive(Args)]
struct CertifyArgs {
    instance: PathBuf,
    result: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    instance: PathBuf,
    /// Result file with the tour to overlay (optional).
    result: Option<PathBuf>,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance sizes, e.g. --n 10 --n 100.
    #[arg(long = "n", required = false)]
    sizes: Vec<usize>,
    /// Accuracies, e.g. --eps 0.16 --eps 0.04.
    #[arg(long, required = false)]
    eps: Vec<f64>,
    #[arg(long, default_value = "balls")]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenBallsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Radius law: "unit" or "uniform:MIN:MAX".
    #[arg(long, default_value = "unit")]
    radii: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenTangentArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Errors mapped to exit codes: input problems → 2, guards → 3.
enum CliError {
    Input(String),
    Guard(String),
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<touring::approx::ApproxError> for CliError {
    fn from(e: touring::approx::ApproxError) -> Self {
        CliError::Guard(e.to_string())
    }
}

impl From<touring::certify::CertifyError> for CliError {
    fn from(e: touring::certify::CertifyError) -> Self {
        CliError::Guard(e.to_string())
    }
}

impl From<touring::gen::GenError> for CliError {
    fn from(e: touring::gen::GenError) -> Self {
        CliError::Guard(e.to_string())
    }
}

impl From<touring::svg::SvgError> for CliError {
    fn from(e: touring::svg::SvgError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<touring::bench::BenchError> for CliError {
    fn from(e: touring::bench::BenchError) -> Self {
        CliError::Guard(e.to_string())
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<(InstanceFile, Instance), CliError> {
    let file = read_instance_file(path)?;
    let instance = file.to_instance()?;
    Ok((file, instance))
}

fn cmd_solve(args: &SolveArgs) -> Result<(), CliError> {
    let (file, instance) = load(&args.instance)?;
    let eps = args.eps.or(file.eps).unwrap_or(0.1);
    let clock = Instant::now();
    let (mut tour, counts) = solve_instance(&instance, eps, args.algorithm)?;
    let mut result = ResultFile::new(&tour, 0.0);
    if args.certify && instance.all_balls() {
        let refined = refine_local(&instance, &tour, 1e-10, 2000)?;
        if refined.tour.length < tour.length {
            tour = refined.tour;
            result.length = tour.length;
            result.tour = tour.points.clone();
        }
        let cert = dual_certificate(&instance, &tour)?;
        result.lower_bound = Some(cert.bound);
        if cert.bound > 0.0 {
            result.ratio = Some(tour.length / cert.bound);
        }
    }
    result.wall_time_ms = clock.elapsed().as_secs_f64() * 1e3;
    result.candidate_counts = counts;
    write_or_print_result(args.out.as_deref(), &result)?;
    eprintln!("length {:.9} (eps {eps}, {} points)", tour.length, tour.points.len());
    Ok(())
}

fn write_or_print_result(out: Option<&Path>, result: &ResultFile) -> Result<(), CliError> {
    match out {
        Some(path) => {
            write_result_file(path, result)?;
            Ok(())
        }
        None => {
            print!("{}", touring::io::write_result(result));
            Ok(())
        }
    }
}

fn cmd_certify(args: &CertifyArgs) -> Result<(), CliError> {
    let (_, instance) = load(&args.instance)?;
    let result = read_result_file(&args.result)?;
    let tour = result.to_tour();
    if tour.points.len() != instance.n() + 2 {
        return Err(CliError::Input(format!(
            "tour has {} points but the instance needs {}",
            tour.points.len(),
            instance.n() + 2
        )));
    }
    match tour.violation(&instance, 1e-7) {
        None => println!("validity: ok"),
        Some(i) => {
            println!("validity: FAILED at region index {i}");
            return Err(CliError::Guard(format!("tour misses region {i}")));
        }
    }
    println!("length: {:.9}", tour.length);
    if instance.all_balls() {
        let residual = reflection_residual(&instance, &tour)?;
        println!("max reflection residual: {:.3e}", residual.max_residual);
        let cert = dual_certificate(&instance, &tour)?;
        println!("dual lower bound: {:.9}", cert.bound);
        if cert.bound > 0.0 {
            println!("ratio upper bound: {:.9}", tour.length / cert.bound);
        } else {
            println!("ratio upper bound: 1.000000000 (zero-length certificate)");
        }
    } else {
        println!("(validity-only report: dual certification needs a ball instance)");
    }
    Ok(())
}

fn cmd_plot(args: &PlotArgs) -> Result<(), CliError> {
    let (_, instance) = load(&args.instance)?;
    let tour = match &args.result {
        Some(path) => Some(read_result_file(path)?.to_tour()),
        None => None,
    };
    let svg = render(&instance, tour.as_ref())?;
    emit(Some(&args.out), &svg)
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let mut cells = Vec::new();
    for &n in &args.sizes {
        for &eps in &args.eps {
            cells.push(BenchCell {
                n,
                eps,
                algorithm: args.algorithm,
            });
        }
    }
    let rows = run_grid(&cells, args.seed)?;
    emit(args.out.as_deref(), &to_csv(&rows))
}

fn parse_radius_law(spec: &str) -> Result<RadiusLaw, CliError> {
    if spec == "unit" {
        return Ok(RadiusLaw::Unit);
    }
    if let Some(rest) = spec.strip_prefix("uniform:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() == 2 {
            let min: f64 = parts[0].parse().map_err(|_| {
                CliError::Input(format!("bad radius bound {:?}", parts[0]))
            })?;
            let max: f64 = parts[1].parse().map_err(|_| {
                CliError::Input(format!("bad radius bound {:?}", parts[1]))
            })?;
            return Ok(RadiusLaw::Uniform { min, max });
        }
    }
    Err(CliError::Input(format!(
        "bad radius law {spec:?} (expected \"unit\" or \"uniform:MIN:MAX\")"
    )))
}

fn cmd_gen_balls(args: &GenBallsArgs) -> Result<(), CliError> {
    let law = parse_radius_law(&args.radii)?;
    let instance = gen_random_disjoint_balls(args.n, args.dim, args.seed, law)?;
    write_instance(args.out.as_deref(), &instance)
}

fn cmd_gen_tangent(args: &GenTangentArgs) -> Result<(), CliError> {
    if args.n == 0 {
        return Err(CliError::Input("tangent construction needs n >= 1".into()));
    }
    let instance = gen_tangent_construction(args.n);
    write_instance(args.out.as_deref(), &instance)
}

fn write_instance(out: Option<&Path>, instance: &Instance) -> Result<(), CliError> {
    let file = InstanceFile::from_instance(instance, None);
    match out {
        Some(path) => {
            write_instance_file(path, &file)?;
            Ok(())
        }
        None => {
            print!("{}", touring::io::write_instance(&file));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Certify(args) => cmd_certify(args),
        Command::Plot(args) => cmd_plot(args),
        Command::Bench(args) => cmd_bench(args),
        Command::GenBalls(args) => cmd_gen_balls(args),
        Command::GenTangent(args) => cmd_gen_tangent(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
