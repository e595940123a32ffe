//! `h1flow` command-line driver.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on runtime errors
//! (invalid input, length guard, numerical failure).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use h1flow::io::{curve_to_csv, fmt_float, frames_to_svg, path_to_json, trajectory_to_json, write_curve, write_diagnostics_csv};
use h1flow::{
    generate, path_length_l2ds, reparam_path, run_flow, shrink_path, zigzag_path, CircleSolution, Config, Curve,
    CurvePath, FlowError, GeneratorSpec, Method, PathMode, ShapeKind, Termination, Twist, Vec2,
};

#[derive(Parser)]
#[command(name = "h1flow", version, about = "H1(ds) gradient flow of length for closed polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the flow and write diagnostics, frames and states.
    Flow(FlowArgs),
    /// Exact radius of a shrinking circle.
    Oracle(OracleArgs),
    /// L2(ds) path lengths of the vanishing-distance constructions.
    Distance(DistanceArgs),
    /// Write a generated curve to a file.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Circle,
    Square,
    Ellipse,
    Barbell,
    Star,
}

impl From<Shape> for ShapeKind {
    fn from(s: Shape) -> Self {
        match s {
            Shape::Circle => ShapeKind::Circle,
            Shape::Square => ShapeKind::Square,
            Shape::Ellipse => ShapeKind::Ellipse,
            Shape::Barbell => ShapeKind::Barbell,
            Shape::Star => ShapeKind::Star,
        }
    }
}

#[derive(Args)]
struct ShapeArgs {
    #[arg(long, value_enum, default_value = "circle")]
    shape: Shape,
    /// Radius, side length or major semi-axis.
    #[arg(long, default_value_t = 1.0)]
    size: f64,
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Ellipse minor over major semi-axis.
    #[arg(long, default_value_t = 0.5)]
    aspect: f64,
    /// Barbell neck half-width relative to --size.
    #[arg(long, default_value_t = 0.25)]
    neck: f64,
    /// Read the initial curve from a CSV or JSON file instead.
    #[arg(long, conflicts_with = "shape")]
    input: Option<PathBuf>,
}

impl ShapeArgs {
    fn curve(&self) -> h1flow::Result<Curve> {
        let spec = match &self.input {
            Some(p) => GeneratorSpec::file(p),
            None => GeneratorSpec {
                aspect: self.aspect,
                neck: self.neck,
                ..GeneratorSpec::new(self.shape.into(), self.size, self.n)
            },
        };
        generate(&spec)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Euler,
    Rk4,
}

#[derive(Args)]
struct FlowArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    /// Number of steps; sets t1 = t0 + steps * dt.
    #[arg(long, conflicts_with = "t1")]
    steps: Option<usize>,
    /// Final time; may lie before --t0 for a backward run.
    #[arg(long, allow_hyphen_values = true)]
    t1: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t0: f64,
    #[arg(long, value_enum, default_value = "euler")]
    method: MethodArg,
    #[arg(long, default_value_t = 1)]
    record_every: usize,
    /// Report the asymptotic profile e^t (X - X_0) instead of X.
    #[arg(long)]
    rescale: bool,
    /// Diagnostics CSV; written to stdout when omitted.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    /// Recorded states as JSON.
    #[arg(long)]
    out_json: Option<PathBuf>,
    /// Stop once the length falls below this value.
    #[arg(long, default_value_t = 1e-8)]
    guard: f64,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, allow_hyphen_values = true)]
    r0: f64,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Shrink,
    Reparam,
    Zigzag,
}

#[derive(Args)]
struct DistanceArgs {
    #[arg(long, value_enum)]
    demo: Demo,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long, default_value_t = 4)]
    teeth: usize,
    #[arg(long, default_value_t = 33)]
    frames: usize,
    /// Vertices of the unit circle the paths start from.
    #[arg(long, default_value_t = 128)]
    n: usize,
    /// Write the (last) path as JSON.
    #[arg(long)]
    out_json: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// `.json` for JSON, anything else for CSV; stdout (CSV) when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runtime failure, reported with exit status 2.
struct Failure(String);

impl From<FlowError> for Failure {
    fn from(e: FlowError) -> Self {
        Failure(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(e.to_string())
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn run_flow_cmd(a: &FlowArgs) -> Result<(), Failure> {
    let initial = a.shape.curve()?;
    let t1 = match (a.steps, a.t1) {
        (Some(k), _) => a.t0 + k as f64 * a.dt,
        (None, Some(t1)) => t1,
        (None, None) => a.t0 + 1.0,
    };
    let method = match a.method {
        MethodArg::Euler => Method::Euler,
        MethodArg::Rk4 => Method::Rk4,
    };
    let mut cfg = Config::new(a.dt, a.t0, t1, method).record_every(a.record_every);
    cfg.min_length_guard = a.guard;
    if a.rescale {
        cfg = cfg.with_profile();
    }
    let traj = run_flow(&initial, &cfg)?;
    let shown = match (&traj.profile, a.rescale) {
        (Some(p), true) => p.as_ref(),
        _ => &traj,
    };
    match &a.out_csv {
        Some(p) => {
            let mut w = create(p)?;
            write_diagnostics_csv(&mut w, &shown.records)?;
            w.flush()?;
        }
        None => write_diagnostics_csv(io::stdout().lock(), &shown.records)?,
    }
    if let Some(p) = &a.out_svg {
        std::fs::write(p, frames_to_svg(&shown.times, &shown.states))?;
    }
    if let Some(p) = &a.out_json {
        std::fs::write(p, trajectory_to_json(shown))?;
    }
    let (t_end, end) = traj.last().expect("initial state is recorded");
    log::info!("{} states, t = {t_end}, length = {}", traj.len(), end.total_length());
    match traj.termination {
        Termination::Completed => Ok(()),
        Termination::LengthGuard => Err(Failure(format!("length guard reached at t = {t_end}"))),
        Termination::NumericalFailure => Err(Failure(format!("numerical failure after t = {t_end}"))),
    }
}

fn run_oracle(a: &OracleArgs) -> Result<(), Failure> {
    let sol = CircleSolution::new(a.r0)?;
    println!("{}", fmt_float(sol.radius(a.t)));
    Ok(())
}

fn unit_circle(n: usize) -> h1flow::Result<Curve> {
    generate(&GeneratorSpec::new(ShapeKind::Circle, 1.0, n))
}

fn run_distance(a: &DistanceArgs) -> Result<(), Failure> {
    let circle = unit_circle(a.n)?;
    let mut out = io::stdout().lock();
    let last: CurvePath<f64> = match a.demo {
        Demo::Shrink => {
            let p = shrink_path(&circle, a.lambda, a.frames)?;
            writeln!(out, "full,{}", fmt_float(path_length_l2ds(&p)?))?;
            p
        }
        Demo::Reparam => {
            // shrink, rotate half a turn by a monotone twist, grow back
            let down = shrink_path(&circle, a.lambda, a.frames)?;
            let small = circle.scaled(a.lambda);
            let half = a.n as f64 / 2.0;
            let twist = Twist { displacement: vec![half; a.n] };
            let turn = reparam_path(&small, &twist, a.frames)?;
            let up = down.reversed();
            let legs = [path_length_l2ds(&down)?, path_length_l2ds(&turn)?, path_length_l2ds(&up)?];
            writeln!(out, "shrink,{}", fmt_float(legs[0]))?;
            writeln!(out, "reparam,{}", fmt_float(legs[1]))?;
            writeln!(out, "grow,{}", fmt_float(legs[2]))?;
            writeln!(out, "total,{}", fmt_float(legs.iter().sum::<f64>()))?;
            turn
        }
        Demo::Zigzag => {
            let base = CurvePath::new(vec![circle.clone(), circle.translated(Vec2::new(3.0, 0.0))], PathMode::Full)?;
            let z = zigzag_path(&base, a.teeth, a.frames)?;
            writeln!(out, "base_full,{}", fmt_float(path_length_l2ds(&base)?))?;
            writeln!(
                out,
                "base_quotient,{}",
                fmt_float(path_length_l2ds(&base.clone().with_mode(PathMode::Quotient))?)
            )?;
            writeln!(out, "zigzag_quotient,{}", fmt_float(path_length_l2ds(&z)?))?;
            z
        }
    };
    if let Some(p) = &a.out_json {
        std::fs::write(p, path_to_json(&last))?;
    }
    Ok(())
}

fn run_generate(a: &GenerateArgs) -> Result<(), Failure> {
    let c = a.shape.curve()?;
    match &a.out {
        Some(p) => write_curve(p, &c)?,
        None => io::stdout().lock().write_all(curve_to_csv(&c).as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let res = match &cli.command {
        Command::Flow(a) => run_flow_cmd(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Distance(a) => run_distance(a),
        Command::Generate(a) => run_generate(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
