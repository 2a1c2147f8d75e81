//! `wbell`: Bell factors, efficiency thresholds and homodyne overlaps for
//! lossy N-mode W states, emitted as CSV or JSON.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, CommandFactory, Parser, Subcommand};

use wbell::bell::{bell_factor, min_efficiency_frontier, Scheme, SolveFor};
use wbell::homodyne::QuadratureBin;
use wbell::measurement::EfficiencyAssignment;
use wbell::sweep::{
    breakdown_table, chi_table, density_table, frontier_summary, frontier_table, run_sweep, Grid,
    OutputFormat, SweepSpec, Table,
};
use wbell::Execution;

const MAX_CHI_CUTOFF: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "wbell", version, about = "Bell-factor analysis of lossy single-photon W states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bell factor and its four probability terms at one point
    Omega(OmegaArgs),
    /// Bell factor over a range of mode counts and efficiency grids
    Sweep(SweepArgs),
    /// Minimum efficiency giving a violation, per mode count
    MinEff(MinEffArgs),
    /// Binned-homodyne overlap matrix, or qubit quadrature densities
    Chi(ChiArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: OutputFormat,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OmegaArgs {
    #[arg(long, value_parser = parse_scheme)]
    scheme: Scheme,
    /// Number of modes
    #[arg(long, value_parser = parse_modes)]
    n: usize,
    /// Z-detector (APD) intensity efficiency
    #[arg(long = "eta-z2", visible_alias = "eta-apd2", default_value = "1", value_parser = parse_efficiency)]
    eta_z2: f64,
    /// X-detector (homodyne) intensity efficiency; ignored by the hadamard scheme
    #[arg(long = "eta-x2", visible_alias = "eta-hd2", default_value = "1", value_parser = parse_efficiency)]
    eta_x2: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_scheme)]
    scheme: Scheme,
    #[arg(long, default_value = "2", value_parser = parse_modes)]
    n_min: usize,
    #[arg(long, value_parser = parse_modes)]
    n_max: usize,
    /// Value or inclusive start:stop:step grid
    #[arg(long = "eta-z2", visible_alias = "eta-apd2", default_value = "1", value_parser = parse_grid)]
    eta_z2: Grid,
    /// Value or inclusive start:stop:step grid
    #[arg(long = "eta-x2", visible_alias = "eta-hd2", default_value = "1", value_parser = parse_grid)]
    eta_x2: Grid,
    /// Evaluate rows on a single thread
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct MinEffArgs {
    /// Efficiency to solve for: z, x, hadamard, apd or hd
    #[arg(long, value_parser = parse_solve_for)]
    solve_for: SolveFor,
    #[arg(long, default_value = "2", value_parser = parse_modes)]
    n_min: usize,
    #[arg(long, value_parser = parse_modes)]
    n_max: usize,
    /// Value of the other efficiency, held fixed
    #[arg(long, default_value = "1", value_parser = parse_efficiency)]
    fixed: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ChiArgs {
    /// Quadrature bin: pos (q > 0) or neg (q < 0)
    #[arg(long, value_parser = parse_bin, required_unless_present = "pdf", conflicts_with = "pdf")]
    bin: Option<QuadratureBin>,
    /// Photon-number cutoff M
    #[arg(long, default_value = "1", value_parser = parse_cutoff)]
    m: usize,
    /// Emit the quadrature density of cos θ|0⟩ + sin θ|1⟩ at this angle (degrees)
    #[arg(long, allow_negative_numbers = true, requires = "q")]
    pdf: Option<f64>,
    /// Quadrature grid start:stop:step
    #[arg(long, allow_hyphen_values = true, value_parser = parse_grid)]
    q: Option<Grid>,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse()
}

fn parse_solve_for(s: &str) -> Result<SolveFor, String> {
    s.parse()
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse()
}

fn parse_modes(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 2 {
        return Err(format!("mode count must be at least 2, got {n}"));
    }
    Ok(n)
}

fn parse_cutoff(s: &str) -> Result<usize, String> {
    let m: usize = s.parse().map_err(|e| format!("{e}"))?;
    if !(1..=MAX_CHI_CUTOFF).contains(&m) {
        return Err(format!("cutoff must be in 1..={MAX_CHI_CUTOFF}, got {m}"));
    }
    Ok(m)
}

fn parse_efficiency(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(format!("efficiency must be in [0, 1], got {v}"));
    }
    Ok(v)
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    s.parse().map_err(|e: wbell::Error| e.to_string())
}

fn parse_bin(s: &str) -> Result<QuadratureBin, String> {
    match s {
        "pos" => Ok(QuadratureBin::Positive),
        "neg" => Ok(QuadratureBin::Negative),
        other => Err(format!("unknown bin `{other}` (expected pos or neg)")),
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn emit(table: &Table, output: &OutputArgs) -> io::Result<()> {
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(output.format, &mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(output.format, &mut w)?;
            w.flush()
        }
    }
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Omega(args) => {
            if args.n < 3 {
                eprintln!("warning: N = {} is below the N >= 3 range of the Bell argument", args.n);
            }
            let eff = EfficiencyAssignment::new(args.eta_z2, args.eta_x2)?;
            let b = bell_factor(args.n, eff, args.scheme)?;
            emit(&breakdown_table(&[b]), &args.output)?;
        }
        Command::Sweep(args) => {
            if args.n_max < args.n_min {
                usage_error(format!("--n-max {} is below --n-min {}", args.n_max, args.n_min));
            }
            let spec = SweepSpec {
                scheme: args.scheme,
                n_min: args.n_min,
                n_max: args.n_max,
                eta_z_sq: args.eta_z2,
                eta_x_sq: args.eta_x2,
            };
            if let Err(e) = spec.validate() {
                usage_error(e);
            }
            let exec = if args.sequential { Execution::Sequential } else { Execution::default() };
            let rows = run_sweep(&spec, exec)?;
            emit(&breakdown_table(&rows), &args.output)?;
        }
        Command::MinEff(args) => {
            if args.n_max < args.n_min {
                usage_error(format!("--n-max {} is below --n-min {}", args.n_max, args.n_min));
            }
            let frontier = min_efficiency_frontier(
                args.n_min,
                args.n_max,
                args.solve_for,
                args.fixed,
                Execution::default(),
            )?;
            emit(&frontier_table(&frontier), &args.output)?;
            eprintln!("{}", frontier_summary(&frontier));
        }
        Command::Chi(args) => {
            let table = match (args.bin, args.pdf, args.q) {
                (_, Some(theta_deg), Some(q)) => density_table(theta_deg, &q),
                (Some(bin), None, _) => chi_table(bin, args.m),
                _ => usage_error("either --bin or --pdf with --q is required"),
            };
            emit(&table, &args.output)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
