use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;

use config::{parse_list, read_config, Command, RunConfig, Settings};

/// Coordinate Bethe Ansatz checks for point interactions `(c, λ, γ, η)`.
#[derive(Parser, Debug)]
#[command(name = "pointbethe", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// Delta coupling; comma separated list for `scan`.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,

    /// Number of particles (at most 6).
    #[arg(long = "N", alias = "n")]
    n_particles: Option<usize>,

    /// Momenta as a comma separated list; drawn from the seed when omitted.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    tol: Option<f64>,

    /// Report file; the report always goes to stdout as well.
    #[arg(long)]
    out: Option<PathBuf>,

    /// `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long, allow_hyphen_values = true)]
    u_min: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    u_max: Option<f64>,

    #[arg(long)]
    u_steps: Option<usize>,

    /// Boundary sample points per particle pair.
    #[arg(long)]
    samples: Option<usize>,

    /// Points per axis for `eigen` grid evaluation.
    #[arg(long)]
    grid: Option<usize>,
}

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Residual(String),
    Pole(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Residual(_) => 2,
            Failure::Pole(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Residual(m) => write!(f, "residual check failed: {m}"),
            Failure::Pole(m) => write!(f, "pole or degenerate input: {m}"),
        }
    }
}

impl From<pointbethe::Error> for Failure {
    fn from(e: pointbethe::Error) -> Self {
        use pointbethe::Error as E;
        match e {
            E::PoleAtU { .. } | E::DegenerateBoundary { .. } | E::SingularSystem { .. } => Failure::Pole(e.to_string()),
            E::NotIntegrable { .. } | E::RankDeficient { .. } => Failure::Residual(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

impl Args {
    fn settings(&self) -> Result<Settings, Failure> {
        let list = |name: &str, v: &Option<String>| v.as_deref().map(|s| parse_list(&format!("--{name}"), s)).transpose();
        Ok(Settings {
            c: list("c", &self.c)?,
            lambda: list("lambda", &self.lambda)?,
            gamma: list("gamma", &self.gamma)?,
            eta: list("eta", &self.eta)?,
            n_particles: self.n_particles,
            momenta: list("k", &self.k)?,
            seed: self.seed,
            tolerance: self.tol,
            output_path: self.out.clone(),
            u_min: self.u_min,
            u_max: self.u_max,
            u_steps: self.u_steps,
            samples: self.samples,
            grid: self.grid,
        })
    }
}

fn resolve(args: &Args) -> Result<RunConfig, Failure> {
    let file = match &args.config {
        Some(path) => read_config(path)?,
        None => Settings::default(),
    };
    RunConfig::resolve(args.command, file.overlay(args.settings()?))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = resolve(&args).and_then(|cfg| commands::run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.exit_code())
        }
    }
}
