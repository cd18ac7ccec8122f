//! Run configuration: `key = value` files merged with command-line flags.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Scatter,
    YbCheck,
    Scan,
    Coeffs,
    Eigen,
    Gauge,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Scatter => "scatter",
            Command::YbCheck => "yb-check",
            Command::Scan => "scan",
            Command::Coeffs => "coeffs",
            Command::Eigen => "eigen",
            Command::Gauge => "gauge",
        }
    }
}

/// Unresolved settings; every field optional so files and flags can be merged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub c: Option<Vec<f64>>,
    pub lambda: Option<Vec<f64>>,
    pub gamma: Option<Vec<f64>>,
    pub eta: Option<Vec<f64>>,
    pub n_particles: Option<usize>,
    pub momenta: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub u_min: Option<f64>,
    pub u_max: Option<f64>,
    pub u_steps: Option<usize>,
    pub samples: Option<usize>,
    pub grid: Option<usize>,
}

impl Settings {
    /// Values from `over` win.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            c: over.c.or(self.c),
            lambda: over.lambda.or(self.lambda),
            gamma: over.gamma.or(self.gamma),
            eta: over.eta.or(self.eta),
            n_particles: over.n_particles.or(self.n_particles),
            momenta: over.momenta.or(self.momenta),
            seed: over.seed.or(self.seed),
            tolerance: over.tolerance.or(self.tolerance),
            output_path: over.output_path.or(self.output_path),
            u_min: over.u_min.or(self.u_min),
            u_max: over.u_max.or(self.u_max),
            u_steps: over.u_steps.or(self.u_steps),
            samples: over.samples.or(self.samples),
            grid: over.grid.or(self.grid),
        }
    }
}

pub fn parse_list(field: &str, raw: &str) -> Result<Vec<f64>, Failure> {
    let values: Vec<f64> = raw
        .split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Failure::Config(format!("{field}: `{t}` is not a number"))))
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(Failure::Config(format!("{field}: empty list")));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Failure::Config(format!("{field}: {v} is not finite")));
    }
    Ok(values)
}

fn parse_scalar<T: std::str::FromStr>(field: &str, raw: &str) -> Result<T, Failure> {
    raw.trim().parse().map_err(|_| Failure::Config(format!("{field}: cannot parse `{}`", raw.trim())))
}

/// Parses config text; errors name the line and key.
pub fn parse_config(text: &str) -> Result<Settings, Failure> {
    let mut s = Settings::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| Failure::Config(format!("config line {line_no}: expected `key = value`")))?;
        let key = key.trim();
        let field = format!("config line {line_no}, `{key}`");
        let value = value.trim();
        match key {
            "c" => s.c = Some(parse_list(&field, value)?),
            "lambda" => s.lambda = Some(parse_list(&field, value)?),
            "gamma" => s.gamma = Some(parse_list(&field, value)?),
            "eta" => s.eta = Some(parse_list(&field, value)?),
            "N" | "n" | "n_particles" => s.n_particles = Some(parse_scalar(&field, value)?),
            "k" | "momenta" => s.momenta = Some(parse_list(&field, value)?),
            "seed" => s.seed = Some(parse_scalar(&field, value)?),
            "tol" | "tolerance" => s.tolerance = Some(parse_scalar(&field, value)?),
            "out" | "output_path" => s.output_path = Some(PathBuf::from(value)),
            "u_min" => s.u_min = Some(parse_scalar(&field, value)?),
            "u_max" => s.u_max = Some(parse_scalar(&field, value)?),
            "u_steps" => s.u_steps = Some(parse_scalar(&field, value)?),
            "samples" => s.samples = Some(parse_scalar(&field, value)?),
            "grid" => s.grid = Some(parse_scalar(&field, value)?),
            other => return Err(Failure::Config(format!("config line {line_no}: unknown key `{other}`"))),
        }
    }
    Ok(s)
}

pub fn read_config(path: &Path) -> Result<Settings, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

pub const MAX_N: usize = 6;

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub c: Vec<f64>,
    pub lambda: Vec<f64>,
    pub gamma: Vec<f64>,
    pub eta: Vec<f64>,
    pub n_particles: usize,
    pub momenta: Option<Vec<f64>>,
    pub seed: u64,
    pub tolerance: f64,
    pub output_path: Option<PathBuf>,
    pub u_min: f64,
    pub u_max: f64,
    pub u_steps: usize,
    pub samples: usize,
    pub grid: usize,
}

impl RunConfig {
    pub fn resolve(command: Command, s: Settings) -> Result<RunConfig, Failure> {
        let n_particles = match (s.n_particles, &s.momenta) {
            (Some(n), Some(k)) if k.len() != n => {
                return Err(Failure::Config(format!("N = {n} but {} momenta given", k.len())))
            }
            (Some(n), _) => n,
            (None, Some(k)) => k.len(),
            (None, None) => 3,
        };
        if n_particles == 0 || n_particles > MAX_N {
            return Err(Failure::Config(format!("N = {n_particles} outside 1..={MAX_N}")));
        }
        let cfg = RunConfig {
            command,
            c: s.c.unwrap_or_else(|| vec![1.0]),
            lambda: s.lambda.unwrap_or_else(|| vec![0.0]),
            gamma: s.gamma.unwrap_or_else(|| vec![0.0]),
            eta: s.eta.unwrap_or_else(|| vec![0.0]),
            n_particles,
            momenta: s.momenta,
            seed: s.seed.unwrap_or(0),
            tolerance: s.tolerance.unwrap_or(1e-8),
            output_path: s.output_path,
            u_min: s.u_min.unwrap_or(-5.0),
            u_max: s.u_max.unwrap_or(5.0),
            u_steps: s.u_steps.unwrap_or(21),
            samples: s.samples.unwrap_or(50),
            grid: s.grid.unwrap_or(5),
        };
        if !(cfg.tolerance.is_finite() && cfg.tolerance > 0.0) {
            return Err(Failure::Config(format!("tol = {} must be positive", cfg.tolerance)));
        }
        if cfg.u_steps == 0 || cfg.samples == 0 || cfg.grid == 0 {
            return Err(Failure::Config("u_steps, samples and grid must be positive".into()));
        }
        if command != Command::Scan {
            for (name, list) in [("c", &cfg.c), ("lambda", &cfg.lambda), ("gamma", &cfg.gamma), ("eta", &cfg.eta)] {
                if list.len() != 1 {
                    return Err(Failure::Config(format!("{name}: lists are only accepted by scan")));
                }
            }
        }
        Ok(cfg)
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Header echoed at the top of every report.
impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# command = {}", self.command.name())?;
        writeln!(f, "# c = {}", join(&self.c))?;
        writeln!(f, "# lambda = {}", join(&self.lambda))?;
        writeln!(f, "# gamma = {}", join(&self.gamma))?;
        writeln!(f, "# eta = {}", join(&self.eta))?;
        writeln!(f, "# N = {}", self.n_particles)?;
        match &self.momenta {
            Some(k) => writeln!(f, "# k = {}", join(k))?,
            None => writeln!(f, "# k = random")?,
        }
        writeln!(f, "# seed = {}", self.seed)?;
        writeln!(f, "# tol = {:e}", self.tolerance)?;
        match self.command {
            Command::Scatter => writeln!(f, "# u_min = {}\n# u_max = {}\n# u_steps = {}", self.u_min, self.u_max, self.u_steps)?,
            Command::Eigen => writeln!(f, "# samples = {}\n# grid = {}", self.samples, self.grid)?,
            Command::Gauge => writeln!(f, "# samples = {}", self.samples)?,
            _ => {}
        }
        Ok(())
    }
}
