//! Command-line front end: argument parsing, run configuration and exit codes.

mod commands;
pub mod report;

use crate::error::Error;
use crate::linalg::C64;
use crate::oracle::OracleConfig;
use crate::resolvent::SolverConfig;
use clap::{Args, Parser, Subcommand, ValueEnum};
use report::Envelope;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "NUMRANGE_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "numrange", version, about = "Numerical-range bounds, resolvent and Bloch radii, and starlikeness radii")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON map specification.
    #[arg(long, global = true)]
    pub map: Option<PathBuf>,
    /// Comma-separated angles; `pi`, `-pi/4` and `pi/3` are accepted.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Radius grid `n,log` or `n,cheb` inside `(0, R)`.
    #[arg(long = "r-grid", global = true)]
    pub r_grid: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Tolerance override `key=value`; repeatable.
    #[arg(long = "tol", global = true, value_name = "KEY=VALUE")]
    pub tol: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Tabulate N_r, M_r(θ), m_r(θ), |V_r|, W_r, L(θ) and l(θ).
    Range,
    /// Growth bounds against the oracle inputs.
    Bounds,
    /// Solve λx − h(x) = z and report radii and the null point.
    Resolvent {
        /// `re` or `re:im`.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        /// Comma-separated components, each `re` or `re:im`; the origin when absent.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Reject solutions outside this radius.
        #[arg(long)]
        r_cap: Option<f64>,
    },
    /// Bloch radii from a map or from hand values of L and δ.
    Bloch {
        #[arg(long, allow_hyphen_values = true)]
        lip: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Starlike and spiral radii over θ, and spirallike checks of a map.
    Geom,
    /// Run a verification suite; the exit code is 0 iff every criterion passes.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Cheb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub n: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    /// Radii in `(0, radius)`: Chebyshev nodes, or geometric from `radius/100` to `0.99 radius`.
    pub fn radii(&self, radius: f64) -> Vec<f64> {
        let n = self.n;
        match self.spacing {
            Spacing::Cheb => (0..n).map(|k| 0.5 * radius * (1.0 - ((2 * k + 1) as f64 * PI / (2 * n) as f64).cos())).collect(),
            Spacing::Log if n == 1 => vec![0.5 * radius],
            Spacing::Log => {
                let (a, b) = (0.01f64.ln(), 0.99f64.ln());
                (0..n).map(|k| radius * (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
            }
        }
    }
}

/// Usage-level failure: bad flags or values, or an invalid map file.
#[derive(Debug)]
pub struct UsageError(pub String);

pub fn parse_grid(s: &str) -> Result<GridSpec, UsageError> {
    let bad = || UsageError(format!("--r-grid expects `n,log` or `n,cheb`, got `{s}`"));
    let (n, spacing) = s.split_once(',').ok_or_else(bad)?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    let spacing = match spacing.trim() {
        "log" => Spacing::Log,
        "cheb" => Spacing::Cheb,
        _ => return Err(bad()),
    };
    if n == 0 {
        return Err(UsageError("--r-grid needs at least one radius".into()));
    }
    Ok(GridSpec { n, spacing })
}

/// A number, or `pi` scaled as in `-pi/4`, `2pi/3`.
pub fn parse_angle(s: &str) -> Result<f64, UsageError> {
    let t = s.trim();
    let bad = || UsageError(format!("bad angle `{s}`"));
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    };
    let (head, tail) = (&t[..pos], &t[pos + 2..]);
    let factor = match head.trim_end_matches('*') {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let div = match tail {
        "" => 1.0,
        d => d.strip_prefix('/').and_then(|d| d.parse::<f64>().ok()).filter(|d| *d != 0.0).ok_or_else(bad)?,
    };
    Ok(factor * PI / div)
}

pub fn parse_angles(s: &str) -> Result<Vec<f64>, UsageError> {
    let v = s.split(',').map(parse_angle).collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err(UsageError("--theta is empty".into()));
    }
    Ok(v)
}

/// `re` or `re:im`.
pub fn parse_complex(s: &str) -> Result<C64, UsageError> {
    let bad = || UsageError(format!("bad complex number `{s}`"));
    let num = |p: &str| p.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    match s.split_once(':') {
        Some((re, im)) => Ok(C64::new(num(re)?, num(im)?)),
        None => Ok(C64::new(num(s)?, 0.0)),
    }
}

/// Oracle and solver settings after `--tol` overrides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub oracle: OracleConfig,
    pub solver: SolverConfig,
    pub rigidity: f64,
}

pub const TOL_KEYS: &[&str] = &[
    "samples_per_dim",
    "starts",
    "max_sweeps",
    "sampler_tol",
    "min_width",
    "ladder_rungs",
    "infinity_threshold",
    "growth_tol",
    "solver_tol",
    "max_iter",
    "cond_limit",
    "damping",
    "rigidity",
];

pub fn parse_tolerances(items: &[String], seed: u64) -> Result<(Tolerances, BTreeMap<String, f64>), UsageError> {
    let mut t = Tolerances { oracle: OracleConfig::with_seed(seed), solver: SolverConfig::default(), rigidity: 1e-6 };
    let mut echo = BTreeMap::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| UsageError(format!("--tol expects key=value, got `{item}`")))?;
        let (k, v) = (k.trim(), v.trim());
        let val: f64 = v.parse().ok().filter(|x: &f64| x.is_finite() && *x > 0.0).ok_or_else(|| UsageError(format!("--tol {k}: `{v}` is not a positive number")))?;
        let count = || -> Result<usize, UsageError> {
            if val.fract() == 0.0 && val >= 1.0 {
                Ok(val as usize)
            } else {
                Err(UsageError(format!("--tol {k}: `{v}` is not a positive integer")))
            }
        };
        match k {
            "samples_per_dim" => t.oracle.sampler.samples_per_dim = count()?,
            "starts" => t.oracle.sampler.starts = count()?,
            "max_sweeps" => t.oracle.sampler.max_sweeps = count()?,
            "sampler_tol" => t.oracle.sampler.tol = val,
            "min_width" => t.oracle.sampler.min_width = val,
            "ladder_rungs" => t.oracle.ladder_rungs = count()?.min(60) as u32,
            "infinity_threshold" => t.oracle.infinity_threshold = val,
            "growth_tol" => t.oracle.growth_tol = val,
            "solver_tol" => t.solver.tol = val,
            "max_iter" => t.solver.max_iter = count()?,
            "cond_limit" => t.solver.cond_limit = val,
            "damping" => t.solver.damping = val,
            "rigidity" => t.rigidity = val,
            other => return Err(UsageError(format!("unknown tolerance `{other}`; known: {}", TOL_KEYS.join(", ")))),
        }
        echo.insert(k.to_string(), val);
    }
    Ok((t, echo))
}

/// Validated settings shared by every command.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub map: Option<String>,
    pub theta: Option<Vec<f64>>,
    pub r_grid: GridSpec,
    pub seed: u64,
    pub format: Format,
    pub tol: BTreeMap<String, f64>,
    #[serde(skip)]
    pub tolerances: Tolerances,
}

/// Seed precedence: `--seed`, then `NUMRANGE_SEED`, then 42.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, UsageError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(v) if !v.trim().is_empty() => {
            v.trim().parse().map_err(|_| UsageError(format!("{SEED_ENV} = `{v}` is not an unsigned integer")))
        }
        _ => Ok(DEFAULT_SEED),
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli, env_seed: Option<&str>) -> Result<Self, UsageError> {
        let c = &cli.common;
        let seed = resolve_seed(c.seed, env_seed)?;
        let (tolerances, tol) = parse_tolerances(&c.tol, seed)?;
        let default_grid = GridSpec { n: 8, spacing: Spacing::Cheb };
        Ok(Self {
            command: command_name(&cli.command),
            map: c.map.as_ref().map(|p| p.display().to_string()),
            theta: c.theta.as_deref().map(parse_angles).transpose()?,
            r_grid: c.r_grid.as_deref().map(parse_grid).transpose()?.unwrap_or(default_grid),
            seed,
            format: c.format,
            tol,
            tolerances,
        })
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.theta.clone().unwrap_or_else(|| vec![0.0])
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Range => "range",
        Command::Bounds => "bounds",
        Command::Resolvent { .. } => "resolvent",
        Command::Bloch { .. } => "bloch",
        Command::Geom => "geom",
        Command::Verify { .. } => "verify",
    }
}

/// Outcome of a command before rendering.
pub struct Outcome {
    pub envelope: Envelope,
    pub table: report::Table,
}

/// Exit code for a library error: parse and validation errors in inputs are
/// usage errors, I/O is 2 and everything numeric is 3.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Validation { .. } | Error::DimensionMismatch { .. } => EXIT_USAGE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_NUMERIC,
    }
}

/// Runs the tool on `args` (program name first), writing the report and
/// diagnostics to the given streams. Returns the process exit code.
pub fn run<I, T>(args: I, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let cfg = match RunConfig::from_cli(&cli, env_seed) {
        Ok(c) => c,
        Err(UsageError(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            return EXIT_USAGE;
        }
    };
    let outcome = match commands::dispatch(&cli.command, &cfg) {
        Ok(o) => o,
        Err(commands::Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            return EXIT_USAGE;
        }
        Err(commands::Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let text = match cfg.format {
        Format::Json => outcome.envelope.render(),
        Format::Csv => outcome.table.to_csv(),
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_NUMERIC;
        }
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, text.as_bytes()).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(m) = written {
        let _ = writeln!(stderr, "error: {m}");
        return EXIT_IO;
    }
    match &outcome.envelope.summary {
        Some(s) if !s.all_passed => {
            let _ = writeln!(stderr, "verification failed: {} of {} criteria", s.failed, s.failed + s.passed);
            EXIT_NUMERIC
        }
        _ => EXIT_OK,
    }
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    let env_seed = std::env::var(SEED_ENV).ok();
    run(std::env::args_os(), env_seed.as_deref(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/3").unwrap(), PI / 3.0);
        assert_eq!(parse_angle("-pi/4").unwrap(), -PI / 4.0);
        assert_eq!(parse_angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert!(parse_angle("pi/0").is_err() && parse_angle("x").is_err() && parse_angle("nan").is_err());
        assert_eq!(parse_angles("0,pi/2").unwrap(), vec![0.0, PI / 2.0]);
    }

    #[test]
    fn grids() {
        let g = parse_grid("5,cheb").unwrap();
        let r = g.radii(1.0);
        assert_eq!(r.len(), 5);
        assert!(r.windows(2).all(|w| w[0] < w[1]) && r[0] > 0.0 && r[4] < 1.0);
        assert!((r[2] - 0.5).abs() < 1e-15);
        let l = parse_grid("3,log").unwrap().radii(2.0);
        assert!((l[0] - 0.02).abs() < 1e-15 && (l[2] - 1.98).abs() < 1e-12);
        assert!((l[1] - 2.0 * 0.0099f64.sqrt()).abs() < 1e-12);
        assert!(parse_grid("0,log").is_err() && parse_grid("4,lin").is_err() && parse_grid("4").is_err());
    }

    #[test]
    fn complex_values() {
        assert_eq!(parse_complex("2").unwrap(), C64::new(2.0, 0.0));
        assert_eq!(parse_complex("-1:0.5").unwrap(), C64::new(-1.0, 0.5));
        assert!(parse_complex("1:").is_err());
    }

    #[test]
    fn seed_precedence() {
        assert_eq!(resolve_seed(Some(7), Some("9")).unwrap(), 7);
        assert_eq!(resolve_seed(None, Some("9")).unwrap(), 9);
        assert_eq!(resolve_seed(None, None).unwrap(), DEFAULT_SEED);
        assert!(resolve_seed(None, Some("x")).is_err());
    }

    #[test]
    fn tolerance_overrides() {
        let items = vec!["samples_per_dim=128".to_string(), "solver_tol=1e-12".to_string()];
        let (t, echo) = parse_tolerances(&items, 3).unwrap();
        assert_eq!(t.oracle.sampler.samples_per_dim, 128);
        assert_eq!(t.oracle.sampler.seed, 3);
        assert_eq!(t.solver.tol, 1e-12);
        assert_eq!(echo.len(), 2);
        assert!(parse_tolerances(&["bogus=1".into()], 0).is_err());
        assert!(parse_tolerances(&["starts=1.5".into()], 0).is_err());
        assert!(parse_tolerances(&["damping=-1".into()], 0).is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["numrange", "frobnicate"], None, &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["numrange", "geom", "--r-grid", "x"], None, &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["numrange", "range"], None, &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["numrange", "--help"], None, &mut out, &mut err), EXIT_OK);
    }
}
