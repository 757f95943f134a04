use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Bounds,
    Protocol,
    Sweep,
    Phase,
    Table1,
    Verify,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "progcost",
    version,
    about = "Program cost versus accuracy for universal programming of unitary gates"
)]
pub struct Args {
    /// Operation to run; may instead come from the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// Gate dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of gate uses.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub n_min: Option<u64>,
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Sweep increment; without it the sweep doubles n.
    #[arg(long)]
    pub n_step: Option<u64>,
    /// Target error.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Free parameter of the lower bound; optimized when absent.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Constant used by the prior-work table rows.
    #[arg(long = "K")]
    pub k: Option<f64>,
    /// Program dimension for the phase gate.
    #[arg(long)]
    pub dp: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Accepted Monte-Carlo samples.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Flat key=value file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Fully merged settings.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub d: Option<usize>,
    pub n: Option<u64>,
    pub n_min: Option<u64>,
    pub n_max: Option<u64>,
    pub n_step: Option<u64>,
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub k: f64,
    pub dp: Option<usize>,
    pub seed: u64,
    pub samples: Option<u64>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| ConfigError(format!("invalid value {value:?} for {key}: {e}")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, ConfigError> {
    T::from_str(value, true).map_err(|_| ConfigError(format!("invalid value {value:?} for {key}")))
}

/// Applies `key=value` lines to `args` for every field the flags left unset.
/// Blank lines and lines starting with `#` are ignored.
pub fn apply_file(args: &mut Args, text: &str) -> Result<(), ConfigError> {
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("line {}: expected key=value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key.replace('-', "_").as_str() {
            "command" => fill(&mut args.command, || parse_enum(key, value))?,
            "d" => fill(&mut args.d, || parse(key, value))?,
            "n" => fill(&mut args.n, || parse(key, value))?,
            "n_min" => fill(&mut args.n_min, || parse(key, value))?,
            "n_max" => fill(&mut args.n_max, || parse(key, value))?,
            "n_step" => fill(&mut args.n_step, || parse(key, value))?,
            "eps" => fill(&mut args.eps, || parse(key, value))?,
            "delta" => fill(&mut args.delta, || parse(key, value))?,
            "K" => fill(&mut args.k, || parse(key, value))?,
            "dp" | "dP" => fill(&mut args.dp, || parse(key, value))?,
            "seed" => fill(&mut args.seed, || parse(key, value))?,
            "samples" => fill(&mut args.samples, || parse(key, value))?,
            "format" => fill(&mut args.format, || parse_enum(key, value))?,
            "output" => fill(&mut args.output, || Ok(PathBuf::from(value)))?,
            _ => {
                return Err(ConfigError(format!(
                    "line {}: unknown key {key:?}",
                    lineno + 1
                )))
            }
        }
    }
    Ok(())
}

fn fill<T>(
    slot: &mut Option<T>,
    value: impl FnOnce() -> Result<T, ConfigError>,
) -> Result<(), ConfigError> {
    // values are parsed even when a flag overrides them, so typos still fail
    let v = value()?;
    if slot.is_none() {
        *slot = Some(v);
    }
    Ok(())
}

fn read_file(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))
}

pub fn resolve(mut args: Args) -> Result<RunConfig, ConfigError> {
    if let Some(path) = args.config.clone() {
        apply_file(&mut args, &read_file(&path)?)?;
    }
    let command = args.command.ok_or_else(|| {
        ConfigError("no command given (bounds, protocol, sweep, phase, table1, verify)".into())
    })?;
    let config = RunConfig {
        command,
        d: args.d,
        n: args.n,
        n_min: args.n_min,
        n_max: args.n_max,
        n_step: args.n_step,
        eps: args.eps,
        delta: args.delta,
        k: args.k.unwrap_or(1.0),
        dp: args.dp,
        seed: args.seed.unwrap_or(0),
        samples: args.samples,
        format: args.format.unwrap_or_default(),
        output: args.output,
    };
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        if let Some(d) = self.d {
            if d < 2 {
                return Err(ConfigError(format!("d must be >= 2, got {d}")));
            }
        }
        for (name, v) in [("eps", self.eps), ("delta", self.delta)] {
            if let Some(v) = v {
                if !(v > 0.0 && v < 1.0) {
                    return Err(ConfigError(format!("{name} must lie in (0, 1), got {v}")));
                }
            }
        }
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(ConfigError(format!("K must be positive, got {}", self.k)));
        }
        if self.n_step == Some(0) {
            return Err(ConfigError("n-step must be positive".into()));
        }
        if let (Some(lo), Some(hi)) = (self.n_min, self.n_max) {
            if lo > hi {
                return Err(ConfigError(format!("n-min {lo} exceeds n-max {hi}")));
            }
        }
        Ok(())
    }

    pub fn require_d(&self) -> Result<usize, ConfigError> {
        self.d
            .ok_or_else(|| ConfigError("missing required value: d".into()))
    }

    pub fn require_n(&self) -> Result<u64, ConfigError> {
        self.n
            .ok_or_else(|| ConfigError("missing required value: n".into()))
    }

    pub fn require_eps(&self) -> Result<f64, ConfigError> {
        self.eps
            .ok_or_else(|| ConfigError("missing required value: eps".into()))
    }

    pub fn require_dp(&self) -> Result<usize, ConfigError> {
        self.dp
            .ok_or_else(|| ConfigError("missing required value: dp".into()))
    }

    /// Sweep points: arithmetic with `n_step`, otherwise doubling.
    pub fn n_values(&self) -> Result<Vec<u64>, ConfigError> {
        let lo = self
            .n_min
            .ok_or_else(|| ConfigError("missing required value: n-min".into()))?;
        let hi = self
            .n_max
            .ok_or_else(|| ConfigError("missing required value: n-max".into()))?;
        if lo == 0 {
            return Err(ConfigError("n-min must be positive".into()));
        }
        let mut values = Vec::new();
        let mut n = lo;
        while n <= hi {
            values.push(n);
            n = match self.n_step {
                Some(step) => n + step,
                None => 2 * n,
            };
        }
        Ok(values)
    }
}
