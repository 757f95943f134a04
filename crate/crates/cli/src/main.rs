mod config;

use std::io::Write as _;
use std::process::ExitCode;

use clap::Parser;
use progcost::bounds::{bound_report, table1_rows};
use progcost::phase::phase_report;
use progcost::reporting::{
    protocol_report, render_csv, render_json, render_table, sweep, sweep_summary, write_atomic,
};
use progcost::verify::{run_suite, SuiteOptions};
use serde::Serialize;

use config::{Args, Command, ConfigError, Format, RunConfig};

enum Failure {
    /// Bad input: exit 1.
    Validation(String),
    /// A check failed or an internal computation did not verify: exit 2.
    Verification(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Validation(e.0)
    }
}

impl From<progcost::Error> for Failure {
    fn from(e: progcost::Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Verification(e.to_string())
        }
    }
}

struct Output {
    text: String,
    /// Set when the report itself shows a failed check.
    failure: Option<String>,
}

fn render<T: Serialize + ?Sized>(format: Format, value: &T) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => render_json(value)?,
        Format::Csv => render_csv(value)?,
        Format::Table => render_table(value)?,
    })
}

fn execute(config: &RunConfig) -> Result<Output, Failure> {
    let format = config.format;
    let mut failure = None;
    let text = match config.command {
        Command::Bounds => {
            let report = bound_report(
                config.require_d()?,
                config.require_eps()?,
                config.delta,
                config.k,
            )?;
            render(format, &report)?
        }
        Command::Table1 => {
            let d = config.require_d()?;
            let rows = table1_rows(d, config.require_eps()?, config.k);
            render(format, &rows)?
        }
        Command::Protocol => {
            let report = protocol_report(config.require_n()?, config.require_d()?)?;
            if !report.pass_flags.all() {
                failure = Some(format!("bound check failed: {:?}", report.pass_flags));
            }
            render(format, &report)?
        }
        Command::Sweep => {
            let s = sweep(config.require_d()?, &config.n_values()?)?;
            let failed: Vec<String> = s
                .reports
                .iter()
                .filter(|r| !r.pass_flags.all())
                .map(|r| r.n.to_string())
                .collect();
            if !failed.is_empty() {
                failure = Some(format!("bound check failed at n = {}", failed.join(", ")));
            }
            match format {
                Format::Json => render_json(&s)?,
                Format::Csv => render_csv(&s.reports)?,
                Format::Table => format!(
                    "{}\n{}",
                    render_table(&sweep_summary(&s))?,
                    render_table(&s.reports)?
                ),
            }
        }
        Command::Phase => {
            let report = phase_report(config.require_dp()?)?;
            if report.choi_infidelity > report.eps_quantum + 1e-12 {
                failure = Some(format!(
                    "Choi infidelity {} exceeds the maximized error {}",
                    report.choi_infidelity, report.eps_quantum
                ));
            }
            render(format, &report)?
        }
        Command::Verify => {
            let mut options = SuiteOptions {
                seed: config.seed,
                ..SuiteOptions::default()
            };
            if let Some(samples) = config.samples {
                options.samples = samples;
            }
            let outcomes = run_suite(options);
            let failed: Vec<String> = outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| o.id.to_string())
                .collect();
            if !failed.is_empty() {
                failure = Some(format!("failed criteria: {}", failed.join(", ")));
            }
            match format {
                Format::Table => outcomes.iter().map(|o| o.line() + "\n").collect(),
                other => render(other, &outcomes)?,
            }
        }
    };
    Ok(Output { text, failure })
}

fn run(args: Args) -> Result<(), Failure> {
    let config = config::resolve(args)?;
    let out = execute(&config)?;
    match &config.output {
        Some(path) => write_atomic(path, &out.text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Validation(e.to_string()))?;
        }
    }
    match out.failure {
        Some(msg) => Err(Failure::Verification(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
