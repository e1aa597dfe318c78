//! `qiv`: simulate quantum instrumental networks, bound the average causal
//! effect and report whether joint exogeneity is falsified.
//!
//! Every file argument accepts `-` for stdin/stdout.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 invalid input,
//! 3 solver failure, 4 violation found (only with `--fail-on-violation`
//! or `--check`).

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qiv_core::classical::{classical_observed, classical_true_ace, sample_dataset, ResponseFunctionModel};
use qiv_core::counterfactual::{ace_bounds, AssumptionSet, BoundsResult};
use qiv_core::distribution::ObservedDistribution;
use qiv_core::quantum::{bell_preset, born_distribution, QuantumInstrumentalScenario};
use qiv_core::report::{falsify_pipeline, render_json, render_text};

/// Slack for `classical --check`.
const CONTAINMENT_SLACK: f64 = 1e-7;

#[derive(Debug, Parser)]
#[command(name = "qiv", version, about = "Falsify joint exogeneity in quantum instrumental networks")]
struct Cli {
    /// More log output (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Born-rule distribution p(x,y|z) of a scenario.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// ACE bounds for an observed distribution.
    Bounds {
        #[arg(long)]
        dist: PathBuf,
        /// je, strat or indiv.
        #[arg(long, value_parser = parse_assumptions)]
        assumptions: AssumptionSet,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Full pipeline: distribution, bounds, true ACE and verdict.
    Falsify {
        #[arg(long)]
        scenario: PathBuf,
        /// Exit with code 4 when joint exogeneity is falsified.
        #[arg(long)]
        fail_on_violation: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Distribution, true ACE and bounds of a classical response-function model.
    Classical {
        #[arg(long)]
        model: PathBuf,
        /// Exit with code 4 if the true ACE escapes any bound.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Draw a finite dataset from a classical model.
    Sample {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Write a built-in scenario.
    Preset {
        #[arg(long, value_enum)]
        name: PresetName,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PresetName {
    Bell,
}

fn parse_assumptions(s: &str) -> Result<AssumptionSet, String> {
    s.parse()
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Invalid(String),
    Solver(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) | CliError::Solver(m) => f.write_str(m),
        }
    }
}

impl From<qiv_core::Error> for CliError {
    fn from(e: qiv_core::Error) -> Self {
        if e.is_solver() {
            CliError::Solver(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("reading {}: {e}", path.display())))
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    let result =
        if path == Path::new("-") { io::stdout().lock().write_all(text.as_bytes()) } else { fs::write(path, text) };
    result.map_err(|e| CliError::Usage(format!("writing {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{what} {}: {e}", path.display())))
}

fn load_scenario(path: &Path) -> Result<QuantumInstrumentalScenario, CliError> {
    let text = read_input(path)?;
    let s = QuantumInstrumentalScenario::from_json(&text)
        .map_err(|e| CliError::Invalid(format!("scenario {}: {e}", path.display())))?;
    s.ensure_valid().map_err(|e| CliError::Invalid(e.to_string()))?;
    Ok(s)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data");
    s.push('\n');
    s
}

fn use_color(out: &Path) -> bool {
    out == Path::new("-") && std::env::var_os("NO_COLOR").is_none() && io::stdout().is_terminal()
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ClassicalReport {
    observed: ObservedDistribution,
    true_ace: f64,
    bounds_by_assumption: BTreeMap<AssumptionSet, BoundsResult>,
    contained: bool,
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Simulate { scenario, out } => {
            let s = load_scenario(&scenario)?;
            let p = born_distribution(&s).map_err(qiv_core::Error::from)?;
            write_output(&out, &to_json(&p))?;
        }
        Command::Bounds { dist, assumptions, out } => {
            let p: ObservedDistribution = parse_json(&dist, "distribution")?;
            let b = ace_bounds(&p, assumptions).map_err(qiv_core::Error::from)?;
            log::info!("{assumptions}: lower {:?} upper {:?}", b.lower, b.upper);
            write_output(&out, &to_json(&b))?;
        }
        Command::Falsify { scenario, fail_on_violation, format, out } => {
            let s = load_scenario(&scenario)?;
            let r = falsify_pipeline(&s)?;
            let text = match format {
                OutputFormat::Text => render_text(&r, use_color(&out)),
                OutputFormat::Json => render_json(&r),
            };
            write_output(&out, &text)?;
            if fail_on_violation && r.verdict.is_falsified() {
                return Ok(ExitCode::from(4));
            }
        }
        Command::Classical { model, check, out } => {
            let m: ResponseFunctionModel = parse_json(&model, "model")?;
            let observed = classical_observed(&m);
            let true_ace = classical_true_ace(&m);
            let mut bounds = BTreeMap::new();
            for a in AssumptionSet::ALL {
                bounds.insert(a, ace_bounds(&observed, a).map_err(qiv_core::Error::from)?);
            }
            let contained = bounds.values().all(|b| b.contains(true_ace, CONTAINMENT_SLACK));
            let report = ClassicalReport { observed, true_ace, bounds_by_assumption: bounds, contained };
            write_output(&out, &to_json(&report))?;
            if check && !contained {
                log::warn!("classical true ACE {true_ace} escapes the bounds");
                return Ok(ExitCode::from(4));
            }
        }
        Command::Sample { model, n, seed, out } => {
            let m: ResponseFunctionModel = parse_json(&model, "model")?;
            let d = sample_dataset(&m, n, seed).map_err(qiv_core::Error::from)?;
            write_output(&out, &to_json(&d))?;
        }
        Command::Preset { name: PresetName::Bell, out } => {
            write_output(&out, &format!("{}\n", bell_preset().to_json()))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::from_default_env().filter_level(level).init();

    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
