//! `ctower`: congruence-tower certificates from the command line.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 on bad input.

mod commands;
mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use congruence_tower::congruence::CongruenceKind;
use congruence_tower::presets::Preset;
use serde::{Deserialize, Serialize};

use commands::{run, Command};
use config::{RunConfig, StrategyFlag};

#[derive(Parser)]
#[command(name = "ctower", version, about = "Congruence towers of Kleinian groups over imaginary quadratic fields")]
struct Cli {
    #[command(subcommand)]
    command: Top,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand)]
enum Top {
    #[command(flatten)]
    Run(Command),
    /// Re-run a JSON report from its embedded config and compare byte for byte
    Replay { report: PathBuf },
    /// Print the effective config as TOML
    ShowConfig,
}

/// Flags override the values loaded from `--config`.
#[derive(Args, Default)]
struct Overrides {
    /// TOML run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for enumeration and closure
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    preset: Option<Preset>,
    /// Field Q(sqrt(-d))
    #[arg(long, global = true)]
    d: Option<u64>,
    /// Generator matrix such as "[[1,1],[0,1]]"; repeatable
    #[arg(long = "generator", global = true)]
    generators: Vec<String>,
    #[arg(long, global = true)]
    c_prime: Option<f64>,
    #[arg(long, global = true)]
    systole: Option<f64>,
    #[arg(long, global = true)]
    geodesic_count_exponent: Option<f64>,
    /// Index of the subgroup in the Bianchi group
    #[arg(long, global = true)]
    d_index: Option<u64>,
    /// Base covolume
    #[arg(long, global = true)]
    v0: Option<f64>,
    #[arg(long, alias = "eps", global = true)]
    epsilon: Option<f64>,
    /// Word-length depth
    #[arg(long, short = 'k', global = true)]
    depth: Option<usize>,
    /// Translation-length cutoff
    #[arg(long, short = 'l', global = true)]
    cutoff: Option<f64>,
    #[arg(long, global = true)]
    levels: Option<usize>,
    #[arg(long, value_enum, global = true)]
    strategy: Option<StrategyFlag>,
    #[arg(long, global = true)]
    kind: Option<CongruenceKind>,
    /// Comma-separated kinds, or "all"
    #[arg(long, global = true)]
    kinds: Option<String>,
    /// Ideals like "5" or "5:2*13"; repeatable
    #[arg(long = "ideal", global = true)]
    ideals: Vec<String>,
    /// Rational primes; comma-separated
    #[arg(long, value_delimiter = ',', global = true)]
    primes: Vec<u64>,
    #[arg(long, global = true)]
    limit: Option<u64>,
    #[arg(long, global = true)]
    c1: Option<f64>,
    /// Tolerance on the displacement comparison
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[arg(long, global = true)]
    density_tolerance: Option<f64>,
    /// Write the JSON report here
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Write the inventory CSV here
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

impl Overrides {
    fn apply(self, mut c: RunConfig) -> anyhow::Result<RunConfig> {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { c.$f = v; } )* };
        }
        set!(c_prime, systole, geodesic_count_exponent, d_index, epsilon, depth, cutoff, levels, strategy, kind, limit, c1, tolerance, density_tolerance);
        if self.preset.is_some() {
            c.preset = self.preset;
        }
        if self.d.is_some() {
            c.d = self.d;
        }
        if self.v0.is_some() {
            c.v0 = self.v0;
        }
        if self.threads.is_some() {
            c.threads = self.threads;
        }
        if self.output.is_some() {
            c.output = self.output;
        }
        if self.csv.is_some() {
            c.csv = self.csv;
        }
        if !self.generators.is_empty() {
            c.generators = self.generators;
        }
        if !self.ideals.is_empty() {
            c.ideals = self.ideals;
        }
        if !self.primes.is_empty() {
            c.primes = self.primes;
        }
        if let Some(k) = self.kinds {
            c.kinds = parse_kinds(&k)?;
        }
        Ok(c)
    }
}

fn parse_kinds(s: &str) -> anyhow::Result<Vec<CongruenceKind>> {
    if s.trim() == "all" {
        return Ok(CongruenceKind::ALL.to_vec());
    }
    s.split(',').map(|k| Ok(k.trim().parse::<CongruenceKind>()?)).collect()
}

/// The JSON report: tool identity, the full config, and the result.
#[derive(Serialize, Deserialize)]
struct Report {
    tool: String,
    version: String,
    command: Command,
    config: RunConfig,
    passed: bool,
    result: serde_json::Value,
}

fn render(command: Command, config: &RunConfig) -> anyhow::Result<(String, commands::Outcome)> {
    let out = run(command, config)?;
    let report = Report {
        tool: "ctower".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command,
        config: config.clone(),
        passed: out.passed,
        result: out.result.clone(),
    };
    Ok((serde_json::to_string_pretty(&report)? + "\n", out))
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn load(path: &Path) -> anyhow::Result<RunConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RunConfig::from_toml(&text)
}

enum Failure {
    Input(anyhow::Error),
    Check,
}

fn main_inner(cli: Cli) -> Result<(), Failure> {
    let base = match &cli.overrides.config {
        Some(p) => load(p).map_err(Failure::Input)?,
        None => RunConfig::default(),
    };
    let config = cli.overrides.apply(base).map_err(Failure::Input)?;
    if let Some(n) = config.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("thread pool")
            .map_err(Failure::Input)?;
    }
    match cli.command {
        Top::ShowConfig => {
            emit(&config.to_toml());
            Ok(())
        }
        Top::Replay { report } => {
            let original = std::fs::read_to_string(&report)
                .with_context(|| format!("reading {}", report.display()))
                .map_err(Failure::Input)?;
            let parsed: Report = serde_json::from_str(&original)
                .context("not a ctower report")
                .map_err(Failure::Input)?;
            let (again, _) = render(parsed.command, &parsed.config).map_err(Failure::Input)?;
            if again == original {
                emit(&format!("replay identical: {}\n", report.display()));
                Ok(())
            } else {
                eprintln!("replay differs from {}", report.display());
                Err(Failure::Check)
            }
        }
        Top::Run(command) => {
            let (text, out) = render(command, &config).map_err(Failure::Input)?;
            if let Some(path) = &config.output {
                std::fs::write(path, &text)
                    .with_context(|| format!("writing {}", path.display()))
                    .map_err(Failure::Input)?;
            }
            emit(&format!("{}\n", out.stdout));
            if out.passed {
                Ok(())
            } else {
                eprintln!("{}: FAIL", command.name());
                Err(Failure::Check)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
