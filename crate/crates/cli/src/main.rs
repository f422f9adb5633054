mod config;
mod plot;
mod tasks;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ScenarioConfig, Task};
use tasks::Context;

/// Output directory override; takes precedence over the config but not over `--out`.
const OUT_DIR_VAR: &str = "CAUSALKIT_OUT_DIR";

#[derive(Debug)]
pub enum RunError {
    /// Bad scenario file or flag values; exit status 2.
    Config(String),
    /// Failure while running a valid scenario; exit status 1.
    Exec(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "config error: {m}"),
            RunError::Exec(m) => write!(f, "error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "causalkit", version, about = "Causal compactness classifier and lattice wave runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for every sampler; overrides `budget.seed`.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Also render SVG plots from the CSV artifacts.
    #[arg(long, global = true)]
    svg: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Classify the set described by `[set]`.
    Classify,
    /// Run one of the built-in counterexamples (`[counterexample] name`).
    Counterexample,
    /// Build the lower envelope graph of a finite cloud.
    SigmaMinus,
    /// Apply a fundamental solution to a lattice source.
    Wave,
    /// Pair two lattice fields of declared support classes.
    Pair,
}

impl Command {
    fn task(self) -> Task {
        match self {
            Command::Classify => Task::Classify,
            Command::Counterexample => Task::Counterexample,
            Command::SigmaMinus => Task::SigmaMinus,
            Command::Wave => Task::Wave,
            Command::Pair => Task::Pair,
        }
    }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), RunError> {
    std::fs::write(dir.join(name), bytes).map_err(|e| RunError::Exec(format!("{}: {e}", dir.join(name).display())))
}

fn run(cli: Cli) -> Result<(), RunError> {
    let task = cli.command.task();
    let cfg = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    cfg.validate(task)?;
    let seed = cli.seed.unwrap_or(cfg.budget.seed);
    let mut budget = cfg.budget.clone();
    budget.seed = seed;
    let dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_VAR).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| cfg.output.dir.clone());
    let ctx = Context { seed, budget, output: cfg.output.clone() };
    let outcome = match task {
        Task::Classify => tasks::classify_task(&cfg.analytic_set()?, &ctx),
        Task::Counterexample => tasks::counterexample_task(&cfg, &ctx),
        Task::SigmaMinus => tasks::sigma_minus_task(&cfg, &ctx),
        Task::Wave => tasks::wave_task(&cfg, &ctx),
        Task::Pair => tasks::pair_task(&cfg, &ctx),
    }?;
    std::fs::create_dir_all(&dir).map_err(|e| RunError::Exec(format!("{}: {e}", dir.display())))?;
    for (name, bytes) in &outcome.files {
        write_file(&dir, name, bytes)?;
    }
    let report = Path::new(&cfg.output.report);
    write_file(&dir, &cfg.output.report, outcome.report.text().as_bytes())?;
    let json_name = report.with_extension("json");
    write_file(&dir, &json_name.to_string_lossy(), outcome.report.json().as_bytes())?;
    let mut text = outcome.report.text().to_string();
    if cli.svg || cfg.output.svg {
        for name in plot::emit_plots(&dir, task, cfg.output.window)? {
            text.push_str(&format!("plot: {name}\n"));
        }
    }
    print!("{text}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                RunError::Config(_) => 2,
                RunError::Exec(_) => 1,
            })
        }
    }
}
