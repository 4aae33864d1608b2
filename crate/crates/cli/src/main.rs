use std::fs;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use cfs_cli::config::{self, Command, MethodChoice, RunConfig};
use cfs_cli::run::execute;
use cfs_cli::validate::{has_errors, validate};

/// Vacuum-force stability of thin films on substrates.
#[derive(Parser)]
#[command(name = "cfs", version)]
struct Cli {
    #[command(subcommand)]
    action: Action,
}

#[derive(Subcommand)]
enum Action {
    /// Run the command named in the configuration file.
    Run(RunArgs),
    /// Check a configuration file without running it.
    Validate {
        #[arg(long, short)]
        config: PathBuf,
    },
    ForceSweep(RunArgs),
    ThicknessScan(RunArgs),
    StabilityCheck(RunArgs),
    CriticalThickness(RunArgs),
    StabilityDiagram(RunArgs),
    ElasticReport(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long, short)]
    config: PathBuf,
    /// CSV destination; stdout when absent and the config names none.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    method: Option<MethodChoice>,
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Worker threads; falls back to CFS_THREADS, then to the core count.
    #[arg(long, env = "CFS_THREADS")]
    threads: Option<usize>,
    /// Exit with status 2 if any sample failed.
    #[arg(long)]
    strict: bool,
}

fn load(path: &PathBuf) -> anyhow::Result<(String, RunConfig)> {
    let source = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config = config::parse(&source).with_context(|| format!("parsing {}", path.display()))?;
    Ok((source, config))
}

/// Prints diagnostics; true when the configuration is usable.
fn report(config: &RunConfig, source: &str) -> bool {
    let diagnostics = validate(config, Some(source));
    for d in &diagnostics {
        eprintln!("{d}");
    }
    !has_errors(&diagnostics)
}

fn run(args: RunArgs, command: Option<Command>) -> anyhow::Result<ExitCode> {
    let (source, mut config) = load(&args.config)?;
    if let Some(c) = command {
        config.command = c;
    }
    if let Some(m) = args.method {
        config.method = m;
    }
    if let Some(t) = args.rel_tol {
        config.quadrature.rel_tol = t;
    }
    if !report(&config, &source) {
        return Ok(ExitCode::from(1));
    }
    let outcome = execute(&config, args.threads)?;
    let path = args.output.or_else(|| config.output.path.as_ref().map(PathBuf::from));
    match path {
        Some(p) => {
            let file = fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?;
            outcome.table.write_csv(&config, BufWriter::new(file))?;
        }
        None => outcome.table.write_csv(&config, io::stdout().lock())?,
    }
    if !outcome.failures.is_empty() {
        eprintln!("{} sample(s) failed", outcome.failures.len());
        if args.strict {
            return Ok(ExitCode::from(2));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.action {
        Action::Validate { config } => load(&config).map(|(source, c)| {
            if report(&c, &source) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }),
        Action::Run(a) => run(a, None),
        Action::ForceSweep(a) => run(a, Some(Command::ForceSweep)),
        Action::ThicknessScan(a) => run(a, Some(Command::ThicknessScan)),
        Action::StabilityCheck(a) => run(a, Some(Command::StabilityCheck)),
        Action::CriticalThickness(a) => run(a, Some(Command::CriticalThickness)),
        Action::StabilityDiagram(a) => run(a, Some(Command::StabilityDiagram)),
        Action::ElasticReport(a) => run(a, Some(Command::ElasticReport)),
    };
    result.unwrap_or_else(|e| {
        // A closed pipe (`cfs ... | head`) is the reader's choice, not a failure.
        if e.downcast_ref::<io::Error>()
            .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
        {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: {e:#}");
        ExitCode::from(1)
    })
}
