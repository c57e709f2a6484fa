//! `blockalg`: batch front end for the blockalg engine.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{parse_range, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "blockalg",
    version,
    about = "Exact computations for Block-type Lie algebras and their modules"
)]
struct Cli {
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Fail on recorded discrepancies, not only on violations.
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "BLOCKALG_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a bracket of two elements given as JSON.
    Bracket {
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Antisymmetry/Jacobi sweep and Virasoro consistency on a window.
    Axioms {
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        degree_bound: Option<i64>,
        #[arg(long)]
        level_cap: Option<i64>,
    },
    /// Build and analyze an intermediate-series window.
    Module {
        #[arg(long, default_value = "Aab")]
        family: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        b: String,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        range: Option<(i64, i64)>,
        #[arg(long)]
        level_cap: Option<i64>,
        #[command(subcommand)]
        action: commands::ModuleAction,
    },
    /// Truncated Verma modules over the quotients with levels 0..=n.
    Verma {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        depth: i64,
        /// JSON file {"lambda": [...], "c": ...}; defaults to the zero weight.
        #[arg(long)]
        lambda: Option<PathBuf>,
        #[command(subcommand)]
        action: commands::VermaAction,
    },
    /// Run the identity-verification suite.
    Lemmas {
        /// Keep only claims whose identifier starts with this prefix.
        #[arg(long)]
        only: Option<String>,
    },
    /// Classify a module window read from a JSON file.
    Classify {
        #[arg(long)]
        module: PathBuf,
    },
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    cfg.strict |= cli.strict;
    let report = match cli.command {
        Command::Bracket { variant, x, y } => {
            if let Some(v) = variant {
                cfg.variant = v;
            }
            commands::bracket(&cfg, &x, &y)?
        }
        Command::Axioms { variant, degree_bound, level_cap } => {
            if let Some(v) = variant {
                cfg.variant = v;
            }
            cfg.degree_bound = degree_bound.unwrap_or(cfg.degree_bound);
            cfg.level_cap = level_cap.unwrap_or(cfg.level_cap);
            cfg.validate()?;
            commands::axioms(&cfg)?
        }
        Command::Module { family, a, b, range, level_cap, action } => {
            cfg.range = range.unwrap_or(cfg.range);
            cfg.level_cap = level_cap.unwrap_or(cfg.level_cap);
            cfg.validate()?;
            commands::module(&cfg, &family, &a, &b, action)?
        }
        Command::Verma { n, depth, lambda, action } => {
            if lambda.is_some() {
                cfg.lambda = lambda;
            }
            commands::verma(&cfg, n, depth, action)?
        }
        Command::Lemmas { only } => commands::lemmas(&cfg, only.as_deref())?,
        Command::Classify { module } => commands::classify(&module)?,
    };
    print!("{}", report.render(cfg.format)?);
    if let Some(path) = &cli.out {
        report.write_json(path)?;
    }
    Ok(report.exit_code(cfg.strict))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
