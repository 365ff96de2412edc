use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dwarith::config::{load_config, ModelConfig};
use dwarith::error::Error;

mod commands;
mod render;

#[derive(Parser)]
#[command(name = "dwarith", version, about = "Exact Chern-Simons style invariants of finite arithmetic models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Model document (TOML); `suite` also accepts a directory of documents.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand, Clone, Copy, Debug)]
enum Command {
    /// Local, global and gluing axiom reports.
    Validate,
    /// Representation spaces with their conjugation orbits.
    Homs,
    /// Chern-Simons 1-cocycle tables for the configured section.
    Lambda,
    /// Chern-Simons invariants of global, tube and closed models.
    Cs,
    /// Partition vectors.
    Partition,
    /// Quantum space dimensions and bases.
    Hdim,
    /// Both sides of the gluing formula.
    Glue,
    /// Section, cocycle and isomorphism transports.
    Transport,
    /// Every invariant check.
    Suite,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Structured,
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    ModelViolation = 1,
    SchemaError = 2,
    InvariantFailure = 3,
}

/// A command result: the report and the exit status it implies.
pub struct Outcome {
    pub report: Value,
    pub status: Status,
}

pub fn error_value(e: &Error) -> Value {
    json!({ "code": e.code(), "message": e.to_string() })
}

fn schema_failure(errors: &[Error]) -> Outcome {
    Outcome { report: json!({ "errors": errors.iter().map(error_value).collect::<Vec<_>>() }), status: Status::SchemaError }
}

fn config_paths(path: &Path) -> std::io::Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(path)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    Ok(paths)
}

fn run(cli: &Cli) -> Outcome {
    let Some(path) = &cli.config else {
        return schema_failure(&[Error::SchemaError { path: "--config".into(), message: "a model document is required".into() }]);
    };
    let paths = match config_paths(path) {
        Ok(p) if !p.is_empty() => p,
        Ok(_) => return schema_failure(&[Error::SchemaError { path: path.display().to_string(), message: "no .toml documents".into() }]),
        Err(e) => return schema_failure(&[Error::SchemaError { path: path.display().to_string(), message: e.to_string() }]),
    };
    if paths.len() > 1 && !matches!(cli.command, Command::Suite) {
        return schema_failure(&[Error::SchemaError {
            path: path.display().to_string(),
            message: "only `suite` accepts a directory".into(),
        }]);
    }
    let mut configs: Vec<(String, ModelConfig)> = Vec::new();
    for p in &paths {
        match load_config(p) {
            Ok(cfg) => configs.push((p.display().to_string(), cfg)),
            Err(errors) => {
                let mut outcome = schema_failure(&errors);
                outcome.report["config"] = json!(p.display().to_string());
                return outcome;
            }
        }
    }
    if let Command::Suite = cli.command {
        return commands::suite(&configs);
    }
    let cfg = &configs[0].1;
    let outcome = match cli.command {
        Command::Validate => commands::validate(cfg),
        Command::Homs => commands::homs(cfg),
        Command::Lambda => commands::lambda(cfg),
        Command::Cs => commands::cs(cfg),
        Command::Partition => commands::partition(cfg),
        Command::Hdim => commands::hdim(cfg),
        Command::Glue => commands::glue(cfg),
        Command::Transport => commands::transport(cfg),
        Command::Suite => unreachable!(),
    };
    outcome.unwrap_or_else(|e| Outcome {
        report: json!({ "model": cfg.name, "error": error_value(&e) }),
        status: Status::ModelViolation,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let mut text = match cli.format {
        Format::Structured => serde_json::to_string_pretty(&outcome.report).expect("reports serialize"),
        Format::Text => render::text(&outcome.report),
    };
    text.push('\n');
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(Status::SchemaError as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.status as u8)
}
