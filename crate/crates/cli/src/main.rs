use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod bench;
mod gen;
mod run;

/// Iterative LP rounding for k-edge-connected spanning subgraphs and multigraphs.
#[derive(Parser, Debug)]
#[command(name = "kecss", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve, certify or inspect one instance.
    Run(run::RunArgs),
    /// Write a generated instance in canonical form.
    Gen(gen::GenArgs),
    /// Run every `*.kecss` file in a directory and emit a CSV summary.
    Bench(bench::BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ecss,
    Ecss15,
    Ecsm,
    MdEcss,
    MdEcsm,
    Oracle,
    Certify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Ecss => "ecss",
            Mode::Ecss15 => "ecss15",
            Mode::Ecsm => "ecsm",
            Mode::MdEcss => "md-ecss",
            Mode::MdEcsm => "md-ecsm",
            Mode::Oracle => "oracle",
            Mode::Certify => "certify",
        }
    }
}

/// Failure classes with fixed exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Certification(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Infeasible(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Certification(_) => 3,
            CliError::Other(_) => 4,
        }
    }
}

impl From<kecss_core::Error> for CliError {
    fn from(e: kecss_core::Error) -> Self {
        use kecss_core::Error as E;
        match e {
            E::Infeasible(_) => CliError::Infeasible(e.to_string()),
            E::Parse { .. } => CliError::Parse(e.to_string()),
            E::Certification(_) => CliError::Certification(e.to_string()),
            other => CliError::Other(other.into()),
        }
    }
}

pub fn read_input(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Other(anyhow::anyhow!("reading {}: {e}", path.display())))
}

pub fn write_output(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Other(anyhow::anyhow!("writing {}: {e}", path.display())))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            // Exit 2 is reserved for instance parse errors.
            return ExitCode::from(if usage { 64 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Run(args) => run::run(&args),
        Command::Gen(args) => gen::gen(&args),
        Command::Bench(args) => bench::bench(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code())
        }
    }
}
