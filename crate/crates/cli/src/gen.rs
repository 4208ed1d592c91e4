use std::path::PathBuf;

use anyhow::anyhow;
use clap::{Args, ValueEnum};
use kecss_core::instance::{emit_instance, generate, GenKind};

use crate::{write_output, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Random,
    Complete,
    Cycle,
    #[value(name = "appendixB-k3")]
    GapK3,
    #[value(name = "appendixB-k6")]
    GapK6,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability for random instances.
    #[arg(long)]
    pub p: Option<f64>,
    /// Connectivity written into the header.
    #[arg(long, default_value_t = 4)]
    pub k: i64,
    /// Uniform cost for complete and cycle instances.
    #[arg(long, default_value_t = 1)]
    pub cost: i64,
    #[arg(long, default_value_t = 1)]
    pub cost_min: i64,
    #[arg(long, default_value_t = 10)]
    pub cost_max: i64,
    /// Parallel copies per sampled pair are drawn from `1..=max_mult`.
    #[arg(long, default_value_t = 1)]
    pub max_mult: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn need<T>(v: Option<T>, what: &str, kind: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Other(anyhow!("--{what} is required for {kind} instances")))
}

pub fn kind_of(args: &GenArgs) -> Result<GenKind, CliError> {
    Ok(match args.kind {
        Kind::Random => GenKind::Random {
            n: need(args.n, "n", "random")?,
            p: need(args.p, "p", "random")?,
            costs: (args.cost_min, args.cost_max),
            k: args.k,
            max_mult: args.max_mult,
        },
        Kind::Complete => GenKind::Complete { n: need(args.n, "n", "complete")?, cost: args.cost, k: args.k },
        Kind::Cycle => GenKind::Cycle { n: need(args.n, "n", "cycle")?, cost: args.cost, k: args.k },
        Kind::GapK3 => GenKind::GapK3,
        Kind::GapK6 => GenKind::GapK6,
    })
}

pub fn gen(args: &GenArgs) -> Result<(), CliError> {
    let inst = generate(&kind_of(args)?, args.seed)?;
    let text = emit_instance(&inst)?;
    match &args.output {
        Some(path) => write_output(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
