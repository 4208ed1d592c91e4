use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::Args;
use kecss_core::rounding::{ecsm_lp_value, rho};
use kecss_core::{NoObserver, Rational, RoundingOptions};
use rayon::prelude::*;

use crate::run::{load, solve};
use crate::{CliError, Mode};

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Directory of `*.kecss` instance files.
    #[arg(long)]
    pub dir: PathBuf,
    /// CSV output path.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "ecss,ecss15,ecsm")]
    pub modes: Vec<Mode>,
    /// Base seed; each instance derives its own from its position.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

const HEADER: [&str; 15] = [
    "instance",
    "mode",
    "n",
    "m",
    "k",
    "lp0",
    "reference_lp",
    "cost",
    "ratio",
    "ratio_decimal",
    "bound",
    "within_bound",
    "connectivity",
    "iterations",
    "wall_ms",
];

#[derive(Debug, Clone)]
pub struct Row {
    pub instance: String,
    pub mode: Mode,
    pub outcome: Result<Measured, String>,
}

#[derive(Debug, Clone)]
pub struct Measured {
    pub n: usize,
    pub m: usize,
    pub k: i64,
    pub lp0: Rational,
    pub reference: Rational,
    pub cost: Rational,
    /// `None` when the reference LP is zero and the cost is not.
    pub ratio: Option<Rational>,
    pub bound: Rational,
    pub connectivity: u64,
    pub iterations: usize,
    pub wall_ms: f64,
}

impl Measured {
    pub fn within_bound(&self) -> bool {
        self.ratio.as_ref().is_some_and(|r| *r <= self.bound)
    }
}

/// Cost ratio bound for each mode and the LP it is measured against.
fn bound_for(mode: Mode, k: i64) -> Rational {
    match mode {
        Mode::Ecss15 => Rational::new(3, 2),
        Mode::Ecsm => rho(k),
        _ => Rational::one(),
    }
}

fn measure(path: &Path, mode: Mode, seed: u64) -> Result<Measured, CliError> {
    let inst = load(&path.to_path_buf(), None)?;
    let mut opts = RoundingOptions::default();
    opts.cut_enum.seed = seed;
    let start = Instant::now();
    let (sol, trace) = solve(&inst, mode, &opts, &mut NoObserver)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let reference = match mode {
        Mode::Ecsm => ecsm_lp_value(&inst.graph, inst.k, None)?,
        _ => trace.lp0.clone(),
    };
    let ratio = if reference.is_zero() {
        sol.cost.is_zero().then(Rational::zero)
    } else {
        Some(&sol.cost / &reference)
    };
    Ok(Measured {
        n: inst.graph.n(),
        m: inst.graph.m(),
        k: inst.k,
        lp0: trace.lp0.clone(),
        reference,
        cost: sol.cost.clone(),
        ratio,
        bound: bound_for(mode, inst.k),
        connectivity: sol.connectivity,
        iterations: trace.iterations.len(),
        wall_ms,
    })
}

pub fn instance_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "kecss") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Runs every (instance, mode) pair in parallel; rows come back in file then
/// mode order.
pub fn collect(files: &[PathBuf], modes: &[Mode], seed: u64) -> Vec<Row> {
    let jobs: Vec<(usize, &PathBuf, Mode)> = files
        .iter()
        .enumerate()
        .flat_map(|(i, f)| modes.iter().map(move |&m| (i, f, m)))
        .collect();
    jobs.par_iter()
        .map(|&(i, path, mode)| Row {
            instance: path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
            mode,
            outcome: measure(path, mode, seed.wrapping_add(i as u64)).map_err(|e| e.to_string()),
        })
        .collect()
}

fn record(row: &Row) -> Vec<String> {
    let mut out = vec![row.instance.clone(), row.mode.name().to_string()];
    match &row.outcome {
        Ok(m) => {
            let (ratio, decimal) = match &m.ratio {
                Some(r) => (r.to_string(), format!("{:.6}", r.to_f64())),
                None => ("inf".to_string(), "inf".to_string()),
            };
            out.extend([
                m.n.to_string(),
                m.m.to_string(),
                m.k.to_string(),
                m.lp0.to_string(),
                m.reference.to_string(),
                m.cost.to_string(),
                ratio,
                decimal,
                m.bound.to_string(),
                m.within_bound().to_string(),
                m.connectivity.to_string(),
                m.iterations.to_string(),
                format!("{:.3}", m.wall_ms),
                String::new(),
            ]);
        }
        Err(e) => {
            out.extend(std::iter::repeat_n(String::new(), HEADER.len() - 2));
            out.push(e.clone());
        }
    }
    out
}

pub fn bench(args: &BenchArgs) -> Result<(), CliError> {
    let files = instance_files(&args.dir)?;
    if files.is_empty() {
        return Err(anyhow!("no *.kecss files in {}", args.dir.display()).into());
    }
    let rows = collect(&files, &args.modes, args.seed);
    let mut w = csv::Writer::from_path(&args.out).with_context(|| format!("writing {}", args.out.display()))?;
    w.write_record(HEADER.iter().copied().chain(["error"])).map_err(anyhow::Error::from)?;
    for row in &rows {
        w.write_record(record(row)).map_err(anyhow::Error::from)?;
    }
    w.flush().map_err(anyhow::Error::from)?;

    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    if failed > 0 {
        log::warn!("{failed} of {} runs failed; see the error column", rows.len());
    }
    let over: Vec<String> = rows
        .iter()
        .filter(|r| r.outcome.as_ref().is_ok_and(|m| !m.within_bound()))
        .map(|r| format!("{} {}", r.instance, r.mode.name()))
        .collect();
    if over.is_empty() {
        Ok(())
    } else {
        Err(CliError::Certification(format!("ratio above the mode bound: {}", over.join(", "))))
    }
}
