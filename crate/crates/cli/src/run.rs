use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use kecss_core::certification::{brute_force_opt, full_cut_lp, verify, DegreeWindow, LemmaChecker, VerifyFailure};
use kecss_core::instance::{parse_instance, trace_lines, SolutionFile};
use kecss_core::rounding::{self, ecsm_lp_value, rho};
use kecss_core::{
    DegreeState, Error, Instance, IterationObserver, NoObserver, Rational, RoundingOptions, RoundingTrace, Solution,
    SolutionMode,
};
use serde_json::json;

use crate::{read_input, write_output, CliError, Mode};

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Instance file.
    #[arg(long)]
    pub input: PathBuf,
    /// Overrides the `k` in the instance header.
    #[arg(long)]
    pub k: Option<i64>,
    /// Solution JSON: written by solving modes (stdout if absent), read by certify.
    #[arg(long)]
    pub solution: Option<PathBuf>,
    /// Trace file, one JSON object per iteration.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Check the structural lemmas at every iteration and verify the result.
    #[arg(long)]
    pub certify: bool,
    /// Seed for randomized cut enumeration.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use exhaustive separation instead of min cut plus enumeration.
    #[arg(long)]
    pub exact_sep: bool,
    #[arg(long)]
    pub max_iters: Option<usize>,
}

pub fn load(path: &PathBuf, k: Option<i64>) -> Result<Instance, CliError> {
    let mut inst = parse_instance(&read_input(path)?)?;
    if let Some(k) = k {
        inst.k = k;
    }
    Ok(inst)
}

/// Degree bounds for the md modes. A vertex without a `d` line gets an
/// upper bound that a single copy (md-ecss) or `k` copies (md-ecsm) of
/// every incident edge satisfies.
pub fn degree_bounds(inst: &Instance, mode: Mode) -> (Vec<i64>, Vec<i64>) {
    let g = &inst.graph;
    let copies = if mode == Mode::MdEcsm { inst.k.max(1) } else { 1 };
    inst.degree_vectors(|v| copies * g.incident(v).len() as i64)
}

pub fn solve(
    inst: &Instance,
    mode: Mode,
    opts: &RoundingOptions,
    observer: &mut dyn IterationObserver,
) -> Result<(Solution, RoundingTrace), CliError> {
    let g = &inst.graph;
    let k = inst.k;
    let out = match mode {
        Mode::Ecss => rounding::kecss(g, k, opts, observer),
        Mode::Ecss15 => rounding::bicriteria(g, k, opts, observer),
        Mode::Ecsm => rounding::kecsm(g, k, opts, observer),
        Mode::MdEcss => {
            let (lo, hi) = degree_bounds(inst, mode);
            rounding::md_kecss(g, k, &lo, &hi, opts, observer)
        }
        Mode::MdEcsm => {
            let (lo, hi) = degree_bounds(inst, mode);
            rounding::md_kecsm(g, k, &lo, &hi, opts, observer)
        }
        Mode::Oracle | Mode::Certify => return Err(anyhow!("{} is not a solving mode", mode.name()).into()),
    };
    Ok(out?)
}

/// What a solving mode promises: connectivity at least `target`, cost at
/// most `bound`, and degrees inside `window` when one applies.
pub struct Guarantee {
    pub target: u64,
    pub bound: Rational,
    pub window: Option<DegreeWindow>,
}

pub fn guarantee(inst: &Instance, mode: Mode, trace: &RoundingTrace) -> Result<Guarantee, CliError> {
    let k = inst.k;
    let even_floor = (k - k % 2 - 2).max(0) as u64;
    let lp0 = trace.lp0.clone();
    Ok(match mode {
        Mode::Ecss => Guarantee { target: even_floor, bound: lp0, window: None },
        Mode::Ecss15 => Guarantee { target: (k - 1) as u64, bound: &Rational::new(3, 2) * &lp0, window: None },
        Mode::Ecsm => Guarantee {
            target: k as u64,
            bound: &rho(k) * &ecsm_lp_value(&inst.graph, k, None)?,
            window: None,
        },
        Mode::MdEcss => {
            let (lo, hi) = degree_bounds(inst, mode);
            Guarantee {
                target: even_floor,
                bound: lp0,
                window: Some(DegreeWindow::around(&lo, &hi, &Rational::one(), 2)),
            }
        }
        Mode::MdEcsm => {
            let (lo, hi) = degree_bounds(inst, mode);
            let degree = DegreeState::from_integers(&lo, &hi)?;
            // If LP(k, b) is infeasible there is nothing to compare with
            // beyond the first LP of the run itself.
            let bound = match ecsm_lp_value(&inst.graph, k, Some(&degree)) {
                Ok(lp) => &rho(k) * &lp,
                Err(Error::Infeasible(_)) => lp0,
                Err(e) => return Err(e.into()),
            };
            Guarantee {
                target: k as u64,
                bound,
                window: Some(DegreeWindow::around(&lo, &hi, &rho(k), 2)),
            }
        }
        Mode::Oracle | Mode::Certify => return Err(anyhow!("{} has no guarantee", mode.name()).into()),
    })
}

fn describe(f: &VerifyFailure) -> String {
    match f {
        VerifyFailure::Shape { expected, found } => format!("expected {expected} edge multiplicities, found {found}"),
        VerifyFailure::Connectivity { target, found, cut } => {
            format!("connectivity {found} below {target}, witness cut {:?}", cut.to_vec())
        }
        VerifyFailure::Cost { cost, bound } => format!("cost {cost} exceeds {bound}"),
        VerifyFailure::Degree { vertex, degree, lower, upper } => {
            format!("degree {degree} at vertex {vertex} outside [{lower}, {upper}]")
        }
    }
}

fn ecss_multiplicity_failures(sol: &Solution) -> Vec<String> {
    sol.multiplicities
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 1)
        .map(|(e, m)| format!("edge {e} used {m} times in a subgraph solution"))
        .collect()
}

fn options(args: &RunArgs) -> RoundingOptions {
    let mut opts = RoundingOptions {
        exact_separation: args.exact_sep,
        max_iterations: args.max_iters,
        ..RoundingOptions::default()
    };
    opts.cut_enum.seed = args.seed;
    opts
}

pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let inst = load(&args.input, args.k)?;
    match args.mode {
        Mode::Oracle => oracle(&inst),
        Mode::Certify => certify(&inst, args),
        mode => solve_and_write(&inst, mode, args),
    }
}

fn solve_and_write(inst: &Instance, mode: Mode, args: &RunArgs) -> Result<(), CliError> {
    let opts = options(args);
    let (sol, trace) = if args.certify {
        let mut checker = LemmaChecker::new(inst.clone());
        let out = solve(inst, mode, &opts, &mut checker)?;
        let s = &checker.stats;
        log::info!(
            "lemma checks: {} iterations, {} uncrossing witnesses, {} token checks",
            s.iterations,
            s.witnesses,
            s.token_checks
        );
        out
    } else {
        solve(inst, mode, &opts, &mut NoObserver)?
    };

    // Artifacts are written before certification so that a failure can be inspected.
    let json = serde_json::to_string(&SolutionFile::from_solution(&sol)).map_err(anyhow::Error::from)?;
    match &args.solution {
        Some(path) => write_output(path, &(json + "\n"))?,
        None => println!("{json}"),
    }
    if let Some(path) = &args.trace {
        write_output(path, &trace_lines(&trace.iterations))?;
    }

    if args.certify {
        let want = guarantee(inst, mode, &trace)?;
        let report = verify(&inst.graph, &sol, want.target, &want.bound, want.window.as_ref());
        let mut failures: Vec<String> = report.failures.iter().map(describe).collect();
        if sol.mode == SolutionMode::Ecss {
            failures.extend(ecss_multiplicity_failures(&sol));
        }
        if !failures.is_empty() {
            return Err(CliError::Certification(failures.join("; ")));
        }
    }
    Ok(())
}

fn value_or_null(r: Result<Rational, Error>) -> Result<serde_json::Value, CliError> {
    match r {
        Ok(v) => Ok(json!(v)),
        Err(Error::Capacity(msg)) => {
            log::info!("skipped: {msg}");
            Ok(serde_json::Value::Null)
        }
        Err(e) => Err(e.into()),
    }
}

/// Brute-force optimum and full cut LP for both problems. Values outside
/// the enumeration limits print as null.
fn oracle(inst: &Instance) -> Result<(), CliError> {
    let g = &inst.graph;
    let k = inst.k;
    let out = json!({
        "k": k,
        "lp": value_or_null(full_cut_lp(g, k, SolutionMode::Ecss, None))?,
        "brute": value_or_null(brute_force_opt(g, k, SolutionMode::Ecss).map(|(c, _)| c))?,
        "ecsm_lp": value_or_null(full_cut_lp(g, k, SolutionMode::Ecsm, None))?,
        "ecsm_brute": value_or_null(brute_force_opt(g, k, SolutionMode::Ecsm).map(|(c, _)| c))?,
    });
    println!("{out}");
    Ok(())
}

/// Re-verifies a solution file. The file does not say which procedure made
/// it, so the check uses the weakest promise of its mode: connectivity
/// `k − 2` (`k − 3` for odd `k`) and cost at most `3/2` of its LP for
/// subgraphs, connectivity `k` and cost at most its LP for multigraphs.
/// Degree lines in the instance are checked with the matching window.
fn certify(inst: &Instance, args: &RunArgs) -> Result<(), CliError> {
    let path = args
        .solution
        .as_ref()
        .ok_or_else(|| anyhow!("certify mode needs --solution"))?;
    let file: SolutionFile = serde_json::from_str(&read_input(path)?)
        .map_err(|e| CliError::Parse(format!("solution {}: {e}", path.display())))?;
    let g = &inst.graph;
    let k = file.k;
    let mult = file.multiplicities(g.m()).map_err(|e| CliError::Certification(e.to_string()))?;
    let sol = Solution::from_multiplicities(g, file.mode, k, k, mult, file.lp.clone())?;

    let (target, bound, scale) = match file.mode {
        SolutionMode::Ecss => ((k - k % 2 - 2).max(0) as u64, &Rational::new(3, 2) * &file.lp, Rational::one()),
        SolutionMode::Ecsm => (k.max(0) as u64, file.lp.clone(), if k >= 1 { rho(k) } else { Rational::one() }),
    };
    let window = (!inst.degree.is_empty()).then(|| {
        let mode = if file.mode == SolutionMode::Ecsm { Mode::MdEcsm } else { Mode::MdEcss };
        let (lo, hi) = degree_bounds(inst, mode);
        DegreeWindow::around(&lo, &hi, &scale, 2)
    });
    let report = verify(g, &sol, target, &bound, window.as_ref());

    let mut failures: Vec<String> = report.failures.iter().map(describe).collect();
    if file.cost != report.cost {
        failures.push(format!("claimed cost {} but the edges cost {}", file.cost, report.cost));
    }
    if file.connectivity != report.connectivity {
        failures.push(format!(
            "claimed connectivity {} but the multigraph is {}-edge-connected",
            file.connectivity, report.connectivity
        ));
    }
    if file.mode == SolutionMode::Ecss {
        failures.extend(ecss_multiplicity_failures(&sol));
    }
    let out = json!({
        "passed": failures.is_empty(),
        "cost": report.cost,
        "connectivity": report.connectivity,
        "failures": failures,
    });
    println!("{out}");
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Certification(failures.join("; ")))
    }
}
