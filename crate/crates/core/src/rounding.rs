//! Iterative LP rounding for k-ECSS, k-ECSM and their degree-bounded
//! variants.
//!
//! Every procedure shares one loop: solve the residual LP to an extreme
//! point, pick edges by the procedure's rule, shrink the working edge set,
//! and recompute the residual requirement. The loop checks the cost ledger
//! and progress at runtime and hands every extreme point to an
//! [`IterationObserver`].

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::{edge_connectivity, for_each_cut, CutEnumOptions, Multigraph, VertexSet};
use crate::lp::{solve_lazy, BasicOptimum, LpInstance, OracleVerdict, Row, Sense};
use crate::rational::Rational;
use crate::requirement::{DegreeState, Requirement};
use crate::separation::{
    cut_row, separate_exact, separate_fast_with, separate_plain, FractionalSolution, SeparationVerdict,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Procedure {
    /// Pick `x = 1`, threshold 3.
    KecssEven,
    /// Pick `x >= 2/3`, threshold 2.
    Bicriteria,
    /// Floor extraction, then pick `x = 1` with multiplicities.
    KecsmCore,
    /// Pick `x = 1` under degree rows.
    MdKecss,
    /// Floor extraction, then the degree-bounded loop with multiplicities.
    MdKecsm,
}

impl Procedure {
    pub fn threshold(self) -> i64 {
        match self {
            Procedure::Bicriteria => 2,
            _ => 3,
        }
    }

    pub fn has_degree_rows(self) -> bool {
        matches!(self, Procedure::MdKecss | Procedure::MdKecsm)
    }

    /// Multiplier on the residual LP value in the cost ledger.
    pub fn ledger_factor(self) -> Rational {
        match self {
            Procedure::Bicriteria => Rational::new(3, 2),
            _ => Rational::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionMode {
    Ecss,
    Ecsm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub mode: SolutionMode,
    /// Requested connectivity.
    pub k: i64,
    /// Parameter the procedure ran with.
    pub run_k: i64,
    pub multiplicities: Vec<u64>,
    pub cost: Rational,
    pub connectivity: u64,
    /// Value of the first LP solved.
    pub lp_value: Rational,
}

impl Solution {
    pub fn from_multiplicities(
        g: &Multigraph,
        mode: SolutionMode,
        k: i64,
        run_k: i64,
        multiplicities: Vec<u64>,
        lp_value: Rational,
    ) -> Result<Self> {
        let cost = solution_cost(g, &multiplicities);
        let connectivity = if g.n() < 2 { 0 } else { edge_connectivity(g, &multiplicities)? };
        Ok(Solution {
            mode,
            k,
            run_k,
            multiplicities,
            cost,
            connectivity,
            lp_value,
        })
    }

    pub fn degree(&self, g: &Multigraph, v: usize) -> u64 {
        g.incident(v).iter().map(|&e| self.multiplicities[e]).sum()
    }
}

pub fn solution_cost(g: &Multigraph, mult: &[u64]) -> Rational {
    g.edges()
        .iter()
        .filter(|e| mult[e.id] > 0)
        .map(|e| &e.cost * &Rational::from(mult[e.id]))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub lp: Rational,
    /// Nonzero coordinates of the extreme point by edge id.
    pub point: Vec<(usize, Rational)>,
    pub picked: Vec<usize>,
    pub frac_support: usize,
    pub dropped_witnesses: Vec<VertexSet>,
    pub dropped_vertices: Vec<usize>,
    pub lazy_rows: usize,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundingTrace {
    pub procedure: Procedure,
    pub lp0: Rational,
    pub iterations: Vec<IterationRecord>,
}

#[derive(Debug, Clone)]
pub struct RoundingOptions {
    /// Use the exhaustive oracle instead of min cut plus enumeration.
    pub exact_separation: bool,
    pub max_iterations: Option<usize>,
    pub cut_enum: CutEnumOptions,
    /// Dropped-set witnesses recorded per iteration.
    pub witness_limit: usize,
}

impl Default for RoundingOptions {
    fn default() -> Self {
        RoundingOptions {
            exact_separation: false,
            max_iterations: None,
            cut_enum: CutEnumOptions::default(),
            witness_limit: 64,
        }
    }
}

/// Snapshot handed to observers after each residual LP solve.
pub struct IterationView<'a> {
    pub procedure: Procedure,
    pub iter: usize,
    pub graph: &'a Multigraph,
    /// Requirement at the start of the iteration.
    pub requirement: &'a Requirement,
    pub point: &'a FractionalSolution,
    pub lp: &'a LpInstance,
    pub optimum: &'a BasicOptimum,
}

pub trait IterationObserver {
    fn on_iteration(&mut self, view: &IterationView<'_>) -> Result<()>;
}

/// Observer that accepts everything.
pub struct NoObserver;

impl IterationObserver for NoObserver {
    fn on_iteration(&mut self, _: &IterationView<'_>) -> Result<()> {
        Ok(())
    }
}

/// Largest `n` for which dropped sets are found by full enumeration.
const WITNESS_ENUM_LIMIT: usize = 16;

struct RunState {
    req: Requirement,
    working: Vec<usize>,
    carried: Vec<VertexSet>,
    picked_cost: Rational,
    lp0: Option<Rational>,
    prev_point: Option<FractionalSolution>,
    witnesses: Vec<VertexSet>,
    trace: Vec<IterationRecord>,
    /// Allow the relaxed vertex-drop rule when the standard rule stalls.
    relaxed_drop: bool,
}

fn lazy_row_cap(g: &Multigraph) -> usize {
    10 * (g.m() + (1usize << g.n().min(20)))
}

fn degree_rows(g: &Multigraph, req: &Requirement, working: &[usize]) -> Vec<Row> {
    let Some(d) = &req.degree else { return Vec::new() };
    let mut rows = Vec::new();
    for v in d.active.iter() {
        let (lo, hi) = req.residual_degree(g, v).expect("degree state");
        let coeffs: Vec<(usize, Rational)> = working
            .iter()
            .enumerate()
            .filter(|(_, &e)| g.edge(e).crosses(VertexSet::singleton(v)))
            .map(|(i, _)| (i, Rational::one()))
            .collect();
        if lo.is_positive() {
            rows.push(Row::new(coeffs.clone(), Sense::Ge, lo));
        }
        rows.push(Row::new(coeffs, Sense::Le, hi));
    }
    rows
}

fn residual_lp(g: &Multigraph, st: &RunState, cuts_active: bool) -> (LpInstance, Vec<VertexSet>) {
    let mut lp = LpInstance::new(st.working.len(), Some(Rational::one()));
    lp.objective = st.working.iter().map(|&e| g.cost(e).clone()).collect();
    lp.rows = degree_rows(g, &st.req, &st.working);
    let mut seeds = Vec::new();
    if cuts_active {
        let n = g.n();
        let singles = (1..=n).map(|v| VertexSet::singleton(v).canonical(n));
        for s in singles.chain(st.carried.iter().copied()) {
            if !seeds.contains(&s) && st.req.in_active_family(g, s) {
                seeds.push(s);
            }
        }
        for &s in &seeds {
            lp.rows.push(cut_row(g, &st.working, s, st.req.residual(g, s)));
        }
    }
    (lp, seeds)
}

fn separate(
    g: &Multigraph,
    x: &FractionalSolution,
    req: &Requirement,
    opts: &RoundingOptions,
) -> Result<SeparationVerdict> {
    if opts.exact_separation {
        separate_exact(g, x, req)
    } else {
        separate_fast_with(g, x, req, &opts.cut_enum)
    }
}

/// Vertices of `active` that keep their degree rows under the standard rule:
/// `x(δ_{E'}(v)) > 2` or `|δ_{E'}(v)| − x(δ_{E'}(v)) > 2`.
fn surviving_vertices(g: &Multigraph, active: VertexSet, x: &FractionalSolution) -> VertexSet {
    let two = Rational::from(2);
    VertexSet::from_vertices(active.iter().filter(|&v| {
        let sv = VertexSet::singleton(v);
        let count = x.iter().filter(|(e, _)| g.edge(*e).crosses(sv)).count();
        let load = x.at_vertex(g, v);
        load > two || &Rational::from(count) - &load > two
    }))
}

/// Relaxed rule, used only when the standard one stalls: drop `v` when
/// `ℓ^res_v <= 2` and `|δ_{E'}(v)| <= b^res_v + 2`. Both degree windows stay
/// valid because every remaining edge at `v` can add at most one copy.
fn relaxed_surviving(g: &Multigraph, req: &Requirement, active: VertexSet, x: &FractionalSolution) -> VertexSet {
    let two = Rational::from(2);
    VertexSet::from_vertices(active.iter().filter(|&v| {
        let (lo, hi) = req.residual_degree(g, v).expect("degree state");
        let sv = VertexSet::singleton(v);
        let count = Rational::from(x.iter().filter(|(e, _)| g.edge(*e).crosses(sv)).count());
        !(lo <= two && count <= &hi + &two)
    }))
}

fn dropped_sets(g: &Multigraph, before: &Requirement, after: &Requirement, candidates: &[VertexSet], limit: usize) -> Result<Vec<VertexSet>> {
    let mut out = Vec::new();
    if g.n() <= WITNESS_ENUM_LIMIT && g.n() >= 2 {
        let t = before.threshold;
        let caps_before = before.picked_capacities();
        let mut was_active = Vec::new();
        for_each_cut(g, &caps_before, |s, v| {
            if before.k - v.to_i64().expect("integral") >= t {
                was_active.push(s);
            }
        })?;
        was_active.sort();
        for s in was_active {
            if out.len() >= limit {
                break;
            }
            if !after.in_active_family(g, s) {
                out.push(s);
            }
        }
    } else {
        for &s in candidates {
            if out.len() >= limit {
                break;
            }
            if before.in_active_family(g, s) && !after.in_active_family(g, s) && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy)]
enum PickRule {
    One,
    TwoThirds,
}

#[derive(Clone, Copy)]
enum KeepRule {
    /// `E' ← E' − Q`: zero edges stay.
    AllButPicked,
    /// `E' ← {0 < x < 1}`, or `{0 < x < 2/3}` for the bicriteria rule.
    Open,
}

fn run_loop(
    g: &Multigraph,
    procedure: Procedure,
    st: &mut RunState,
    opts: &RoundingOptions,
    observer: &mut dyn IterationObserver,
) -> Result<()> {
    let (pick_rule, keep_rule) = match procedure {
        Procedure::KecssEven => (PickRule::One, KeepRule::AllButPicked),
        Procedure::Bicriteria => (PickRule::TwoThirds, KeepRule::Open),
        _ => (PickRule::One, KeepRule::Open),
    };
    let pick_at = match pick_rule {
        PickRule::One => Rational::one(),
        PickRule::TwoThirds => Rational::new(2, 3),
    };
    let factor = procedure.ledger_factor();
    let mut cap = g.m() + if procedure.has_degree_rows() { g.n() } else { 0 };
    if let Some(m) = opts.max_iterations {
        cap = cap.min(m);
    }
    let first_iter = st.trace.len();
    loop {
        let cuts_active = st.req.active_family_nonempty(g)?;
        let verts_active = st.req.degree.as_ref().is_some_and(|d| !d.active.is_empty());
        if !cuts_active && !verts_active {
            return Ok(());
        }
        let iter = st.trace.len();
        if iter - first_iter >= cap {
            return Err(Error::IterationCap {
                cap,
                detail: format!("{procedure:?} rounding iterations"),
            });
        }

        let (mut lp, mut cut_sets) = residual_lp(g, st, cuts_active);
        let static_rows = lp.rows.len();
        let working = st.working.clone();
        let req = st.req.clone();
        let mut found = Vec::new();
        let solved = solve_lazy(
            &mut lp,
            |x| {
                if !cuts_active {
                    return Ok(OracleVerdict::Feasible);
                }
                let point = FractionalSolution::new(working.clone(), x.to_vec())?;
                Ok(match separate(g, &point, &req, opts)? {
                    SeparationVerdict::Feasible => OracleVerdict::Feasible,
                    SeparationVerdict::Violated(c) => {
                        found.push(c.set);
                        OracleVerdict::Violated(c.row)
                    }
                })
            },
            lazy_row_cap(g),
        );
        let opt = match solved {
            Ok(o) => o,
            Err(Error::Infeasible(_)) if iter == 0 => {
                return Err(Error::Infeasible(format!(
                    "residual LP of {procedure:?} has no feasible point for k = {}",
                    st.req.k
                )))
            }
            Err(e) => return Err(e),
        };
        cut_sets.extend(found);
        let x = FractionalSolution::new(st.working.clone(), opt.point.clone())?;

        // Cost ledger: c(H) + factor·LP_t <= factor·LP₀.
        let lp0 = st.lp0.get_or_insert_with(|| opt.value.clone()).clone();
        if &st.picked_cost + &(&factor * &opt.value) > &factor * &lp0 {
            return Err(Error::Certification(format!(
                "cost ledger broken at iteration {iter}: c(H) = {}, LP = {}, LP0 = {lp0}",
                st.picked_cost, opt.value
            )));
        }
        if let Some(prev) = &st.prev_point {
            if prev.edges != st.working || !lp.is_feasible(&prev.values) {
                return Err(Error::Certification(format!(
                    "previous extreme point restricted to E' is infeasible for the residual LP at iteration {iter}"
                )));
            }
        }

        observer.on_iteration(&IterationView {
            procedure,
            iter,
            graph: g,
            requirement: &st.req,
            point: &x,
            lp: &lp,
            optimum: &opt,
        })?;

        // Pick and shrink.
        let before = st.req.clone();
        let mut picked = Vec::new();
        let mut next_working = Vec::new();
        let mut next_values = Vec::new();
        for (e, v) in x.iter() {
            if *v >= pick_at {
                picked.push(e);
                st.req.picked[e] += 1;
                st.picked_cost += g.cost(e);
                continue;
            }
            let keep = match keep_rule {
                KeepRule::AllButPicked => true,
                KeepRule::Open => v.is_positive(),
            };
            if keep {
                next_working.push(e);
                next_values.push(v.clone());
            }
        }
        let shrunk = next_working.len() < st.working.len();
        let next_x = FractionalSolution::new(next_working.clone(), next_values)?;
        let mut dropped_vertices = Vec::new();
        if let Some(d) = st.req.degree.as_mut() {
            let old = d.active;
            d.active = surviving_vertices(g, old, &next_x);
            dropped_vertices = old.difference(d.active).to_vec();
        }
        let progressed = !picked.is_empty()
            || !dropped_vertices.is_empty()
            || (procedure.has_degree_rows() && shrunk);
        if !progressed {
            let relaxed = if st.relaxed_drop {
                let req_now = st.req.clone();
                st.req.degree.as_mut().map(|d| {
                    let old = d.active;
                    d.active = relaxed_surviving(g, &req_now, old, &next_x);
                    old.difference(d.active).to_vec()
                })
            } else {
                None
            };
            match relaxed {
                Some(vs) if !vs.is_empty() => {
                    log::warn!("iteration {iter}: standard vertex-drop rule stalled; relaxed rule dropped {vs:?}");
                    dropped_vertices = vs;
                }
                _ => {
                    return Err(Error::NoProgress {
                        iter,
                        detail: format!("{procedure:?}: no edge picked, no vertex dropped, LP value {}", opt.value),
                    })
                }
            }
        }

        let witnesses = dropped_sets(g, &before, &st.req, &cut_sets, opts.witness_limit)?;
        if let Some(s) = st.witnesses.iter().find(|s| st.req.in_active_family(g, **s)) {
            return Err(Error::Certification(format!("dropped set {s:?} re-entered the active family")));
        }
        st.witnesses.extend(witnesses.iter().copied());
        log::debug!(
            "{procedure:?} iter {iter}: lp {} picked {} frac {} rows {}",
            opt.value,
            picked.len(),
            x.fractional().len(),
            lp.rows.len()
        );
        st.trace.push(IterationRecord {
            iter,
            lp: opt.value.clone(),
            point: x.iter().filter(|(_, v)| !v.is_zero()).map(|(e, v)| (e, v.clone())).collect(),
            picked,
            frac_support: x.fractional().len(),
            dropped_witnesses: witnesses,
            dropped_vertices,
            lazy_rows: lp.rows.len() - static_rows,
            pivots: opt.pivots,
        });
        st.carried = cut_sets;
        st.working = next_working;
        st.prev_point = Some(next_x);
    }
}

fn fresh_state(g: &Multigraph, k: i64, procedure: Procedure) -> Result<RunState> {
    Ok(RunState {
        req: Requirement::new(g, k, procedure.threshold())?,
        working: (0..g.m()).collect(),
        carried: Vec::new(),
        picked_cost: Rational::zero(),
        lp0: None,
        prev_point: None,
        witnesses: Vec::new(),
        trace: Vec::new(),
        relaxed_drop: false,
    })
}

fn finish(
    g: &Multigraph,
    procedure: Procedure,
    mode: SolutionMode,
    k: i64,
    run_k: i64,
    st: RunState,
) -> Result<(Solution, RoundingTrace)> {
    let lp0 = st.lp0.unwrap_or_else(Rational::zero);
    let sol = Solution::from_multiplicities(g, mode, k, run_k, st.req.picked, lp0.clone())?;
    Ok((
        sol,
        RoundingTrace {
            procedure,
            lp0,
            iterations: st.trace,
        },
    ))
}

/// Even-`k` rounding: a `(k−2)`-edge-connected subgraph of cost at
/// most the LP optimum.
pub fn kecss_even(
    g: &Multigraph,
    k: i64,
    opts: &RoundingOptions,
    observer: &mut dyn IterationObserver,
) -> Result<(Solution, RoundingTrace)> {
    if k < 2 || k % 2 != 0 {
        return Err(domain(format!("kecss_even needs an even k >= 2, got {k}")));
    }
    if k == 2 {
        log::warn!("k = 2: the active family starts empty, returning the empty subgraph");
    }
    let mut st = fresh_state(g, k, Procedure::KecssEven)?;
    run_loop(g, Procedure::KecssEven, &mut st, opts, observer)?;
    finish(g, Procedure::KecssEven, SolutionMode::Ecss, k, k, st)
}

/// Runs [`kecss_even`] with `k` or `k − 1`, whichever is even.
pub fn kecss(
    g: &Multigraph,
    k: i64,
    opts: &RoundingOptions,
    observer: &mut dyn IterationObserver,
) -> Result<(Solution, RoundingTrace)> {
    if k < 2 {
        return Err(domain(format!("kecss needs k >= 2, got {k}")));
    }
    let run_k = k - k % 2;
    let (mut sol, trace) = kecss_even(g, run_k, opts, observer)?;
    sol.k = k;
    Ok((sol, trace))
}

/// Bicriteria rounding: `(k−1)`-edge-connected, cost at most `3/2` the LP optimum.
pub fn bicriteria(
    g: &Multigraph,
    k: i64,
    opts: &RoundingOptions,
    observer: &mut dyn IterationObserver,
) -> Result<(Solution, RoundingTrace)> {
    if k < 2 {
        return Err(domain(format!("bicriteria needs k >= 2, got {k}")));
    }
    let mut st = fresh_state(g, k, Procedure::Bicriteria)?;
    run_loop(g, Procedure::Bicriteria, &mut st, opts, observer)?;
    finish(g, Procedure::Bicriteria, SolutionMode::Ecss, k, k, st)
}

/// Optimum of the multigraph LP at `k`, with optional degree rows.
pub fn ecsm_lp_value(g: &Multigraph, k: i64, degree: Option<&DegreeState>) -> Result<Rational> {
    if k < 1 {
        return Err(domain(format!("multigraph LP needs k >= 1, got {k}")));
    }
    Ok(unbounded_lp(g, k, degree)?.1.value)
}

/// Solves the relaxation without upper bounds, with optional degree rows
/// `lower <= x(δ(v)) <= upper` on every vertex.
fn unbounded_lp(g: &Multigraph, k: i64, degree: Option<&DegreeState>) -> Result<(LpInstance, BasicOptimum)> {
    let mut lp = LpInstance::new(g.m(), None);
    lp.objective = g.edges().iter().map(|e| e.cost.clone()).collect();
    let all: Vec<usize> = (0..g.m()).collect();
    for v in 1..=g.n() {
        let sv = VertexSet::singleton(v);
        if let Some(d) = degree {
            let coeffs = cut_row(g, &all, sv, 0).coeffs;
            if d.lower[v - 1].is_positive() {
                lp.rows.push(Row::new(coeffs.clone(), Sense::Ge, d.lower[v - 1].clone()));
            }
            lp.rows.push(Row::new(coeffs, Sense::Le, d.upper[v - 1].clone()));
        }
        if g.n() >= 2 {
            lp.rows.push(cut_row(g, &all, sv, k));
        }
    }
    let opt = solve_lazy(
        &mut lp,
        |x| {
            Ok(match separate_plain(g, x, k)? {
                Some((_, row)) => OracleVerdict::Violated(row),
                None => OracleVerdict::Feasible,
            })
        },
        lazy_row_cap(g),
    )
    .map_err(|e| match e {
        Error::Infeasible(_) => Error::Infeasible(format!("multigraph LP has no feasible point for k = {k}")),
        other => other,
    })?;
    Ok((lp, opt))
}

/// Floor extraction shared by the multigraph procedures.
fn extract_floor(g: &Multigraph, st: &mut RunState, opt: &BasicOptimum) -> Result<()> {
    let mut working = Vec::new();
    let mut frac = Vec::new();
    let mut picked = Vec::new();
    for (e, x) in opt.point.iter().enumerate() {
        let w = x.floor();
        let wi = w.to_i64().expect("floor fits") as u64;
        if wi > 0 {
            picked.push(e);
        }
        st.req.picked[e] = wi;
        st.picked_cost += &(g.cost(e) * &w);
        if *x > w {
            working.push(e);
            frac.push(x - &w);
        }
    }
    let z = FractionalSolution::new(working.clone(), frac)?;
    st.trace.push(IterationRecord {
        iter: 0,
        lp: opt.value.clone(),
        point: opt
            .point
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(e, v)| (e, v.clone()))
            .collect(),
        picked,
        frac_support: working.len(),
        dropped_witnesses: Vec::new(),
        dropped_vertices: Vec::new(),
        lazy_rows: 0,
        pivots: opt.pivots,
    });
    if let Some(d) = st.req.degree.as_mut() {
        let old = d.active;
        d.active = surviving_vertices(g, old, &z);
        st.trace[0].dropped_vertices = old.difference(d.active).to_vec();
    }
    st.lp0 = Some(opt.value.clone());
    st.working = working;
    st.prev_point = Some(z);
    Ok(())
}

/// Multigraph rounding for even `k >= 4`: a `(k−2)`-edge-connected multigraph of
/// cost at most the multigraph LP optimum.
pub fn kecsm_core(
    g: &Multigraph,
    k: i64,
    opts: &RoundingOptions,
    observer: &mut dyn IterationObserver,
) -> Result<(Solution, RoundingTrace)> {
    if k < 4 || k % 2 != 0 {
        return Err(domain(format!("kecsm_core needs an even k >= 4, got {k}")));
    }
    let mut st = fresh_state(g, k, Procedure::KecsmCore)?;
    let (_, opt) = unbounded_lp(g, k, None)?;
    extract_floor(g, &mut st, &opt)?;
    run_loop(g, Procedure::KecsmCore, &mut st, opts, observer)?;
    finish(g, Procedure::KecsmCore, SolutionMode::Ecsm, k, k, st)
}

/// `k + 2` for even `k`, `k + 3` for odd `k`.
pub fn ecsm_run_k(k: i64) -> i64 {
    if k % 2 == 0 {
        k + 2
    } else {
        k + 3
    }
}

/// `ρ_k = run_k / k`.
pub fn rho(k: i64) -> Rational {
    Rational::new(ecsm_run_k(k), k)
}

/// A `k`-edge-connected multigraph of cost at most `ρ_k` times the
/// multigraph LP optimum at `k`.
pub fn kecsm(
    g: &Multigraph,
    k: i64,
    opts: &RoundingOptions,
    observer: &mut dyn IterationObserver,
) -> Result<(Solution, RoundingTrace)> {
    if k < 1 {
        return Err(domain(format!("kecsm needs k >= 1, got {k}")));
    }
    let (mut sol, trace) = kecsm_core(g, ecsm_run_k(k), opts, observer)?;
    sol.k = k;
    Ok((sol, trace))
}

fn check_bounds(g: &Multigraph, lower: &[i64], upper: &[i64]) -> Result<DegreeState> {
    if lower.len() != g.n() || upper.len() != g.n() {
        return Err(domain(format!("degree bounds must list {} vertices", g.n())));
    }
    if let Some(v) = (0..g.n()).find(|&i| lower[i] < 0) {
        return Err(domain(format!("vertex {}: negative lower bound", v + 1)));
    }
    DegreeState::from_integers(lower, upper)
}

/// Degree-bounded rounding: `(k−2)`-edge-connected (`k−3` for odd `k`), cost at most the
/// degree-bounded LP optimum, degrees within `[ℓ_v − 2, b_v + 2]`.
pub fn md_kecss(
    g: &Multigraph,
    k: i64,
    lower: &[i64],
    upper: &[i64],
    opts: &RoundingOptions,
    observer: &mut dyn IterationObserver,
) -> Result<(Solution, RoundingTrace)> {
    if k < 2 {
        return Err(domain(format!("md_kecss needs k >= 2, got {k}")));
    }
    let degree = check_bounds(g, lower, upper)?;
    let run_k = k - k % 2;
    let mut st = fresh_state(g, run_k, Procedure::MdKecss)?;
    st.req = st.req.with_degree(g, degree)?;
    run_loop(g, Procedure::MdKecss, &mut st, opts, observer)?;
    finish(g, Procedure::MdKecss, SolutionMode::Ecss, k, run_k, st)
}

/// Degree-bounded multigraph variant: runs at `k' = ρ_k·k` with upper bounds
/// `ρ_k·b_v`; `k`-edge-connected, cost at most `ρ_k` times the LP optimum at
/// `k`, degrees within `[ℓ_v − 2, ρ_k·b_v + 2]`.
pub fn md_kecsm(
    g: &Multigraph,
    k: i64,
    lower: &[i64],
    upper: &[i64],
    opts: &RoundingOptions,
    observer: &mut dyn IterationObserver,
) -> Result<(Solution, RoundingTrace)> {
    if k < 1 {
        return Err(domain(format!("md_kecsm needs k >= 1, got {k}")));
    }
    let base = check_bounds(g, lower, upper)?;
    let run_k = ecsm_run_k(k);
    let r = rho(k);
    let degree = DegreeState::new(base.lower, base.upper.iter().map(|b| b * &r).collect())?;
    let mut st = fresh_state(g, run_k, Procedure::MdKecsm)?;
    st.relaxed_drop = true;
    st.req = st.req.with_degree(g, degree.clone())?;
    let (_, opt) = unbounded_lp(g, run_k, Some(&degree))?;
    extract_floor(g, &mut st, &opt)?;
    run_loop(g, Procedure::MdKecsm, &mut st, opts, observer)?;
    finish(g, Procedure::MdKecsm, SolutionMode::Ecsm, k, run_k, st)
}
