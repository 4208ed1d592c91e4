//! Output verification, structural checks on extreme points, and exhaustive
//! reference oracles.

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{capacity, domain, Error, Result};
use crate::graph::{edge_connectivity, for_each_cut, min_cut, CapacityVector, Multigraph, VertexSet};
use crate::instance::{emit_instance, Instance, PointEntry};
use crate::linalg::{rank, RowSpace};
use crate::lp::{solve, BasicOptimum, LpInstance, Row, Sense};
use crate::rational::Rational;
use crate::requirement::{DegreeState, Requirement};
use crate::rounding::{IterationObserver, IterationView, Procedure, Solution, SolutionMode};
use crate::separation::{cut_row, FractionalSolution};

/// Largest `n` for tight-set enumeration.
pub const TIGHT_SET_LIMIT: usize = 16;
pub const FULL_LP_LIMIT: usize = 12;
pub const BRUTE_ECSS_EDGES: usize = 18;
pub const BRUTE_ECSM_EDGES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeWindow {
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
}

impl DegreeWindow {
    /// `[ℓ_v − slack, scale·b_v + slack]`.
    pub fn around(lower: &[i64], upper: &[i64], scale: &Rational, slack: i64) -> Self {
        let s = Rational::from(slack);
        DegreeWindow {
            lower: lower.iter().map(|&l| &Rational::from(l) - &s).collect(),
            upper: upper.iter().map(|&b| &(&Rational::from(b) * scale) + &s).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    Shape { expected: usize, found: usize },
    Connectivity { target: u64, found: u64, cut: VertexSet },
    Cost { cost: Rational, bound: Rational },
    Degree { vertex: usize, degree: u64, lower: Rational, upper: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub connectivity: u64,
    pub cost: Rational,
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify(
    g: &Multigraph,
    sol: &Solution,
    target: u64,
    cost_bound: &Rational,
    window: Option<&DegreeWindow>,
) -> VerifyReport {
    let mult = &sol.multiplicities;
    if mult.len() != g.m() {
        return VerifyReport {
            connectivity: 0,
            cost: Rational::zero(),
            failures: vec![VerifyFailure::Shape {
                expected: g.m(),
                found: mult.len(),
            }],
        };
    }
    let mut failures = Vec::new();
    let cost = crate::rounding::solution_cost(g, mult);
    let connectivity = if g.n() < 2 {
        0
    } else {
        edge_connectivity(g, mult).expect("shape checked")
    };
    if connectivity < target {
        let (_, cut) = min_cut(g, &CapacityVector::from_multiplicities(mult)).expect("shape checked");
        failures.push(VerifyFailure::Connectivity {
            target,
            found: connectivity,
            cut,
        });
    }
    if &cost > cost_bound {
        failures.push(VerifyFailure::Cost {
            cost: cost.clone(),
            bound: cost_bound.clone(),
        });
    }
    if let Some(w) = window {
        for v in 1..=g.n() {
            let degree: u64 = g.incident(v).iter().map(|&e| mult[e]).sum();
            let d = Rational::from(degree);
            if d < w.lower[v - 1] || d > w.upper[v - 1] {
                failures.push(VerifyFailure::Degree {
                    vertex: v,
                    degree,
                    lower: w.lower[v - 1].clone(),
                    upper: w.upper[v - 1].clone(),
                });
            }
        }
    }
    VerifyReport {
        connectivity,
        cost,
        failures,
    }
}

fn point_caps(g: &Multigraph, x: &FractionalSolution) -> CapacityVector {
    CapacityVector(x.dense(g.m()))
}

/// Active sets with `x(δ_{E'}(S)) = f^res(S)`, canonical sides in order.
pub fn tight_sets(g: &Multigraph, x: &FractionalSolution, req: &Requirement) -> Result<Vec<VertexSet>> {
    if g.n() > TIGHT_SET_LIMIT {
        return Err(capacity(format!("tight-set enumeration limited to n <= {TIGHT_SET_LIMIT}, got {}", g.n())));
    }
    if g.n() < 2 {
        return Ok(Vec::new());
    }
    let picked = req.picked_capacities();
    let mut out = Vec::new();
    let mut xs = Vec::new();
    for_each_cut(g, &point_caps(g, x), |s, v| xs.push((s, v.clone())))?;
    let mut residuals = Vec::with_capacity(xs.len());
    for_each_cut(g, &picked, |_, v| residuals.push(req.k - v.to_i64().expect("integral picks")))?;
    for ((s, v), r) in xs.into_iter().zip(residuals) {
        if r >= req.threshold && v == Rational::from(r) {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

/// `χ^{δ_Z(S)}` over the column list `cols`.
fn incidence(g: &Multigraph, s: VertexSet, cols: &[usize]) -> Vec<Rational> {
    cols.iter()
        .map(|&e| if g.edge(e).crosses(s) { Rational::one() } else { Rational::zero() })
        .collect()
}

/// Degree-tight vertex test with the LP rows present at `v`.
fn degree_tight(g: &Multigraph, x: &FractionalSolution, req: &Requirement, v: usize) -> bool {
    let Some((lo, hi)) = req.residual_degree(g, v) else { return false };
    let load = x.at_vertex(g, v);
    (lo.is_positive() && load == lo) || load == hi
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LaminarBasis {
    pub family: Vec<VertexSet>,
    pub tight_vertices: Vec<usize>,
    pub fractional: Vec<usize>,
    /// Boundary incidence over `fractional`: family members, then vertices.
    pub rows: Vec<Vec<Rational>>,
}

impl LaminarBasis {
    /// Checks laminarity, the size identity, row independence and tightness.
    pub fn check(&self, g: &Multigraph, x: &FractionalSolution, req: &Requirement) -> Result<()> {
        let fail = |m: String| Err(Error::Certification(m));
        for (i, a) in self.family.iter().enumerate() {
            if let Some(b) = self.family[i + 1..].iter().find(|b| a.weakly_crosses(**b)) {
                return fail(format!("laminar family members {a:?} and {b:?} cross"));
            }
        }
        if self.family.len() + self.tight_vertices.len() != self.fractional.len() {
            return fail(format!(
                "|L| + |W| = {} + {} != |F| = {}",
                self.family.len(),
                self.tight_vertices.len(),
                self.fractional.len()
            ));
        }
        if rank(&self.rows, self.fractional.len()) != self.rows.len() {
            return fail("basis rows are linearly dependent".into());
        }
        for &s in &self.family {
            let need = req.residual(g, s);
            if need < req.threshold || x.across(g, s) != Rational::from(need) {
                return fail(format!("family member {s:?} is not an active tight set"));
            }
        }
        for &v in &self.tight_vertices {
            if !degree_tight(g, x, req, v) || x.at_vertex(g, v) < Rational::one() {
                return fail(format!("vertex {v} is not degree-tight with load >= 1"));
            }
        }
        Ok(())
    }
}

/// Greedy laminar basis: tight sets in (size, lex) order join while laminar
/// and independent over the support, then degree-tight vertices join while
/// independent, then `|F|` rows independent over `F` are kept.
pub fn extract_laminar(g: &Multigraph, x: &FractionalSolution, req: &Requirement) -> Result<LaminarBasis> {
    let fractional = x.fractional();
    let support = x.support();
    let mut tight = tight_sets(g, x, req)?;
    tight.sort_by_key(|s| (s.len(), *s));

    let mut members: Vec<VertexSet> = Vec::new();
    let mut span = RowSpace::new(support.len());
    for s in tight {
        if members.iter().any(|m| m.weakly_crosses(s)) {
            continue;
        }
        if span.insert(&incidence(g, s, &support)) {
            members.push(s);
        }
    }
    let mut vertices = Vec::new();
    if let Some(d) = &req.degree {
        for v in d.active.iter() {
            if degree_tight(g, x, req, v) && span.insert(&incidence(g, VertexSet::singleton(v), &support)) {
                vertices.push(v);
            }
        }
    }

    let mut chosen = RowSpace::new(fractional.len());
    let mut basis = LaminarBasis {
        family: Vec::new(),
        tight_vertices: Vec::new(),
        fractional: fractional.clone(),
        rows: Vec::new(),
    };
    let mut set_rows = Vec::new();
    for s in members {
        let row = incidence(g, s, &fractional);
        if chosen.insert(&row) {
            basis.family.push(s);
            set_rows.push(row);
        }
    }
    let mut vertex_rows = Vec::new();
    for v in vertices {
        let row = incidence(g, VertexSet::singleton(v), &fractional);
        if chosen.insert(&row) {
            basis.tight_vertices.push(v);
            vertex_rows.push(row);
        }
    }
    basis.rows = set_rows.into_iter().chain(vertex_rows).collect();
    if chosen.rank() != fractional.len() {
        return Err(Error::Certification(format!(
            "laminar basis has rank {} but |F| = {}",
            chosen.rank(),
            fractional.len()
        )));
    }
    basis.check(g, x, req)?;
    Ok(basis)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum UncrossCase {
    /// `A ∪ B = V`: the family `{A − B, A}`.
    Complementary,
    IntersectionUnion,
    Difference,
    /// `A ∪ B` and `A − B` active.
    UnionLeft,
    /// `A ∪ B` and `B − A` active.
    UnionRight,
    /// `A ∩ B` and `A − B` active.
    IntersectionLeft,
    /// `A ∩ B` and `B − A` active.
    IntersectionRight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UncrossWitness {
    pub a: VertexSet,
    pub b: VertexSet,
    pub case: UncrossCase,
    /// `x` across `A − B` and `B − A`.
    pub theta: Rational,
    /// `x` across `A ∩ B` and the outside of `A ∪ B`.
    pub gamma: Rational,
    /// `x` across the two inactive regions; zero outside mixed cases.
    pub alpha: Rational,
    /// `χ^{δ_Z(B)} = Σ coeff·χ^{δ_Z(S)}` over the replacement family.
    pub identity: Vec<(VertexSet, Rational)>,
}

impl UncrossWitness {
    pub fn family(&self) -> Vec<VertexSet> {
        self.identity.iter().map(|(s, _)| *s).collect()
    }

    /// Both cross quantities vanish.
    pub fn strict(&self) -> bool {
        self.theta.is_zero() && self.gamma.is_zero()
    }
}

fn weight_between(g: &Multigraph, x: &FractionalSolution, p: VertexSet, q: VertexSet) -> Rational {
    x.iter()
        .filter(|(e, _)| {
            let ed = g.edge(*e);
            (p.contains(ed.u) && q.contains(ed.v)) || (p.contains(ed.v) && q.contains(ed.u))
        })
        .map(|(_, v)| v)
        .sum()
}

pub fn uncross_witness(
    g: &Multigraph,
    a: VertexSet,
    b: VertexSet,
    x: &FractionalSolution,
    req: &Requirement,
) -> Result<UncrossWitness> {
    let n = g.n();
    if !a.weakly_crosses(b) {
        return Err(domain(format!("{a:?} and {b:?} do not weakly cross")));
    }
    let tight = |s: VertexSet| req.in_active_family(g, s) && x.across(g, s) == Rational::from(req.residual(g, s));
    if !tight(a) || !tight(b) {
        return Err(domain(format!("{a:?} and {b:?} must both be active tight sets")));
    }
    let fail = |m: String| Err(Error::Certification(m));
    let active = |s: VertexSet| req.in_active_family(g, s);
    let (i, u) = (a.intersection(b), a.union(b));
    let (p, q) = (a.difference(b), b.difference(a));
    let o = u.complement(n);
    let theta = weight_between(g, x, p, q);
    let gamma = weight_between(g, x, i, o);
    let one = Rational::one();
    let half = Rational::new(1, 2);
    let (case, alpha, identity) = if o.is_empty() {
        (UncrossCase::Complementary, Rational::zero(), vec![(p, one.clone())])
    } else if active(i) && active(u) {
        (
            UncrossCase::IntersectionUnion,
            Rational::zero(),
            vec![(a, -&one), (i, one.clone()), (u, one.clone())],
        )
    } else if active(p) && active(q) {
        (
            UncrossCase::Difference,
            Rational::zero(),
            vec![(a, -&one), (p, one.clone()), (q, one.clone())],
        )
    } else if active(u) && active(p) {
        (
            UncrossCase::UnionLeft,
            weight_between(g, x, i, q),
            vec![(a, Rational::from(-2)), (p, one.clone()), (u, one.clone())],
        )
    } else if active(u) && active(q) {
        (
            UncrossCase::UnionRight,
            weight_between(g, x, i, p),
            vec![(a, -&half), (q, half.clone()), (u, half.clone())],
        )
    } else if active(i) && active(p) {
        (
            UncrossCase::IntersectionLeft,
            weight_between(g, x, q, o),
            vec![(a, -&half), (i, half.clone()), (p, half.clone())],
        )
    } else if active(i) && active(q) {
        (
            UncrossCase::IntersectionRight,
            weight_between(g, x, p, o),
            vec![(a, Rational::from(-2)), (i, one.clone()), (q, one.clone())],
        )
    } else {
        return fail(format!("no uncrossing case applies to {a:?}, {b:?}"));
    };

    let mixed = !matches!(
        case,
        UncrossCase::Complementary | UncrossCase::IntersectionUnion | UncrossCase::Difference
    );
    match case {
        UncrossCase::IntersectionUnion if !theta.is_zero() => return fail(format!("theta = {theta} for {a:?}, {b:?}")),
        UncrossCase::Difference if !gamma.is_zero() => return fail(format!("gamma = {gamma} for {a:?}, {b:?}")),
        _ if mixed && !(theta.is_zero() && gamma.is_zero() && alpha.is_zero()) => {
            return fail(format!("mixed case {case:?}: theta {theta}, gamma {gamma}, alpha {alpha}"))
        }
        _ => {}
    }
    for (s, _) in &identity {
        if !tight(*s) {
            return fail(format!("replacement set {s:?} is not an active tight set"));
        }
    }
    let fam: Vec<VertexSet> = identity.iter().map(|(s, _)| *s).chain([a]).collect();
    for (j, s) in fam.iter().enumerate() {
        if fam[j + 1..].iter().any(|t| s.weakly_crosses(*t)) {
            return fail(format!("replacement family {fam:?} is not laminar"));
        }
    }
    let z = x.support();
    let lhs = incidence(g, b, &z);
    let mut rhs = vec![Rational::zero(); z.len()];
    for (s, c) in &identity {
        for (r, v) in rhs.iter_mut().zip(incidence(g, *s, &z)) {
            if !v.is_zero() {
                *r += c;
            }
        }
    }
    if lhs != rhs {
        return fail(format!("incidence identity for {case:?} fails on {a:?}, {b:?}"));
    }
    Ok(UncrossWitness {
        a,
        b,
        case,
        theta,
        gamma,
        alpha,
        identity,
    })
}

/// A member `T` of `𝓛 ∪ W` with `|δ_F(T)| <= 3` and `z(δ_F(T)) <= 2`.
pub fn small_boundary_set(g: &Multigraph, basis: &LaminarBasis, z: &FractionalSolution) -> Result<VertexSet> {
    let frac: Vec<usize> = basis.fractional.clone();
    let two = Rational::from(2);
    let members = basis
        .family
        .iter()
        .copied()
        .chain(basis.tight_vertices.iter().map(|&v| VertexSet::singleton(v)));
    for t in members {
        let bd: Vec<usize> = frac.iter().copied().filter(|&e| g.edge(e).crosses(t)).collect();
        let load: Rational = z.iter().filter(|(e, _)| bd.contains(e)).map(|(_, v)| v).sum();
        if bd.len() <= 3 && load <= two {
            return Ok(t);
        }
    }
    Err(Error::Certification("no basis member has at most 3 fractional boundary edges".into()))
}

/// Checks that the tight rows and bounds at the optimum have full column rank.
pub fn verify_vertex(lp: &LpInstance, opt: &BasicOptimum) -> Result<()> {
    let rows = lp.tight_system(&opt.point);
    let r = rank(&rows, lp.num_vars());
    if r != lp.num_vars() {
        return Err(Error::Certification(format!(
            "tight system has rank {r} over {} variables",
            lp.num_vars()
        )));
    }
    Ok(())
}

fn all_cuts(n: usize) -> impl Iterator<Item = VertexSet> {
    // Canonical sides avoid vertex 1.
    (1u64..(1u64 << (n - 1))).map(|b| VertexSet::from_bits(b << 1))
}

/// Cut LP with every cut row written out. Needs `n <= 12`.
pub fn full_cut_lp(g: &Multigraph, k: i64, mode: SolutionMode, degree: Option<&DegreeState>) -> Result<Rational> {
    if g.n() > FULL_LP_LIMIT {
        return Err(capacity(format!("full cut LP limited to n <= {FULL_LP_LIMIT}, got {}", g.n())));
    }
    let upper = match mode {
        SolutionMode::Ecss => Some(Rational::one()),
        SolutionMode::Ecsm => None,
    };
    let mut lp = LpInstance::new(g.m(), upper);
    lp.objective = g.edges().iter().map(|e| e.cost.clone()).collect();
    let all: Vec<usize> = (0..g.m()).collect();
    if let Some(d) = degree {
        for v in 1..=g.n() {
            let coeffs = cut_row(g, &all, VertexSet::singleton(v), 0).coeffs;
            if d.lower[v - 1].is_positive() {
                lp.rows.push(Row::new(coeffs.clone(), Sense::Ge, d.lower[v - 1].clone()));
            }
            lp.rows.push(Row::new(coeffs, Sense::Le, d.upper[v - 1].clone()));
        }
    }
    if g.n() >= 2 {
        for s in all_cuts(g.n()) {
            lp.rows.push(cut_row(g, &all, s, k));
        }
    }
    Ok(solve(&lp)?.value)
}

/// Exact integer optimum by enumeration. `ecss` needs `|E| <= 18`; `ecsm`
/// needs `|E| <= 10` and caps multiplicities at `k`.
pub fn brute_force_opt(g: &Multigraph, k: i64, mode: SolutionMode) -> Result<(Rational, Vec<u64>)> {
    let m = g.m();
    if k < 1 {
        return Err(domain("brute force needs k >= 1"));
    }
    let target = k as u64;
    let feasible = |mult: &[u64]| g.n() < 2 || edge_connectivity(g, mult).expect("shape") >= target;
    let mut best: Option<(Rational, Vec<u64>)> = None;
    match mode {
        SolutionMode::Ecss => {
            if m > BRUTE_ECSS_EDGES {
                return Err(capacity(format!("ecss brute force limited to |E| <= {BRUTE_ECSS_EDGES}, got {m}")));
            }
            let mut mult = vec![0u64; m];
            for mask in 0u32..(1u32 << m) {
                let cost: Rational =
                    (0..m).filter(|e| mask >> e & 1 == 1).map(|e| g.cost(e)).sum();
                if best.as_ref().is_some_and(|(b, _)| cost >= *b) {
                    continue;
                }
                for (e, x) in mult.iter_mut().enumerate() {
                    *x = u64::from(mask >> e & 1);
                }
                let degrees_ok = (1..=g.n()).all(|v| g.incident(v).iter().map(|&e| mult[e]).sum::<u64>() >= target);
                if degrees_ok && feasible(&mult) {
                    best = Some((cost, mult.clone()));
                }
            }
        }
        SolutionMode::Ecsm => {
            if m > BRUTE_ECSM_EDGES {
                return Err(capacity(format!("ecsm brute force limited to |E| <= {BRUTE_ECSM_EDGES}, got {m}")));
            }
            let mut mult = vec![0u64; m];
            ecsm_search(g, target, 0, Rational::zero(), &mut mult, &mut best, &feasible);
        }
    }
    best.ok_or_else(|| Error::Infeasible(format!("no {k}-edge-connected solution exists")))
}

fn ecsm_search(
    g: &Multigraph,
    k: u64,
    e: usize,
    cost: Rational,
    mult: &mut Vec<u64>,
    best: &mut Option<(Rational, Vec<u64>)>,
    feasible: &dyn Fn(&[u64]) -> bool,
) {
    if best.as_ref().is_some_and(|(b, _)| cost >= *b) {
        return;
    }
    // Every vertex must still be able to reach degree k with the edges left.
    let reachable = (1..=g.n()).all(|v| {
        let d: u64 = g.incident(v).iter().map(|&f| if f < e { mult[f] } else { k }).sum();
        d >= k
    });
    if !reachable {
        return;
    }
    if e == g.m() {
        if feasible(mult) {
            *best = Some((cost, mult.clone()));
        }
        return;
    }
    for c in 0..=k {
        mult[e] = c;
        let next = &cost + &(g.cost(e) * &Rational::from(c));
        ecsm_search(g, k, e + 1, next, mult, best, feasible);
    }
    mult[e] = 0;
}

/// Instance text followed by the LP point as JSON.
pub fn reproducer(inst: &Instance, x: &FractionalSolution, note: &str) -> String {
    let text = emit_instance(inst).unwrap_or_else(|e| format!("# instance not emittable: {e}\n"));
    let point: Vec<PointEntry> = x.iter().map(|(id, v)| PointEntry { id, x: v.clone() }).collect();
    let json = serde_json::json!({ "note": note, "point": point });
    format!("{text}# point\n{}\n", serde_json::to_string_pretty(&json).expect("json"))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaStats {
    pub iterations: usize,
    pub bases: usize,
    pub pairs: usize,
    pub witnesses: usize,
    /// Witnesses with `θ = γ = 0`.
    pub strict_witnesses: usize,
    pub token_checks: usize,
    pub max_first_fractional: usize,
}

/// Observer that runs the structural checks at every iteration and fails
/// the run on the first violation.
pub struct LemmaChecker {
    pub instance: Instance,
    pub pair_limit: usize,
    pub seed: u64,
    pub dump_dir: Option<PathBuf>,
    pub stats: LemmaStats,
}

impl LemmaChecker {
    pub fn new(instance: Instance) -> Self {
        LemmaChecker {
            instance,
            pair_limit: 200,
            seed: 0,
            dump_dir: None,
            stats: LemmaStats::default(),
        }
    }

    fn check(&mut self, view: &IterationView<'_>) -> Result<()> {
        let g = view.graph;
        let x = view.point;
        let req = view.requirement;
        verify_vertex(view.lp, view.optimum)?;
        let basis = extract_laminar(g, x, req)?;
        self.stats.bases += 1;
        if view.iter == 0 {
            self.stats.max_first_fractional = self.stats.max_first_fractional.max(basis.fractional.len());
            if view.procedure == Procedure::Bicriteria && basis.fractional.len() > 2 * g.n() {
                return Err(Error::Certification(format!(
                    "|F_1| = {} exceeds 2n = {}",
                    basis.fractional.len(),
                    2 * g.n()
                )));
            }
        }
        let tight = tight_sets(g, x, req)?;
        let mut pairs: Vec<(VertexSet, VertexSet)> = Vec::new();
        if tight.len() <= self.pair_limit {
            for (i, a) in tight.iter().enumerate() {
                for b in &tight[i + 1..] {
                    pairs.push((*a, *b));
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (view.iter as u64).wrapping_mul(0x9e37_79b9));
            for _ in 0..self.pair_limit {
                let two: Vec<&VertexSet> = tight.choose_multiple(&mut rng, 2).collect();
                pairs.push((*two[0], *two[1]));
            }
        }
        for (a, b) in pairs {
            self.stats.pairs += 1;
            if !a.weakly_crosses(b) {
                continue;
            }
            let w = uncross_witness(g, a, b, x, req)?;
            self.stats.witnesses += 1;
            self.stats.strict_witnesses += usize::from(w.strict());
        }
        if !basis.fractional.is_empty() {
            let z = FractionalSolution::new(
                basis.fractional.clone(),
                basis
                    .fractional
                    .iter()
                    .map(|e| x.iter().find(|(f, _)| f == e).map(|(_, v)| v.clone()).expect("in E'"))
                    .collect(),
            )?;
            small_boundary_set(g, &basis, &z)?;
            self.stats.token_checks += 1;
        }
        Ok(())
    }
}

impl IterationObserver for LemmaChecker {
    fn on_iteration(&mut self, view: &IterationView<'_>) -> Result<()> {
        self.stats.iterations += 1;
        let n = view.graph.n();
        if n > FULL_LP_LIMIT {
            return Ok(());
        }
        self.check(view).map_err(|e| {
            let note = format!("{:?} iteration {}: {e}", view.procedure, view.iter);
            let dump = reproducer(&self.instance, view.point, &note);
            let place = match &self.dump_dir {
                Some(dir) => {
                    let path = dir.join(format!("reproducer-{:?}-{}.txt", view.procedure, view.iter));
                    match std::fs::write(&path, &dump) {
                        Ok(()) => format!("reproducer written to {}", path.display()),
                        Err(w) => format!("reproducer not written ({w}):\n{dump}"),
                    }
                }
                None => format!("reproducer:\n{dump}"),
            };
            Error::Certification(format!("{note}; {place}"))
        })
    }
}
