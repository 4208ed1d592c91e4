//! Separation for residual cut LPs.
//!
//! Capacities combine picked multiplicities with the candidate point. Any
//! cut whose combined capacity falls below `k − (t − 1)` is active and
//! violated; the remaining violated cuts all lie below `k`, a window that
//! near-minimum-cut enumeration covers.

use serde::{Deserialize, Serialize};

use crate::error::{capacity, domain, Result};
use crate::graph::{cuts_below_with, for_each_cut, min_cut, CapacityVector, CutEnumOptions, Multigraph, VertexSet};
use crate::lp::{Row, Sense};
use crate::rational::Rational;
use crate::requirement::Requirement;

/// Values on a working edge set `E'`; `edges[i]` carries `values[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalSolution {
    pub edges: Vec<usize>,
    pub values: Vec<Rational>,
}

impl FractionalSolution {
    pub fn new(edges: Vec<usize>, values: Vec<Rational>) -> Result<Self> {
        if edges.len() != values.len() {
            return Err(domain("edge and value lists differ in length"));
        }
        Ok(FractionalSolution { edges, values })
    }

    pub fn zeros(edges: Vec<usize>) -> Self {
        let values = vec![Rational::zero(); edges.len()];
        FractionalSolution { edges, values }
    }

    /// Dense vector over all `m` edge ids, zero outside `E'`.
    pub fn dense(&self, m: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); m];
        for (e, x) in self.edges.iter().zip(&self.values) {
            v[*e] = x.clone();
        }
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.edges.iter().copied().zip(&self.values)
    }

    /// `Z = supp(x)`.
    pub fn support(&self) -> Vec<usize> {
        self.iter().filter(|(_, x)| x.is_positive()).map(|(e, _)| e).collect()
    }

    /// `F = {e : 0 < x_e < 1}`.
    pub fn fractional(&self) -> Vec<usize> {
        self.iter()
            .filter(|(_, x)| x.is_positive() && **x < Rational::one())
            .map(|(e, _)| e)
            .collect()
    }

    /// `x(δ_{E'}(S))`.
    pub fn across(&self, g: &Multigraph, s: VertexSet) -> Rational {
        self.iter().filter(|(e, _)| g.edge(*e).crosses(s)).map(|(_, x)| x).sum()
    }

    /// `x(δ_{E'}(v))`.
    pub fn at_vertex(&self, g: &Multigraph, v: usize) -> Rational {
        self.across(g, VertexSet::singleton(v))
    }
}

/// Outcome of a separation query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparationVerdict {
    Feasible,
    Violated(ViolatedCut),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolatedCut {
    /// Canonical side.
    pub set: VertexSet,
    /// `x(δ_{E'}(S)) >= f^res(S)` over variable positions in `E'`.
    pub row: Row,
    /// Picked plus fractional capacity of the cut.
    pub capacity: Rational,
    pub residual: i64,
}

impl SeparationVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, SeparationVerdict::Feasible)
    }
}

/// `caps(e) = picked(e) + x(e)`. Values of `x` must lie in `[0, 1]`.
pub fn mixed_capacities(g: &Multigraph, x: &FractionalSolution, req: &Requirement) -> Result<CapacityVector> {
    let one = Rational::one();
    if let Some((e, v)) = x.iter().find(|(_, v)| v.is_negative() || **v > one) {
        return Err(domain(format!("x on edge {e} is {v}, outside [0, 1]")));
    }
    if req.picked.len() != g.m() {
        return Err(domain("picked vector does not match the edge count"));
    }
    let mut caps: Vec<Rational> = req.picked.iter().map(|&p| Rational::from(p)).collect();
    for (e, v) in x.iter() {
        caps[e] += v;
    }
    Ok(CapacityVector(caps))
}

/// Cut row `x(δ_{E'}(S)) >= f^res(S)` indexed by positions in `E'`.
pub fn cut_row(g: &Multigraph, working: &[usize], s: VertexSet, rhs: i64) -> Row {
    let coeffs = working
        .iter()
        .enumerate()
        .filter(|(_, &e)| g.edge(e).crosses(s))
        .map(|(i, _)| (i, Rational::one()))
        .collect();
    Row::new(coeffs, Sense::Ge, Rational::from(rhs))
}

fn violated(g: &Multigraph, x: &FractionalSolution, req: &Requirement, s: VertexSet, cap: Rational) -> SeparationVerdict {
    let residual = req.residual(g, s);
    SeparationVerdict::Violated(ViolatedCut {
        set: s,
        row: cut_row(g, &x.edges, s, residual),
        capacity: cap,
        residual,
    })
}

fn check_threshold(req: &Requirement) -> Result<bool> {
    let t = req.threshold;
    if req.k < t {
        // Every residual is at most k, so the active family is empty.
        return Ok(false);
    }
    let min_k = if t == 3 { 4 } else { 2 };
    if req.k < min_k {
        return Err(domain(format!(
            "fast separation needs k >= {min_k} for threshold {t}, got k = {}",
            req.k
        )));
    }
    Ok(true)
}

/// Min cut first, then enumeration of all cuts below `k`; ties go to the
/// smallest capacity, then the lexicographically smallest side.
pub fn separate_fast(g: &Multigraph, x: &FractionalSolution, req: &Requirement) -> Result<SeparationVerdict> {
    separate_fast_with(g, x, req, &CutEnumOptions::default())
}

pub fn separate_fast_with(
    g: &Multigraph,
    x: &FractionalSolution,
    req: &Requirement,
    opts: &CutEnumOptions,
) -> Result<SeparationVerdict> {
    if !check_threshold(req)? || g.n() < 2 {
        return Ok(SeparationVerdict::Feasible);
    }
    let caps = mixed_capacities(g, x, req)?;
    let k = Rational::from(req.k);
    let (mu, side) = min_cut(g, &caps)?;
    if mu < Rational::from(req.k - (req.threshold - 1)) {
        return Ok(violated(g, x, req, side, mu));
    }
    let list = cuts_below_with(g, &caps, &k, opts)?;
    let best = list
        .cuts
        .into_iter()
        .filter(|&s| req.in_active_family(g, s))
        .map(|s| (g.cut_capacity(s, &caps), s))
        .min();
    Ok(match best {
        Some((cap, s)) => violated(g, x, req, s, cap),
        None => SeparationVerdict::Feasible,
    })
}

/// Reference oracle: scans every partition and returns a most violated
/// active cut. Needs `n <= 20`.
pub fn separate_exact(g: &Multigraph, x: &FractionalSolution, req: &Requirement) -> Result<SeparationVerdict> {
    if g.n() > crate::graph::EXHAUSTIVE_CUT_LIMIT {
        return Err(capacity(format!("exact separation limited to n <= 20, got {}", g.n())));
    }
    if g.n() < 2 {
        return Ok(SeparationVerdict::Feasible);
    }
    let caps = mixed_capacities(g, x, req)?;
    let k = Rational::from(req.k);
    let mut best: Option<(Rational, VertexSet)> = None;
    for_each_cut(g, &caps, |s, v| {
        if *v < k && req.in_active_family(g, s) {
            let cand = (v.clone(), s);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    })?;
    Ok(match best {
        Some((cap, s)) => violated(g, x, req, s, cap),
        None => SeparationVerdict::Feasible,
    })
}

/// Plain cut oracle for `x(δ(S)) >= k` with unbounded `x` over all edges
/// (positions equal edge ids).
pub fn separate_plain(g: &Multigraph, x: &[Rational], k: i64) -> Result<Option<(VertexSet, Row)>> {
    if g.n() < 2 {
        return Ok(None);
    }
    let caps = CapacityVector::new(g, x.to_vec())?;
    let (mu, side) = min_cut(g, &caps)?;
    if mu >= Rational::from(k) {
        return Ok(None);
    }
    let all: Vec<usize> = (0..g.m()).collect();
    Ok(Some((side, cut_row(g, &all, side, k))))
}
