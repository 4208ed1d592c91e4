//! Instance files, fixture and random generators, and JSON forms of
//! solutions and traces.
//!
//! The instance format is line based:
//!
//! ```text
//! # comment
//! p kecss <n> <m> <k>
//! e <u> <v> <cost>        (m lines, integer cost >= 0)
//! d <v> <lo> <hi>         (optional degree bounds)
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::{edge_connectivity, Multigraph, VertexSet};
use crate::rational::Rational;
use crate::rounding::{IterationRecord, Solution, SolutionMode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Multigraph,
    pub k: i64,
    /// Degree bounds by vertex; vertices without a line are unconstrained.
    pub degree: BTreeMap<usize, (i64, i64)>,
}

impl Instance {
    pub fn new(graph: Multigraph, k: i64) -> Self {
        Instance {
            graph,
            k,
            degree: BTreeMap::new(),
        }
    }

    /// Dense bound vectors. Missing lower bounds are 0; missing upper bounds
    /// become `cap(v)`.
    pub fn degree_vectors(&self, mut cap: impl FnMut(usize) -> i64) -> (Vec<i64>, Vec<i64>) {
        (1..=self.graph.n())
            .map(|v| match self.degree.get(&v) {
                Some(&(lo, hi)) => (lo, hi),
                None => (0, cap(v)),
            })
            .unzip()
    }

    /// Bounds that never bind for a simple subgraph (`|δ_G(v)|`).
    pub fn subgraph_degree_vectors(&self) -> (Vec<i64>, Vec<i64>) {
        let g = &self.graph;
        self.degree_vectors(|v| g.incident(v).len() as i64)
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| perr(line, format!("bad {what} '{tok}'")))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize, i64)> = None;
    let mut g: Option<Multigraph> = None;
    let mut degree = BTreeMap::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let mut toks = s.split_whitespace();
        let tag = toks.next().unwrap_or_default();
        match (tag, header.is_some()) {
            ("p", false) => {
                let kind: String = field(toks.next(), line, "problem kind")?;
                if kind != "kecss" {
                    return Err(perr(line, format!("unknown problem kind '{kind}'")));
                }
                let n: usize = field(toks.next(), line, "vertex count")?;
                let m: usize = field(toks.next(), line, "edge count")?;
                let k: i64 = field(toks.next(), line, "k")?;
                if k < 1 {
                    return Err(perr(line, "k must be positive"));
                }
                g = Some(Multigraph::new(n).map_err(|e| perr(line, e.to_string()))?);
                header = Some((n, m, k));
            }
            ("p", true) => return Err(perr(line, "duplicate problem line")),
            (_, false) => return Err(perr(line, "expected the problem line first")),
            ("e", true) => {
                let u: usize = field(toks.next(), line, "endpoint")?;
                let v: usize = field(toks.next(), line, "endpoint")?;
                let c: i64 = field(toks.next(), line, "cost")?;
                if c < 0 {
                    return Err(perr(line, "negative cost"));
                }
                let graph = g.as_mut().expect("header seen");
                graph
                    .add_edge(u, v, Rational::from(c))
                    .map_err(|e| perr(line, e.to_string()))?;
            }
            ("d", true) => {
                let v: usize = field(toks.next(), line, "vertex")?;
                let lo: i64 = field(toks.next(), line, "lower bound")?;
                let hi: i64 = field(toks.next(), line, "upper bound")?;
                let n = header.expect("header seen").0;
                if v == 0 || v > n {
                    return Err(perr(line, format!("vertex {v} out of range")));
                }
                if lo < 0 || lo > hi {
                    return Err(perr(line, format!("degree window [{lo}, {hi}] is empty or negative")));
                }
                if degree.insert(v, (lo, hi)).is_some() {
                    return Err(perr(line, format!("duplicate degree line for vertex {v}")));
                }
            }
            (t, true) => return Err(perr(line, format!("unknown line type '{t}'"))),
        }
        if toks.next().is_some() {
            return Err(perr(line, "trailing tokens"));
        }
    }
    let (_, m, k) = header.ok_or_else(|| perr(last_line.max(1), "missing problem line"))?;
    let graph = g.expect("header seen");
    if graph.m() != m {
        return Err(perr(last_line, format!("header declares {m} edges, found {}", graph.m())));
    }
    Ok(Instance { graph, k, degree })
}

fn int_cost(c: &Rational) -> Result<i64> {
    match c.to_i64() {
        Some(v) if c.is_integer() => Ok(v),
        _ => Err(domain(format!("cost {c} is not an integer"))),
    }
}

/// Canonical text form.
pub fn emit_instance(inst: &Instance) -> Result<String> {
    let g = &inst.graph;
    let mut out = format!("p kecss {} {} {}\n", g.n(), g.m(), inst.k);
    for e in g.edges() {
        writeln!(out, "e {} {} {}", e.u, e.v, int_cost(&e.cost)?).expect("string write");
    }
    for (v, (lo, hi)) in &inst.degree {
        writeln!(out, "d {v} {lo} {hi}").expect("string write");
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenKind {
    /// Each pair joined with probability `p` by 1 to `max_mult` parallel
    /// edges, each with an integer cost drawn from `costs`.
    Random { n: usize, p: f64, costs: (i64, i64), k: i64, max_mult: u32 },
    Complete { n: usize, cost: i64, k: i64 },
    Cycle { n: usize, cost: i64, k: i64 },
    /// Six singletons in three pairs: thick cost-0 and dashed cost-1 edges
    /// inside each pair, two solid cost-2 triangles across the pairs.
    GapK3,
    /// The k = 6 lift: a hub `s`, and per pair a node `t_i` joined to `u_i`
    /// and `v_i` by three thick edges each.
    GapK6,
}

pub fn generate(kind: &GenKind, seed: u64) -> Result<Instance> {
    Ok(match *kind {
        GenKind::Random { n, p, costs, k, max_mult } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(domain(format!("edge probability {p} outside [0, 1]")));
            }
            if max_mult == 0 {
                return Err(domain("max_mult must be at least 1"));
            }
            if costs.0 < 0 || costs.0 > costs.1 {
                return Err(domain(format!("bad cost range {costs:?}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = Multigraph::new(n)?;
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.gen_bool(p) {
                        for _ in 0..rng.gen_range(1..=max_mult) {
                            g.add_edge(u, v, Rational::from(rng.gen_range(costs.0..=costs.1)))?;
                        }
                    }
                }
            }
            Instance::new(g, k)
        }
        GenKind::Complete { n, cost, k } => {
            let mut g = Multigraph::new(n)?;
            for u in 1..=n {
                for v in u + 1..=n {
                    g.add_edge(u, v, Rational::from(cost))?;
                }
            }
            Instance::new(g, k)
        }
        GenKind::Cycle { n, cost, k } => {
            let mut g = Multigraph::new(n)?;
            for u in 1..=n {
                g.add_edge(u, u % n + 1, Rational::from(cost))?;
            }
            Instance::new(g, k)
        }
        GenKind::GapK3 => {
            let mut g = Multigraph::new(6)?;
            for i in 0..3 {
                let (a, b) = (2 * i + 1, 2 * i + 2);
                g.add_edge(a, b, Rational::zero())?;
                g.add_edge(a, b, Rational::one())?;
            }
            for tri in [[1, 3, 5], [2, 4, 6]] {
                for j in 0..3 {
                    g.add_edge(tri[j], tri[(j + 1) % 3], Rational::from(2))?;
                }
            }
            Instance::new(g, 3)
        }
        GenKind::GapK6 => {
            // s = 1; t_i, u_i, v_i = 3i-1, 3i, 3i+1.
            let mut g = Multigraph::new(10)?;
            let zero = Rational::zero();
            for i in 1..=3 {
                let (t, u, v) = (3 * i - 1, 3 * i, 3 * i + 1);
                for w in [t, u, v] {
                    g.add_edge(1, w, zero.clone())?;
                }
                for _ in 0..3 {
                    g.add_edge(t, u, zero.clone())?;
                    g.add_edge(t, v, zero.clone())?;
                }
                g.add_edge(u, v, Rational::one())?;
            }
            for side in [[3, 6, 9], [4, 7, 10]] {
                for j in 0..3 {
                    g.add_edge(side[j], side[(j + 1) % 3], Rational::from(2))?;
                }
            }
            Instance::new(g, 6)
        }
    })
}

/// Draws random instances from consecutive seeds until the graph itself is
/// `k`-edge-connected, which is exactly when the cut LP is feasible.
pub fn random_feasible(n: usize, p: f64, costs: (i64, i64), k: i64, max_mult: u32, seed: u64) -> Result<Instance> {
    let kind = GenKind::Random { n, p, costs, k, max_mult };
    for attempt in 0..1000u64 {
        let inst = generate(&kind, seed.wrapping_mul(1000).wrapping_add(attempt))?;
        let ones = vec![1; inst.graph.m()];
        if edge_connectivity(&inst.graph, &ones)? >= k as u64 {
            return Ok(inst);
        }
    }
    Err(domain(format!("no {k}-edge-connected draw for n = {n}, p = {p}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeMult {
    pub id: usize,
    pub mult: u64,
}

/// On-disk solution form; rationals as "p/q".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub mode: SolutionMode,
    pub k: i64,
    pub cost: Rational,
    pub lp: Rational,
    pub connectivity: u64,
    pub edges: Vec<EdgeMult>,
}

impl SolutionFile {
    pub fn from_solution(sol: &Solution) -> Self {
        SolutionFile {
            mode: sol.mode,
            k: sol.k,
            cost: sol.cost.clone(),
            lp: sol.lp_value.clone(),
            connectivity: sol.connectivity,
            edges: sol
                .multiplicities
                .iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .map(|(id, &mult)| EdgeMult { id, mult })
                .collect(),
        }
    }

    /// Multiplicity vector over `m` edges. Claimed cost and connectivity are
    /// kept as given so that certification can compare them.
    pub fn multiplicities(&self, m: usize) -> Result<Vec<u64>> {
        let mut out = vec![0; m];
        for e in &self.edges {
            if e.id >= m {
                return Err(domain(format!("solution names edge {} but the instance has {m}", e.id)));
            }
            out[e.id] += e.mult;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointEntry {
    pub id: usize,
    pub x: Rational,
}

/// One JSON line per iteration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLine {
    pub iter: usize,
    pub lp: Rational,
    pub picked: Vec<usize>,
    pub frac_support: usize,
    pub dropped_witnesses: Vec<VertexSet>,
    pub point: Vec<PointEntry>,
    pub dropped_vertices: Vec<usize>,
}

impl From<&IterationRecord> for TraceLine {
    fn from(r: &IterationRecord) -> Self {
        TraceLine {
            iter: r.iter,
            lp: r.lp.clone(),
            picked: r.picked.clone(),
            frac_support: r.frac_support,
            dropped_witnesses: r.dropped_witnesses.clone(),
            point: r.point.iter().map(|(id, x)| PointEntry { id: *id, x: x.clone() }).collect(),
            dropped_vertices: r.dropped_vertices.clone(),
        }
    }
}

pub fn trace_lines(records: &[IterationRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(&TraceLine::from(r)).expect("trace serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_vertex_instance() {
        let inst = parse_instance("p kecss 2 1 4\ne 1 2 1").unwrap();
        assert_eq!((inst.graph.n(), inst.graph.m(), inst.k), (2, 1, 4));
        assert_eq!(emit_instance(&inst).unwrap(), "p kecss 2 1 4\ne 1 2 1\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("p kecss 2 1 4\ne 1 1 5", 2),
            ("p kecss 3 1 2\n# c\ne 1 2 1\nd 1 3 2", 4),
            ("p kecss 3 1 2\ne 1 2 1\nd 1 0 2\nd 1 1 2", 4),
            ("e 1 2 1", 1),
            ("p kecss 3 2 2\ne 1 2 x\n", 2),
            ("p kecss 3 2 2\ne 1 2 1\n", 2),
        ];
        for (text, want) in cases {
            match parse_instance(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn round_trip_is_canonical() {
        let text = "# header\np kecss 3 3 2\n\ne 1 2 1\ne 2 3 4\ne 1 2 0\nd 3 1 2\nd 1 0 5\n";
        let once = emit_instance(&parse_instance(text).unwrap()).unwrap();
        let twice = emit_instance(&parse_instance(&once).unwrap()).unwrap();
        assert_eq!(once, twice);
        assert!(once.ends_with("d 1 0 5\nd 3 1 2\n"));
    }

    #[test]
    fn random_generation_is_deterministic() {
        let kind = GenKind::Random { n: 8, p: 0.6, costs: (1, 10), k: 4, max_mult: 1 };
        let a = emit_instance(&generate(&kind, 7).unwrap()).unwrap();
        let b = emit_instance(&generate(&kind, 7).unwrap()).unwrap();
        assert_eq!(a, b);
        let c = emit_instance(&generate(&kind, 8).unwrap()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn fixtures_have_expected_shape() {
        let k3 = generate(&GenKind::GapK3, 0).unwrap();
        assert_eq!((k3.graph.n(), k3.graph.m(), k3.k), (6, 12, 3));
        let k6 = generate(&GenKind::GapK6, 0).unwrap();
        assert_eq!((k6.graph.n(), k6.graph.m(), k6.k), (10, 36, 6));
        let ones = vec![1; k6.graph.m()];
        assert!(edge_connectivity(&k6.graph, &ones).unwrap() >= 6);
        let k5 = generate(&GenKind::Complete { n: 5, cost: 1, k: 4 }, 0).unwrap();
        assert_eq!(k5.graph, Multigraph::complete(5).unwrap());
    }

    #[test]
    fn solution_json_uses_pq_strings() {
        let g = Multigraph::complete(3).unwrap();
        let sol = Solution::from_multiplicities(&g, SolutionMode::Ecsm, 2, 4, vec![2, 0, 1], Rational::new(3, 1)).unwrap();
        let json = serde_json::to_string(&SolutionFile::from_solution(&sol)).unwrap();
        assert_eq!(
            json,
            r#"{"mode":"ecsm","k":2,"cost":"3/1","lp":"3/1","connectivity":1,"edges":[{"id":0,"mult":2},{"id":2,"mult":1}]}"#
        );
        let back: SolutionFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.multiplicities(3).unwrap(), vec![2, 0, 1]);
    }
}
