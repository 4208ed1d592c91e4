//! Multigraphs, vertex sets, and cut queries.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{capacity, domain, Result};
use crate::rational::{common_denominator, scale_to_i128, Rational};

/// Largest vertex count a [`VertexSet`] can address.
pub const MAX_VERTICES: usize = 64;

/// Subset of `1..=n` as a bitmask; vertex `v` is bit `v - 1`.
///
/// Ordering is lexicographic on the sorted id lists, so `{1,5} < {2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!((1..=MAX_VERTICES).contains(&v));
        VertexSet(1u64 << (v - 1))
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> Self {
        vs.into_iter().fold(Self::EMPTY, |s, v| s.with(v))
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | Self::singleton(v).0)
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=MAX_VERTICES).contains(&v) && self.0 & (1u64 << (v - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Self) -> Self {
        VertexSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        VertexSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        VertexSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn complement(self, n: usize) -> Self {
        VertexSet(Self::full(n).0 & !self.0)
    }

    /// The side of the cut `{self, V - self}` that avoids vertex 1.
    pub fn canonical(self, n: usize) -> Self {
        if self.contains(1) {
            self.complement(n)
        } else {
            self
        }
    }

    /// Nonempty proper subset of `{1..n}`.
    pub fn is_proper(self, n: usize) -> bool {
        !self.is_empty() && self.is_subset(Self::full(n)) && self != Self::full(n)
    }

    /// All four of `A∩B`, `A−B`, `B−A` and `V−(A∪B)` nonempty.
    pub fn crosses(self, o: Self, n: usize) -> bool {
        self.weakly_crosses(o) && self.union(o) != Self::full(n)
    }

    /// `A∩B`, `A−B`, `B−A` all nonempty.
    pub fn weakly_crosses(self, o: Self) -> bool {
        !self.intersection(o).is_empty()
            && !self.difference(o).is_empty()
            && !o.difference(self).is_empty()
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize + 1;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.0 ^ other.0;
        if d == 0 {
            return Ordering::Equal;
        }
        let p = d.trailing_zeros();
        let above = |bits: u64| p < 63 && bits >> (p + 1) != 0;
        if self.0 & (1u64 << p) != 0 {
            // `self` continues with `p`; `other` either continues higher or stops.
            if above(other.0) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if above(self.0) {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let vs = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = vs.iter().find(|&&v| v == 0 || v > MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {bad} out of range")));
        }
        Ok(VertexSet::from_vertices(vs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub cost: Rational,
}

impl Edge {
    /// Exactly one endpoint inside `s`.
    pub fn crosses(&self, s: VertexSet) -> bool {
        s.contains(self.u) != s.contains(self.v)
    }

    pub fn other(&self, w: usize) -> usize {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected multigraph on vertices `1..=n` with dense edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
}

impl Multigraph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(capacity(format!(
                "vertex count {n} outside 1..={MAX_VERTICES}"
            )));
        }
        Ok(Multigraph {
            n,
            edges: Vec::new(),
            incident: vec![Vec::new(); n + 1],
        })
    }

    pub fn add_edge(&mut self, u: usize, v: usize, cost: Rational) -> Result<usize> {
        if u == v {
            return Err(domain(format!("self-loop at vertex {u}")));
        }
        for w in [u, v] {
            if w == 0 || w > self.n {
                return Err(domain(format!("endpoint {w} outside 1..={}", self.n)));
            }
        }
        if cost.is_negative() {
            return Err(domain(format!("negative cost {cost} on edge {u}-{v}")));
        }
        let id = self.edges.len();
        self.edges.push(Edge { id, u, v, cost });
        self.incident[u].push(id);
        self.incident[v].push(id);
        Ok(id)
    }

    /// Builds from `(u, v, cost)` triples; ids follow input order.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut g = Self::new(n)?;
        for (u, v, c) in edges {
            g.add_edge(u, v, c)?;
        }
        Ok(g)
    }

    /// Unit-cost complete graph.
    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::new(n)?;
        for u in 1..=n {
            for v in u + 1..=n {
                g.add_edge(u, v, Rational::one())?;
            }
        }
        Ok(g)
    }

    /// Unit-cost cycle `1-2-...-n-1`.
    pub fn cycle(n: usize) -> Result<Self> {
        let mut g = Self::new(n)?;
        for u in 1..=n {
            g.add_edge(u, u % n + 1, Rational::one())?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn cost(&self, id: usize) -> &Rational {
        &self.edges[id].cost
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Edge ids incident to `v`.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn all_unit_costs(&self) -> bool {
        self.edges.iter().all(|e| e.cost == Rational::one())
    }

    fn check_side(&self, s: VertexSet) -> Result<()> {
        if !s.is_proper(self.n) {
            return Err(domain(format!("{s:?} is not a nonempty proper subset of V")));
        }
        Ok(())
    }

    /// `δ_Z(S)`: ids in `z` with exactly one endpoint in `s`.
    pub fn boundary(&self, s: VertexSet, z: &[usize]) -> Result<Vec<usize>> {
        self.check_side(s)?;
        if let Some(&bad) = z.iter().find(|&&e| e >= self.m()) {
            return Err(domain(format!("edge id {bad} out of range")));
        }
        Ok(z.iter().copied().filter(|&e| self.edges[e].crosses(s)).collect())
    }

    /// `δ(S)` over all edges, no validation.
    pub fn boundary_all(&self, s: VertexSet) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.crosses(s))
    }

    /// `caps(δ(S))`.
    pub fn cut_capacity(&self, s: VertexSet, caps: &CapacityVector) -> Rational {
        self.boundary_all(s).map(|e| &caps.0[e.id]).sum()
    }

    /// Vertices reachable from `v` through edges with positive capacity.
    pub fn component_of(&self, v: usize, caps: &CapacityVector) -> VertexSet {
        let mut seen = VertexSet::singleton(v);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &e in &self.incident[u] {
                if caps.0[e].is_positive() {
                    let w = self.edges[e].other(u);
                    if !seen.contains(w) {
                        seen = seen.with(w);
                        stack.push(w);
                    }
                }
            }
        }
        seen
    }

    /// Dense pairwise capacity matrix, 0-indexed.
    fn pair_matrix<T: Clone + Zero + for<'a> std::ops::AddAssign<&'a T>>(
        &self,
        caps: &[T],
    ) -> Vec<Vec<T>> {
        let mut w = vec![vec![T::zero(); self.n]; self.n];
        for e in &self.edges {
            let (a, b) = (e.u - 1, e.v - 1);
            w[a][b] += &caps[e.id];
            w[b][a] += &caps[e.id];
        }
        w
    }
}

/// Nonnegative per-edge capacities indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityVector(pub(crate) Vec<Rational>);

impl CapacityVector {
    pub fn new(g: &Multigraph, values: Vec<Rational>) -> Result<Self> {
        if values.len() != g.m() {
            return Err(domain(format!(
                "capacity vector has {} entries for {} edges",
                values.len(),
                g.m()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(domain(format!("negative capacity {v} on edge {i}")));
        }
        Ok(CapacityVector(values))
    }

    pub fn zeros(m: usize) -> Self {
        CapacityVector(vec![Rational::zero(); m])
    }

    pub fn ones(m: usize) -> Self {
        CapacityVector(vec![Rational::one(); m])
    }

    pub fn from_multiplicities(mult: &[u64]) -> Self {
        CapacityVector(mult.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, e: usize) -> &Rational {
        &self.0[e]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Capacities over a common denominator, when every cut fits an `i128`.
fn scaled(caps: &CapacityVector) -> Option<(Vec<i128>, i128)> {
    let scale = common_denominator(&caps.0)?;
    let ints: Vec<i128> = caps
        .0
        .iter()
        .map(|c| scale_to_i128(c, scale))
        .collect::<Option<_>>()?;
    let mut total: i128 = 0;
    for &c in &ints {
        total = total.checked_add(c)?;
    }
    (total < i128::MAX / 4).then_some((ints, scale))
}

fn stoer_wagner<T>(mut w: Vec<Vec<T>>) -> (T, u64)
where
    T: Clone + Ord + Zero + for<'a> std::ops::AddAssign<&'a T>,
{
    let n = w.len();
    let mut group: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut best: Option<(T, u64)> = None;
    while alive.len() > 1 {
        let mut in_a = vec![false; n];
        let mut key: Vec<T> = vec![T::zero(); n];
        let mut prev = alive[0];
        let mut last = alive[0];
        for step in 0..alive.len() {
            // Pick the most tightly connected vertex; lowest index on ties.
            let mut sel: Option<usize> = None;
            for &v in &alive {
                if !in_a[v] && sel.is_none_or(|s| key[v] > key[s]) {
                    sel = Some(v);
                }
            }
            let v = sel.expect("alive vertex");
            if step == alive.len() - 1 {
                let cut = key[v].clone();
                if best.as_ref().is_none_or(|(b, _)| cut < *b) {
                    best = Some((cut, group[v]));
                }
            }
            in_a[v] = true;
            prev = last;
            last = v;
            for &u in &alive {
                if !in_a[u] {
                    let add = w[v][u].clone();
                    key[u] += &add;
                }
            }
        }
        let (s, t) = (prev, last);
        group[s] |= group[t];
        for &u in &alive {
            let add = w[t][u].clone();
            w[s][u] += &add;
            w[u][s] = w[s][u].clone();
        }
        w[s][s] = T::zero();
        alive.retain(|&u| u != t);
    }
    best.expect("n >= 2")
}

/// Exact global minimum cut (Stoer–Wagner). The side is canonical.
pub fn min_cut(g: &Multigraph, caps: &CapacityVector) -> Result<(Rational, VertexSet)> {
    if g.n() < 2 {
        return Err(domain("min cut needs at least 2 vertices"));
    }
    check_caps(g, caps)?;
    let (value, side_bits) = match scaled(caps) {
        Some((ints, scale)) => {
            let (v, s) = stoer_wagner(g.pair_matrix(&ints));
            (Rational::from_scaled(v, scale), s)
        }
        None => stoer_wagner(g.pair_matrix(&caps.0)),
    };
    Ok((value, VertexSet::from_bits(side_bits).canonical(g.n())))
}

fn check_caps(g: &Multigraph, caps: &CapacityVector) -> Result<()> {
    if caps.len() != g.m() {
        return Err(domain(format!(
            "capacity vector has {} entries for {} edges",
            caps.len(),
            g.m()
        )));
    }
    Ok(())
}

/// Largest `n` for which all cut partitions are enumerated exhaustively.
pub const EXHAUSTIVE_CUT_LIMIT: usize = 20;

/// Every cut partition with its capacity, sides canonical, in Gray-code
/// order. Needs `2 <= n <= 20`.
pub fn enumerate_cuts(g: &Multigraph, caps: &CapacityVector) -> Result<Vec<(VertexSet, Rational)>> {
    let mut out = Vec::new();
    for_each_cut(g, caps, |s, v| out.push((s, v.clone())))?;
    Ok(out)
}

/// Calls `f(S, caps(δ(S)))` once per cut partition with canonical `S`.
pub fn for_each_cut<F: FnMut(VertexSet, &Rational)>(
    g: &Multigraph,
    caps: &CapacityVector,
    mut f: F,
) -> Result<()> {
    let n = g.n();
    if n < 2 {
        return Err(domain("cut enumeration needs at least 2 vertices"));
    }
    if n > EXHAUSTIVE_CUT_LIMIT {
        return Err(capacity(format!(
            "exhaustive cut enumeration limited to n <= {EXHAUSTIVE_CUT_LIMIT}, got {n}"
        )));
    }
    check_caps(g, caps)?;
    match scaled(caps) {
        Some((ints, scale)) => gray_walk(g.pair_matrix(&ints), |s, v: &i128| {
            f(s, &Rational::from_scaled(*v, scale))
        }),
        None => gray_walk(g.pair_matrix(&caps.0), |s, v: &Rational| f(s, v)),
    }
    Ok(())
}

/// Walks every subset of vertices `2..=n` in Gray-code order, keeping the
/// cut value current with one vertex flip per step.
fn gray_walk<T, F>(w: Vec<Vec<T>>, mut f: F)
where
    T: Clone + Zero + for<'a> std::ops::AddAssign<&'a T> + for<'a> std::ops::SubAssign<&'a T>,
    F: FnMut(VertexSet, &T),
{
    let n = w.len();
    let mut inside = vec![false; n];
    let mut mask: u64 = 0;
    let mut value = T::zero();
    let count: u64 = 1u64 << (n - 1);
    for i in 1..count {
        let flip = i.trailing_zeros() as usize + 1; // 0-indexed vertex, never vertex 1
        let was_in = inside[flip];
        for (u, wu) in w[flip].iter().enumerate() {
            if u == flip || wu.is_zero() {
                continue;
            }
            if inside[u] == was_in {
                value += wu;
            } else {
                value -= wu;
            }
        }
        inside[flip] = !was_in;
        mask ^= 1u64 << flip;
        f(VertexSet::from_bits(mask), &value);
    }
}

/// Options for [`cuts_below_with`].
#[derive(Debug, Clone)]
pub struct CutEnumOptions {
    /// Exhaustive enumeration up to this many vertices (at most 20).
    pub exhaustive_limit: usize,
    /// Constant `c` in the `ceil(c * n^4 * ln n)` contraction trial count.
    pub trial_factor: f64,
    pub seed: u64,
}

impl Default for CutEnumOptions {
    fn default() -> Self {
        CutEnumOptions {
            exhaustive_limit: EXHAUSTIVE_CUT_LIMIT,
            trial_factor: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutList {
    pub cuts: Vec<VertexSet>,
    /// Set when random contraction was used; the list may then miss cuts.
    pub probabilistic: bool,
}

/// Every canonical side `S` with `caps(δ(S)) < bound`, sorted.
pub fn cuts_below(g: &Multigraph, caps: &CapacityVector, bound: &Rational) -> Result<Vec<VertexSet>> {
    Ok(cuts_below_with(g, caps, bound, &CutEnumOptions::default())?.cuts)
}

pub fn cuts_below_with(
    g: &Multigraph,
    caps: &CapacityVector,
    bound: &Rational,
    opts: &CutEnumOptions,
) -> Result<CutList> {
    if !bound.is_positive() {
        return Err(domain(format!("cut bound must be positive, got {bound}")));
    }
    if g.n() < 2 {
        return Err(domain("cut enumeration needs at least 2 vertices"));
    }
    check_caps(g, caps)?;
    if g.n() <= opts.exhaustive_limit.min(EXHAUSTIVE_CUT_LIMIT) {
        let mut cuts = Vec::new();
        for_each_cut(g, caps, |s, v| {
            if v < bound {
                cuts.push(s);
            }
        })?;
        cuts.sort();
        return Ok(CutList {
            cuts,
            probabilistic: false,
        });
    }
    let mut cuts = contraction_cuts(g, caps, bound, opts)?;
    cuts.sort();
    cuts.dedup();
    Ok(CutList {
        cuts,
        probabilistic: true,
    })
}

/// Randomized contraction down to `ceil(2 * bound / min_cut)` super-vertices,
/// then exhaustive enumeration of the contracted graph's partitions.
fn contraction_cuts(
    g: &Multigraph,
    caps: &CapacityVector,
    bound: &Rational,
    opts: &CutEnumOptions,
) -> Result<Vec<VertexSet>> {
    let n = g.n();
    let (mu, _) = min_cut(g, caps)?;
    let target = if mu.is_positive() {
        let ratio = (bound / &mu).to_f64();
        ((2.0 * ratio).ceil() as usize).clamp(2, n)
    } else {
        n
    };
    if target > EXHAUSTIVE_CUT_LIMIT {
        return Err(capacity(format!(
            "contracted graph would keep {target} super-vertices"
        )));
    }
    let weights: Vec<f64> = caps.0.iter().map(Rational::to_f64).collect();
    let nf = n as f64;
    let trials = (opts.trial_factor * nf.powi(4) * nf.ln()).ceil().max(1.0) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut found = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for _ in 0..trials {
        let groups = contract_once(g, &weights, target, &mut rng);
        let r = groups.len();
        for mask in 1u64..(1u64 << (r - 1)) {
            let mut s = VertexSet::EMPTY;
            for (i, grp) in groups.iter().enumerate().skip(1) {
                if mask & (1u64 << (i - 1)) != 0 {
                    s = s.union(*grp);
                }
            }
            let s = s.canonical(n);
            if seen.insert(s) && g.cut_capacity(s, caps) < *bound {
                found.push(s);
            }
        }
    }
    Ok(found)
}

fn contract_once(g: &Multigraph, weights: &[f64], target: usize, rng: &mut ChaCha8Rng) -> Vec<VertexSet> {
    let n = g.n();
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut live: Vec<usize> = (0..g.m()).filter(|&e| weights[e] > 0.0).collect();
    let mut comps = n;
    while comps > target && !live.is_empty() {
        let total: f64 = live.iter().map(|&e| weights[e]).sum();
        let mut pick = rng.gen::<f64>() * total;
        let mut chosen = live[live.len() - 1];
        for &e in &live {
            pick -= weights[e];
            if pick <= 0.0 {
                chosen = e;
                break;
            }
        }
        let e = g.edge(chosen);
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[b.max(a)] = a.min(b);
            comps -= 1;
        }
        live.retain(|&e| {
            let ed = g.edge(e);
            find(&mut parent, ed.u) != find(&mut parent, ed.v)
        });
    }
    let mut groups: Vec<(usize, VertexSet)> = Vec::new();
    for v in 1..=n {
        let r = find(&mut parent, v);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, s)) => *s = s.with(v),
            None => groups.push((r, VertexSet::singleton(v))),
        }
    }
    groups.into_iter().map(|(_, s)| s).collect()
}

/// Edge connectivity of `g` with edge `e` repeated `mult[e]` times.
pub fn edge_connectivity(g: &Multigraph, mult: &[u64]) -> Result<u64> {
    if mult.len() != g.m() {
        return Err(domain(format!(
            "multiplicity vector has {} entries for {} edges",
            mult.len(),
            g.m()
        )));
    }
    let (v, _) = min_cut(g, &CapacityVector::from_multiplicities(mult))?;
    Ok(v.to_i64().expect("integral cut value") as u64)
}
