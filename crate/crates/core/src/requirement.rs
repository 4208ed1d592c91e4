//! Residual cut requirements, active families, and exhaustive predicates on
//! set functions.

use serde::{Deserialize, Serialize};

use crate::error::{capacity, domain, Result};
use crate::graph::{min_cut, CapacityVector, Multigraph, VertexSet};
use crate::rational::Rational;

/// Per-vertex degree bounds and the set `V'` of vertices whose bounds are
/// still enforced. Bounds are indexed by `v - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeState {
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
    pub active: VertexSet,
}

impl DegreeState {
    pub fn new(lower: Vec<Rational>, upper: Vec<Rational>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(domain("lower and upper degree bound lists differ in length"));
        }
        if let Some(v) = (0..lower.len()).find(|&i| lower[i] > upper[i]) {
            return Err(domain(format!(
                "vertex {}: lower bound {} exceeds upper bound {}",
                v + 1,
                lower[v],
                upper[v]
            )));
        }
        let n = lower.len();
        Ok(DegreeState {
            lower,
            upper,
            active: VertexSet::full(n),
        })
    }

    pub fn from_integers(lower: &[i64], upper: &[i64]) -> Result<Self> {
        Self::new(
            lower.iter().map(|&x| Rational::from(x)).collect(),
            upper.iter().map(|&x| Rational::from(x)).collect(),
        )
    }
}

/// Residual requirement state `f^res(S) = k − picked(δ(S))` with active
/// family `{S : f^res(S) >= threshold}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Requirement {
    pub k: i64,
    /// Picked multiplicity per edge id.
    pub picked: Vec<u64>,
    pub threshold: i64,
    pub degree: Option<DegreeState>,
}

impl Requirement {
    pub fn new(g: &Multigraph, k: i64, threshold: i64) -> Result<Self> {
        if k < 0 {
            return Err(domain(format!("connectivity target must be nonnegative, got {k}")));
        }
        if !(2..=3).contains(&threshold) {
            return Err(domain(format!("threshold must be 2 or 3, got {threshold}")));
        }
        Ok(Requirement {
            k,
            picked: vec![0; g.m()],
            threshold,
            degree: None,
        })
    }

    pub fn with_degree(mut self, g: &Multigraph, degree: DegreeState) -> Result<Self> {
        if degree.lower.len() != g.n() {
            return Err(domain(format!(
                "degree bounds given for {} vertices, graph has {}",
                degree.lower.len(),
                g.n()
            )));
        }
        self.degree = Some(degree);
        Ok(self)
    }

    /// `|δ_picked(S)|` counted with multiplicity.
    pub fn picked_across(&self, g: &Multigraph, s: VertexSet) -> u64 {
        g.boundary_all(s).map(|e| self.picked[e.id]).sum()
    }

    /// `f^res(S)`; zero on `∅` and `V`.
    pub fn residual(&self, g: &Multigraph, s: VertexSet) -> i64 {
        if !s.is_proper(g.n()) {
            return 0;
        }
        self.k - self.picked_across(g, s) as i64
    }

    pub fn in_active_family(&self, g: &Multigraph, s: VertexSet) -> bool {
        self.residual(g, s) >= self.threshold
    }

    pub fn picked_capacities(&self) -> CapacityVector {
        CapacityVector::from_multiplicities(&self.picked)
    }

    /// Connectivity of the picked multigraph.
    pub fn picked_connectivity(&self, g: &Multigraph) -> Result<u64> {
        if g.n() < 2 {
            return Ok(0);
        }
        let (v, _) = min_cut(g, &self.picked_capacities())?;
        Ok(v.to_i64().expect("integral") as u64)
    }

    /// Whether some cut is still active.
    pub fn active_family_nonempty(&self, g: &Multigraph) -> Result<bool> {
        if g.n() < 2 || self.k < self.threshold {
            return Ok(false);
        }
        Ok((self.picked_connectivity(g)? as i64) <= self.k - self.threshold)
    }

    pub fn picked_degree(&self, g: &Multigraph, v: usize) -> u64 {
        g.incident(v).iter().map(|&e| self.picked[e]).sum()
    }

    /// `(ℓ^res_v, b^res_v)` when degree state is present.
    pub fn residual_degree(&self, g: &Multigraph, v: usize) -> Option<(Rational, Rational)> {
        let d = self.degree.as_ref()?;
        let used = Rational::from(self.picked_degree(g, v));
        Some((&d.lower[v - 1] - &used, &d.upper[v - 1] - &used))
    }

    /// Exhaustive table of `f^res`; needs `n <= 12`.
    pub fn to_set_function(&self, g: &Multigraph) -> Result<SetFunction> {
        SetFunction::from_fn(g.n(), |s| self.residual(g, s))
    }
}

/// Largest ground set handled by the exhaustive predicates.
pub const SET_FUNCTION_LIMIT: usize = 12;

/// Explicit table over all subsets of `{1..n}`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunction {
    n: usize,
    values: Vec<i64>,
}

/// Outcome of an exhaustive pair predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCheck {
    Holds,
    Fails(VertexSet, VertexSet),
}

impl PairCheck {
    pub fn holds(self) -> bool {
        self == PairCheck::Holds
    }
}

impl SetFunction {
    pub fn from_fn<F: FnMut(VertexSet) -> i64>(n: usize, mut f: F) -> Result<Self> {
        if n > SET_FUNCTION_LIMIT {
            return Err(capacity(format!(
                "set functions limited to n <= {SET_FUNCTION_LIMIT}, got {n}"
            )));
        }
        let values = (0..1u64 << n).map(|b| f(VertexSet::from_bits(b))).collect();
        Ok(SetFunction { n, values })
    }

    /// `f^{kECSS}`: `k` on proper subsets, 0 on `∅` and `V`.
    pub fn kecss(n: usize, k: i64) -> Result<Self> {
        Self::from_fn(n, |s| if s.is_proper(n) { k } else { 0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: VertexSet) -> i64 {
        self.values[s.bits() as usize]
    }

    pub fn set(&mut self, s: VertexSet, v: i64) {
        self.values[s.bits() as usize] = v;
    }

    fn full(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    fn subsets(&self) -> impl Iterator<Item = VertexSet> {
        (0..1u64 << self.n).map(VertexSet::from_bits)
    }

    pub fn is_symmetric(&self) -> bool {
        self.subsets().all(|s| self.get(s) == self.get(s.complement(self.n)))
    }

    pub fn is_normalized(&self) -> bool {
        self.get(VertexSet::EMPTY) == 0 && self.get(self.full()) == 0
    }

    fn check_crossing_pairs<P: Fn(VertexSet, VertexSet) -> bool>(&self, ok: P) -> PairCheck {
        for a in self.subsets() {
            for b in self.subsets() {
                if a.bits() < b.bits() && a.crosses(b, self.n) && !ok(a, b) {
                    return PairCheck::Fails(a, b);
                }
            }
        }
        PairCheck::Holds
    }

    /// `f(A)+f(B) <= min{f(A∩B)+f(A∪B), f(A−B)+f(B−A)}` for crossing `A, B`.
    pub fn check_two_way_uncrossable(&self) -> PairCheck {
        self.check_crossing_pairs(|a, b| {
            let lhs = self.get(a) + self.get(b);
            lhs <= self.get(a.intersection(b)) + self.get(a.union(b))
                && lhs <= self.get(a.difference(b)) + self.get(b.difference(a))
        })
    }

    /// `f(A)+f(B) <= f(A∩B)+f(A∪B)` for crossing `A, B`.
    pub fn check_crossing_supermodular(&self) -> PairCheck {
        self.check_crossing_pairs(|a, b| {
            self.get(a) + self.get(b) <= self.get(a.intersection(b)) + self.get(a.union(b))
        })
    }

    /// The weakly supermodular inequality for every pair of subsets.
    pub fn check_weakly_supermodular(&self) -> PairCheck {
        for a in self.subsets() {
            for b in self.subsets() {
                let lhs = self.get(a) + self.get(b);
                let ok = lhs <= self.get(a.intersection(b)) + self.get(a.union(b))
                    || lhs <= self.get(a.difference(b)) + self.get(b.difference(a));
                if !ok {
                    return PairCheck::Fails(a, b);
                }
            }
        }
        PairCheck::Holds
    }

    /// `f(A)+f(B)+f(A∪B)` even for disjoint nonempty `A, B`.
    pub fn check_even_parity(&self) -> PairCheck {
        for a in self.subsets().filter(|s| !s.is_empty()) {
            let rest = a.complement(self.n).bits();
            // Enumerate nonempty submasks of the complement.
            let mut b = rest;
            while b != 0 {
                let bs = VertexSet::from_bits(b);
                if a.bits() < b {
                    let sum = self.get(a) + self.get(bs) + self.get(a.union(bs));
                    if sum.rem_euclid(2) != 0 {
                        return PairCheck::Fails(a, bs);
                    }
                }
                b = (b - 1) & rest;
            }
        }
        PairCheck::Holds
    }

    /// `g(S) = max{f(S), f(V−S)}` on proper subsets, 0 on `∅` and `V`.
    pub fn symmetrize(&self) -> SetFunction {
        let n = self.n;
        let values = self
            .subsets()
            .map(|s| {
                if s.is_proper(n) {
                    self.get(s).max(self.get(s.complement(n)))
                } else {
                    0
                }
            })
            .collect();
        SetFunction { n, values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vs(v: &[usize]) -> VertexSet {
        VertexSet::from_vertices(v.iter().copied())
    }

    #[test]
    fn residual_examples() {
        let g = Multigraph::complete(4).unwrap();
        let mut req = Requirement::new(&g, 6, 3).unwrap();
        // Star cut at vertex 1 has 3 edges; pick two of them twice-ish.
        req.picked[0] = 2;
        req.picked[1] = 2;
        assert_eq!(req.residual(&g, vs(&[1])), 2);
        assert!(!req.in_active_family(&g, vs(&[1])));
        let fresh = Requirement::new(&g, 4, 3).unwrap();
        assert_eq!(fresh.residual(&g, vs(&[2, 3])), 4);
        assert_eq!(fresh.residual(&g, VertexSet::EMPTY), 0);
        let r2 = Requirement { threshold: 2, ..req.clone() };
        assert!(r2.in_active_family(&g, vs(&[1])));
    }

    #[test]
    fn kecss_function_predicates() {
        for k in [2, 4, 6] {
            let f = SetFunction::kecss(5, k).unwrap();
            assert!(f.check_two_way_uncrossable().holds());
            assert!(f.check_even_parity().holds());
        }
        let f3 = SetFunction::kecss(4, 3).unwrap();
        assert!(f3.check_two_way_uncrossable().holds());
        match f3.check_even_parity() {
            PairCheck::Fails(a, b) => {
                assert!(a.intersection(b).is_empty());
                assert_ne!(a.union(b), VertexSet::full(4));
            }
            PairCheck::Holds => panic!("odd k must break parity"),
        }
    }

    #[test]
    fn cardinality_is_not_two_way_uncrossable() {
        let f = SetFunction::from_fn(4, |s| s.len() as i64).unwrap();
        let PairCheck::Fails(a, b) = f.check_two_way_uncrossable() else {
            panic!("|S| should fail");
        };
        // Any witness violates the difference half of the inequality.
        let lhs = f.get(a) + f.get(b);
        assert!(lhs > f.get(a.difference(b)) + f.get(b.difference(a)));
        let (a, b) = (vs(&[1, 2]), vs(&[2, 3]));
        assert_eq!(f.get(a) + f.get(b), 4);
        assert_eq!(f.get(a.difference(b)) + f.get(b.difference(a)), 2);
    }

    #[test]
    fn symmetrize_single_entry() {
        let mut f = SetFunction::from_fn(4, |_| 0).unwrap();
        f.set(vs(&[1, 3]), 1);
        let g = f.symmetrize();
        assert_eq!(g.get(vs(&[1, 3])), 1);
        assert_eq!(g.get(vs(&[2, 4])), 1);
        assert_eq!(g.get(vs(&[1])), 0);
        assert!(g.is_symmetric() && g.is_normalized());
    }

    fn arb_state() -> impl Strategy<Value = (Multigraph, Requirement)> {
        (3usize..=7, 1i64..=4).prop_flat_map(|(n, half)| {
            proptest::collection::vec((1..=n, 1..=n, 0u64..3), 1..16).prop_map(move |es| {
                let mut g = Multigraph::new(n).unwrap();
                let mut picked = Vec::new();
                for (u, v, p) in es {
                    if u != v {
                        g.add_edge(u, v, Rational::one()).unwrap();
                        picked.push(p);
                    }
                }
                let mut req = Requirement::new(&g, 2 * half, 3).unwrap();
                req.picked = picked;
                (g, req)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn residual_is_symmetric_uncrossable_even((g, req) in arb_state()) {
            let f = req.to_set_function(&g).unwrap();
            prop_assert!(f.is_symmetric());
            prop_assert!(f.is_normalized());
            prop_assert_eq!(f.check_two_way_uncrossable(), PairCheck::Holds);
            prop_assert_eq!(f.check_even_parity(), PairCheck::Holds);
            prop_assert_eq!(f.check_weakly_supermodular(), PairCheck::Holds);
        }

        /// A symmetric crossing-supermodular function is two-way uncrossable.
        #[test]
        fn symmetric_crossing_supermodular_implies_two_way(
            n in 3usize..=5,
            table in proptest::collection::vec(0i64..3, 32),
        ) {
            let f = SetFunction::from_fn(n, |s| {
                if s.is_proper(n) { table[s.canonical(n).bits() as usize % 32] } else { 0 }
            }).unwrap();
            prop_assert!(f.is_symmetric());
            if f.check_crossing_supermodular().holds() {
                prop_assert!(f.check_two_way_uncrossable().holds());
            }
        }
    }
}
