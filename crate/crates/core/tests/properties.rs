use kecss_core::certification::{verify, LemmaChecker};
use kecss_core::instance::{emit_instance, parse_instance, random_feasible, Instance};
use kecss_core::rounding::{bicriteria, ecsm_lp_value, kecsm, kecss_even, rho, solution_cost};
use kecss_core::separation::{separate_exact, separate_fast};
use kecss_core::{FractionalSolution, Multigraph, Rational, Requirement, RoundingOptions, RoundingTrace, SeparationVerdict};
use proptest::prelude::*;

fn arb_instance(k: i64) -> impl Strategy<Value = Instance> {
    (5usize..=8, 0.55f64..0.95, 1u32..=2, any::<u64>())
        .prop_filter_map("no k-connected draw", move |(n, p, mult, seed)| {
            random_feasible(n, p, (1, 10), k, mult, seed % 10_000).ok()
        })
}

/// Replays `c(H_t) + factor·LP_t <= factor·LP_0` from a subgraph trace.
fn ledger(g: &Multigraph, trace: &RoundingTrace, factor: &Rational) -> Result<(), String> {
    let mut picked = vec![0u64; g.m()];
    let budget = factor * &trace.lp0;
    for rec in &trace.iterations {
        let spent = solution_cost(g, &picked);
        if &spent + &(factor * &rec.lp) > budget {
            return Err(format!("iteration {}: {spent} + {factor}·{} > {budget}", rec.iter, rec.lp));
        }
        for &e in &rec.picked {
            picked[e] += 1;
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn canonical_form_round_trips(inst in arb_instance(2), bounds in proptest::collection::vec((0i64..3, 0i64..4), 8)) {
        let mut inst = inst;
        for (v, (lo, extra)) in bounds.into_iter().enumerate().take(inst.graph.n()) {
            if extra > 0 {
                inst.degree.insert(v + 1, (lo, lo + extra));
            }
        }
        let text = emit_instance(&inst).unwrap();
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(emit_instance(&back).unwrap(), text);
    }

    #[test]
    fn fast_separation_agrees_with_exhaustive(
        inst in arb_instance(2),
        vals in proptest::collection::vec(0i64..=4, 64),
        k in 4i64..=6,
        t in 2i64..=3,
    ) {
        let g = &inst.graph;
        let req = Requirement::new(g, k, t).unwrap();
        let values = (0..g.m()).map(|e| Rational::new(vals[e % vals.len()], 4)).collect();
        let x = FractionalSolution::new((0..g.m()).collect(), values).unwrap();
        let fast = separate_fast(g, &x, &req).unwrap();
        let exact = separate_exact(g, &x, &req).unwrap();
        match (&fast, &exact) {
            (SeparationVerdict::Feasible, SeparationVerdict::Feasible) => {}
            (SeparationVerdict::Violated(a), SeparationVerdict::Violated(b)) => {
                prop_assert_eq!(&a.capacity, &b.capacity);
                prop_assert!(a.residual >= t);
                prop_assert!(x.across(g, a.set) < Rational::from(a.residual));
            }
            _ => prop_assert!(false, "fast {:?} vs exact {:?}", fast, exact),
        }
    }

    #[test]
    fn even_k_rounding_keeps_its_ledger(inst in arb_instance(4)) {
        let g = &inst.graph;
        let mut checker = LemmaChecker::new(inst.clone());
        let (sol, trace) = kecss_even(g, 4, &RoundingOptions::default(), &mut checker).unwrap();
        prop_assert!(verify(g, &sol, 2, &trace.lp0, None).passed());
        prop_assert!(sol.multiplicities.iter().all(|&m| m <= 1));
        prop_assert!(trace.iterations.len() <= g.m());
        ledger(g, &trace, &Rational::one()).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn bicriteria_keeps_its_ledger(inst in arb_instance(4)) {
        let g = &inst.graph;
        let mut checker = LemmaChecker::new(inst.clone());
        let (sol, trace) = bicriteria(g, 4, &RoundingOptions::default(), &mut checker).unwrap();
        let three_halves = Rational::new(3, 2);
        prop_assert!(verify(g, &sol, 3, &(&three_halves * &trace.lp0), None).passed());
        ledger(g, &trace, &three_halves).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn multigraph_rounding_meets_rho(inst in arb_instance(2), k in 1i64..=4) {
        let g = &inst.graph;
        let mut checker = LemmaChecker::new(inst.clone());
        let (sol, _) = kecsm(g, k, &RoundingOptions::default(), &mut checker).unwrap();
        let bound = &rho(k) * &ecsm_lp_value(g, k, None).unwrap();
        prop_assert!(verify(g, &sol, k as u64, &bound, None).passed());
    }

    #[test]
    fn rounding_is_deterministic(inst in arb_instance(4)) {
        let g = &inst.graph;
        let opts = RoundingOptions::default();
        let a = bicriteria(g, 4, &opts, &mut kecss_core::NoObserver).unwrap();
        let b = bicriteria(g, 4, &opts, &mut kecss_core::NoObserver).unwrap();
        prop_assert_eq!(a, b);
    }
}
