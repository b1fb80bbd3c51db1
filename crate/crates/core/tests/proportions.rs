use proptest::prelude::*;
use rar::proportions::{
    oracle_rho_rshir_score, rho_neyman_score, rho_neyman_wald, rho_rshir_score, rho_rshir_wald,
    rshir_score_objective, target_for, PointEstimates, RHO_SEARCH_TOL,
};
use rar::trial::{Fallback, Rule};

fn interior() -> impl Strategy<Value = f64> {
    0.001f64..0.999
}

#[test]
fn every_rule_is_balanced_when_arms_are_equal() {
    for k in 1..100 {
        let p = k as f64 / 100.0;
        let est = PointEstimates::new(p, p);
        for rule in Rule::ALL {
            for fallback in [Fallback::None, Fallback::EqualOnZeroVariance] {
                let rho = target_for(rule, est, fallback).rho;
                assert!((rho - 0.5).abs() < 1e-6, "{rule:?} at {p}: {rho}");
            }
        }
    }
}

#[test]
fn published_rshir_score_reference_points() {
    // grid-oracle values at step 1e-5, computed independently
    for (p0, p1, want) in [(0.2, 0.5, 0.5096), (0.2, 0.7, 0.6264), (0.635, 0.893, 0.7523), (0.941, 0.991, 0.8663)] {
        let rho = rho_rshir_score(PointEstimates::new(p0, p1), RHO_SEARCH_TOL).rho;
        assert!((rho - want).abs() < 1e-4, "({p0}, {p1}): {rho}");
    }
}

#[test]
fn objective_at_solution_beats_equal_allocation() {
    let est = PointEstimates::new(0.2, 0.7);
    let rho = rho_rshir_score(est, RHO_SEARCH_TOL).rho;
    assert!(rshir_score_objective(est, rho) <= rshir_score_objective(est, 0.5));
    let oracle = oracle_rho_rshir_score(est, 1e-4);
    assert!(rshir_score_objective(est, rho) <= rshir_score_objective(est, oracle) + RHO_SEARCH_TOL);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rshir_score_label_swap(p0 in interior(), p1 in interior()) {
        let est = PointEstimates::new(p0, p1);
        let a = rho_rshir_score(est, RHO_SEARCH_TOL).rho;
        let b = rho_rshir_score(est.swapped(), RHO_SEARCH_TOL).rho;
        prop_assert!((a - (1.0 - b)).abs() < 1e-6, "{} vs {}", a, 1.0 - b);
    }

    #[test]
    fn proportions_stay_in_unit_interval(p0 in 0.0f64..=1.0, p1 in 0.0f64..=1.0) {
        let est = PointEstimates::new(p0, p1);
        for rule in Rule::ALL {
            for fallback in [Fallback::None, Fallback::EqualOnZeroVariance] {
                let t = target_for(rule, est, fallback);
                prop_assert!((0.0..=1.0).contains(&t.rho));
                if t.degenerate {
                    prop_assert_eq!(t.rho, 0.5);
                }
            }
        }
        for f in [rho_neyman_wald, rho_rshir_wald, rho_neyman_score] {
            prop_assert!((0.0..=1.0).contains(&f(est).rho));
        }
    }

    #[test]
    fn zero_variance_falls_back_to_equal(p in 0.01f64..0.99, edge in prop::bool::ANY) {
        let est = PointEstimates::new(if edge { 1.0 } else { 0.0 }, p);
        for rule in [Rule::NeymanWald, Rule::RshirWald, Rule::NeymanScore, Rule::RshirScore] {
            let t = target_for(rule, est, Fallback::EqualOnZeroVariance);
            prop_assert!(t.degenerate && t.rho == 0.5);
        }
    }
}
