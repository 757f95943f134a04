use proptest::prelude::*;

use progcost::bounds::{
    lower_bound_cost, optimize_delta, upper_bound_cost, upper_bound_cost_simplified,
};
use progcost::protocol::{
    c_max, c_min, capacity_parameter, min_uses, sine_distribution, sine_weights, viable_set,
    WeightVector,
};
use progcost::reporting::{fit_line, protocol_report, round_sig};
use progcost::scoring::{entanglement_fidelity, optimal_fidelity, score_matrix};
use progcost::young::{enumerate_diagrams, young_distance, YoungDiagram};

fn diagram(d: usize, max_boxes: u32) -> impl Strategy<Value = YoungDiagram> {
    (0..=max_boxes).prop_flat_map(move |m| {
        let all = enumerate_diagrams(m, d);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

fn valid_case() -> impl Strategy<Value = (u64, usize)> {
    prop_oneof![
        (4u64..=200).prop_map(|n| (n, 2)),
        (14u64..=60).prop_map(|n| (n, 3)),
        (27u64..=60).prop_map(|n| (n, 4)),
    ]
    .prop_filter("N >= 2", |&(n, d)| viable_set(n, d).is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn young_distance_is_a_metric(
        (a, b, c) in (2usize..=4).prop_flat_map(|d| (diagram(d, 9), diagram(d, 9), diagram(d, 9)))
    ) {
        let ab = young_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, young_distance(&b, &a).unwrap());
        prop_assert!(young_distance(&a, &c).unwrap() <= ab + young_distance(&b, &c).unwrap());
        prop_assert_eq!(young_distance(&a, &a).unwrap(), 0);
    }

    #[test]
    fn lattice_members_are_valid((n, d) in valid_case()) {
        let set = viable_set(n, d).unwrap();
        let capacity = capacity_parameter(n, d).unwrap();
        prop_assert_eq!(set.len() as u64, capacity.pow(d as u32 - 1));
        for l in set.members() {
            prop_assert_eq!(l.boxes(), n);
            prop_assert!(l.is_strictly_decreasing());
        }
        prop_assert!(c_min(d, n) <= capacity as f64 / n as f64 + 1e-12);
        prop_assert!(capacity as f64 / n as f64 <= c_max(d, n) + 1e-12);
    }

    #[test]
    fn sine_weights_normalized(capacity in 2u64..500) {
        let g = sine_distribution(capacity).unwrap();
        prop_assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(g.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn optimum_dominates_sine_weights((n, d) in valid_case()) {
        let set = viable_set(n, d).unwrap();
        let s = score_matrix(&set);
        let qstar = entanglement_fidelity(&sine_weights(&set).unwrap(), &s).unwrap();
        let uniform = entanglement_fidelity(&WeightVector::uniform(&set), &s).unwrap();
        let optimal = optimal_fidelity(&s).unwrap();
        prop_assert!(qstar.fidelity <= optimal.fidelity + 1e-12);
        prop_assert!(uniform.fidelity <= optimal.fidelity + 1e-12);
        prop_assert!(optimal.fidelity <= 1.0);
    }

    #[test]
    fn report_invariants((n, d) in valid_case()) {
        let r = protocol_report(n, d).unwrap();
        prop_assert_eq!(r.epsilon_qstar, 1.0 - r.fidelity_qstar);
        prop_assert_eq!(r.epsilon_optimal, 1.0 - r.fidelity_optimal);
        prop_assert!(r.pass_flags.all(), "{:?}", r.pass_flags);
        prop_assert!(n >= min_uses(d));
    }

    #[test]
    fn lower_bound_below_upper(d in 2usize..=5, k in 4i32..=16) {
        let eps = 10f64.powi(-k);
        if let Ok(best) = optimize_delta(d, eps) {
            prop_assert!(best.bits <= upper_bound_cost(d, eps));
            for delta in [0.01, 0.1, 0.3] {
                if let Ok(b) = lower_bound_cost(d, eps, delta) {
                    prop_assert!(b.value <= best.bits + 1e-6);
                }
            }
        }
        prop_assert!(upper_bound_cost(d, eps) <= upper_bound_cost_simplified(d, eps));
    }

    #[test]
    fn rounding_is_idempotent(x in -1e12f64..1e12) {
        let r = round_sig(x);
        prop_assert_eq!(round_sig(r), r);
        prop_assert!((r - x).abs() <= 1e-11 * x.abs().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn line_fit_recovers_exact_lines(a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let xs: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
        let fit = fit_line(&xs, &ys).unwrap();
        prop_assert!((fit.slope - a).abs() < 1e-9);
        prop_assert!((fit.intercept - b).abs() < 1e-9);
    }
}
