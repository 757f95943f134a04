//! Library results against independently computed references.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};

use progcost::oracle::{haar_fidelity, schur_character, su2_character, TorusGrid};
use progcost::phase::{choi_infidelity, diamond_search, outcome_density, sine_state};
use progcost::protocol::{sine_weights, viable_set, DiagramSet};
use progcost::scoring::{entanglement_fidelity, optimal_fidelity, score_matrix, ScoreMatrix};
use progcost::young::{enumerate_diagrams, irrep_dimension, YoungDiagram};

/// `prod_cells (d + content) / hook`.
fn hook_length_dimension(lambda: &YoungDiagram) -> BigUint {
    let rows = lambda.rows();
    let d = rows.len() as i64;
    let col_len = |j: u32| rows.iter().filter(|&&r| r > j).count() as i64;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (i, &r) in rows.iter().enumerate() {
        for j in 0..r {
            let content = j as i64 - i as i64;
            let hook = (r - j) as i64 + (col_len(j) - i as i64) - 1;
            num *= (d + content) as u64;
            den *= hook as u64;
        }
    }
    assert_eq!(&num % &den, BigUint::ZERO);
    num / den
}

#[test]
fn dimensions_match_hook_length_formula() {
    for d in 1..=5 {
        for m in 0..=9 {
            for lambda in enumerate_diagrams(m, d) {
                assert_eq!(
                    irrep_dimension(&lambda),
                    hook_length_dimension(&lambda),
                    "{lambda}"
                );
            }
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    for d in 1..=4 {
        for m in 0..=7u32 {
            let mut expected = Vec::new();
            let total = (m as usize + 1).pow(d as u32);
            for code in 0..total {
                let mut rows = Vec::with_capacity(d);
                let mut c = code;
                for _ in 0..d {
                    rows.push((c % (m as usize + 1)) as u32);
                    c /= m as usize + 1;
                }
                if rows.iter().sum::<u32>() == m && rows.windows(2).all(|w| w[0] >= w[1]) {
                    expected.push(rows);
                }
            }
            expected.sort_by(|a, b| b.cmp(a));
            let got: Vec<Vec<u32>> = enumerate_diagrams(m, d)
                .iter()
                .map(|l| l.rows().to_vec())
                .collect();
            assert_eq!(got, expected, "m={m} d={d}");
        }
    }
}

fn dense_lambda_max(s: &ScoreMatrix<'_>) -> f64 {
    let dense = s.to_dense();
    let n = dense.len();
    DMatrix::from_fn(n, n, |i, j| dense[i][j])
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn optimal_fidelity_matches_dense_eigensolver() {
    let mut cases: Vec<(u64, usize)> = (4..=130).step_by(7).map(|n| (n, 2)).collect();
    cases.extend([(26, 3), (33, 3), (47, 3), (60, 3), (27, 4), (40, 4)]);
    for (n, d) in cases {
        let set = viable_set(n, d).unwrap();
        let s = score_matrix(&set);
        let expected = dense_lambda_max(&s) / (d * d) as f64;
        let got = optimal_fidelity(&s).unwrap().fidelity;
        assert!(
            (got - expected).abs() < 1e-10,
            "(n={n}, d={d}): {got} vs {expected}"
        );
    }
}

#[test]
fn d2_spectrum_closed_form() {
    for capacity in 2..=64u64 {
        let set = DiagramSet::lattice(2 * capacity, 2, capacity).unwrap();
        let expected = 2.0 + 2.0 * (PI / (capacity as f64 + 1.0)).cos();
        assert!((dense_lambda_max(&score_matrix(&set)) - expected).abs() < 1e-10);
    }
}

#[test]
fn lattice_neighbours_match_pairwise_distances() {
    for (n, d) in [(8, 2), (40, 2), (26, 3), (47, 3), (27, 4), (60, 4)] {
        let set = viable_set(n, d).unwrap();
        assert_eq!(
            score_matrix(&set).to_dense(),
            ScoreMatrix::from_pairwise_distance(&set).to_dense(),
            "(n={n}, d={d})"
        );
    }
}

#[test]
fn su2_character_matches_schur_polynomial() {
    for m in 0..=10 {
        for lambda in enumerate_diagrams(m, 2) {
            for step in 1..40 {
                let theta = 2.0 * PI * step as f64 / 40.0;
                let x = [
                    Complex64::from_polar(1.0, theta / 2.0),
                    Complex64::from_polar(1.0, -theta / 2.0),
                ];
                let s = schur_character(&lambda, &x);
                assert!((s.re - su2_character(&lambda, theta)).abs() < 1e-12 && s.im.abs() < 1e-12);
            }
            let dim = irrep_dimension(&lambda).to_f64().unwrap();
            assert!((su2_character(&lambda, 0.0) - dim).abs() < 1e-12);
        }
    }
}

#[test]
fn quadrature_reproduces_score_matrix_fidelity() {
    for n in [4, 8, 16, 32, 64] {
        let set = viable_set(n, 2).unwrap();
        let s = score_matrix(&set);
        let grid = TorusGrid::for_uses(2, n).unwrap();
        let q = sine_weights(&set).unwrap();
        let exact = entanglement_fidelity(&q, &s).unwrap().fidelity;
        assert!((haar_fidelity(&q, &grid).unwrap() - exact).abs() < 1e-10);
        let opt = optimal_fidelity(&s).unwrap();
        assert!((haar_fidelity(&opt.weights_used, &grid).unwrap() - opt.fidelity).abs() < 1e-10);
    }
}

#[cfg(feature = "su3")]
#[test]
fn su3_quadrature_reproduces_score_matrix_fidelity() {
    for n in [26, 33] {
        let set = viable_set(n, 3).unwrap();
        let q = sine_weights(&set).unwrap();
        let exact = entanglement_fidelity(&q, &score_matrix(&set))
            .unwrap()
            .fidelity;
        let quad = haar_fidelity(&q, &TorusGrid::for_uses(3, n).unwrap()).unwrap();
        assert!((quad - exact).abs() < 1e-8, "n={n}: {quad} vs {exact}");
    }
}

#[test]
fn choi_infidelity_matches_phase_quadrature() {
    for dp in [2usize, 3, 7, 16, 50, 128] {
        let p = sine_state(dp).unwrap();
        let density = outcome_density(&p);
        let points = 8 * dp;
        let h = 2.0 * PI / points as f64;
        let integral: f64 = density
            .grid_values(points)
            .iter()
            .enumerate()
            .map(|(j, v)| v * (0.5 * h * j as f64).sin().powi(2) * h)
            .sum();
        assert!((integral - choi_infidelity(&p)).abs() < 1e-12, "dP={dp}");
    }
}

#[test]
fn outcome_density_non_negative() {
    for dp in 2..=256 {
        let density = outcome_density(&sine_state(dp).unwrap());
        let min = density
            .grid_values(4 * dp)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-15 * dp as f64, "dP={dp}: {min:e}");
        assert!((density.integral() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn diamond_distance_dominates_choi_infidelity() {
    for dp in [2usize, 4, 9, 32, 100] {
        let p = sine_state(dp).unwrap();
        let search = diamond_search(&p, 0).unwrap();
        assert!(choi_infidelity(&p) <= search.value + 1e-12, "dP={dp}");
        assert!(search.entangled_is_optimal, "dP={dp}");
    }
}
