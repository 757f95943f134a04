//! The verification suite: each criterion recomputes a guaranteed property
//! and compares it against an independent route (quadrature, dense
//! eigensolver, closed forms, Monte-Carlo sampling).

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::bounds::{optimize_delta, upper_bound_cost};
use crate::error::Result;
use crate::oracle::{
    character_orthonormality_check, choi_monte_carlo_su2, haar_fidelity, TorusGrid,
};
use crate::phase::{classical_phase_error, phase_report};
use crate::protocol::{epsilon_g, min_uses, sine_weights, viable_set, DiagramSet};
use crate::reporting::{fit_line, protocol_report, sweep};
use crate::scoring::{
    entanglement_fidelity, optimal_fidelity, qstar_score_closed_form, score_matrix, PowerIteration,
};
use crate::young::{
    dm_lower_bound, enumerate_diagrams, schur_weyl_binomial, sum_squared_dimensions,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(id: u32, name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            id,
            name,
            passed,
            detail,
        }
    }

    /// `PASS`/`FAIL` line for terminal output.
    pub fn line(&self) -> String {
        format!(
            "[{}] {}. {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }

    fn from_result(id: u32, name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(id, name, passed, detail),
            Err(e) => Self::new(id, name, false, format!("error: {e}")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    /// Accepted Monte-Carlo samples for the Choi check.
    pub samples: u64,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0,
        }
    }
}

pub fn run_suite(options: SuiteOptions) -> Vec<Outcome> {
    vec![
        dimension_identity(),
        oracle_equivalence(),
        closed_form_consistency(),
        protocol_bounds(),
        heisenberg_scaling(),
        cost_scaling(),
        eigenvalue_oracle(),
        phase_gate(),
        covariant_choi(options.samples, options.seed),
    ]
}

/// Sum of squared irrep dimensions equals the binomial count, and the
/// polynomial lower bound on `d_m` holds.
pub fn dimension_identity() -> Outcome {
    let mut mismatches = Vec::new();
    for d in [2, 3] {
        for m in 0..=8 {
            if sum_squared_dimensions(m, d) != schur_weyl_binomial(m, d) {
                mismatches.push(format!("identity d={d} m={m}"));
            }
        }
        for m in 1..=12 {
            let total: f64 = crate::young::log2_big(&sum_squared_dimensions(m, d));
            if total < dm_lower_bound(m, d).log2() {
                mismatches.push(format!("lower bound d={d} m={m}"));
            }
        }
    }
    let passed = mismatches.is_empty();
    let detail = if passed {
        "exact for d in {2,3}, m <= 8; lower bound for m <= 12".to_string()
    } else {
        mismatches.join(", ")
    };
    Outcome::new(1, "dimension identity", passed, detail)
}

/// Quadrature fidelity against the score-matrix fidelity for d = 2.
pub fn oracle_equivalence() -> Outcome {
    Outcome::from_result(
        2,
        "oracle equivalence",
        (|| {
            let mut worst: f64 = 0.0;
            for n in [4, 8, 16, 32, 64] {
                let set = viable_set(n, 2)?;
                let s = score_matrix(&set);
                let grid = TorusGrid::for_uses(2, n)?;
                let qstar = sine_weights(&set)?;
                let optimal = optimal_fidelity(&s)?;
                for (q, f) in [
                    (&qstar, entanglement_fidelity(&qstar, &s)?.fidelity),
                    (&optimal.weights_used, optimal.fidelity),
                ] {
                    worst = worst.max((haar_fidelity(q, &grid)? - f).abs());
                }
            }
            let diagrams: Vec<_> = (0..=6).flat_map(|m| enumerate_diagrams(m, 2)).collect();
            let ortho = character_orthonormality_check(&TorusGrid::new(2, 64)?, &diagrams)?;
            Ok((
            worst <= 1e-10 && ortho <= 1e-10,
            format!("max fidelity gap {worst:.3e} (tol 1e-10), orthonormality {ortho:.3e} (tol 1e-10)"),
        ))
        })(),
    )
}

fn valid_sets(d: usize, max_n: u64) -> Vec<DiagramSet> {
    (min_uses(d)..=max_n)
        .filter_map(|n| viable_set(n, d).ok())
        .collect()
}

/// `q*^T S q*` against its closed form.
pub fn closed_form_consistency() -> Outcome {
    Outcome::from_result(
        3,
        "closed-form score",
        (|| {
            let mut worst: f64 = 0.0;
            let mut count = 0;
            for (d, max_n) in [(2, 512), (3, 60)] {
                for set in valid_sets(d, max_n) {
                    let q = sine_weights(&set)?;
                    let value = score_matrix(&set).quadratic_form(&q.amplitudes());
                    let closed = qstar_score_closed_form(d, epsilon_g(set.capacity())?);
                    worst = worst.max((value - closed).abs());
                    count += 1;
                }
            }
            Ok((
                worst <= 1e-12,
                format!("{count} sets, max gap {worst:.3e} (tol 1e-12)"),
            ))
        })(),
    )
}

/// Achieved error and exact probe dimension against the guaranteed bounds.
pub fn protocol_bounds() -> Outcome {
    Outcome::from_result(
        4,
        "error and dimension bounds",
        (|| {
            let mut cases: Vec<(u64, usize)> = (4..=64).map(|n| (n, 2)).collect();
            cases.extend([128, 256, 512].map(|n| (n, 2)));
            cases.extend(
                (min_uses(3)..=60)
                    .filter(|&n| viable_set(n, 3).is_ok())
                    .map(|n| (n, 3)),
            );
            cases.extend([27, 40, 60].map(|n| (n, 4)));
            let mut failures = Vec::new();
            for &(n, d) in &cases {
                let r = protocol_report(n, d)?;
                if !(r.pass_flags.error_qstar && r.pass_flags.dimension) {
                    failures.push(format!("(d={d}, n={n})"));
                }
            }
            let detail = if failures.is_empty() {
                format!("{} (d, n) pairs within both bounds", cases.len())
            } else {
                format!("violated at {}", failures.join(" "))
            };
            Ok((failures.is_empty(), detail))
        })(),
    )
}

pub const HEISENBERG_SWEEP: [u64; 5] = [32, 64, 128, 256, 512];

/// Log-log slope of the achieved error in `n`.
pub fn heisenberg_scaling() -> Outcome {
    Outcome::from_result(
        5,
        "Heisenberg scaling",
        (|| {
            let s = sweep(2, &HEISENBERG_SWEEP)?;
            Ok((
                (s.slope + 2.0).abs() <= 0.05,
                format!(
                    "slope {:.4} (want -2 +/- 0.05), residual {:.2e}",
                    s.slope, s.residual
                ),
            ))
        })(),
    )
}

/// Cost slopes of the protocol and of the optimized lower bound.
pub fn cost_scaling() -> Outcome {
    Outcome::from_result(
        6,
        "cost scaling",
        (|| {
            let s = sweep(2, &HEISENBERG_SWEEP)?;
            let cost_ok = (s.cost_slope - 1.5).abs() <= 0.08;

            let mut ordered = true;
            let mut checked = 0;
            for k in 4..=16 {
                let eps = 10f64.powi(-k);
                let lower = optimize_delta(2, eps)?.bits;
                ordered &= lower <= upper_bound_cost(2, eps);
                checked += 1;
            }
            let (e1, e2) = (1e-12, 1e-14);
            let (l1, l2) = (optimize_delta(2, e1)?.bits, optimize_delta(2, e2)?.bits);
            let lower_slope = (l2 - l1) / ((1.0 / e2).log2() - (1.0 / e1).log2());
            let slope_ok = lower_slope >= 0.9 * 1.5;
            Ok((
            cost_ok && ordered && slope_ok,
            format!(
                "protocol slope {:.4} (want 1.5 +/- 0.08); lower <= upper on {checked} points: {ordered}; lower-bound slope {:.4} (want >= 1.35)",
                s.cost_slope, lower_slope
            ),
        ))
        })(),
    )
}

/// Largest eigenvalue of the d = 2 score matrix against the tridiagonal
/// closed form and a dense symmetric eigensolver.
pub fn eigenvalue_oracle() -> Outcome {
    Outcome::from_result(
        7,
        "eigenvalue oracle",
        (|| {
            let mut worst: f64 = 0.0;
            for capacity in 2..=64u64 {
                let set = DiagramSet::lattice(2 * capacity, 2, capacity)?;
                let s = score_matrix(&set);
                let dense = s.to_dense();
                let m = DMatrix::from_fn(set.len(), set.len(), |i, j| dense[i][j]);
                let dense_max = m
                    .symmetric_eigenvalues()
                    .iter()
                    .cloned()
                    .fold(f64::NEG_INFINITY, f64::max);
                let power = PowerIteration::default().run(&s)?.value;
                let exact = 2.0 + 2.0 * (PI / (capacity as f64 + 1.0)).cos();
                worst = worst
                    .max((dense_max - exact).abs())
                    .max((power - exact).abs());
            }
            Ok((
                worst <= 1e-10,
                format!("N <= 64, max gap {worst:.3e} (tol 1e-10)"),
            ))
        })(),
    )
}

/// Classical and quantum phase-gate errors.
pub fn phase_gate() -> Outcome {
    Outcome::from_result(
        8,
        "phase gate",
        (|| {
            let mut classical_gap: f64 = 0.0;
            for dp in 1..=256 {
                let exact = (PI / (2.0 * dp as f64)).sin();
                classical_gap = classical_gap.max((classical_phase_error(dp) - exact).abs());
            }
            let classical_ok = classical_gap <= 1e-15;

            let slope_points = [16usize, 32, 64, 128];
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for &dp in &slope_points {
                xs.push((dp as f64).ln());
                ys.push(phase_report(dp)?.eps_quantum.ln());
            }
            let slope = fit_line(&xs, &ys)?.slope;
            let slope_ok = (slope + 2.0).abs() <= 0.1;

            let ratios = [32usize, 64]
                .iter()
                .map(|&dp| phase_report(dp).map(|r| r.asymptote_ratio))
                .collect::<Result<Vec<_>>>()?;
            let ratio_ok = ratios.iter().all(|r| (0.5..=2.0).contains(r));

            let mut ordered = true;
            for dp in 4..=128 {
                let r = phase_report(dp)?;
                ordered &= r.eps_quantum < r.eps_classical;
            }
            Ok((
            classical_ok && slope_ok && ratio_ok && ordered,
            format!(
                "classical gap {classical_gap:.1e} (tol 1e-15); quantum slope {slope:.4} (want -2 +/- 0.1); \
                 ratio at dP=32,64 = {:.4}, {:.4} (want [0.5, 2]); quantum < classical for 4 <= dP <= 128: {ordered}",
                ratios[0], ratios[1]
            ),
        ))
        })(),
    )
}

/// Monte-Carlo Choi matrix against the covariant form and the score-matrix fidelity.
pub fn covariant_choi(samples: u64, seed: u64) -> Outcome {
    Outcome::from_result(
        9,
        "covariant Choi decomposition",
        (|| {
            let mut parts = Vec::new();
            let mut passed = true;
            for n in [4, 8] {
                let set = viable_set(n, 2)?;
                let fit = choi_monte_carlo_su2(&sine_weights(&set)?, samples, seed)?;
                passed &= fit.within_tolerance();
                parts.push(format!(
                    "n={n}: residual {:.2e}, |(1-a) - F| {:.2e} (tol {:.2e})",
                    fit.residual,
                    (fit.fidelity - fit.matrix_fidelity).abs(),
                    fit.tolerance()
                ));
            }
            Ok((passed, parts.join("; ")))
        })(),
    )
}
