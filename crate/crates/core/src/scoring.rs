//! The score matrix over a diagram lattice and the entanglement fidelity
//! it induces.
//!
//! For weights `q` the fidelity is the quadratic form `(1/d^2) a^T S a` in
//! the amplitudes `a = sqrt(q)`. `S` has `d` on the diagonal and 1 between
//! diagrams at Young distance 2, which on the lattice are the neighbours
//! `t +- e_i` and `t +- (e_i - e_j)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::protocol::{c_min, capacity_parameter, DiagramSet, WeightVector};
use crate::young::young_distance;

/// Sparse symmetric score matrix stored as sorted adjacency lists.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMatrix<'a> {
    set: &'a DiagramSet,
    diagonal: f64,
    neighbors: Vec<Vec<usize>>,
}

// Below this size a parallel mat-vec costs more than it saves.
const PARALLEL_MATVEC_MIN: usize = 4096;

impl<'a> ScoreMatrix<'a> {
    /// Builds the off-diagonal pattern by testing every pair of members for
    /// Young distance 2.
    pub fn from_pairwise_distance(set: &'a DiagramSet) -> Self {
        let members = set.members();
        let neighbors = exec::map_range(members.len(), |i| {
            (0..members.len())
                .filter(|&j| {
                    j != i
                        && young_distance(&members[i], &members[j]).expect("same row budget") == 2
                })
                .collect()
        });
        Self {
            set,
            diagonal: set.d() as f64,
            neighbors,
        }
    }

    pub fn set(&self) -> &'a DiagramSet {
        self.set
    }

    pub fn dimension(&self) -> usize {
        self.neighbors.len()
    }

    pub fn diagonal(&self) -> f64 {
        self.diagonal
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diagonal
        } else if self.neighbors[i].binary_search(&j).is_ok() {
            1.0
        } else {
            0.0
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let m = self.dimension();
        (0..m)
            .map(|i| (0..m).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// `S x`, with a fixed summation order in every row.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dimension());
        let row = |i: usize| {
            let mut acc = self.diagonal * x[i];
            for &j in &self.neighbors[i] {
                acc += x[j];
            }
            acc
        };
        if self.dimension() >= PARALLEL_MATVEC_MIN {
            exec::map_range(self.dimension(), row)
        } else {
            (0..self.dimension()).map(row).collect()
        }
    }

    /// `x^T S x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.mul_vec(x))
    }
}

/// Score matrix built from lattice adjacency.
pub fn score_matrix(set: &DiagramSet) -> ScoreMatrix<'_> {
    let k = set.d() - 1;
    let mut steps: Vec<Vec<i64>> = Vec::new();
    for i in 0..k {
        for sign in [-1, 1] {
            let mut e = vec![0; k];
            e[i] = sign;
            steps.push(e);
        }
        for j in 0..k {
            if j != i {
                let mut f = vec![0; k];
                f[i] = 1;
                f[j] = -1;
                steps.push(f);
            }
        }
    }
    let neighbors = exec::map_range(set.len(), |idx| {
        let t: Vec<i64> = set.coords(idx).iter().map(|&c| c as i64).collect();
        let mut adj: Vec<usize> = steps
            .iter()
            .filter_map(|s| {
                let moved: Vec<i64> = t.iter().zip(s).map(|(a, b)| a + b).collect();
                set.index_of(&moved)
            })
            .collect();
        adj.sort_unstable();
        adj
    });
    ScoreMatrix {
        set,
        diagonal: set.d() as f64,
        neighbors,
    }
}

/// Fidelity together with the weights that produced it.
#[derive(Clone, Debug)]
pub struct FidelityResult<'a> {
    pub fidelity: f64,
    pub error: f64,
    pub weights_used: WeightVector<'a>,
}

/// Entanglement fidelity `(1/d^2) sqrt(q)^T S sqrt(q)`.
pub fn entanglement_fidelity<'a>(
    q: &WeightVector<'a>,
    s: &ScoreMatrix<'a>,
) -> Result<FidelityResult<'a>> {
    if q.set() != s.set() {
        return Err(Error::SetMismatch);
    }
    let d = s.set().d() as f64;
    let fidelity = s.quadratic_form(&q.amplitudes()) / (d * d);
    Ok(FidelityResult {
        fidelity,
        error: 1.0 - fidelity,
        weights_used: q.clone(),
    })
}

/// Settings for the power iteration behind [`optimal_fidelity`].
#[derive(Clone, Copy, Debug)]
pub struct PowerIteration {
    pub relative_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-12,
            max_iterations: 1_000_000,
        }
    }
}

/// Leading eigenpair of the score matrix.
#[derive(Clone, Debug, Serialize)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

impl PowerIteration {
    /// Power iteration from the all-ones vector, stopping once
    /// `||S v - theta v|| <= tol * theta`.
    pub fn run(&self, s: &ScoreMatrix<'_>) -> Result<Eigenpair> {
        let m = s.dimension();
        let mut v = vec![1.0 / (m as f64).sqrt(); m];
        let mut residual = f64::INFINITY;
        for iteration in 1..=self.max_iterations {
            let w = s.mul_vec(&v);
            let theta = dot(&v, &w);
            residual = w
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - theta * b).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual <= self.relative_tolerance * theta {
                return Ok(Eigenpair {
                    value: theta,
                    vector: v,
                    iterations: iteration,
                    residual,
                });
            }
            let norm = dot(&w, &w).sqrt();
            v = w.into_iter().map(|x| x / norm).collect();
        }
        Err(Error::NonConvergence {
            iterations: self.max_iterations,
            residual,
        })
    }
}

/// Optimal fidelity `lambda_max(S) / d^2`; the weights are the squared
/// entries of the principal eigenvector.
pub fn optimal_fidelity<'a>(s: &ScoreMatrix<'a>) -> Result<FidelityResult<'a>> {
    optimal_fidelity_with(s, PowerIteration::default())
}

pub fn optimal_fidelity_with<'a>(
    s: &ScoreMatrix<'a>,
    solver: PowerIteration,
) -> Result<FidelityResult<'a>> {
    let pair = solver.run(s)?;
    if let Some(x) = pair.vector.iter().find(|&&x| x < -1e-12) {
        return Err(Error::Inconsistent(format!(
            "principal eigenvector has a negative entry {x}"
        )));
    }
    let squares: Vec<f64> = pair.vector.iter().map(|x| x * x).collect();
    let total: f64 = squares.iter().sum();
    let probabilities = squares.into_iter().map(|p| p / total).collect();
    let weights = WeightVector::new(s.set(), probabilities)?;
    let d = s.set().d() as f64;
    let fidelity = pair.value / (d * d);
    Ok(FidelityResult {
        fidelity,
        error: 1.0 - fidelity,
        weights_used: weights,
    })
}

/// Closed form of `q*^T S q*` for the product sine weights:
/// `d + (d-1)(d-2)(1-eps_g)^2 + 2(d-1)(1-eps_g)`.
pub fn qstar_score_closed_form(d: usize, eps_g: f64) -> f64 {
    let d = d as f64;
    let c = 1.0 - eps_g;
    d + (d - 1.0) * (d - 2.0) * c * c + 2.0 * (d - 1.0) * c
}

/// A bound value that may be vacuous (non-positive / meaningless).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlaggedBound {
    pub value: f64,
    pub vacuous: bool,
}

/// Guaranteed fidelity of the sine-weight protocol,
/// `1 - 2 (pi (d-1) / (d c_min n))^2`. Not clamped at zero.
pub fn fidelity_guarantee(d: usize, n: u64) -> Result<FlaggedBound> {
    capacity_parameter(n, d)?;
    let df = d as f64;
    let x = std::f64::consts::PI * (df - 1.0) / (df * c_min(d, n) * n as f64);
    let value = 1.0 - 2.0 * x * x;
    Ok(FlaggedBound {
        value,
        vacuous: value <= 0.0,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
