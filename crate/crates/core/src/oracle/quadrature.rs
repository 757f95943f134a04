use std::f64::consts::PI;

use num_complex::Complex64;

use super::characters::{schur_character, vandermonde};
use crate::error::{Error, Result};
use crate::exec;
use crate::protocol::WeightVector;
use crate::young::YoungDiagram;

/// Uniform periodic grid on the maximal torus of SU(d) with Weyl-measure weights.
///
/// The first `d - 1` eigenphases run over `2 pi k / m`, the last one fixes the
/// determinant to one. Weights are `|Vandermonde|^2` normalized by their
/// computed sum.
#[derive(Clone, Debug)]
pub struct TorusGrid {
    d: usize,
    per_direction: usize,
    nodes: Vec<Vec<Complex64>>,
    weights: Vec<f64>,
}

impl TorusGrid {
    pub fn new(d: usize, per_direction: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "torus grid needs d >= 2, got {d}"
            )));
        }
        if per_direction < 2 {
            return Err(Error::InvalidArgument(
                "torus grid needs at least 2 nodes per direction".into(),
            ));
        }
        let total = per_direction
            .checked_pow((d - 1) as u32)
            .ok_or_else(|| Error::InvalidArgument("torus grid too large".into()))?;
        let step = 2.0 * PI / per_direction as f64;
        let (nodes, raw): (Vec<_>, Vec<_>) = exec::map_range(total, |index| {
            let mut rest = index;
            let mut x = Vec::with_capacity(d);
            let mut sum = 0.0;
            for _ in 0..d - 1 {
                let k = rest % per_direction;
                rest /= per_direction;
                let phi = step * k as f64;
                sum += phi;
                x.push(Complex64::from_polar(1.0, phi));
            }
            x.push(Complex64::from_polar(1.0, -sum));
            let w = vandermonde(&x).norm_sqr();
            (x, w)
        })
        .into_iter()
        .unzip();
        let total_weight: f64 = raw.iter().sum();
        let weights = raw.into_iter().map(|w| w / total_weight).collect();
        Ok(Self {
            d,
            per_direction,
            nodes,
            weights,
        })
    }

    /// Grid with `8(n + 2)` nodes per direction, enough for a protocol using the
    /// gate `n` times.
    pub fn for_uses(d: usize, n: u64) -> Result<Self> {
        Self::new(d, 8 * (n as usize + 2))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn per_direction(&self) -> usize {
        self.per_direction
    }

    pub fn nodes(&self) -> &[Vec<Complex64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest per-direction frequency the grid integrates exactly.
    pub fn exact_frequency(&self) -> usize {
        self.per_direction - 1
    }

    /// Errors unless a product of two characters whose diagrams span at most
    /// `span_a` and `span_b` columns, times the Weyl density, is integrated exactly.
    pub fn require(&self, span_a: usize, span_b: usize) -> Result<()> {
        let required = span_a + span_b + 2 * (self.d - 1);
        if self.per_direction <= required {
            return Err(Error::UnderResolvedGrid {
                nodes: self.per_direction,
                required,
            });
        }
        Ok(())
    }

    /// Weighted sum of `f` over the nodes with a fixed-order reduction.
    /// Nodes with zero weight are skipped.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&[Complex64]) -> f64 + Sync + Send,
    {
        let terms = exec::map_range(self.nodes.len(), |i| {
            let w = self.weights[i];
            if w == 0.0 {
                0.0
            } else {
                w * f(&self.nodes[i])
            }
        });
        terms.iter().sum()
    }

    pub fn integrate_complex<F>(&self, f: F) -> Complex64
    where
        F: Fn(&[Complex64]) -> Complex64 + Sync + Send,
    {
        let terms = exec::map_range(self.nodes.len(), |i| {
            let w = self.weights[i];
            if w == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                f(&self.nodes[i]) * w
            }
        });
        terms.iter().sum()
    }
}

fn span(lambda: &YoungDiagram) -> usize {
    let rows = lambda.rows();
    (rows[0] - rows[rows.len() - 1]) as usize
}

/// Entanglement fidelity `(1/d^2) int |chi_(1) sum_l sqrt(q_l) chi_l|^2 dU` by quadrature.
pub fn haar_fidelity(q: &WeightVector<'_>, grid: &TorusGrid) -> Result<f64> {
    let set = q.set();
    let d = set.d();
    if grid.d() != d {
        return Err(Error::InvalidArgument(format!(
            "grid is for d = {} but the diagram set has d = {d}",
            grid.d()
        )));
    }
    let widest = set.members().iter().map(span).max().unwrap_or(0) + 1;
    grid.require(widest, widest)?;
    let amplitudes = q.amplitudes();
    let terms: Vec<(&YoungDiagram, f64)> = set
        .members()
        .iter()
        .zip(amplitudes)
        .filter(|(_, a)| *a > 0.0)
        .collect();
    let value = grid.integrate(|x| {
        let fundamental: Complex64 = x.iter().sum();
        let s: Complex64 = terms
            .iter()
            .map(|(lambda, a)| schur_character(lambda, x) * *a)
            .sum();
        (fundamental * s).norm_sqr()
    });
    Ok(value / (d * d) as f64)
}

/// Largest deviation of the character Gram matrix from the identity.
///
/// Diagrams differing by full columns carry the same SU(d) character, so the
/// expected overlap is one whenever the reduced diagrams agree.
pub fn character_orthonormality_check(grid: &TorusGrid, diagrams: &[YoungDiagram]) -> Result<f64> {
    if let Some(bad) = diagrams.iter().find(|l| l.row_budget() != grid.d()) {
        return Err(Error::InvalidArgument(format!(
            "diagram {bad} does not have {} rows",
            grid.d()
        )));
    }
    let widest = diagrams.iter().map(span).max().unwrap_or(0);
    grid.require(widest, widest)?;
    let table: Vec<Vec<Complex64>> = exec::map_slice(grid.nodes(), |x| {
        diagrams.iter().map(|l| schur_character(l, x)).collect()
    });
    let reduced: Vec<YoungDiagram> = diagrams.iter().map(YoungDiagram::reduced).collect();
    let mut worst: f64 = 0.0;
    for a in 0..diagrams.len() {
        for b in a..diagrams.len() {
            let mut overlap = Complex64::new(0.0, 0.0);
            for (row, w) in table.iter().zip(grid.weights()) {
                overlap += row[a] * row[b].conj() * *w;
            }
            let expected = if reduced[a] == reduced[b] { 1.0 } else { 0.0 };
            worst = worst.max((overlap - expected).norm());
        }
    }
    Ok(worst)
}
