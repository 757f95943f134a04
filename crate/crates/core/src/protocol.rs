//! Construction of the estimation protocol: the lattice size `N`, the flat
//! base diagram, the viable diagram lattice and the product sine weights.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::young::YoungDiagram;

/// Minimum number of gate uses for which the construction is defined.
pub fn min_uses(d: usize) -> u64 {
    (2 * d * (d - 1)) as u64
}

/// Lattice size `N = floor((2n/(d-1) + d - 2) / (3d - 2))`.
///
/// Errors when `n < 2d(d-1)` or when the result is below 2.
pub fn capacity_parameter(n: u64, d: usize) -> Result<u64> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "dimension d must be >= 2, got {d}"
        )));
    }
    let required = min_uses(d);
    if n < required {
        return Err(Error::InsufficientUses { n, d, required });
    }
    let capacity = raw_capacity(n, d);
    if capacity < 2 {
        return Err(Error::DegenerateWeights { capacity });
    }
    Ok(capacity)
}

// Exact floor of the rational expression, no precondition checks.
fn raw_capacity(n: u64, d: usize) -> u64 {
    let d = d as u64;
    (2 * n + (d - 2) * (d - 1)) / ((3 * d - 2) * (d - 1))
}

/// Lower slope `c_min` with `c_min * n <= N`.
pub fn c_min(d: usize, n: u64) -> f64 {
    let (d, n) = (d as f64, n as f64);
    2.0 * (1.0 - d * (d - 1.0) / n) / ((3.0 * d - 2.0) * (d - 1.0))
}

/// Upper slope `c_max` with `N <= c_max * n`.
pub fn c_max(d: usize, n: u64) -> f64 {
    let (d, n) = (d as f64, n as f64);
    2.0 * (1.0 + (d - 2.0) * (d - 1.0) / (2.0 * n)) / ((3.0 * d - 2.0) * (d - 1.0))
}

/// Leftover box count `n0 = n - ((3d-2)N - d + 2)(d-1)/2`.
pub fn leftover_boxes(n: u64, d: usize, capacity: u64) -> Result<u64> {
    let d = d as i128;
    let twice = ((3 * d - 2) * capacity as i128 - d + 2) * (d - 1);
    if twice % 2 != 0 {
        return Err(Error::Inconsistent(format!(
            "leftover box count is not an integer (2*offset = {twice})"
        )));
    }
    let n0 = n as i128 - twice / 2;
    if n0 < 0 {
        return Err(Error::Inconsistent(format!(
            "leftover box count is negative ({n0})"
        )));
    }
    Ok(n0 as u64)
}

/// The flattest diagram with `n0` boxes and `d` rows: rows differ by at most one.
pub fn flat_diagram(n0: u64, d: usize) -> YoungDiagram {
    let base = (n0 / d as u64) as u32;
    let extra = (n0 % d as u64) as usize;
    let rows = (0..d).map(|i| base + u32::from(i < extra)).collect();
    YoungDiagram::new(rows).expect("flat rows are non-increasing")
}

/// The viable lattice of diagrams on which the probe state is supported.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagramSet {
    d: usize,
    n: u64,
    capacity: u64,
    n0: u64,
    mu0: YoungDiagram,
    members: Vec<YoungDiagram>,
    coords: Vec<Vec<u32>>,
}

impl DiagramSet {
    /// Builds the lattice `{0..capacity-1}^(d-1)` of diagrams with `n` boxes.
    ///
    /// Unlike [`viable_set`] this accepts any `capacity >= 1`, which makes
    /// it usable for single-point fixtures.
    pub fn lattice(n: u64, d: usize, capacity: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!(
                "dimension d must be >= 2, got {d}"
            )));
        }
        if capacity == 0 {
            return Err(Error::InvalidArgument(
                "lattice size must be positive".into(),
            ));
        }
        let n0 = leftover_boxes(n, d, capacity)?;
        let mu0 = flat_diagram(n0, d);
        let k = d - 1;
        let count = (capacity as usize)
            .checked_pow(k as u32)
            .ok_or_else(|| Error::InvalidArgument("lattice too large".into()))?;

        let mut members = Vec::with_capacity(count);
        let mut coords = Vec::with_capacity(count);
        for index in 0..count {
            let t = unravel(index, capacity as usize, k);
            let mut rows = Vec::with_capacity(d);
            let mut used: i64 = 0;
            for (i, &ti) in t.iter().enumerate() {
                let big_n = capacity as i64;
                let row = mu0.rows()[i] as i64 + big_n * (2 * d as i64 - 3) + 1
                    - (big_n + 1) * i as i64
                    + ti as i64;
                used += row;
                rows.push(row);
            }
            rows.push(n as i64 - used);
            if rows.iter().any(|&r| r < 0) || rows.windows(2).any(|w| w[0] <= w[1]) {
                return Err(Error::Inconsistent(format!(
                    "lattice point {t:?} gives rows {rows:?}, which are not strictly decreasing"
                )));
            }
            let diagram = YoungDiagram::new(rows.into_iter().map(|r| r as u32).collect())?;
            members.push(diagram);
            coords.push(t);
        }
        Ok(Self {
            d,
            n,
            capacity,
            n0,
            mu0,
            members,
            coords,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Lattice size `N`.
    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn mu0(&self) -> &YoungDiagram {
        &self.mu0
    }

    pub fn members(&self) -> &[YoungDiagram] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Lattice coordinates of member `i`.
    pub fn coords(&self, i: usize) -> &[u32] {
        &self.coords[i]
    }

    /// Member index of lattice point `t`, if it lies inside the lattice.
    pub fn index_of(&self, t: &[i64]) -> Option<usize> {
        if t.len() != self.d - 1 {
            return None;
        }
        let n = self.capacity as i64;
        let mut index = 0usize;
        for &ti in t {
            if ti < 0 || ti >= n {
                return None;
            }
            index = index * n as usize + ti as usize;
        }
        Some(index)
    }
}

// Row-major mixed radix, first coordinate most significant.
fn unravel(mut index: usize, radix: usize, len: usize) -> Vec<u32> {
    let mut t = vec![0u32; len];
    for slot in t.iter_mut().rev() {
        *slot = (index % radix) as u32;
        index /= radix;
    }
    t
}

/// The viable set for `n` uses of a `d`-dimensional gate.
pub fn viable_set(n: u64, d: usize) -> Result<DiagramSet> {
    let capacity = capacity_parameter(n, d)?;
    DiagramSet::lattice(n, d, capacity)
}

/// A probability distribution over the members of a [`DiagramSet`].
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector<'a> {
    set: &'a DiagramSet,
    probabilities: Vec<f64>,
}

impl<'a> WeightVector<'a> {
    pub fn new(set: &'a DiagramSet, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != set.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} probabilities, got {}",
                set.len(),
                probabilities.len()
            )));
        }
        if let Some(p) = probabilities.iter().find(|p| p.is_nan() || **p < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "negative or NaN probability {p}"
            )));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { set, probabilities })
    }

    /// Point mass on member `index`.
    pub fn point(set: &'a DiagramSet, index: usize) -> Result<Self> {
        let mut p = vec![0.0; set.len()];
        *p.get_mut(index)
            .ok_or_else(|| Error::InvalidArgument(format!("no member {index}")))? = 1.0;
        Self::new(set, p)
    }

    pub fn uniform(set: &'a DiagramSet) -> Self {
        let p = 1.0 / set.len() as f64;
        Self {
            set,
            probabilities: vec![p; set.len()],
        }
    }

    pub fn set(&self) -> &'a DiagramSet {
        self.set
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Probe amplitudes `sqrt(q)`.
    pub fn amplitudes(&self) -> Vec<f64> {
        self.probabilities.iter().map(|p| p.sqrt()).collect()
    }
}

/// One-dimensional sine distribution `g_k = (2/N) sin^2(pi (2k+1) / (2N))`.
pub fn sine_distribution(capacity: u64) -> Result<Vec<f64>> {
    if capacity < 2 {
        return Err(Error::DegenerateWeights { capacity });
    }
    let n = capacity as f64;
    Ok((0..capacity)
        .map(|k| {
            let s = (PI * (2 * k + 1) as f64 / (2.0 * n)).sin();
            2.0 / n * s * s
        })
        .collect())
}

/// Product sine weights over the lattice coordinates of `set`.
pub fn sine_weights(set: &DiagramSet) -> Result<WeightVector<'_>> {
    let g = sine_distribution(set.capacity())?;
    let probabilities = (0..set.len())
        .map(|i| set.coords(i).iter().map(|&t| g[t as usize]).product())
        .collect();
    WeightVector::new(set, probabilities)
}

/// Nearest-neighbour coherence deficit `1 - sum_k sqrt(g_k g_{k+1})`.
pub fn epsilon_g(capacity: u64) -> Result<f64> {
    let g = sine_distribution(capacity)?;
    let overlap: f64 = g.windows(2).map(|w| (w[0] * w[1]).sqrt()).sum();
    Ok(1.0 - overlap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(set: &DiagramSet) -> Vec<Vec<u32>> {
        set.members().iter().map(|m| m.rows().to_vec()).collect()
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(capacity_parameter(4, 2).unwrap(), 2);
        assert_eq!(capacity_parameter(8, 2).unwrap(), 4);
        assert_eq!(capacity_parameter(26, 3).unwrap(), 3);
    }

    #[test]
    fn capacity_errors() {
        assert!(matches!(
            capacity_parameter(3, 2),
            Err(Error::InsufficientUses { required: 4, .. })
        ));
        assert!(matches!(
            capacity_parameter(12, 3),
            Err(Error::DegenerateWeights { capacity: 1 })
        ));
        assert!(capacity_parameter(10, 1).is_err());
    }

    #[test]
    fn flat_examples() {
        assert_eq!(flat_diagram(0, 2).rows(), &[0, 0]);
        assert_eq!(flat_diagram(6, 3).rows(), &[2, 2, 2]);
        assert_eq!(flat_diagram(1, 2).rows(), &[1, 0]);
        assert_eq!(flat_diagram(7, 3).rows(), &[3, 2, 2]);
    }

    #[test]
    fn viable_set_examples() {
        let s = viable_set(4, 2).unwrap();
        assert_eq!((s.capacity(), s.n0()), (2, 0));
        assert_eq!(rows(&s), vec![vec![3, 1], vec![4, 0]]);

        let s = viable_set(8, 2).unwrap();
        assert_eq!(
            rows(&s),
            vec![vec![5, 3], vec![6, 2], vec![7, 1], vec![8, 0]]
        );

        let s = viable_set(26, 3).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s.mu0().rows(), &[2, 2, 2]);
        for m in s.members() {
            let r = m.rows();
            assert!((12..=14).contains(&r[0]) && (8..=10).contains(&r[1]));
            assert_eq!(r[0] + r[1] + r[2], 26);
            assert!(m.is_strictly_decreasing());
        }
    }

    #[test]
    fn lattice_indexing_is_row_major() {
        let s = viable_set(26, 3).unwrap();
        assert_eq!(s.coords(1), &[0, 1]);
        assert_eq!(s.coords(3), &[1, 0]);
        assert_eq!(s.index_of(&[2, 1]), Some(7));
        assert_eq!(s.index_of(&[3, 0]), None);
        assert_eq!(s.index_of(&[-1, 0]), None);
    }

    #[test]
    fn single_point_lattice() {
        let s = DiagramSet::lattice(12, 3, 1).unwrap();
        assert_eq!(rows(&s), vec![vec![6, 4, 2]]);
    }

    #[test]
    fn sine_weight_examples() {
        let s = viable_set(4, 2).unwrap();
        let q = sine_weights(&s).unwrap();
        for p in q.probabilities() {
            assert!((p - 0.5).abs() < 1e-15);
        }
        let g = sine_distribution(3).unwrap();
        for (a, b) in g.iter().zip([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        let s = DiagramSet::lattice(13, 3, 2).unwrap();
        let q = sine_weights(&s).unwrap();
        assert_eq!(q.probabilities().len(), 4);
        assert!(q.probabilities().iter().all(|p| (p - 0.25).abs() < 1e-15));
        assert!(matches!(
            sine_distribution(1),
            Err(Error::DegenerateWeights { .. })
        ));
    }

    #[test]
    fn epsilon_g_examples() {
        assert!((epsilon_g(2).unwrap() - 0.5).abs() < 1e-15);
        assert!((epsilon_g(3).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let e4 = epsilon_g(4).unwrap();
        assert!((e4 - 0.219_669_914).abs() < 1e-8);
        assert!(e4 <= PI * PI / 16.0);
        assert!(epsilon_g(1).is_err());
    }

    #[test]
    fn weight_vector_validation() {
        let s = viable_set(4, 2).unwrap();
        assert!(WeightVector::new(&s, vec![0.5]).is_err());
        assert!(WeightVector::new(&s, vec![0.7, 0.7]).is_err());
        assert!(WeightVector::new(&s, vec![1.5, -0.5]).is_err());
        assert_eq!(
            WeightVector::point(&s, 1).unwrap().probabilities(),
            &[0.0, 1.0]
        );
        assert!(WeightVector::point(&s, 2).is_err());
    }
}
