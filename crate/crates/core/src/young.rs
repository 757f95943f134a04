//! Young diagrams with a fixed row budget and the SU(d) irrep dimensions
//! they label.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition with exactly `d` rows (trailing zeros explicit), longest row first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct YoungDiagram {
    rows: Vec<u32>,
}

impl YoungDiagram {
    /// Builds a diagram from row lengths; the row budget is `rows.len()`.
    pub fn new(rows: Vec<u32>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidDiagram(
                "row budget must be at least 1".into(),
            ));
        }
        if let Some(w) = rows.windows(2).find(|w| w[0] < w[1]) {
            return Err(Error::InvalidDiagram(format!(
                "rows must be non-increasing, found {} before {}",
                w[0], w[1]
            )));
        }
        Ok(Self { rows })
    }

    /// The empty diagram with `d` rows.
    pub fn empty(d: usize) -> Self {
        assert!(d >= 1, "row budget must be at least 1");
        Self { rows: vec![0; d] }
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn row_budget(&self) -> usize {
        self.rows.len()
    }

    pub fn boxes(&self) -> u64 {
        self.rows.iter().map(|&r| r as u64).sum()
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[0] > w[1])
    }

    /// The diagram with all full columns removed. Two diagrams label the same
    /// SU(d) irrep exactly when their reduced forms agree.
    pub fn reduced(&self) -> Self {
        let last = *self.rows.last().expect("non-empty rows");
        Self {
            rows: self.rows.iter().map(|&r| r - last).collect(),
        }
    }

    /// Dimension of the SU(d) irrep labelled by this diagram.
    pub fn dimension(&self) -> BigUint {
        irrep_dimension(self)
    }

    /// The diagrams obtained by adding one box, in row order.
    pub fn add_one_box(&self) -> Vec<YoungDiagram> {
        (0..self.rows.len())
            .filter(|&i| i == 0 || self.rows[i] < self.rows[i - 1])
            .map(|i| {
                let mut rows = self.rows.clone();
                rows[i] += 1;
                YoungDiagram { rows }
            })
            .collect()
    }
}

impl TryFrom<Vec<u32>> for YoungDiagram {
    type Error = Error;

    fn try_from(rows: Vec<u32>) -> Result<Self> {
        YoungDiagram::new(rows)
    }
}

impl From<YoungDiagram> for Vec<u32> {
    fn from(d: YoungDiagram) -> Self {
        d.rows
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `m` into at most `d` parts, lexicographically decreasing.
pub fn enumerate_diagrams(m: u32, d: usize) -> Vec<YoungDiagram> {
    assert!(d >= 1, "row budget must be at least 1");
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(d);
    fill_rows(m, m, d, &mut prefix, &mut out);
    out
}

fn fill_rows(
    remaining: u32,
    max_part: u32,
    d: usize,
    prefix: &mut Vec<u32>,
    out: &mut Vec<YoungDiagram>,
) {
    let rows_left = (d - prefix.len()) as u32;
    if rows_left == 1 {
        prefix.push(remaining);
        out.push(YoungDiagram {
            rows: prefix.clone(),
        });
        prefix.pop();
        return;
    }
    let hi = remaining.min(max_part);
    let lo = remaining.div_ceil(rows_left);
    for first in (lo..=hi).rev() {
        prefix.push(first);
        fill_rows(remaining - first, first, d, prefix, out);
        prefix.pop();
    }
}

/// Irrep dimension from the product formula over row pairs, in exact arithmetic.
pub fn irrep_dimension(lambda: &YoungDiagram) -> BigUint {
    let rows = lambda.rows();
    let d = rows.len();
    let mut numerator = BigUint::one();
    for i in 0..d {
        for j in (i + 1)..d {
            let factor = rows[i] as u64 - rows[j] as u64 + (j - i) as u64;
            numerator *= factor;
        }
    }
    let mut denominator = BigUint::one();
    let mut factorial = BigUint::one();
    for k in 1..d {
        factorial *= k as u64;
        denominator *= &factorial;
    }
    let (q, r) = numerator.div_rem(&denominator);
    assert!(r.is_zero(), "irrep dimension of {lambda} is not integral");
    q
}

/// Sum of absolute row differences.
pub fn young_distance(a: &YoungDiagram, b: &YoungDiagram) -> Result<u64> {
    if a.row_budget() != b.row_budget() {
        return Err(Error::RowBudgetMismatch {
            left: a.row_budget(),
            right: b.row_budget(),
        });
    }
    Ok(a.rows
        .iter()
        .zip(&b.rows)
        .map(|(&x, &y)| (x as i64 - y as i64).unsigned_abs())
        .sum())
}

/// Sum of squared irrep dimensions over all diagrams with `m` boxes and at most `d` rows.
pub fn sum_squared_dimensions(m: u32, d: usize) -> BigUint {
    enumerate_diagrams(m, d)
        .iter()
        .map(|l| {
            let dim = irrep_dimension(l);
            &dim * &dim
        })
        .sum()
}

/// The binomial coefficient C(m + d^2 - 1, d^2 - 1), the dimension of the
/// symmetric subspace that the squared-dimension sum must reproduce.
pub fn schur_weyl_binomial(m: u32, d: usize) -> BigUint {
    let k = (d * d - 1) as u64;
    num_integer::binomial(BigUint::from(m as u64 + k), BigUint::from(k))
}

/// Lower estimate `(m / (d^2 - 1))^(d^2 - 1)` of the squared-dimension sum.
pub fn dm_lower_bound(m: u32, d: usize) -> f64 {
    let k = (d * d - 1) as f64;
    (m as f64 / k).powf(k)
}

/// Base-2 logarithm of an arbitrary-precision integer. Returns `-inf` for zero.
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().expect("finite").log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yd(rows: &[u32]) -> YoungDiagram {
        YoungDiagram::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_diagrams(1, 2), vec![yd(&[1, 0])]);
        assert_eq!(enumerate_diagrams(2, 2), vec![yd(&[2, 0]), yd(&[1, 1])]);
        assert_eq!(
            enumerate_diagrams(3, 3),
            vec![yd(&[3, 0, 0]), yd(&[2, 1, 0]), yd(&[1, 1, 1])]
        );
        assert_eq!(enumerate_diagrams(0, 3), vec![yd(&[0, 0, 0])]);
    }

    #[test]
    fn rejects_increasing_rows() {
        assert!(YoungDiagram::new(vec![1, 2]).is_err());
        assert!(YoungDiagram::new(vec![]).is_err());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(irrep_dimension(&yd(&[1, 0])), BigUint::from(2u32));
        assert_eq!(irrep_dimension(&yd(&[1, 1, 0])), BigUint::from(3u32));
        assert_eq!(irrep_dimension(&yd(&[2, 1, 0])), BigUint::from(8u32));
        assert_eq!(irrep_dimension(&yd(&[3, 1])), BigUint::from(3u32));
        assert_eq!(irrep_dimension(&yd(&[4, 0])), BigUint::from(5u32));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(young_distance(&yd(&[3, 1]), &yd(&[3, 1])).unwrap(), 0);
        assert_eq!(young_distance(&yd(&[3, 1]), &yd(&[2, 2])).unwrap(), 2);
        assert_eq!(young_distance(&yd(&[4, 0]), &yd(&[2, 2])).unwrap(), 4);
        assert!(matches!(
            young_distance(&yd(&[1, 0]), &yd(&[1, 0, 0])),
            Err(Error::RowBudgetMismatch { .. })
        ));
    }

    #[test]
    fn squared_dimension_examples() {
        assert_eq!(sum_squared_dimensions(1, 2), BigUint::from(4u32));
        assert_eq!(sum_squared_dimensions(2, 2), BigUint::from(10u32));
        assert_eq!(sum_squared_dimensions(2, 3), BigUint::from(45u32));
        assert_eq!(schur_weyl_binomial(6, 2), BigUint::from(84u32));
    }

    #[test]
    fn dm_bound_examples() {
        assert_eq!(dm_lower_bound(3, 2), 1.0);
        assert!((dm_lower_bound(6, 2) - 8.0).abs() < 1e-12);
        assert_eq!(dm_lower_bound(8, 3), 1.0);
    }

    #[test]
    fn reduced_and_boxes() {
        let l = yd(&[5, 3, 2]);
        assert_eq!(l.boxes(), 10);
        assert_eq!(l.reduced(), yd(&[3, 1, 0]));
        assert_eq!(l.add_one_box().len(), 3);
        assert_eq!(
            yd(&[2, 2, 0]).add_one_box(),
            vec![yd(&[3, 2, 0]), yd(&[2, 2, 1])]
        );
        assert_eq!(l.to_string(), "(5,3,2)");
    }

    #[test]
    fn log2_of_large_integers() {
        let x = BigUint::one() << 2000u32;
        assert!((log2_big(&x) - 2000.0).abs() < 1e-9);
        assert_eq!(log2_big(&BigUint::from(1024u32)), 10.0);
    }
}
