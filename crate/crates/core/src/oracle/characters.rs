use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::young::{irrep_dimension, YoungDiagram};

const COINCIDENCE: f64 = 1e-9;

/// Character of the irrep `lambda` at a torus element with the given
/// eigenvalues, via the bialternant `det(x_i^(lambda_j + d - j)) / det(x_i^(d - j))`.
///
/// Coincident eigenvalues are separated by a `1e-9` phase jitter; when all
/// eigenvalues coincide the exact value `d_lambda x^|lambda|` is returned.
pub fn schur_character(lambda: &YoungDiagram, phases: &[Complex64]) -> Complex64 {
    let d = lambda.row_budget();
    assert_eq!(phases.len(), d, "need one eigenvalue per row");
    let first = phases[0];
    if phases.iter().all(|x| (x - first).norm() < COINCIDENCE) {
        let dim = irrep_dimension(lambda).to_f64().expect("finite dimension");
        return first.powu(lambda.boxes() as u32) * dim;
    }
    let mut x = phases.to_vec();
    let min_gap = pairwise_min_gap(&x);
    if min_gap < COINCIDENCE {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi *= Complex64::from_polar(1.0, COINCIDENCE * i as f64);
        }
    }
    bialternant(lambda.rows(), &x) / vandermonde(&x)
}

fn pairwise_min_gap(x: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            gap = gap.min((x[i] - x[j]).norm());
        }
    }
    gap
}

/// `det(x_i^(rows_j + d - 1 - j))` with zero-based `j`.
pub fn bialternant(rows: &[u32], x: &[Complex64]) -> Complex64 {
    let d = x.len();
    let m = DMatrix::from_fn(d, d, |i, j| x[i].powu(rows[j] + (d - 1 - j) as u32));
    m.determinant()
}

/// `prod_{i<j} (x_i - x_j)`, equal to `det(x_i^(d - 1 - j))`.
pub fn vandermonde(x: &[Complex64]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            v *= x[i] - x[j];
        }
    }
    v
}

/// Chebyshev polynomials of the second kind `U_0(x) .. U_max(x)`.
pub fn chebyshev_u(max: usize, x: f64) -> Vec<f64> {
    let mut u = Vec::with_capacity(max + 1);
    u.push(1.0);
    if max >= 1 {
        u.push(2.0 * x);
    }
    for k in 2..=max {
        let next = 2.0 * x * u[k - 1] - u[k - 2];
        u.push(next);
    }
    u
}

/// SU(2) character `sin((k+1) theta/2) / sin(theta/2)` with `k = lambda_1 - lambda_2`,
/// evaluated as `U_k(cos(theta/2))` so the identity limit is exact.
pub fn su2_character(lambda: &YoungDiagram, theta: f64) -> f64 {
    assert_eq!(lambda.row_budget(), 2, "SU(2) characters need two rows");
    let k = (lambda.rows()[0] - lambda.rows()[1]) as usize;
    chebyshev_u(k, (theta / 2.0).cos())[k]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn yd(rows: &[u32]) -> YoungDiagram {
        YoungDiagram::new(rows.to_vec()).unwrap()
    }

    fn c(theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, theta)
    }

    #[test]
    fn low_rank_characters() {
        let (x1, x2) = (c(0.3), c(-1.1));
        let s = schur_character(&yd(&[1, 0]), &[x1, x2]);
        assert!((s - (x1 + x2)).norm() < 1e-13);
        let s = schur_character(&yd(&[1, 1]), &[x1, x2]);
        assert!((s - x1 * x2).norm() < 1e-13);
    }

    #[test]
    fn identity_gives_dimension() {
        let one = Complex64::new(1.0, 0.0);
        for l in [yd(&[2, 1, 0]), yd(&[4, 2, 1]), yd(&[3, 0])] {
            let dim = irrep_dimension(&l).to_f64().unwrap();
            let s = schur_character(&l, &vec![one; l.row_budget()]);
            assert!((s.re - dim).abs() < 1e-12 && s.im.abs() < 1e-12);
        }
    }

    #[test]
    fn su2_examples() {
        let theta = 1.234;
        assert!((su2_character(&yd(&[1, 0]), theta) - 2.0 * (theta / 2.0).cos()).abs() < 1e-15);
        assert_eq!(su2_character(&yd(&[3, 1]), 0.0), 3.0);
        assert!((su2_character(&yd(&[2, 0]), PI) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn near_coincident_eigenvalues_are_finite() {
        let x = [c(0.5), c(0.5 + 1e-13), c(-1.0)];
        let s = schur_character(&yd(&[2, 1, 0]), &x);
        let exact = {
            let y = [c(0.5), c(0.5), c(-1.0)];
            // s_(2,1,0) = (x1+x2)(x1+x3)(x2+x3) for three variables
            (y[0] + y[1]) * (y[0] + y[2]) * (y[1] + y[2])
        };
        assert!((s - exact).norm() < 1e-6, "{s} vs {exact}");
    }
}
