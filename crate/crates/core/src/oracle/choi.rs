use std::collections::HashSet;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::characters::chebyshev_u;
use crate::error::{Error, Result};
use crate::exec;
use crate::protocol::WeightVector;
use crate::scoring::{entanglement_fidelity, score_matrix};

/// Number of independent RNG streams; fixed so results do not depend on the
/// thread count.
pub const STREAMS: u64 = 64;
pub const MIN_SAMPLES: u64 = 100_000;

/// Covariant fit `A ~ (1 - a) Phi+ + a rho_perp` of a sampled Choi matrix.
#[derive(Clone, Debug, Serialize)]
pub struct ChoiFit {
    pub a: f64,
    pub residual: f64,
    /// `1 - a`, the sampled entanglement fidelity.
    pub fidelity: f64,
    /// Entanglement fidelity from the score matrix.
    pub matrix_fidelity: f64,
    pub accepted: u64,
    pub draws: u64,
}

impl ChoiFit {
    /// `5 / sqrt(samples)`.
    pub fn tolerance(&self) -> f64 {
        5.0 / (self.accepted as f64).sqrt()
    }

    pub fn within_tolerance(&self) -> bool {
        self.residual <= self.tolerance()
            && (self.fidelity - self.matrix_fidelity).abs() <= self.tolerance()
    }
}

struct Chunk {
    sum: Matrix4<Complex64>,
    accepted: u64,
    draws: u64,
}

/// Samples the Choi matrix of the measure-and-operate channel at `U = I`.
///
/// Estimates `G` are drawn from the outcome law `|sum_l sqrt(q_l) chi_l(G)|^2 dG`
/// by rejection from Haar-random SU(2) elements (uniform unit quaternions);
/// `samples` counts accepted draws. Work is split into [`STREAMS`] ChaCha8
/// streams derived from `seed`.
pub fn choi_monte_carlo_su2(q: &WeightVector<'_>, samples: u64, seed: u64) -> Result<ChoiFit> {
    let set = q.set();
    if set.d() != 2 {
        return Err(Error::InvalidArgument(format!(
            "Monte-Carlo Choi check needs d = 2, got d = {}",
            set.d()
        )));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "samples must be >= {MIN_SAMPLES}, got {samples}"
        )));
    }
    let terms: Vec<(usize, f64)> = set
        .members()
        .iter()
        .zip(q.amplitudes())
        .filter(|(_, a)| *a > 0.0)
        .map(|(l, a)| ((l.rows()[0] - l.rows()[1]) as usize, a))
        .collect();
    let top = terms.iter().map(|(k, _)| *k).max().unwrap_or(0);
    let peak: f64 = terms.iter().map(|(k, a)| a * (*k as f64 + 1.0)).sum();
    let p_max = peak * peak;

    let mut seen = HashSet::new();
    for stream in 0..STREAMS {
        if !seen.insert(stream) {
            return Err(Error::SeedCollision { stream });
        }
    }

    let chunks = exec::map_range(STREAMS as usize, |c| {
        let quota = samples / STREAMS + u64::from((c as u64) < samples % STREAMS);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let mut chunk = Chunk {
            sum: Matrix4::zeros(),
            accepted: 0,
            draws: 0,
        };
        while chunk.accepted < quota {
            let mut g = [0.0f64; 4];
            for v in g.iter_mut() {
                *v = rng.sample(StandardNormal);
            }
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            let [w, x, y, z] = g.map(|v| v / norm);
            chunk.draws += 1;
            let u = chebyshev_u(top, w);
            let amp: f64 = terms.iter().map(|(k, a)| a * u[*k]).sum();
            let accept: f64 = rng.random();
            if accept * p_max >= amp * amp {
                continue;
            }
            // (G (x) I)|Phi+> with G = [[w + iz, y + ix], [-y + ix, w - iz]]
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let v = Vector4::new(
                Complex64::new(w, z) * s,
                Complex64::new(y, x) * s,
                Complex64::new(-y, x) * s,
                Complex64::new(w, -z) * s,
            );
            chunk.sum += v * v.adjoint();
            chunk.accepted += 1;
        }
        chunk
    });

    let mut sum = Matrix4::<Complex64>::zeros();
    let (mut accepted, mut draws) = (0u64, 0u64);
    for c in &chunks {
        sum += c.sum;
        accepted += c.accepted;
        draws += c.draws;
    }
    let choi = sum / Complex64::new(accepted as f64, 0.0);

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phi = Vector4::new(
        Complex64::new(s, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(s, 0.0),
    );
    let projector = phi * phi.adjoint();
    let fidelity = (phi.adjoint() * choi * phi)[(0, 0)].re;
    let a = 1.0 - fidelity;
    let rho_perp = (Matrix4::<Complex64>::identity() - projector) / Complex64::new(3.0, 0.0);
    let model = projector * Complex64::new(fidelity, 0.0) + rho_perp * Complex64::new(a, 0.0);
    let residual = (choi - model).norm();

    let matrix_fidelity = entanglement_fidelity(q, &score_matrix(set))?.fidelity;
    Ok(ChoiFit {
        a,
        residual,
        fidelity,
        matrix_fidelity,
        accepted,
        draws,
    })
}
