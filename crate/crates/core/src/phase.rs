//! Programming a qubit phase gate `diag(1, e^{-i theta})`: a classical
//! interval-tag program against the sine-state quantum program.

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::optimize::NelderMead;

/// A program state `sum_m c_m |m>` with real amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseProtocol {
    amplitudes: Vec<f64>,
}

impl PhaseProtocol {
    /// Arbitrary real amplitudes; they must be normalized to within `1e-12`.
    pub fn from_amplitudes(amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument(
                "program needs at least one level".into(),
            ));
        }
        let norm: f64 = amplitudes.iter().map(|c| c * c).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "amplitudes have squared norm {norm}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Program dimension.
    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// `sum_m c_m c_{m+1}`: the first Fourier moment of the outcome density,
    /// i.e. the coherence factor the mixture channel leaves on off-diagonals.
    pub fn coherence(&self) -> f64 {
        self.amplitudes.windows(2).map(|w| w[0] * w[1]).sum()
    }
}

/// The sine state `sqrt(2/dP) sin(pi (m + 1/2) / dP)`, `m = 0..dP-1`.
pub fn sine_state(dp: usize) -> Result<PhaseProtocol> {
    if dp < 2 {
        return Err(Error::InvalidArgument(format!(
            "program dimension must be >= 2, got {dp}"
        )));
    }
    let n = dp as f64;
    let scale = (2.0 / n).sqrt();
    let amplitudes = (0..dp)
        .map(|m| scale * (PI * (m as f64 + 0.5) / n).sin())
        .collect();
    PhaseProtocol::from_amplitudes(amplitudes)
}

/// `sqrt((1 - cos(pi/dP)) / 2)`.
pub fn classical_phase_error_cosine_form(dp: usize) -> f64 {
    ((1.0 - (PI / dp as f64).cos()) / 2.0).sqrt()
}

/// `sin(pi / (2 dP))`.
pub fn classical_phase_error_sine_form(dp: usize) -> f64 {
    (PI / (2.0 * dp as f64)).sin()
}

/// Worst-case error of the best classical program with `dp` interval tags.
pub fn classical_phase_error(dp: usize) -> f64 {
    assert!(dp >= 1, "program dimension must be >= 1");
    let value = classical_phase_error_sine_form(dp);
    debug_assert!((value - classical_phase_error_cosine_form(dp)).abs() <= form_tolerance(value));
    value
}

/// Agreement expected between the two classical forms. The cosine form
/// loses about `eps_mach / value` to cancellation in `1 - cos`.
pub fn form_tolerance(value: f64) -> f64 {
    1e-15 + f64::EPSILON / value
}

/// Outcome density `p(x) = |sum_m c_m e^{i m x}|^2 / (2 pi)` as a real
/// cosine series `p(x) = p_0 + 2 sum_{k>=1} p_k cos(k x)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeDensity {
    coefficients: Vec<f64>,
}

impl OutcomeDensity {
    /// Fourier coefficient `p_k` for any integer `k`.
    pub fn coefficient(&self, k: i64) -> f64 {
        self.coefficients
            .get(k.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0.0)
    }

    /// Coefficients `p_0 .. p_{dP-1}`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn eval(&self, x: f64) -> f64 {
        let tail: f64 = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, p)| p * (k as f64 * x).cos())
            .sum();
        self.coefficients[0] + 2.0 * tail
    }

    /// `int_0^{2 pi} p(x) dx`, exactly `2 pi p_0`.
    pub fn integral(&self) -> f64 {
        2.0 * PI * self.coefficients[0]
    }

    /// Values on the uniform grid `x_j = 2 pi j / points`.
    pub fn grid_values(&self, points: usize) -> Vec<f64> {
        (0..points)
            .map(|j| self.eval(2.0 * PI * j as f64 / points as f64))
            .collect()
    }
}

pub fn outcome_density(p: &PhaseProtocol) -> OutcomeDensity {
    let c = p.amplitudes();
    let coefficients = (0..c.len())
        .map(|k| c.iter().zip(&c[k..]).map(|(a, b)| a * b).sum::<f64>() / (2.0 * PI))
        .collect();
    OutcomeDensity { coefficients }
}

/// Infidelity of the Choi state of the mixture channel,
/// `1 - [1/2 + (1/2) sum_m c_m c_{m+1}]`.
pub fn choi_infidelity(p: &PhaseProtocol) -> f64 {
    1.0 - (0.5 + 0.5 * p.coherence())
}

/// Result of the diamond-distance maximization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiamondSearch {
    /// Largest half trace distance found.
    pub value: f64,
    /// Value at the maximally entangled input.
    pub entangled_value: f64,
    /// Best value reached from each start, maximally entangled start first.
    pub start_values: Vec<f64>,
    /// `max - min` over the start values.
    pub spread: f64,
    /// Number of starts within `1e-6` of the maximum.
    pub agreeing_starts: usize,
    /// Whether no random start beat the entangled input by more than `1e-9`.
    pub entangled_is_optimal: bool,
}

pub const RANDOM_STARTS: usize = 32;

/// Half the diamond distance between the mixture channel and the identity,
/// found by maximizing over pure system-reference inputs in `C^2 (x) C^2`.
pub fn quantum_phase_error(p: &PhaseProtocol) -> Result<f64> {
    diamond_search(p, 0).map(|s| s.value)
}

/// Multi-start maximization with `RANDOM_STARTS` seeded starts plus the
/// maximally entangled start.
pub fn diamond_search(p: &PhaseProtocol, seed: u64) -> Result<DiamondSearch> {
    let density = outcome_density(p);
    // Mixture of phase rotations: off-diagonal system coherences pick up
    // the factor int p(x) e^{ix} dx = 2 pi p_1.
    let kappa = 2.0 * PI * density.coefficient(1);
    let objective = |angles: &[f64]| half_trace_distance(kappa, &input_state(angles));

    let entangled_start = vec![PI / 4.0, PI / 2.0, PI / 2.0, 0.0, 0.0, 0.0];
    let mut starts = vec![entangled_start.clone()];
    for i in 0..RANDOM_STARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64 + 1);
        starts.push((0..6).map(|_| rng.random::<f64>() * 2.0 * PI).collect());
    }

    let optimizer = NelderMead::default();
    let start_values = exec::map_slice(&starts, |s| {
        let (_, neg) = optimizer.minimize(|x| -objective(x), s);
        (-neg).max(objective(s))
    });

    let entangled_value = objective(&entangled_start);
    let value = start_values
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let min = start_values.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = value - min;
    let agreeing_starts = start_values.iter().filter(|&&v| value - v <= 1e-6).count();
    if agreeing_starts < 2 {
        return Err(Error::UnreliableMaximum { spread });
    }
    let entangled_is_optimal = start_values[1..]
        .iter()
        .all(|&v| v <= entangled_value + 1e-9);
    Ok(DiamondSearch {
        value,
        entangled_value,
        start_values,
        spread,
        agreeing_starts,
        entangled_is_optimal,
    })
}

/// Pure state on system (x) reference from three hyperspherical angles
/// and three relative phases. Basis order `|s r>` with `s` most significant.
pub fn input_state(angles: &[f64]) -> Vector4<Complex64> {
    let (a, b, c) = (angles[0], angles[1], angles[2]);
    let radii = [
        a.cos(),
        a.sin() * b.cos(),
        a.sin() * b.sin() * c.cos(),
        a.sin() * b.sin() * c.sin(),
    ];
    let phases = [0.0, angles[3], angles[4], angles[5]];
    Vector4::from_fn(|i, _| Complex64::from_polar(radii[i], phases[i]))
}

// (1/2) || ((E - I) (x) I)(psi) ||_1 where E scales system coherences by kappa.
fn half_trace_distance(kappa: f64, psi: &Vector4<Complex64>) -> f64 {
    let rho = psi * psi.adjoint();
    let diff = Matrix4::from_fn(|i, j| {
        if (i >> 1) != (j >> 1) {
            rho[(i, j)] * (kappa - 1.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let eig = diff.symmetric_eigenvalues();
    0.5 * eig.iter().map(|x| x.abs()).sum::<f64>()
}

/// Classical versus quantum program error at one program dimension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseReport {
    #[serde(rename = "dP")]
    pub dp: usize,
    pub eps_classical: f64,
    pub eps_quantum: f64,
    pub choi_infidelity: f64,
    /// `eps_quantum * 2 dP^2 / pi^2`.
    pub asymptote_ratio: f64,
}

pub fn phase_report(dp: usize) -> Result<PhaseReport> {
    let p = sine_state(dp)?;
    let eps_quantum = quantum_phase_error(&p)?;
    Ok(PhaseReport {
        dp,
        eps_classical: classical_phase_error(dp),
        eps_quantum,
        choi_infidelity: choi_infidelity(&p),
        asymptote_ratio: eps_quantum * 2.0 * (dp * dp) as f64 / (PI * PI),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_state_examples() {
        let p = sine_state(2).unwrap();
        for c in p.amplitudes() {
            assert!((c - 0.5f64.sqrt()).abs() < 1e-15);
        }
        let p = sine_state(3).unwrap();
        let raw = [(PI / 6.0).sin(), (PI / 2.0).sin(), (5.0 * PI / 6.0).sin()];
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (c, r) in p.amplitudes().iter().zip(raw) {
            assert!((c - r / norm).abs() < 1e-15);
        }
        for dp in 2..100 {
            let s = sine_state(dp).unwrap();
            assert!(s.amplitudes().iter().all(|&c| c > 0.0));
        }
        assert!(sine_state(1).is_err());
    }

    #[test]
    fn classical_examples() {
        assert!((classical_phase_error(1) - 1.0).abs() < 1e-15);
        assert!((classical_phase_error(2) - 0.5f64.sqrt()).abs() < 1e-15);
        let ratio = classical_phase_error(100) / (PI / 200.0);
        assert!((ratio - 1.0).abs() < 1e-3);
        for dp in 1..2000 {
            let a = classical_phase_error_cosine_form(dp);
            let b = classical_phase_error_sine_form(dp);
            assert!((a - b).abs() <= form_tolerance(b), "dp={dp}: {a} vs {b}");
            if dp <= 8 {
                assert!((a - b).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn density_examples() {
        let d = outcome_density(&sine_state(2).unwrap());
        assert!((d.coefficient(0) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((d.coefficient(1) - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert!((d.coefficient(-1) - 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert_eq!(d.coefficient(2), 0.0);
        for x in [0.0, 0.7, PI, 4.0] {
            assert!((d.eval(x) - (1.0 + x.cos()) / (2.0 * PI)).abs() < 1e-15);
        }
        for dp in [3, 17, 64] {
            assert!((outcome_density(&sine_state(dp).unwrap()).integral() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn choi_examples() {
        assert!((choi_infidelity(&sine_state(2).unwrap()) - 0.25).abs() < 1e-15);
        let single = PhaseProtocol::from_amplitudes(vec![1.0]).unwrap();
        assert_eq!(choi_infidelity(&single), 0.5);
    }

    #[test]
    fn choi_matches_quadrature() {
        for dp in [2, 5, 16, 40] {
            let p = sine_state(dp).unwrap();
            let density = outcome_density(&p);
            let m = 8 * dp;
            let h = 2.0 * PI / m as f64;
            let quad: f64 = (0..m)
                .map(|j| {
                    let x = j as f64 * h;
                    density.eval(x) * (x / 2.0).sin().powi(2) * h
                })
                .sum();
            assert!((quad - choi_infidelity(&p)).abs() < 1e-12, "dp={dp}");
        }
    }

    #[test]
    fn diamond_matches_entangled_value() {
        let p = sine_state(8).unwrap();
        let s = diamond_search(&p, 0).unwrap();
        assert_eq!(s.start_values.len(), RANDOM_STARTS + 1);
        assert!(s.entangled_is_optimal);
        assert!((s.value - choi_infidelity(&p)).abs() < 1e-12);
        assert!(s.agreeing_starts >= 2);
    }

    #[test]
    fn maximally_entangled_parameterization() {
        let psi = input_state(&[PI / 4.0, PI / 2.0, PI / 2.0, 0.0, 0.0, 0.0]);
        let r = 0.5f64.sqrt();
        assert!((psi[0].re - r).abs() < 1e-15 && (psi[3].re - r).abs() < 1e-15);
        assert!(psi[1].norm() < 1e-15 && psi[2].norm() < 1e-15);
    }
}
