//! Brute-force cross-checks: Weyl-integration quadrature over the maximal
//! torus, Schur characters, and a Monte-Carlo Choi-state fit.

mod characters;
mod choi;
mod quadrature;

pub use characters::{bialternant, chebyshev_u, schur_character, su2_character, vandermonde};
pub use choi::{choi_monte_carlo_su2, ChoiFit, MIN_SAMPLES, STREAMS};
pub use quadrature::{character_orthonormality_check, haar_fidelity, TorusGrid};
