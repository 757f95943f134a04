//! Program-cost bounds in bits (all logarithms base 2).

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::golden_section_max;
use crate::scoring::FlaggedBound;

fn gate_params(d: usize) -> f64 {
    (d * d - 1) as f64
}

// 4 sqrt(2 eps)
fn recycling_error(epsilon: f64) -> f64 {
    4.0 * (2.0 * epsilon).sqrt()
}

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must lie in (0, 1), got {x}"
        )))
    }
}

fn check_dimension(d: usize) -> Result<()> {
    if d >= 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "dimension d must be >= 2, got {d}"
        )))
    }
}

/// Lower bound on the program cost of any processor with error `epsilon`:
/// `(1 - delta - 4 sqrt(2 eps)) (d^2-1) log(delta / (4 sqrt(2 eps) (d^2-1))) - 1`.
///
/// Flagged vacuous when the prefactor is non-positive, the log argument
/// does not exceed 1, or the value is non-positive.
pub fn lower_bound_cost(d: usize, epsilon: f64, delta: f64) -> Result<FlaggedBound> {
    check_dimension(d)?;
    check_unit_interval("epsilon", epsilon)?;
    check_unit_interval("delta", delta)?;
    let k = gate_params(d);
    let r = recycling_error(epsilon);
    let prefactor = (1.0 - delta - r) * k;
    let argument = delta / (r * k);
    let value = prefactor * argument.log2() - 1.0;
    Ok(FlaggedBound {
        value,
        vacuous: prefactor <= 0.0 || argument <= 1.0 || value <= 0.0,
    })
}

/// `log2` of the explicit program-dimension lower bound
/// `(1/2) (delta / (4 sqrt(2 eps) (d^2-1)))^((1 - delta - 4 sqrt(2 eps)) (d^2-1))`.
pub fn lower_bound_dimension(d: usize, epsilon: f64, delta: f64) -> Result<FlaggedBound> {
    check_dimension(d)?;
    check_unit_interval("epsilon", epsilon)?;
    check_unit_interval("delta", delta)?;
    let k = gate_params(d);
    let r = recycling_error(epsilon);
    let base = delta / (4.0 * (2.0 * epsilon).sqrt() * k);
    let exponent = (1.0 - delta - r) * k;
    let ln_dim = (0.5f64).ln() + exponent * base.ln();
    let value = ln_dim / std::f64::consts::LN_2;
    Ok(FlaggedBound {
        value,
        vacuous: exponent <= 0.0 || base <= 1.0 || value <= 0.0,
    })
}

/// Best `delta` for the lower bound and the bound it achieves.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptimizedLowerBound {
    pub delta: f64,
    pub bits: f64,
}

/// Maximizes [`lower_bound_cost`] over the feasible `delta` interval by
/// golden-section search (tolerance `1e-9` in `delta`).
pub fn optimize_delta(d: usize, epsilon: f64) -> Result<OptimizedLowerBound> {
    check_dimension(d)?;
    check_unit_interval("epsilon", epsilon)?;
    let k = gate_params(d);
    let r = recycling_error(epsilon);
    let lo = r * k * (1.0 + 1e-9);
    let hi = 1.0 - r;
    if lo >= hi {
        return Err(Error::VacuousForAllDelta { d, epsilon });
    }
    // Same expression as lower_bound_cost, without the range checks that
    // the open interval already guarantees.
    let bits = |delta: f64| (1.0 - delta - r) * k * (delta / (r * k)).log2() - 1.0;
    let (delta, bits) = golden_section_max(bits, lo, hi, 1e-9);
    Ok(OptimizedLowerBound { delta, bits })
}

/// Upper bound achieved by the measure-and-operate protocol:
/// `((d^2-1)/2) log(162 pi^2 (d-1)^4 / (d^2 eps))`.
pub fn upper_bound_cost(d: usize, epsilon: f64) -> f64 {
    let df = d as f64;
    0.5 * gate_params(d) * (162.0 * PI * PI * (df - 1.0).powi(4) / (df * df * epsilon)).log2()
}

/// The simplified upper bound `((d^2-1)/2) log(162 pi^2 d^2 / eps)`.
pub fn upper_bound_cost_simplified(d: usize, epsilon: f64) -> f64 {
    let df = d as f64;
    0.5 * gate_params(d) * (162.0 * PI * PI * df * df / epsilon).log2()
}

/// Conjectured cost `(nu/2) log(C / eps)` for a `nu`-parameter gate family.
pub fn conjecture_cost(nu: u32, epsilon: f64, c: f64) -> f64 {
    0.5 * nu as f64 * (c / epsilon).log2()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Upper,
    Lower,
}

/// One prior-work row of the bound comparison table, evaluated in bits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub label: &'static str,
    pub kind: BoundKind,
    pub bits: f64,
}

/// Prior-work bounds. `k` is the unspecified universal constant and must
/// be supplied by the caller.
pub fn table1_rows(d: usize, epsilon: f64, k: f64) -> Vec<TableRow> {
    let df = d as f64;
    vec![
        TableRow {
            label: "d^2 log(K/eps)",
            kind: BoundKind::Upper,
            bits: df * df * (k / epsilon).log2(),
        },
        TableRow {
            label: "4 d^2 log(d) / eps^2",
            kind: BoundKind::Upper,
            bits: 4.0 * df * df * df.log2() / (epsilon * epsilon),
        },
        TableRow {
            label: "(1-eps) K d - (2/3) log(d)",
            kind: BoundKind::Lower,
            bits: (1.0 - epsilon) * k * df - 2.0 / 3.0 * df.log2(),
        },
        TableRow {
            label: "log(d^2/eps)",
            kind: BoundKind::Lower,
            bits: (df * df / epsilon).log2(),
        },
        TableRow {
            label: "((d+1)/2) log(1/d) + ((d-1)/2) log(1/eps)",
            kind: BoundKind::Lower,
            bits: 0.5 * (df + 1.0) * (1.0 / df).log2() + 0.5 * (df - 1.0) * (1.0 / epsilon).log2(),
        },
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VacuousFlags {
    pub lower_bits: bool,
    pub lower_dimension_log2: bool,
    pub upper_bits: bool,
}

/// All cost bounds at one `(d, eps)` point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub d: usize,
    pub epsilon: f64,
    pub delta: Option<f64>,
    pub lower_bits: f64,
    pub lower_dimension_log2: f64,
    pub upper_bits: f64,
    pub upper_simplified_bits: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub table1_rows: Vec<TableRow>,
    pub vacuous_flags: VacuousFlags,
}

/// Evaluates every bound. With `delta = None` the lower bound uses the
/// optimal `delta` from [`optimize_delta`].
pub fn bound_report(d: usize, epsilon: f64, delta: Option<f64>, k: f64) -> Result<BoundReport> {
    check_dimension(d)?;
    check_unit_interval("epsilon", epsilon)?;
    if k.is_nan() || k <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "K must be positive, got {k}"
        )));
    }
    let delta = match delta {
        Some(x) => x,
        None => optimize_delta(d, epsilon)?.delta,
    };
    let lower = lower_bound_cost(d, epsilon, delta)?;
    let lower_dim = lower_bound_dimension(d, epsilon, delta)?;
    let upper_bits = upper_bound_cost(d, epsilon);
    Ok(BoundReport {
        d,
        epsilon,
        delta: Some(delta),
        lower_bits: lower.value,
        lower_dimension_log2: lower_dim.value,
        upper_bits,
        upper_simplified_bits: upper_bound_cost_simplified(d, epsilon),
        k,
        table1_rows: table1_rows(d, epsilon, k),
        vacuous_flags: VacuousFlags {
            lower_bits: lower.vacuous,
            lower_dimension_log2: lower_dim.vacuous,
            upper_bits: upper_bits < 0.0,
        },
    })
}
