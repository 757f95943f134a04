//! Per-protocol reports, sweeps, and report serialization.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};
use serde_json::{Map, Number, Value};

use crate::bounds::upper_bound_cost;
use crate::error::{Error, Result};
use crate::exec;
use crate::phase::classical_phase_error;
use crate::protocol::{c_max, sine_weights, viable_set};
use crate::scoring::{entanglement_fidelity, fidelity_guarantee, optimal_fidelity, score_matrix};
use crate::young::{irrep_dimension, log2_big};

/// Which of the guaranteed inequalities hold for one report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PassFlags {
    /// Sine-weight error within the error bound.
    pub error_qstar: bool,
    /// Optimal-weight error within the error bound.
    pub error_optimal: bool,
    /// Probe dimension within the `9n / (3d-2)` bound.
    pub dimension: bool,
    /// Sine-weight fidelity above the guaranteed fidelity.
    pub fidelity: bool,
    /// Probe dimension within the lattice-size bound.
    pub lattice_dimension: bool,
    /// Program cost within the upper cost bound at the achieved error.
    pub cost: bool,
}

impl PassFlags {
    pub fn all(&self) -> bool {
        self.error_qstar
            && self.error_optimal
            && self.dimension
            && self.fidelity
            && self.lattice_dimension
            && self.cost
    }
}

fn as_decimal<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolReport {
    pub d: usize,
    pub n: u64,
    #[serde(rename = "N")]
    pub capacity: u64,
    pub n0: u64,
    pub set_size: usize,
    pub fidelity_qstar: f64,
    pub fidelity_optimal: f64,
    pub epsilon_qstar: f64,
    pub epsilon_optimal: f64,
    #[serde(rename = "dP_exact_log2")]
    pub dp_exact_log2: f64,
    #[serde(rename = "dP_exact", serialize_with = "as_decimal")]
    pub dp_exact: BigUint,
    #[serde(rename = "cP_bits")]
    pub cp_bits: f64,
    #[serde(rename = "bound_eq5")]
    pub error_bound: f64,
    #[serde(rename = "bound_eq6_log2")]
    pub dimension_bound_log2: f64,
    #[serde(rename = "bound_lemma3")]
    pub fidelity_bound: f64,
    #[serde(rename = "bound_lemma4_log2")]
    pub lattice_dimension_bound_log2: f64,
    #[serde(rename = "corollary_bits")]
    pub upper_cost_bits: f64,
    pub pass_flags: PassFlags,
}

/// `2 (pi (d-1)^2 (3d-2) / (d n))^2`.
pub fn error_bound(d: usize, n: u64) -> f64 {
    let df = d as f64;
    let x = PI * (df - 1.0).powi(2) * (3.0 * df - 2.0) / (df * n as f64);
    2.0 * x * x
}

/// `(d^2-1) log2(9n / (3d-2))`.
pub fn dimension_bound_log2(d: usize, n: u64) -> f64 {
    let df = d as f64;
    (df * df - 1.0) * (9.0 * n as f64 / (3.0 * df - 2.0)).log2()
}

/// `(d^2-1) log2(2 (d-1) c_max n + 3)`.
pub fn lattice_dimension_bound_log2(d: usize, n: u64) -> f64 {
    let df = d as f64;
    (df * df - 1.0) * (2.0 * (df - 1.0) * c_max(d, n) * n as f64 + 3.0).log2()
}

pub fn protocol_report(n: u64, d: usize) -> Result<ProtocolReport> {
    let set = viable_set(n, d)?;
    let s = score_matrix(&set);
    let qstar = entanglement_fidelity(&sine_weights(&set)?, &s)?;
    let optimal = optimal_fidelity(&s)?;
    let dp_exact: BigUint = set
        .members()
        .iter()
        .map(|l| {
            let dim = irrep_dimension(l);
            &dim * &dim
        })
        .sum();
    let dp_exact_log2 = log2_big(&dp_exact);
    let error = error_bound(d, n);
    let dimension = dimension_bound_log2(d, n);
    let fidelity = fidelity_guarantee(d, n)?.value;
    let lattice_dimension = lattice_dimension_bound_log2(d, n);
    let upper_cost_bits = upper_bound_cost(d, qstar.error);
    let pass_flags = PassFlags {
        error_qstar: qstar.error <= error,
        error_optimal: optimal.error <= error,
        dimension: dp_exact_log2 <= dimension,
        fidelity: qstar.fidelity >= fidelity,
        lattice_dimension: dp_exact_log2 <= lattice_dimension,
        cost: dp_exact_log2 <= upper_cost_bits,
    };
    Ok(ProtocolReport {
        d,
        n,
        capacity: set.capacity(),
        n0: set.n0(),
        set_size: set.len(),
        fidelity_qstar: qstar.fidelity,
        fidelity_optimal: optimal.fidelity,
        epsilon_qstar: qstar.error,
        epsilon_optimal: optimal.error,
        dp_exact_log2,
        dp_exact,
        cp_bits: dp_exact_log2,
        error_bound: error,
        dimension_bound_log2: dimension,
        fidelity_bound: fidelity,
        lattice_dimension_bound_log2: lattice_dimension,
        upper_cost_bits,
        pass_flags,
    })
}

/// Least-squares line `y = slope x + intercept` and the RMS residual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(
            "fit needs equally many x and y values".into(),
        ));
    }
    if xs.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a slope fit needs at least 3 points, got {}",
            xs.len()
        )));
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "fit needs at least two distinct x values".into(),
        ));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    Ok(LineFit {
        slope,
        intercept,
        residual: (sse / m).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sweep {
    pub d: usize,
    pub reports: Vec<ProtocolReport>,
    /// `ln eps_qstar` against `ln n`.
    pub slope: f64,
    pub residual: f64,
    /// `cP_bits` against `log2(1 / eps_qstar)`.
    pub cost_slope: f64,
    /// Single-copy phase error with `n + 1` levels against `ln n`.
    pub classical_slope: f64,
    pub slope_ratio: f64,
}

pub fn sweep(d: usize, n_values: &[u64]) -> Result<Sweep> {
    if n_values.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a sweep needs at least 3 values of n, got {}",
            n_values.len()
        )));
    }
    let mut ns = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let reports = exec::map_slice(&ns, |&n| protocol_report(n, d))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let ln_n: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ln_eps: Vec<f64> = reports.iter().map(|r| r.epsilon_qstar.ln()).collect();
    let fit = fit_line(&ln_n, &ln_eps)?;
    let inv_eps: Vec<f64> = reports.iter().map(|r| -r.epsilon_qstar.log2()).collect();
    let bits: Vec<f64> = reports.iter().map(|r| r.cp_bits).collect();
    let cost = fit_line(&inv_eps, &bits)?;
    let ln_classical: Vec<f64> = ns
        .iter()
        .map(|&n| classical_phase_error(n as usize + 1).ln())
        .collect();
    let classical = fit_line(&ln_n, &ln_classical)?;
    Ok(Sweep {
        d,
        reports,
        slope: fit.slope,
        residual: fit.residual,
        cost_slope: cost.slope,
        classical_slope: classical.slope,
        slope_ratio: fit.slope / classical.slope,
    })
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(f64::NAN));
            Number::from_f64(x)
                .map(Value::Number)
                .unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect())
        }
        other => other,
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn render_json<T: Serialize + ?Sized>(report: &T) -> Result<String> {
    let value = round_value(serde_json::to_value(report)?);
    let mut out = serde_json::to_string_pretty(&value)?;
    out.push('\n');
    Ok(out)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Number(n) => out.push((prefix.to_string(), format_number(n))),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
    }
}

fn format_number(n: &Number) -> String {
    match n.as_f64() {
        Some(x) if n.is_f64() => {
            let x = round_sig(x);
            if x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e15) {
                format!("{x:e}")
            } else {
                format!("{x}")
            }
        }
        _ => n.to_string(),
    }
}

fn rows_of<T: Serialize + ?Sized>(rows: &T) -> Result<Vec<Vec<(String, String)>>> {
    let value = serde_json::to_value(rows)?;
    let items = match value {
        Value::Array(items) => items,
        other => vec![other],
    };
    Ok(items
        .iter()
        .map(|item| {
            let mut cells = Vec::new();
            flatten("", item, &mut cells);
            cells
        })
        .collect())
}

/// CSV with one row per element (a non-sequence value is a single row).
/// Nested fields become dotted column names, in field order.
pub fn render_csv<T: Serialize + ?Sized>(rows: &T) -> Result<String> {
    let rows = rows_of(rows)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    if let Some(first) = rows.first() {
        writer
            .write_record(first.iter().map(|(k, _)| k.as_str()))
            .map_err(csv_error)?;
    }
    for row in &rows {
        writer
            .write_record(row.iter().map(|(_, v)| v.as_str()))
            .map_err(csv_error)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Inconsistent(e.to_string()))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Aligned `key  value` lines, one block per element.
pub fn render_table<T: Serialize + ?Sized>(rows: &T) -> Result<String> {
    let rows = rows_of(rows)?;
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let width = row.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in row {
            out.push_str(&format!("{k:<width$}  {v}\n"));
        }
    }
    Ok(out)
}

/// Flattens a sweep into its reports plus the fitted slopes as a JSON object.
pub fn sweep_summary(s: &Sweep) -> Value {
    let mut map = Map::new();
    map.insert("d".into(), s.d.into());
    map.insert("points".into(), s.reports.len().into());
    for (k, v) in [
        ("slope", s.slope),
        ("residual", s.residual),
        ("cost_slope", s.cost_slope),
        ("classical_slope", s.classical_slope),
        ("slope_ratio", s.slope_ratio),
    ] {
        map.insert(
            k.into(),
            Number::from_f64(v)
                .map(Value::Number)
                .unwrap_or(Value::Null),
        );
    }
    Value::Object(map)
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
