//! File formats: state JSON, Bloch-spec JSON, witness CSV, and the
//! see-saw report.
//!
//! Writers are hand-rolled so the on-disk representation is pinned:
//! floats carry 17 significant digits, which round-trips `f64` exactly and
//! makes repeated runs byte-identical.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::Permutation;
use crate::error::{Error, Result};
use crate::matops::ComplexMatrix;
use crate::states::{BlochDiagonalSpec, DensityMatrix};
use crate::tol;
use crate::witness::{SeeSawRun, WitnessCoefficients};

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes a state as
/// `{"dim_a": n, "dim_b": n, "matrix": [[[re, im], ...], ...]}` (row-major).
pub fn state_to_json(rho: &DensityMatrix) -> String {
    let mut out = String::with_capacity(1 << 16);
    out.push_str(&format!(
        "{{\"dim_a\": {}, \"dim_b\": {}, \"matrix\": [",
        rho.dim_a(),
        rho.dim_b()
    ));
    let m = rho.matrix();
    for i in 0..m.rows() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('[');
        for j in 0..m.cols() {
            if j > 0 {
                out.push_str(", ");
            }
            let e = m[(i, j)];
            out.push_str(&format!("[{}, {}]", fmt_f64(e.re), fmt_f64(e.im)));
        }
        out.push(']');
    }
    out.push_str("]}");
    out
}

#[derive(Deserialize)]
struct StateJson {
    dim_a: usize,
    dim_b: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

/// Parses [`state_to_json`] output. Validation uses the wide positivity
/// slack so states defined through truncated literature constants load.
pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    let parsed: StateJson =
        serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    let d = parsed.dim_a * parsed.dim_b;
    if parsed.matrix.len() != d || parsed.matrix.iter().any(|row| row.len() != d) {
        return Err(Error::ParseError(format!(
            "matrix must be {d}x{d} for dims ({}, {})",
            parsed.dim_a, parsed.dim_b
        )));
    }
    let m = ComplexMatrix::from_fn(d, d, |i, j| {
        Complex64::new(parsed.matrix[i][j][0], parsed.matrix[i][j][1])
    });
    DensityMatrix::new(m, parsed.dim_a, parsed.dim_b, tol::PSD_SLACK_TRUNCATED)
}

/// Serializes a Bloch spec as
/// `{"lambdas": [...], "permutation": [...]}` with 1-based images.
pub fn bloch_to_json(spec: &BlochDiagonalSpec) -> String {
    let lambdas: Vec<String> = spec.lambdas.iter().map(|&l| fmt_f64(l)).collect();
    let images: Vec<String> = spec
        .permutation
        .images()
        .iter()
        .map(|i| i.to_string())
        .collect();
    format!(
        "{{\"lambdas\": [{}], \"permutation\": [{}]}}",
        lambdas.join(", "),
        images.join(", ")
    )
}

#[derive(Deserialize)]
struct BlochJson {
    lambdas: Vec<f64>,
    permutation: Vec<usize>,
}

pub fn bloch_from_json(text: &str) -> Result<BlochDiagonalSpec> {
    let parsed: BlochJson =
        serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    if parsed.lambdas.len() != 16 {
        return Err(Error::ParseError(format!(
            "expected 16 lambdas, got {}",
            parsed.lambdas.len()
        )));
    }
    let mut lambdas = [0.0; 16];
    lambdas.copy_from_slice(&parsed.lambdas);
    let permutation = Permutation::from_images(&parsed.permutation)?;
    Ok(BlochDiagonalSpec::new(lambdas, permutation))
}

/// Writes the 4096 coefficients as CSV with header `x,y,z,w`, the value as
/// the exact rational string `-1/16`, `0`, or `1/16`.
pub fn witness_to_csv(w: &WitnessCoefficients) -> String {
    let mut out = String::with_capacity(4096 * 12);
    out.push_str("x,y,z,w\n");
    for x in 1..=16 {
        for y in 1..=16 {
            for z in 1..=16 {
                let value = w.get(x, y, z);
                let token = if value == 0.0 {
                    "0"
                } else if value > 0.0 {
                    "1/16"
                } else {
                    "-1/16"
                };
                out.push_str(&format!("{x},{y},{z},{token}\n"));
            }
        }
    }
    out
}

fn parse_rational(token: &str) -> Result<f64> {
    let token = token.trim();
    if let Some((num, den)) = token.split_once('/') {
        let num: f64 = num
            .trim()
            .parse()
            .map_err(|_| Error::ParseError(format!("bad rational {token:?}")))?;
        let den: f64 = den
            .trim()
            .parse()
            .map_err(|_| Error::ParseError(format!("bad rational {token:?}")))?;
        if den == 0.0 {
            return Err(Error::ParseError(format!("zero denominator in {token:?}")));
        }
        Ok(num / den)
    } else {
        token
            .parse()
            .map_err(|_| Error::ParseError(format!("bad number {token:?}")))
    }
}

/// Parses [`witness_to_csv`] output. Missing entries default to zero; the
/// loaded witness carries the identity permutation (the coefficient file
/// does not encode one).
pub fn witness_from_csv(text: &str) -> Result<WitnessCoefficients> {
    let mut values = vec![0.0; 4096];
    let mut seen_header = false;
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            seen_header = true;
            if line.eq_ignore_ascii_case("x,y,z,w") {
                continue;
            }
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::ParseError(format!(
                "line {}: expected 4 fields, got {}",
                line_no + 1,
                fields.len()
            )));
        }
        let parse_index = |s: &str| -> Result<usize> {
            let v: usize = s
                .trim()
                .parse()
                .map_err(|_| Error::ParseError(format!("line {}: bad index {s:?}", line_no + 1)))?;
            if !(1..=16).contains(&v) {
                return Err(Error::ParseError(format!(
                    "line {}: index {v} out of 1..=16",
                    line_no + 1
                )));
            }
            Ok(v)
        };
        let x = parse_index(fields[0])?;
        let y = parse_index(fields[1])?;
        let z = parse_index(fields[2])?;
        values[((x - 1) * 16 + (y - 1)) * 16 + (z - 1)] = parse_rational(fields[3])?;
    }
    WitnessCoefficients::from_values(values, Permutation::identity())
}

/// Summary of a multi-restart see-saw run.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SeeSawReport {
    pub seed: u64,
    pub restarts: usize,
    pub best_value: f64,
    pub converged_fraction: f64,
    /// Iteration count -> number of restarts that stopped there.
    pub iterations_histogram: std::collections::BTreeMap<usize, usize>,
}

impl SeeSawReport {
    pub fn from_run(run: &SeeSawRun, seed: u64) -> Self {
        let mut iterations_histogram = std::collections::BTreeMap::new();
        for s in &run.summaries {
            *iterations_histogram.entry(s.iterations).or_insert(0) += 1;
        }
        Self {
            seed,
            restarts: run.summaries.len(),
            best_value: run.best.value,
            converged_fraction: run.converged_fraction(),
            iterations_histogram,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
