//! Singlet-triplet gap versus chain length and the power-law fit
//! `gap = c L^-alpha`.

use rayon::prelude::*;
use serde::Serialize;

use crate::eigen::{spectral_states, LanczosOptions};
use crate::error::{Error, Result};
use crate::spin::ChainSpec;

/// Lengths below this are left out of fits by default.
pub const DEFAULT_MIN_FIT_LENGTH: usize = 8;

const MIN_FIT_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRow {
    #[serde(rename = "L")]
    pub length: usize,
    pub jp: f64,
    pub gap: f64,
    pub e0: f64,
}

/// A length whose spectral computation failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissingLength {
    #[serde(rename = "L")]
    pub length: usize,
    pub jp: f64,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GapTable {
    pub rows: Vec<GapRow>,
    pub missing: Vec<MissingLength>,
    pub warnings: Vec<String>,
}

impl GapTable {
    /// Concatenates tables, keeping row order.
    pub fn extend(&mut self, other: GapTable) {
        self.rows.extend(other.rows);
        self.missing.extend(other.missing);
        self.warnings.extend(other.warnings);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub c: f64,
    pub alpha: f64,
    pub r_squared: f64,
    pub points: usize,
    /// Set when the gaps carry no length dependence at all.
    pub degenerate: bool,
}

/// One gap per distinct length at coupling `jp` (with `J = j`), ordered by `L`.
pub fn gap_sweep(lengths: &[usize], j: f64, jp: f64, tol: f64) -> GapTable {
    gap_sweep_with(lengths, j, jp, &LanczosOptions::with_tol(tol))
}

pub fn gap_sweep_with(lengths: &[usize], j: f64, jp: f64, opts: &LanczosOptions) -> GapTable {
    let mut sorted = lengths.to_vec();
    sorted.sort_unstable();
    let mut table = GapTable::default();
    let before = sorted.len();
    sorted.dedup();
    if sorted.len() < before {
        table.warnings.push(format!("removed {} duplicate chain lengths", before - sorted.len()));
    }
    let results: Vec<(usize, Result<GapRow>)> = sorted
        .par_iter()
        .map(|&length| {
            let row = ChainSpec::new(length, j, jp)
                .and_then(|spec| spectral_states(&spec, opts))
                .map(|s| GapRow { length, jp, gap: s.data.gap, e0: s.data.e0 });
            (length, row)
        })
        .collect();
    for (length, row) in results {
        match row {
            Ok(row) => table.rows.push(row),
            Err(e) => table.missing.push(MissingLength { length, jp, error: e.to_string() }),
        }
    }
    table
}

/// Fit over rows with `L >= 8`.
pub fn fit_power_law(table: &GapTable) -> Result<PowerLawFit> {
    fit_power_law_with(table, DEFAULT_MIN_FIT_LENGTH)
}

/// Ordinary least squares of `ln gap` against `ln L` over rows with
/// `L >= min_length`.
pub fn fit_power_law_with(table: &GapTable, min_length: usize) -> Result<PowerLawFit> {
    let rows: Vec<&GapRow> = table.rows.iter().filter(|r| r.length >= min_length).collect();
    if rows.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { needed: MIN_FIT_POINTS, got: rows.len() });
    }
    let jp = rows[0].jp;
    if rows.iter().any(|r| r.jp != jp) {
        return Err(Error::Config("power-law fit needs a single jp series".into()));
    }
    if let Some(r) = rows.iter().find(|r| !(r.gap > 0.0)) {
        return Err(Error::Domain { what: "gaps must be positive for a log-log fit", value: r.gap });
    }
    let x: Vec<f64> = rows.iter().map(|r| (r.length as f64).ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.gap.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData { needed: 2, got: 1 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(&y).map(|(a, b)| (b - (intercept + slope * a)).powi(2)).sum();
    let degenerate = syy <= 1e-30 * n;
    let r_squared = if degenerate { 0.0 } else { 1.0 - ss_res / syy };
    Ok(PowerLawFit { c: intercept.exp(), alpha: -slope, r_squared, points: rows.len(), degenerate })
}

/// `(jp / J)^2 < L^(alpha - 1)`, the small-coupling validity condition of the
/// effective probe model.
pub fn validity_window(jp: f64, j: f64, alpha: f64, length: usize) -> bool {
    (jp / j).powi(2) < (length as f64).powf(alpha - 1.0)
}
