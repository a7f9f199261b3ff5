use std::f64::consts::PI;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::eigen::{spectral_states, LanczosOptions, SpectralData};
use crate::entangle::sharing_report;
use crate::error::Error;
use crate::scaling::{fit_power_law, gap_sweep_with, GapRow, GapTable};
use crate::spin::ChainSpec;
use crate::teleport::{shrink_factor, teleport_fidelity, threshold_temperature, FidelityCurve};
use crate::thermal::{high_temperature_g, thermal_g, truncation_warning};
use crate::transfer::{
    effective_model_from, full_chain_transfer_with, max_fidelity, numeric_peak, optimal_time, uniform_times,
    EffectiveModel, FullChainOptions, KrylovOptions, SenderState, FULL_CHAIN_CAP,
};

use super::config::{Format, Mode, RunConfig};
use super::output::{Cell, Csv, Report};
use super::CliError;

fn lanczos(cfg: &RunConfig) -> LanczosOptions {
    LanczosOptions { seed: cfg.seed, ..LanczosOptions::with_tol(cfg.tol) }
}

fn chain(cfg: &RunConfig, length: usize, jp: f64) -> Result<ChainSpec, CliError> {
    ChainSpec::new(length, cfg.j, jp).map_err(|e| CliError::Usage(e.to_string()))
}

fn spectral(cfg: &RunConfig, spec: &ChainSpec) -> Result<SpectralData, CliError> {
    Ok(spectral_states(spec, &lanczos(cfg))?.data)
}

fn spectral_json(s: &SpectralData) -> Value {
    json!({
        "gap": s.gap,
        "e0": s.e0,
        "e-triplet": s.e_triplet,
        "gzz-ground": s.gzz_ground,
        "gzz-triplet": s.gzz_triplet,
        "gxx-triplet": s.gxx_triplet,
    })
}

pub fn gap_scan(cfg: &RunConfig) -> Result<Report, CliError> {
    let opts = lanczos(cfg);
    let tables: Vec<GapTable> = cfg.jp.iter().map(|&jp| gap_sweep_with(&cfg.lengths, cfg.j, jp, &opts)).collect();
    let missing: Vec<String> = tables
        .iter()
        .flat_map(|t| t.missing.iter().map(|m| format!("L = {}, jp = {}: {}", m.length, m.jp, m.error)))
        .collect();
    if !missing.is_empty() {
        return Err(CliError::Sweep(missing.join("; ")));
    }
    let mut warnings = Vec::new();
    let mut csv = Csv::new(&["L", "jp", "gap", "e0"]);
    let mut fits = Vec::new();
    let mut rows: Vec<GapRow> = Vec::new();
    for (table, &jp) in tables.iter().zip(&cfg.jp) {
        warnings.extend(table.warnings.iter().map(|w| format!("jp = {jp}: {w}")));
        for r in &table.rows {
            csv.row(&[Cell::Int(r.length), Cell::Float(r.jp), Cell::Float(r.gap), Cell::Float(r.e0)]);
        }
        rows.extend(&table.rows);
        let fit = match fit_power_law(table) {
            Ok(fit) => {
                if fit.degenerate {
                    warnings.push(format!("jp = {jp}: gaps do not depend on L; the fit is degenerate"));
                }
                json!({ "jp": jp, "fit": fit })
            }
            Err(e @ Error::InsufficientData { .. }) => {
                warnings.push(format!("jp = {jp}: no power-law fit ({e})"));
                json!({ "jp": jp, "fit": null })
            }
            Err(e) => return Err(e.into()),
        };
        fits.push(fit);
    }
    Ok(Report {
        csv: Some(csv.into_string()),
        results: json!({ "rows": rows }),
        derived: json!({ "fits": fits }),
        warnings,
    })
}

pub fn teleport(cfg: &RunConfig) -> Result<Report, CliError> {
    let spec = chain(cfg, cfg.single_length()?, cfg.single_jp()?)?;
    let s = spectral(cfg, &spec)?;
    let temperatures = cfg.temperature.values();
    let mut csv = Csv::new(&["T", "g", "theta", "fidelity"]);
    let mut g_values = Vec::with_capacity(temperatures.len());
    let mut fidelities = Vec::with_capacity(temperatures.len());
    let mut rows = Vec::new();
    for &t in &temperatures {
        let g = thermal_g(&s, t)?;
        let theta = shrink_factor(g).theta();
        let f = teleport_fidelity(g);
        csv.row(&[Cell::Float(t), Cell::Float(g.value()), Cell::Float(theta), Cell::Float(f)]);
        rows.push(json!({ "T": t, "g": g.value(), "theta": theta, "fidelity": f }));
        g_values.push(g.value());
        fidelities.push(f);
    }
    let t_star = match threshold_temperature(&s) {
        Ok(t) => Some(t),
        Err(Error::NoThreshold { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let curve = FidelityCurve { spec, spectral: s, temperatures: temperatures.clone(), g_values, fidelities, t_star };
    let mut warnings = Vec::new();
    let hot = temperatures.iter().filter(|&&t| truncation_warning(&s, t).is_some()).count();
    if hot > 0 {
        warnings.push(format!(
            "{hot} temperatures exceed half the gap ({:e}); levels above the triplet are neglected there",
            0.5 * s.gap
        ));
    }
    if t_star.is_none() {
        warnings.push("probes are not entangled at T = 0; no threshold temperature".into());
    }
    Ok(Report {
        csv: Some(csv.into_string()),
        results: json!({ "rows": rows }),
        derived: json!({
            "t-star": t_star,
            "classical-crossing": curve.classical_crossing(),
            "spectral": spectral_json(&s),
            "high-temperature-g": high_temperature_g(&s),
        }),
        warnings,
    })
}

/// Peak time and fidelity of the effective model: closed forms at the
/// commensurate point, numeric search otherwise.
fn effective_peak(model: &EffectiveModel, t_max: Option<f64>) -> Result<(f64, f64), Error> {
    if model.is_commensurate() {
        Ok((optimal_time(model)?, max_fidelity(model.g)))
    } else {
        numeric_peak(model, t_max.unwrap_or(4.0 * PI / model.j_eff))
    }
}

pub fn transfer(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.mode {
        Mode::Effective => transfer_effective(cfg),
        Mode::Full => transfer_full(cfg),
    }
}

fn transfer_effective(cfg: &RunConfig) -> Result<Report, CliError> {
    let pairs: Vec<(f64, usize)> =
        cfg.jp.iter().flat_map(|&jp| cfg.lengths.iter().map(move |&l| (jp, l))).collect();
    let specs = pairs.iter().map(|&(jp, l)| chain(cfg, l, jp)).collect::<Result<Vec<_>, _>>()?;
    let spectra = specs.par_iter().map(|spec| spectral(cfg, spec)).collect::<Result<Vec<_>, _>>()?;

    let mut warnings = Vec::new();
    let mut alphas = Vec::new();
    for &jp in &cfg.jp {
        let alpha = match cfg.alpha {
            Some(a) => Some(a),
            None => {
                let rows = pairs
                    .iter()
                    .zip(&spectra)
                    .filter(|((p, _), _)| *p == jp)
                    .map(|(&(_, length), s)| GapRow { length, jp, gap: s.gap, e0: s.e0 })
                    .collect();
                match fit_power_law(&GapTable { rows, ..GapTable::default() }) {
                    Ok(fit) if fit.alpha > 0.0 && fit.alpha < 1.0 => Some(fit.alpha),
                    _ => {
                        warnings.push(format!(
                            "jp = {jp}: no usable gap exponent from this sweep; validity not assessed (pass --alpha)"
                        ));
                        None
                    }
                }
            }
        };
        alphas.push(json!({ "jp": jp, "alpha": alpha, "source": if cfg.alpha.is_some() { "flag" } else { "fit" } }));
    }
    let alpha_for = |jp: f64| -> Option<f64> {
        let k = cfg.jp.iter().position(|&p| p == jp).expect("jp from the configured list");
        alphas[k]["alpha"].as_f64()
    };

    let mut csv = Csv::new(&["L", "jp", "T", "g", "jeff", "tstar", "fstar"]);
    let mut rows = Vec::new();
    let mut invalid = 0;
    for ((&(jp, length), spec), s) in pairs.iter().zip(&specs).zip(&spectra) {
        for t in cfg.temperature.values() {
            let model = effective_model_from(spec, s, cfg.gamma.choice(), t, alpha_for(jp))?;
            let (t_star, f_star) = effective_peak(&model, cfg.t_max)?;
            if model.validity.is_some_and(|v| !v.valid) {
                invalid += 1;
            }
            csv.row(&[
                Cell::Int(length),
                Cell::Float(jp),
                Cell::Float(t),
                Cell::Float(model.g.value()),
                Cell::Float(model.j_eff),
                Cell::Float(t_star),
                Cell::Float(f_star),
            ]);
            rows.push(json!({
                "L": length, "jp": jp, "T": t, "g": model.g.value(), "jeff": model.j_eff,
                "gamma": model.gamma, "tstar": t_star, "fstar": f_star, "validity": model.validity,
            }));
        }
    }
    if invalid > 0 {
        warnings.push(format!("{invalid} rows lie outside the effective-model validity window"));
    }
    Ok(Report {
        csv: Some(csv.into_string()),
        results: json!({ "rows": rows }),
        derived: json!({ "alpha": alphas }),
        warnings,
    })
}

fn transfer_full(cfg: &RunConfig) -> Result<Report, CliError> {
    let length = cfg.single_length()?;
    if length > FULL_CHAIN_CAP {
        return Err(CliError::Usage(format!(
            "full mode is limited to L <= {FULL_CHAIN_CAP} (got {length}); use --mode effective for longer chains"
        )));
    }
    if cfg.t_points < 2 {
        return Err(CliError::Usage("full mode needs --t-points >= 2".into()));
    }
    let chain_spec = chain(cfg, length, cfg.single_jp()?)?;
    let temperature = cfg.single_temperature()?;
    let s = spectral(cfg, &chain_spec)?;
    let model = effective_model_from(&chain_spec, &s, cfg.gamma.choice(), temperature, cfg.alpha)?;
    let spec = chain_spec.with_gamma(model.gamma).map_err(|e| CliError::Usage(e.to_string()))?;
    let t_max = cfg.t_max.unwrap_or(2.0 * PI / model.j_eff);
    let times = uniform_times(t_max, cfg.t_points - 1);
    let opts = FullChainOptions { eigen: lanczos(cfg), krylov: KrylovOptions::with_tol(cfg.krylov_tol), sender: SenderState::Up };
    let run = full_chain_transfer_with(&spec, temperature, &times, &opts)?;

    let mut csv = Csv::new(&["t", "theta", "fidelity"]);
    for ((t, theta), f) in times.iter().zip(&run.theta).zip(&run.curve.fidelities) {
        csv.row(&[Cell::Float(*t), Cell::Float(*theta), Cell::Float(*f)]);
    }
    let (pred_t, pred_f) = effective_peak(&model, Some(t_max))?;
    let mut warnings = Vec::new();
    if run.curve.t_star == t_max {
        warnings.push("fidelity peaks at the end of the time grid; increase --t-max".into());
    }
    if let Some(w) = truncation_warning(&s, temperature) {
        warnings.push(w);
    }
    Ok(Report {
        csv: Some(csv.into_string()),
        results: json!({ "times": times, "theta": run.theta, "fidelity": run.curve.fidelities }),
        derived: json!({
            "measured": { "tstar": run.curve.t_star, "fstar": run.curve.f_star },
            "effective": { "tstar": pred_t, "fstar": pred_f, "model": model },
            "delta-fstar": (run.curve.f_star - pred_f).abs(),
            "delta-tstar-relative": (run.curve.t_star - pred_t).abs() / pred_t,
            "gamma": model.gamma,
            "spectral": spectral_json(&s),
            "branches": run.branches,
            "max-norm-drift": run.max_norm_drift(),
        }),
        warnings,
    })
}

pub fn share(cfg: &RunConfig) -> Result<Report, CliError> {
    let spec = chain(cfg, cfg.single_length()?, cfg.single_jp()?)?;
    let temperature = cfg.single_temperature()?;
    let s = spectral(cfg, &spec)?;
    let report = sharing_report(thermal_g(&s, temperature)?)?;
    let mut warnings = Vec::new();
    if cfg.format == Format::Csv {
        warnings.push("share writes JSON only".into());
    }
    Ok(Report {
        csv: None,
        results: json!({
            "g": report.g,
            "fstar": report.f_star,
            "error-probability": report.error_prob,
            "concurrence-out": report.concurrence_out,
            "concurrence-in": report.concurrence_in,
            "enhancement-margin": report.enhancement(),
        }),
        derived: json!({ "T": temperature, "spectral": spectral_json(&s) }),
        warnings,
    })
}
