use nalgebra::Vector2;
use num_complex::Complex64;
use serde::Serialize;

use crate::eigen::dense::symmetric_eigen_sorted;
use crate::eigen::{dense_spectrum, lowest_eigenpairs_with, spectral_data, LanczosOptions, SpectralData};
use crate::entangle::{sharing_concurrence, shared_state};
use crate::error::Result;
use crate::oracle::{threshold_by_bisection, wootters_concurrence};
use crate::spin::{build_chain_hamiltonian, build_transfer_hamiltonian, enumerate_sector, ChainSpec};
use crate::teleport::threshold_temperature;
use crate::thermal::WernerParameter;
use crate::transfer::{closed_form_fidelity, max_fidelity, propagate, three_site_oracle, EffectiveModel, KrylovOptions};

/// Replaceable pieces of the validation run; the default uses the library.
#[derive(Clone, Copy)]
pub struct ValidationHooks {
    pub closed_form: fn(&EffectiveModel, f64) -> f64,
    pub options: LanczosOptions,
}

impl Default for ValidationHooks {
    fn default() -> Self {
        ValidationHooks { closed_form: closed_form_fidelity, options: LanczosOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_names(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn table(&self) -> String {
        let mut out = format!("{:<28} {:<6} {:>12} {:>12}\n", "check", "status", "max-error", "tolerance");
        for c in &self.checks {
            out.push_str(&format!(
                "{:<28} {:<6} {:>12.3e} {:>12.1e}\n",
                c.name,
                if c.passed { "ok" } else { "FAIL" },
                c.max_error,
                c.tolerance
            ));
        }
        out
    }
}

fn result(name: &'static str, err: Result<f64>, tolerance: f64) -> CheckResult {
    let max_error = err.unwrap_or(f64::INFINITY);
    CheckResult { name, passed: max_error <= tolerance, max_error, tolerance }
}

pub fn run_validation(hooks: &ValidationHooks) -> ValidationReport {
    ValidationReport {
        checks: vec![
            result("dense-vs-lanczos", dense_vs_lanczos(&hooks.options), 1e-9),
            result("closed-form-vs-three-site", closed_form_vs_oracle(hooks.closed_form), 1e-10),
            result("threshold-bisection", threshold_vs_bisection(&hooks.options), 1e-10),
            result("krylov-vs-dense", krylov_vs_dense(), 1e-8),
            result("sharing-vs-wootters", sharing_vs_wootters(), 1e-9),
        ],
    }
}

fn dense_vs_lanczos(opts: &LanczosOptions) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for length in [4, 6, 8, 10] {
        for jp in [0.1, 0.5, 1.0] {
            let spec = ChainSpec::new(length, 1.0, jp)?;
            for up in 0..=length {
                let sector = enumerate_sector(length, 2 * up as i64 - length as i64)?;
                let op = build_chain_hamiltonian(&spec, &sector)?;
                let pairs = lowest_eigenpairs_with(&op, sector.dim().min(2), opts)?;
                let exact = dense_spectrum(&op)?;
                for (p, e) in pairs.iter().zip(&exact) {
                    worst = worst.max((p.energy - e).abs());
                }
            }
        }
    }
    Ok(worst)
}

fn closed_form_vs_oracle(closed_form: fn(&EffectiveModel, f64) -> f64) -> Result<f64> {
    let j_eff = 0.37;
    let xi = Vector2::new(Complex64::new(0.6, 0.1), Complex64::new(-0.3, 0.7));
    let mut worst: f64 = 0.0;
    for gamma in [j_eff, 0.55 * j_eff] {
        for g in [-1.0, -0.5, 0.0, 1.0 / 3.0] {
            let model = EffectiveModel::new(j_eff, gamma, WernerParameter::new(g)?)?;
            for k in 0..1000 {
                let t = 4.0 * std::f64::consts::PI / j_eff * k as f64 / 999.0;
                worst = worst.max((closed_form(&model, t) - three_site_oracle(&model, t, xi)).abs());
            }
        }
    }
    Ok(worst)
}

fn threshold_vs_bisection(opts: &LanczosOptions) -> Result<f64> {
    let two = SpectralData::two_spin(1.0);
    let mut worst = (threshold_temperature(&two)? - 1.0 / 3f64.ln()).abs();
    let s = spectral_data(&ChainSpec::new(8, 1.0, 0.2)?, opts.tol)?;
    let bisected = threshold_by_bisection(&s).unwrap_or(f64::NAN);
    worst = worst.max((threshold_temperature(&s)? - bisected).abs());
    Ok(if worst.is_nan() { f64::INFINITY } else { worst })
}

fn krylov_vs_dense() -> Result<f64> {
    let spec = ChainSpec::new(6, 1.0, 0.3)?.with_gamma(0.4)?;
    let sector = enumerate_sector(7, 1)?;
    let op = build_transfer_hamiltonian(&spec, &sector)?;
    let start = sector.index_of(0b010_1011).expect("configuration in sector");
    let mut psi = vec![Complex64::new(0.0, 0.0); sector.dim()];
    psi[start] = Complex64::new(1.0, 0.0);
    let times: Vec<f64> = (0..=20).map(|k| 3.0 * k as f64).collect();
    let run = propagate(&op, psi, &times, &KrylovOptions::with_tol(1e-12), |s| s[start].norm_sqr())?;
    let (vals, vecs) = symmetric_eigen_sorted(op.to_dense());
    let mut worst: f64 = 0.0;
    for (&t, &got) in times.iter().zip(&run.values) {
        let amp: Complex64 = (0..vals.len())
            .map(|j| Complex64::from_polar(vecs[(start, j)] * vecs[(start, j)], -vals[j] * t))
            .sum();
        worst = worst.max((amp.norm_sqr() - got).abs());
    }
    Ok(worst)
}

fn sharing_vs_wootters() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..=40 {
        let g = WernerParameter::new((-1.0 + k as f64 / 30.0).min(1.0 / 3.0))?;
        let f = max_fidelity(g);
        let closed = sharing_concurrence(f)?;
        worst = worst.max((wootters_concurrence(&shared_state(2.0 * f - 1.0)) - closed).abs());
    }
    Ok(worst)
}
