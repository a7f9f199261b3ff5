//! State transfer from a sender spin to probe B.
//!
//! The effective model keeps only the sender and the two probes, which the
//! chain couples with `j_eff` equal to its singlet-triplet gap. Its fidelity
//! has a closed form checked against a brute-force three-spin oracle. The
//! full-chain mode propagates the whole chain instead.

pub mod effective;
pub mod full_chain;
pub mod krylov;
pub mod oracle;

use serde::Serialize;

pub use effective::{
    closed_form_fidelity, commensurate_fidelity, effective_coupling, effective_model_from, max_fidelity,
    numeric_peak, optimal_time, EffectiveModel, Frequencies, GammaChoice, Validity, PEAK_SCAN_POINTS,
    SERIES_WINDOW,
};
pub use full_chain::{
    full_chain_transfer, full_chain_transfer_with, BranchReport, FullChainOptions, FullChainRun, SenderState,
    FULL_CHAIN_CAP,
};
pub use krylov::{propagate, KrylovOptions, Propagation};
pub use oracle::{three_site_hamiltonian, three_site_oracle};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveMode {
    ClosedForm,
    FullChain,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferCurve {
    pub times: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub t_star: f64,
    pub f_star: f64,
    pub mode: CurveMode,
}

/// Closed-form fidelity on `times`. The peak comes from the analytic optimum
/// at the commensurate point and from [`numeric_peak`] up to the last grid
/// time otherwise.
pub fn closed_form_curve(model: &EffectiveModel, times: &[f64]) -> Result<TransferCurve> {
    let fidelities: Vec<f64> = times.iter().map(|&t| closed_form_fidelity(model, t)).collect();
    let (t_star, f_star) = if model.is_commensurate() {
        (optimal_time(model)?, max_fidelity(model.g))
    } else {
        numeric_peak(model, times.last().copied().unwrap_or(0.0))?
    };
    Ok(TransferCurve { times: times.to_vec(), fidelities, t_star, f_star, mode: CurveMode::ClosedForm })
}

/// First grid point holding the largest value.
pub(crate) fn peak_of(times: &[f64], values: &[f64]) -> (f64, f64) {
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = k;
        }
    }
    (times[best], values[best])
}

/// `n + 1` evenly spaced times on `[0, t_max]`.
pub fn uniform_times(t_max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| t_max * k as f64 / n as f64).collect()
}
