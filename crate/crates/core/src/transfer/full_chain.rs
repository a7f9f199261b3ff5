//! Transfer through the whole chain: the sender is polarized, the chain is in
//! its truncated thermal mixture, and each pure branch is propagated under
//! the full Hamiltonian.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::eigen::{spectral_states, LanczosOptions, SpectralData};
use crate::error::{Error, Result};
use crate::spin::{build_transfer_hamiltonian, enumerate_sector, spin_flip, ChainSpec, Sector};
use crate::thermal::triplet_weight;
use crate::transfer::krylov::{propagate, KrylovOptions};
use crate::transfer::{peak_of, CurveMode, TransferCurve};

/// Longest chain the full propagation accepts.
pub const FULL_CHAIN_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SenderState {
    Up,
    Down,
}

impl SenderState {
    fn sign(self) -> f64 {
        match self {
            SenderState::Up => 1.0,
            SenderState::Down => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullChainOptions {
    pub eigen: LanczosOptions,
    pub krylov: KrylovOptions,
    pub sender: SenderState,
}

impl FullChainOptions {
    pub fn with_tolerances(eigen_tol: f64, krylov_tol: f64) -> Self {
        FullChainOptions {
            eigen: LanczosOptions::with_tol(eigen_tol),
            krylov: KrylovOptions::with_tol(krylov_tol),
            sender: SenderState::Up,
        }
    }
}

/// One incoherent component of the initial chain state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchReport {
    pub label: &'static str,
    pub weight: f64,
    pub steps: usize,
    pub error_bound: f64,
    pub max_norm_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullChainRun {
    pub curve: TransferCurve,
    /// `<sigma^z_B(t)>` along the sender's polarization.
    pub theta: Vec<f64>,
    pub spectral: SpectralData,
    pub gamma: f64,
    pub branches: Vec<BranchReport>,
}

impl FullChainRun {
    pub fn max_norm_drift(&self) -> f64 {
        self.branches.iter().map(|b| b.max_norm_drift).fold(0.0, f64::max)
    }
}

/// Full-chain transfer curve at temperature `T` with the sender in `|up>`.
pub fn full_chain_transfer(spec: &ChainSpec, temperature: f64, times: &[f64], krylov_tol: f64) -> Result<FullChainRun> {
    full_chain_transfer_with(spec, temperature, times, &FullChainOptions::with_tolerances(1e-10, krylov_tol))
}

pub fn full_chain_transfer_with(
    spec: &ChainSpec,
    temperature: f64,
    times: &[f64],
    opts: &FullChainOptions,
) -> Result<FullChainRun> {
    let gamma = spec
        .gamma
        .ok_or_else(|| Error::Config("full-chain transfer needs a sender coupling gamma".into()))?;
    if spec.length > FULL_CHAIN_CAP {
        return Err(Error::Unsupported(format!(
            "full-chain propagation is limited to L <= {FULL_CHAIN_CAP} (got {}); use the effective model",
            spec.length
        )));
    }
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::Domain { what: "temperature must be finite and >= 0", value: temperature });
    }
    if times.is_empty() {
        return Err(Error::Config("time grid is empty".into()));
    }
    let states = spectral_states(&spec.without_gamma(), &opts.eigen)?;
    let w = if temperature == 0.0 { 0.0 } else { triplet_weight(states.data.gap, temperature) };
    let z = 1.0 + 3.0 * w;

    let mut branches: Vec<(&'static str, f64, &Sector, Vec<f64>)> =
        vec![("ground", 1.0 / z, &states.zero_sector, states.ground.clone())];
    let down_sector;
    if w > 0.0 {
        down_sector = enumerate_sector(spec.length, -2)?;
        let triplet_down = spin_flip(&states.triplet_up, &states.up_sector, &down_sector)?;
        branches.push(("triplet-0", w / z, &states.zero_sector, states.triplet_zero.clone()));
        branches.push(("triplet+1", w / z, &states.up_sector, states.triplet_up.clone()));
        branches.push(("triplet-1", w / z, &down_sector, triplet_down));
    }

    let sign = opts.sender.sign();
    let receiver_bit = spec.probe_bits(1).1;
    let evolved: Vec<(BranchReport, Vec<f64>)> = branches
        .par_iter()
        .map(|(label, weight, sector, vector)| -> Result<_> {
            let (full, psi) = attach_sender(sector, vector, opts.sender)?;
            let op = build_transfer_hamiltonian(spec, &full)?;
            let basis = full.basis();
            let run = propagate(&op, psi, times, &opts.krylov, |state| {
                basis
                    .iter()
                    .zip(state)
                    .map(|(&c, amp)| if (c >> receiver_bit) & 1 == 1 { amp.norm_sqr() } else { -amp.norm_sqr() })
                    .sum()
            })?;
            let report = BranchReport {
                label,
                weight: *weight,
                steps: run.steps,
                error_bound: run.error_bound,
                max_norm_drift: run.norm_drift.iter().copied().fold(0.0, f64::max),
            };
            Ok((report, run.values))
        })
        .collect::<Result<_>>()?;

    let mut theta = vec![0.0; times.len()];
    for (report, values) in &evolved {
        for (acc, v) in theta.iter_mut().zip(values) {
            *acc += report.weight * sign * v;
        }
    }
    let fidelities: Vec<f64> = theta.iter().map(|t| (0.5 * (1.0 + t)).clamp(0.0, 1.0)).collect();
    let (t_star, f_star) = peak_of(times, &fidelities);
    Ok(FullChainRun {
        curve: TransferCurve { times: times.to_vec(), fidelities, t_star, f_star, mode: CurveMode::FullChain },
        theta,
        spectral: states.data,
        gamma,
        branches: evolved.into_iter().map(|(r, _)| r).collect(),
    })
}

/// Product of a chain vector with a polarized sender on bit 0.
fn attach_sender(chain: &Sector, vector: &[f64], sender: SenderState) -> Result<(Sector, Vec<Complex64>)> {
    let (bit, shift) = match sender {
        SenderState::Up => (1u64, 1),
        SenderState::Down => (0u64, -1),
    };
    let full = enumerate_sector(chain.n_sites() + 1, chain.twice_sz() + shift)?;
    let mut psi = vec![Complex64::new(0.0, 0.0); full.dim()];
    for (&c, &amp) in chain.basis().iter().zip(vector) {
        let idx = full.index_of((c << 1) | bit).expect("sender product lies in the shifted sector");
        psi[idx] = Complex64::new(amp, 0.0);
    }
    Ok((full, psi))
}
