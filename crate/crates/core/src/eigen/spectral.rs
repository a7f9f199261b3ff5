//! Singlet ground state, lowest triplet, and the probe correlators that
//! feed the low-temperature two-probe state.

use serde::{Deserialize, Serialize};

use crate::eigen::lanczos::{lowest_eigenpairs_with, LanczosOptions};
use crate::error::{Error, Result};
use crate::spin::{build_chain_hamiltonian, enumerate_sector, ChainSpec, Sector};

/// Energies (units of J) and Pauli correlators between probes A and B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub e0: f64,
    pub e_triplet: f64,
    pub gap: f64,
    /// `<G| sz_A sz_B |G>` in the singlet ground state.
    pub gzz_ground: f64,
    /// `<1| sz_A sz_B |1>` in the m = 1 triplet member.
    pub gzz_triplet: f64,
    /// `<1| sx_A sx_B |1>` in the m = 1 triplet member.
    pub gxx_triplet: f64,
}

impl SpectralData {
    /// Reference values of an isolated singlet/triplet pair with splitting `gap`.
    pub fn two_spin(gap: f64) -> Self {
        SpectralData {
            e0: -0.75 * gap,
            e_triplet: 0.25 * gap,
            gap,
            gzz_ground: -1.0,
            gzz_triplet: 1.0,
            gxx_triplet: 0.0,
        }
    }
}

/// Eigenvectors behind a [`SpectralData`]: the ground state and the m = 0
/// triplet member live in the m = 0 sector, the m = 1 member in its own.
#[derive(Debug, Clone)]
pub struct ChainStates {
    pub spec: ChainSpec,
    pub data: SpectralData,
    pub zero_sector: Sector,
    pub up_sector: Sector,
    pub ground: Vec<f64>,
    pub triplet_zero: Vec<f64>,
    pub triplet_up: Vec<f64>,
    pub e_second_zero: f64,
}

pub fn spectral_data(spec: &ChainSpec, tol: f64) -> Result<SpectralData> {
    Ok(spectral_states(spec, &LanczosOptions::with_tol(tol))?.data)
}

pub fn spectral_states(spec: &ChainSpec, opts: &LanczosOptions) -> Result<ChainStates> {
    if spec.gamma.is_some() {
        return Err(Error::Config("spectral data is computed for the chain without a sender".into()));
    }
    let zero_sector = enumerate_sector(spec.length, 0)?;
    let up_sector = enumerate_sector(spec.length, 2)?;
    let (zero, up) = rayon::join(
        || -> Result<_> {
            let op = build_chain_hamiltonian(spec, &zero_sector)?;
            lowest_eigenpairs_with(&op, 2, opts)
        },
        || -> Result<_> {
            let op = build_chain_hamiltonian(spec, &up_sector)?;
            lowest_eigenpairs_with(&op, 1, opts)
        },
    );
    let mut zero = zero?;
    let mut up = up?;
    let window = 10.0 * opts.tol;

    let (e0, e1) = (zero[0].energy, zero[1].energy);
    if (e1 - e0).abs() <= window {
        return Err(Error::DegenerateGround { e0, e1 });
    }
    let e_triplet = up[0].energy;
    if (e1 - e_triplet).abs() > window {
        return Err(Error::Ordering(format!(
            "second m = 0 level {e1} is not degenerate with the lowest m = 1 level {e_triplet}; \
             the lowest excitation is not the expected triplet"
        )));
    }
    let gap = e_triplet - e0;
    if !(gap > 0.0) {
        return Err(Error::Ordering(format!("non-positive singlet-triplet gap {gap}")));
    }

    let triplet_up = up.remove(0).vector;
    let triplet_zero = zero.remove(1).vector;
    let ground = zero.remove(0).vector;
    let (a, b) = spec.probe_bits(0);
    let data = SpectralData {
        e0,
        e_triplet,
        gap,
        gzz_ground: zz_correlator(&ground, &zero_sector, a, b),
        gzz_triplet: zz_correlator(&triplet_up, &up_sector, a, b),
        gxx_triplet: xx_correlator(&triplet_up, &up_sector, a, b),
    };
    Ok(ChainStates { spec: *spec, data, zero_sector, up_sector, ground, triplet_zero, triplet_up, e_second_zero: e1 })
}

/// `<v| sz_a sz_b |v>` for a real sector vector.
pub fn zz_correlator(v: &[f64], sector: &Sector, a: usize, b: usize) -> f64 {
    sector
        .basis()
        .iter()
        .zip(v)
        .map(|(&c, &amp)| if ((c >> a) ^ (c >> b)) & 1 == 0 { amp * amp } else { -amp * amp })
        .sum()
}

/// `<v| sx_a sx_b |v>` restricted to the magnetization-conserving part
/// `s+_a s-_b + s-_a s+_b`; the remaining terms leave the sector.
pub fn xx_correlator(v: &[f64], sector: &Sector, a: usize, b: usize) -> f64 {
    let mask = (1u64 << a) | (1u64 << b);
    sector
        .basis()
        .iter()
        .zip(v)
        .filter(|(&c, _)| ((c >> a) ^ (c >> b)) & 1 == 1)
        .map(|(&c, &amp)| amp * v[sector.index_of(c ^ mask).expect("pair flip stays in sector")])
        .sum()
}
