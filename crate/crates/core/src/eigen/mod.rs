//! Lowest eigenpairs per sector and the spectral inputs of the thermal state.

pub mod dense;
pub mod lanczos;
pub mod spectral;

pub use dense::{dense_spectrum, DENSE_CAP};
pub use lanczos::{lowest_eigenpairs, lowest_eigenpairs_with, EigenPair, LanczosOptions, DEFAULT_SEED, DEFAULT_TOL};
pub use spectral::{spectral_data, spectral_states, xx_correlator, zz_correlator, ChainStates, SpectralData};
