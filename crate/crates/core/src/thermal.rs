//! Low-temperature two-probe state.
//!
//! Only the singlet ground state and the three triplet members are kept in
//! the Boltzmann sum. The reduced state of A and B is then SU(2) invariant
//! (a Werner state) and fixed by the single number `g = <sz_A sz_B>`.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::eigen::SpectralData;
use crate::error::{Error, Result};

/// Rounding slack tolerated at the ends of the Werner range before clamping.
const RANGE_SLACK: f64 = 1e-9;

/// `g = <sz_A sz_B>` of an SU(2)-invariant two-qubit state, in `[-1, 1/3]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WernerParameter(f64);

impl WernerParameter {
    pub const SINGLET: WernerParameter = WernerParameter(-1.0);
    pub const MIXED: WernerParameter = WernerParameter(0.0);
    pub const TRIPLET_MIX: WernerParameter = WernerParameter(1.0 / 3.0);
    pub const SEPARABLE_EDGE: f64 = -1.0 / 3.0;

    pub fn new(g: f64) -> Result<Self> {
        if !g.is_finite() || g < -1.0 - RANGE_SLACK || g > 1.0 / 3.0 + RANGE_SLACK {
            return Err(Error::Domain { what: "Werner parameter g must lie in [-1, 1/3]", value: g });
        }
        Ok(WernerParameter(g.clamp(-1.0, 1.0 / 3.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_entangled(self) -> bool {
        self.0 < Self::SEPARABLE_EDGE
    }
}

/// Spectral inputs at a fixed temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalWerner {
    pub spectral: SpectralData,
    pub temperature: f64,
}

impl ThermalWerner {
    pub fn g(&self) -> Result<WernerParameter> {
        thermal_g(&self.spectral, self.temperature)
    }
}

/// Boltzmann factor `exp(-gap / T)` of each triplet member relative to the
/// ground state. Underflows to 0 as `T -> 0`, and `T = 0` gives exactly 0.
pub fn triplet_weight(gap: f64, temperature: f64) -> f64 {
    (-gap / temperature).exp()
}

/// Werner parameter of the truncated thermal state at temperature `T`
/// (units of J). `T = 0` returns the ground-state correlator.
pub fn thermal_g(spectral: &SpectralData, temperature: f64) -> Result<WernerParameter> {
    if !(temperature >= 0.0) || temperature.is_infinite() {
        return Err(Error::Domain { what: "temperature must be finite and >= 0", value: temperature });
    }
    if !(spectral.gap > 0.0) {
        return Err(Error::Domain { what: "singlet-triplet gap must be positive", value: spectral.gap });
    }
    let w = triplet_weight(spectral.gap, temperature);
    let triplet = spectral.gzz_triplet + 2.0 * spectral.gxx_triplet;
    WernerParameter::new((spectral.gzz_ground + w * triplet) / (1.0 + 3.0 * w))
}

/// Infinite-temperature limit of the truncated mixture (equal weights).
pub fn high_temperature_g(spectral: &SpectralData) -> f64 {
    (spectral.gzz_ground + spectral.gzz_triplet + 2.0 * spectral.gxx_triplet) / 4.0
}

/// Warning text when `T` is high enough that levels above the triplet,
/// dropped by the truncation, plausibly matter.
pub fn truncation_warning(spectral: &SpectralData, temperature: f64) -> Option<String> {
    (temperature > 0.5 * spectral.gap).then(|| {
        format!(
            "T = {temperature} exceeds half the gap ({}); the four-level thermal truncation may be inaccurate",
            0.5 * spectral.gap
        )
    })
}

/// `rho_AB = I/4 + (g/4) sigma_A . sigma_B` in the basis `{uu, ud, du, dd}`.
pub fn werner_density_matrix(g: WernerParameter) -> Matrix4<f64> {
    let g = g.value();
    // the larger of the two diagonal weights is >= 1/4, so subtracting it
    // from 1/2 is exact and each (d, a) pair sums to exactly 1/2
    let (d, a) = if g >= 0.0 {
        let d = 0.25 * (1.0 + g);
        (d, 0.5 - d)
    } else {
        let a = 0.25 * (1.0 - g);
        (0.5 - a, a)
    };
    let x = 0.5 * g;
    Matrix4::new(
        d, 0.0, 0.0, 0.0, //
        0.0, a, x, 0.0, //
        0.0, x, a, 0.0, //
        0.0, 0.0, 0.0, d,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;
    use proptest::prelude::*;

    fn sorted_eigs(m: Matrix4<f64>) -> Vec<f64> {
        let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    #[test]
    fn zero_temperature_limit() {
        let s = SpectralData { gzz_ground: -0.93, gzz_triplet: 0.4, gxx_triplet: 0.1, ..SpectralData::two_spin(0.02) };
        assert_eq!(thermal_g(&s, 0.0).unwrap().value(), -0.93);
        assert_eq!(thermal_g(&s, 0.02e-3).unwrap().value(), -0.93);
    }

    #[test]
    fn two_spin_separability_edge() {
        let s = SpectralData::two_spin(1.0);
        let g = thermal_g(&s, 1.0 / 3f64.ln()).unwrap();
        assert!((g.value() + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn two_spin_high_temperature_is_maximally_mixed() {
        let s = SpectralData::two_spin(1.0);
        assert_eq!(high_temperature_g(&s), 0.0);
        assert!(thermal_g(&s, 1e12).unwrap().value().abs() < 1e-11);
    }

    #[test]
    fn rejects_negative_temperature_and_bad_gap() {
        let s = SpectralData::two_spin(1.0);
        assert!(matches!(thermal_g(&s, -1.0), Err(Error::Domain { .. })));
        assert!(matches!(thermal_g(&s, f64::NAN), Err(Error::Domain { .. })));
        let flat = SpectralData { gap: 0.0, ..s };
        assert!(matches!(thermal_g(&flat, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn werner_endpoints() {
        let singlet = werner_density_matrix(WernerParameter::SINGLET);
        let expected = Matrix4::new(
            0.0, 0.0, 0.0, 0.0, 0.0, 0.5, -0.5, 0.0, 0.0, -0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0,
        );
        assert_eq!(singlet, expected);
        assert_eq!(werner_density_matrix(WernerParameter::MIXED), Matrix4::identity() * 0.25);
        let e = sorted_eigs(werner_density_matrix(WernerParameter::TRIPLET_MIX));
        assert!(e[0].abs() < 1e-15);
        for v in &e[1..] {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn out_of_range_g_is_a_domain_error() {
        assert!(WernerParameter::new(-1.1).is_err());
        assert!(WernerParameter::new(0.34).is_err());
        assert!(WernerParameter::new(f64::NAN).is_err());
        assert_eq!(WernerParameter::new(-1.0 - 1e-12).unwrap().value(), -1.0);
    }

    #[test]
    fn truncation_warning_threshold() {
        let s = SpectralData::two_spin(0.1);
        assert!(truncation_warning(&s, 0.04).is_none());
        assert!(truncation_warning(&s, 0.06).is_some());
    }

    proptest! {
        #[test]
        fn density_matrix_is_a_state(g in -1.0f64..=1.0 / 3.0) {
            let rho = werner_density_matrix(WernerParameter::new(g).unwrap());
            prop_assert_eq!((rho[(0, 0)] + rho[(1, 1)]) + (rho[(2, 2)] + rho[(3, 3)]), 1.0);
            prop_assert_eq!(rho, rho.transpose());
            prop_assert!(sorted_eigs(rho)[0] >= -1e-14);
        }

        #[test]
        fn g_increases_with_temperature(t1 in 1e-3f64..5.0, t2 in 1e-3f64..5.0, gzz in -1.0f64..-0.5) {
            let s = SpectralData { gzz_ground: gzz, ..SpectralData::two_spin(0.7) };
            let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
            let (g_lo, g_hi) = (thermal_g(&s, lo).unwrap().value(), thermal_g(&s, hi).unwrap().value());
            prop_assert!(g_lo <= g_hi);
            let (a, b) = (gzz.min(high_temperature_g(&s)), gzz.max(high_temperature_g(&s)));
            prop_assert!(g_lo >= a - 1e-15 && g_hi <= b + 1e-15);
        }

        #[test]
        fn singlet_ground_degrades_strictly(t in 0.05f64..5.0, ratio in 1.01f64..3.0) {
            let s = SpectralData::two_spin(0.7);
            prop_assert!(thermal_g(&s, t).unwrap().value() < thermal_g(&s, t * ratio).unwrap().value());
        }
    }
}
