//! Standard teleportation through the two-probe Werner resource.
//!
//! With an SU(2)-invariant resource the averaged protocol is a depolarizing
//! channel `xi -> theta xi + (1 - theta) I/2` with `theta = -g`, so the
//! fidelity `(1 - g)/2` is the same for every input state.

use nalgebra::{Matrix2, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::{spectral_data, SpectralData};
use crate::error::{Error, Result};
use crate::spin::ChainSpec;
use crate::thermal::{thermal_g, WernerParameter};

const STATE_TOL: f64 = 1e-12;

/// Classical teleportation fidelity bound.
pub const CLASSICAL_FIDELITY: f64 = 2.0 / 3.0;

/// Depolarizing channel with shrinking factor `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepolarizingChannel {
    theta: f64,
}

impl DepolarizingChannel {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta < -1.0 / 3.0 - 1e-9 || theta > 1.0 + 1e-9 {
            return Err(Error::Domain { what: "shrinking factor must lie in [-1/3, 1]", value: theta });
        }
        Ok(DepolarizingChannel { theta: theta.clamp(-1.0 / 3.0, 1.0) })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn is_ideal(&self) -> bool {
        self.theta == 1.0
    }

    /// `p = 3(1 - theta)/4`, the weight of the Pauli errors.
    pub fn error_probability(&self) -> f64 {
        0.75 * (1.0 - self.theta)
    }

    /// Average fidelity `(1 + theta)/2`.
    pub fn fidelity(&self) -> f64 {
        0.5 * (1.0 + self.theta)
    }
}

pub fn shrink_factor(g: WernerParameter) -> DepolarizingChannel {
    DepolarizingChannel { theta: -g.value() }
}

/// Apply the channel to a single-qubit density matrix.
pub fn apply_channel(ch: &DepolarizingChannel, qubit: &Matrix2<Complex64>) -> Result<Matrix2<Complex64>> {
    validate_qubit(qubit)?;
    let mixed = Matrix2::identity() * Complex64::new(0.5 * (1.0 - ch.theta), 0.0);
    Ok(qubit * Complex64::new(ch.theta, 0.0) + mixed)
}

fn validate_qubit(rho: &Matrix2<Complex64>) -> Result<()> {
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
        return Err(Error::Domain { what: "density matrix trace must be 1", value: trace.re });
    }
    let asym = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if asym > STATE_TOL {
        return Err(Error::Domain { what: "density matrix must be Hermitian", value: asym });
    }
    let lowest = SymmetricEigen::new(*rho).eigenvalues.min();
    if lowest < -STATE_TOL {
        return Err(Error::Domain { what: "density matrix must be positive semidefinite", value: lowest });
    }
    Ok(())
}

/// `f = (1 - g)/2`.
pub fn teleport_fidelity(g: WernerParameter) -> f64 {
    0.5 * (1.0 - g.value())
}

/// Temperature above which the thermal two-probe state is separable:
/// `T* = gap / ln[(gzz_t + 2 gxx_t + 1) / (-gzz_g - 1/3)]`.
pub fn threshold_temperature(spectral: &SpectralData) -> Result<f64> {
    let denom = -spectral.gzz_ground - 1.0 / 3.0;
    if !(denom > 0.0) {
        return Err(Error::NoThreshold { gzz: spectral.gzz_ground });
    }
    let ratio = (spectral.gzz_triplet + 2.0 * spectral.gxx_triplet + 1.0) / denom;
    if !(ratio > 1.0) {
        // g(T) never reaches -1/3 inside the truncated model
        return Err(Error::NoThreshold { gzz: spectral.gzz_ground });
    }
    Ok(spectral.gap / ratio.ln())
}

/// Teleportation fidelity on a temperature grid for one chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityCurve {
    pub spec: ChainSpec,
    pub spectral: SpectralData,
    pub temperatures: Vec<f64>,
    pub g_values: Vec<f64>,
    pub fidelities: Vec<f64>,
    /// `None` when the probes are unentangled already at `T = 0`.
    pub t_star: Option<f64>,
}

impl FidelityCurve {
    pub fn is_weakly_decreasing(&self) -> bool {
        self.fidelities.windows(2).all(|w| w[1] <= w[0])
    }

    /// Linear interpolation of where the curve crosses the classical bound.
    pub fn classical_crossing(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self.temperatures.iter().copied().zip(self.fidelities.iter().copied()).collect();
        pts.windows(2).find_map(|w| {
            let ((t0, f0), (t1, f1)) = (w[0], w[1]);
            (f0 >= CLASSICAL_FIDELITY && f1 < CLASSICAL_FIDELITY)
                .then(|| t0 + (f0 - CLASSICAL_FIDELITY) * (t1 - t0) / (f0 - f1))
        })
    }
}

pub fn fidelity_curve(spec: &ChainSpec, temperatures: &[f64], tol: f64) -> Result<FidelityCurve> {
    let spectral = spectral_data(spec, tol)?;
    fidelity_curve_from(spec, spectral, temperatures)
}

/// Same as [`fidelity_curve`] with precomputed spectral inputs.
pub fn fidelity_curve_from(spec: &ChainSpec, spectral: SpectralData, temperatures: &[f64]) -> Result<FidelityCurve> {
    if let Some(&t) = temperatures.iter().find(|&&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::Domain { what: "temperatures must be positive", value: t });
    }
    let g_values = temperatures
        .iter()
        .map(|&t| thermal_g(&spectral, t).map(WernerParameter::value))
        .collect::<Result<Vec<_>>>()?;
    let fidelities = g_values.iter().map(|&g| 0.5 * (1.0 - g)).collect();
    let t_star = match threshold_temperature(&spectral) {
        Ok(t) => Some(t),
        Err(Error::NoThreshold { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(FidelityCurve { spec: *spec, spectral, temperatures: temperatures.to_vec(), g_values, fidelities, t_star })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::threshold_by_bisection;
    use proptest::prelude::*;

    fn pure_state(cos_theta: f64, phi: f64) -> Matrix2<Complex64> {
        let theta = cos_theta.clamp(-1.0, 1.0).acos();
        let a = Complex64::new((theta / 2.0).cos(), 0.0);
        let b = Complex64::from_polar((theta / 2.0).sin(), phi);
        Matrix2::new(a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj())
    }

    fn w(g: f64) -> WernerParameter {
        WernerParameter::new(g).unwrap()
    }

    #[test]
    fn shrink_factor_values() {
        assert_eq!(shrink_factor(w(-1.0)).theta(), 1.0);
        assert_eq!(shrink_factor(w(0.0)).theta(), 0.0);
        assert_eq!(shrink_factor(w(-1.0 / 3.0)).theta(), 1.0 / 3.0);
        assert!(shrink_factor(w(-1.0)).is_ideal());
    }

    #[test]
    fn channel_limits() {
        let up = pure_state(1.0, 0.0);
        let ideal = DepolarizingChannel::new(1.0).unwrap();
        assert_eq!(apply_channel(&ideal, &up).unwrap(), up);
        let dead = DepolarizingChannel::new(0.0).unwrap();
        let out = apply_channel(&dead, &pure_state(0.3, 1.1)).unwrap();
        assert!((out - Matrix2::identity() * Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let half = DepolarizingChannel::new(0.5).unwrap();
        let out = apply_channel(&half, &up).unwrap();
        assert_eq!(out[(0, 0)].re, 0.75);
        assert_eq!(out[(1, 1)].re, 0.25);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(DepolarizingChannel::new(1.5).is_err());
        assert!(DepolarizingChannel::new(-0.5).is_err());
        let ch = DepolarizingChannel::new(0.2).unwrap();
        let bad_trace = Matrix2::identity() * Complex64::new(1.0, 0.0);
        assert!(apply_channel(&ch, &bad_trace).is_err());
        let negative = Matrix2::new(
            Complex64::new(1.5, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-0.5, 0.0),
        );
        assert!(apply_channel(&ch, &negative).is_err());
        let non_hermitian = Matrix2::new(
            Complex64::new(0.5, 0.0),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
        );
        assert!(apply_channel(&ch, &non_hermitian).is_err());
    }

    #[test]
    fn fidelity_values() {
        assert_eq!(teleport_fidelity(w(-1.0)), 1.0);
        assert!((teleport_fidelity(w(-1.0 / 3.0)) - 2.0 / 3.0).abs() < 1e-15);
        assert!((teleport_fidelity(w(1.0 / 3.0)) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn error_probability_range() {
        assert_eq!(DepolarizingChannel::new(1.0).unwrap().error_probability(), 0.0);
        assert_eq!(DepolarizingChannel::new(-1.0 / 3.0).unwrap().error_probability(), 1.0);
    }

    #[test]
    fn two_spin_threshold() {
        let s = SpectralData::two_spin(0.37);
        let t = threshold_temperature(&s).unwrap();
        assert!((t - 0.37 / 3f64.ln()).abs() < 1e-15);
        assert!((thermal_g(&s, t).unwrap().value() + 1.0 / 3.0).abs() < 1e-12);
        assert!((t - threshold_by_bisection(&s).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn no_threshold_when_unentangled() {
        let s = SpectralData { gzz_ground: -0.2, ..SpectralData::two_spin(1.0) };
        assert!(matches!(threshold_temperature(&s), Err(Error::NoThreshold { .. })));
    }

    #[test]
    fn eight_site_threshold_matches_bisection() {
        let spec = ChainSpec::new(8, 1.0, 0.2).unwrap();
        let s = spectral_data(&spec, 1e-10).unwrap();
        let closed = threshold_temperature(&s).unwrap();
        let bisected = threshold_by_bisection(&s).unwrap();
        assert!((closed - bisected).abs() < 1e-10);
        assert!((thermal_g(&s, closed).unwrap().value() + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn curve_starts_at_ground_value_and_crosses_near_threshold() {
        let spec = ChainSpec::new(8, 1.0, 0.2).unwrap();
        let temps: Vec<f64> = (0..400).map(|k| 1e-6 * 10f64.powf(k as f64 * 5.0 / 399.0)).collect();
        let curve = fidelity_curve(&spec, &temps, 1e-10).unwrap();
        assert!((curve.fidelities[0] - 0.5 * (1.0 - curve.spectral.gzz_ground)).abs() < 1e-15);
        assert!(curve.is_weakly_decreasing());
        let crossing = curve.classical_crossing().unwrap();
        let t_star = curve.t_star.unwrap();
        assert!((crossing - t_star).abs() / t_star < 0.03);
    }

    #[test]
    fn curve_rejects_nonpositive_temperatures() {
        let s = SpectralData::two_spin(1.0);
        let spec = ChainSpec::new(4, 1.0, 1.0).unwrap();
        assert!(fidelity_curve_from(&spec, s, &[0.1, 0.0]).is_err());
    }

    proptest! {
        #[test]
        fn fidelity_is_state_independent(c in -1.0f64..=1.0, phi in 0.0f64..6.283, g in -1.0f64..=1.0 / 3.0) {
            let g = w(g);
            let xi = pure_state(c, phi);
            let out = apply_channel(&shrink_factor(g), &xi).unwrap();
            let f = (xi * out).trace().re;
            prop_assert!((f - teleport_fidelity(g)).abs() < 1e-12);
        }

        #[test]
        fn channel_commutes_with_rotations(c in -1.0f64..=1.0, phi in 0.0f64..6.283, a in 0.0f64..3.14, b in 0.0f64..6.283, theta in -0.33f64..1.0) {
            let ch = DepolarizingChannel::new(theta).unwrap();
            let (ca, sa) = ((a / 2.0).cos(), (a / 2.0).sin());
            let u = Matrix2::new(
                Complex64::new(ca, 0.0),
                -Complex64::from_polar(sa, b),
                Complex64::from_polar(sa, -b),
                Complex64::new(ca, 0.0),
            );
            let rho = pure_state(c, phi);
            let lhs = apply_channel(&ch, &(u * rho * u.adjoint())).unwrap();
            let rhs = u * apply_channel(&ch, &rho).unwrap() * u.adjoint();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn better_than_classical_iff_entangled(g in -1.0f64..=1.0 / 3.0) {
            let g = w(g);
            prop_assert_eq!(teleport_fidelity(g) > CLASSICAL_FIDELITY, g.is_entangled());
        }
    }
}
