//! Effective three-spin transfer model: sender S coupled to A with `gamma`,
//! A coupled to B with `j_eff`, probes starting in a Werner state.

use serde::Serialize;

use crate::eigen::{spectral_data, SpectralData};
use crate::error::{Error, Result};
use crate::scaling::validity_window;
use crate::spin::ChainSpec;
use crate::thermal::{thermal_g, WernerParameter};

/// Half-width around `g = -1` where the series forms replace the closed forms.
pub const SERIES_WINDOW: f64 = 1e-6;

/// Relative tolerance for treating `gamma` as equal to `j_eff`.
const COMMENSURATE_TOL: f64 = 1e-12;

/// Oscillation frequencies of the three-spin fidelity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Frequencies {
    pub omega: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
}

impl Frequencies {
    pub fn new(j_eff: f64, gamma: f64) -> Self {
        let omega = (j_eff * j_eff - j_eff * gamma + gamma * gamma).sqrt();
        Frequencies { omega, omega_plus: omega + (j_eff + gamma), omega_minus: omega - (j_eff + gamma) }
    }
}

/// Inputs that produced a validity flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Validity {
    pub valid: bool,
    pub jp: f64,
    pub j: f64,
    pub alpha: f64,
    pub length: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveModel {
    pub j_eff: f64,
    pub gamma: f64,
    pub g: WernerParameter,
    pub validity: Option<Validity>,
}

impl EffectiveModel {
    pub fn new(j_eff: f64, gamma: f64, g: WernerParameter) -> Result<Self> {
        if !(j_eff > 0.0) || !j_eff.is_finite() {
            return Err(Error::Domain { what: "effective coupling must be positive", value: j_eff });
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::Domain { what: "sender coupling must be >= 0", value: gamma });
        }
        Ok(EffectiveModel { j_eff, gamma, g, validity: None })
    }

    /// `gamma = j_eff`, where all three frequencies are commensurate.
    pub fn commensurate(j_eff: f64, g: WernerParameter) -> Result<Self> {
        Self::new(j_eff, j_eff, g)
    }

    pub fn is_commensurate(&self) -> bool {
        (self.gamma - self.j_eff).abs() <= COMMENSURATE_TOL * self.j_eff
    }

    pub fn frequencies(&self) -> Frequencies {
        Frequencies::new(self.j_eff, self.gamma)
    }
}

/// How the sender coupling is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaChoice {
    /// `gamma = j_eff`.
    Auto,
    Value(f64),
}

impl GammaChoice {
    pub fn resolve(self, j_eff: f64) -> f64 {
        match self {
            GammaChoice::Auto => j_eff,
            GammaChoice::Value(v) => v,
        }
    }
}

/// `j_eff` from the singlet-triplet gap of the chain, `g` from the thermal
/// state at `temperature`, and the validity flag `(jp/J)^2 < L^(alpha-1)`
/// when an exponent is supplied.
pub fn effective_coupling(
    spec: &ChainSpec,
    gamma: GammaChoice,
    temperature: f64,
    alpha: Option<f64>,
    tol: f64,
) -> Result<(EffectiveModel, SpectralData)> {
    let chain = spec.without_gamma();
    let spectral = spectral_data(&chain, tol)?;
    let model = effective_model_from(&chain, &spectral, gamma, temperature, alpha)?;
    Ok((model, spectral))
}

pub fn effective_model_from(
    spec: &ChainSpec,
    spectral: &SpectralData,
    gamma: GammaChoice,
    temperature: f64,
    alpha: Option<f64>,
) -> Result<EffectiveModel> {
    let g = thermal_g(spectral, temperature)?;
    let mut model = EffectiveModel::new(spectral.gap, gamma.resolve(spectral.gap), g)?;
    model.validity = alpha.map(|alpha| Validity {
        valid: validity_window(spec.jp, spec.j, alpha, spec.length),
        jp: spec.jp,
        j: spec.j,
        alpha,
        length: spec.length,
    });
    Ok(model)
}

/// Probability that B ends in the sender's initial state at time `t`.
pub fn closed_form_fidelity(model: &EffectiveModel, t: f64) -> f64 {
    let (j, c, g) = (model.j_eff, model.gamma, model.g.value());
    let Frequencies { omega: w, omega_plus: wp, omega_minus: wm } = model.frequencies();
    let constant = (22.0 + 4.0 * g) * (j * j + c * c) - c * j * (19.0 + 10.0 * g);
    let beats = 2.0 * (1.0 + g) * w * (wm * (t * wp / 2.0).cos() + wp * (t * wm / 2.0).cos());
    let slow = 3.0 * c * j * (2.0 * g - 1.0) * (w * t).cos();
    (constant - beats + slow) / (36.0 * w * w)
}

/// The commensurate (`gamma = j_eff`) form of [`closed_form_fidelity`].
pub fn commensurate_fidelity(j_eff: f64, g: WernerParameter, t: f64) -> f64 {
    let g = g.value();
    let x = j_eff * t;
    (25.0 - 2.0 * g - 6.0 * (1.0 + g) * (x / 2.0).cos()
        + (6.0 * g - 3.0) * x.cos()
        + 2.0 * (1.0 + g) * (1.5 * x).cos())
        / 36.0
}

/// Time of the first fidelity maximum at the commensurate point.
pub fn optimal_time(model: &EffectiveModel) -> Result<f64> {
    if !model.is_commensurate() {
        return Err(Error::Unsupported(format!(
            "closed-form optimal time needs gamma = j_eff (got gamma = {}, j_eff = {}); use numeric_peak",
            model.gamma, model.j_eff
        )));
    }
    let g = model.g.value();
    let h = g + 1.0;
    if h <= SERIES_WINDOW {
        return Ok((std::f64::consts::PI + 2.0 / 3.0 * h) / model.j_eff);
    }
    // (1 - 2g - sqrt(12g^2 + 12g + 9)) / (4h) with the cancellation at h -> 0 removed
    let arg = -2.0 * h / (3.0 - 2.0 * h + (9.0 - 12.0 * h + 12.0 * h * h).sqrt());
    Ok(2.0 / model.j_eff * arg.clamp(-1.0, 1.0).acos())
}

/// Peak transfer fidelity at the commensurate point.
pub fn max_fidelity(g: WernerParameter) -> f64 {
    let g = g.value();
    let h = g + 1.0;
    if h <= SERIES_WINDOW {
        return 1.0 - 2.0 / 9.0 * h + h * h / 18.0;
    }
    if h <= RATIONALIZED_WINDOW {
        // numerator and denominator multiplied by the conjugate, the h^2 divided out
        let q = 4.0 * h * h - 4.0 * h + 3.0;
        let num = (((4.0 * h - 12.0) * h + 9.0) * h - 40.0) * h + 18.0;
        return num / (3f64.sqrt() * q * q.sqrt() + 9.0 - 18.0 * h - 24.0 * h * h);
    }
    let q = 4.0 * g * g + 4.0 * g + 3.0;
    (3f64.sqrt() * q * q.sqrt() + 24.0 * g * g + 66.0 * g + 33.0) / (48.0 * h * h)
}

/// Below this `g + 1` the direct peak-fidelity formula loses digits to cancellation.
const RATIONALIZED_WINDOW: f64 = 0.25;

/// Time derivative of [`closed_form_fidelity`].
pub fn closed_form_derivative(model: &EffectiveModel, t: f64) -> f64 {
    let (j, c, g) = (model.j_eff, model.gamma, model.g.value());
    let Frequencies { omega: w, omega_plus: wp, omega_minus: wm } = model.frequencies();
    let beats = (1.0 + g) * w * wm * wp * ((t * wp / 2.0).sin() + (t * wm / 2.0).sin());
    let slow = -3.0 * c * j * (2.0 * g - 1.0) * w * (w * t).sin();
    (beats + slow) / (36.0 * w * w)
}

/// Grid points used by [`numeric_peak`] before refinement.
pub const PEAK_SCAN_POINTS: usize = 20_000;

/// First local maximum of the closed-form fidelity on `(0, t_max)`, located
/// on a grid and refined to `1e-10` in `t` by bisection on the derivative.
pub fn numeric_peak(model: &EffectiveModel, t_max: f64) -> Result<(f64, f64)> {
    let f = |t| closed_form_fidelity(model, t);
    let (a, b) = bracket_first_peak(f, t_max)?;
    let df = |t| closed_form_derivative(model, t);
    let t = if df(a) > 0.0 && df(b) < 0.0 { bisect_sign_change(df, a, b, 1e-10) } else { golden_max(&f, a, b, 1e-10) };
    Ok((t, f(t)))
}

/// Grid cell pair `[t_{k-1}, t_{k+1}]` around the first interior grid maximum.
pub(crate) fn bracket_first_peak(f: impl Fn(f64) -> f64, t_max: f64) -> Result<(f64, f64)> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::Domain { what: "t_max must be positive", value: t_max });
    }
    let n = PEAK_SCAN_POINTS;
    let dt = t_max / n as f64;
    let values: Vec<f64> = (0..=n).map(|k| f(k as f64 * dt)).collect();
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi - lo <= 1e-12 {
        return Err(Error::FlatCurve { t_max });
    }
    let k = (1..n)
        .find(|&k| values[k] > values[k - 1] && values[k] >= values[k + 1])
        .ok_or(Error::FlatCurve { t_max })?;
    Ok(((k - 1) as f64 * dt, (k + 1) as f64 * dt))
}

fn bisect_sign_change(df: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if df(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn w(g: f64) -> WernerParameter {
        WernerParameter::new(g).unwrap()
    }

    #[test]
    fn perfect_transfer_from_a_singlet() {
        let m = EffectiveModel::commensurate(0.7, WernerParameter::SINGLET).unwrap();
        assert!((closed_form_fidelity(&m, PI / 0.7) - 1.0).abs() < 1e-12);
        assert!((optimal_time(&m).unwrap() - PI / 0.7).abs() < 1e-12);
        assert_eq!(max_fidelity(WernerParameter::SINGLET), 1.0);
    }

    #[test]
    fn starts_at_one_half() {
        for g in [-1.0, -0.5, 0.0, 1.0 / 3.0] {
            let m = EffectiveModel::commensurate(1.3, w(g)).unwrap();
            assert!((closed_form_fidelity(&m, 0.0) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn quarter_period_value() {
        let m = EffectiveModel::commensurate(1.0, WernerParameter::SINGLET).unwrap();
        assert!((closed_form_fidelity(&m, PI / 2.0) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn general_form_reduces_to_commensurate_form() {
        for g in [-1.0, -0.6, 0.0, 0.2, 1.0 / 3.0] {
            let m = EffectiveModel::commensurate(0.9, w(g)).unwrap();
            for k in 0..200 {
                let t = k as f64 * 0.1;
                assert!((closed_form_fidelity(&m, t) - commensurate_fidelity(0.9, w(g), t)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn mixed_probes_give_seven_eighths() {
        assert_eq!(max_fidelity(WernerParameter::MIXED), 7.0 / 8.0);
    }

    #[test]
    fn series_and_closed_form_agree_at_the_switch() {
        let h = SERIES_WINDOW * 1.0001;
        let g = w(-1.0 + h);
        let closed = max_fidelity(g);
        let series = 1.0 - 2.0 / 9.0 * h + h * h / 18.0;
        assert!((closed - series).abs() < 1e-15);
        let m = EffectiveModel::commensurate(1.0, g).unwrap();
        let t_closed = optimal_time(&m).unwrap();
        assert!((t_closed - (PI + 2.0 / 3.0 * h)).abs() < 1e-6);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let m = EffectiveModel::new(0.9, 0.4, w(-0.3)).unwrap();
        let h = 1e-6;
        for k in 0..50 {
            let t = 0.37 * k as f64;
            let fd = (closed_form_fidelity(&m, t + h) - closed_form_fidelity(&m, t - h)) / (2.0 * h);
            assert!((closed_form_derivative(&m, t) - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn peak_fidelity_forms_agree() {
        let direct = |g: f64| {
            let q = 4.0 * g * g + 4.0 * g + 3.0;
            (3f64.sqrt() * q * q.sqrt() + 24.0 * g * g + 66.0 * g + 33.0) / (48.0 * (g + 1.0).powi(2))
        };
        for h in [0.05, 0.1, 0.2, 0.25, 0.2500001, 0.3] {
            assert!((max_fidelity(w(-1.0 + h)) - direct(-1.0 + h)).abs() < 1e-12, "h = {h}");
        }
        // the peak value is reached at the peak time
        for h in [1e-5, 1e-3, 0.1, 0.7] {
            let m = EffectiveModel::commensurate(1.0, w(-1.0 + h)).unwrap();
            let f = closed_form_fidelity(&m, optimal_time(&m).unwrap());
            assert!((f - max_fidelity(w(-1.0 + h))).abs() < 1e-13, "h = {h}");
        }
    }

    #[test]
    fn optimal_time_is_a_local_maximum() {
        for g in [-1.0, -0.5, 0.0, 1.0 / 3.0] {
            let m = EffectiveModel::commensurate(0.5, w(g)).unwrap();
            let t = optimal_time(&m).unwrap();
            let eps = 1e-4 / 0.5;
            let f = closed_form_fidelity(&m, t);
            assert!(closed_form_fidelity(&m, t - eps) <= f);
            assert!(closed_form_fidelity(&m, t + eps) <= f);
            assert!((f - max_fidelity(w(g))).abs() < 1e-12);
        }
    }

    #[test]
    fn optimal_time_needs_commensurate_coupling() {
        let m = EffectiveModel::new(1.0, 0.5, WernerParameter::SINGLET).unwrap();
        assert!(matches!(optimal_time(&m), Err(Error::Unsupported(_))));
    }

    #[test]
    fn numeric_peak_matches_closed_forms() {
        let m = EffectiveModel::commensurate(1.0, WernerParameter::SINGLET).unwrap();
        let (t, f) = numeric_peak(&m, 2.0 * PI).unwrap();
        assert!((t - PI).abs() < 1e-8);
        assert!((f - 1.0).abs() < 1e-8);
        let m = EffectiveModel::commensurate(1.0, WernerParameter::MIXED).unwrap();
        assert!((numeric_peak(&m, 2.0 * PI).unwrap().1 - 0.875).abs() < 1e-8);
    }

    #[test]
    fn incommensurate_sender_cannot_revive_fully() {
        let m = EffectiveModel::new(1.0, 0.5, WernerParameter::SINGLET).unwrap();
        let (_, f) = numeric_peak(&m, 4.0 * PI).unwrap();
        assert!(f < 1.0 - 1e-3);
    }

    #[test]
    fn decoupled_sender_is_flat() {
        let m = EffectiveModel::new(1.0, 0.0, WernerParameter::SINGLET).unwrap();
        assert!(matches!(numeric_peak(&m, 10.0), Err(Error::FlatCurve { .. })));
    }

    #[test]
    fn worst_case_shift_is_near_reported_value() {
        let m = EffectiveModel::commensurate(1.0, WernerParameter::TRIPLET_MIX).unwrap();
        let shift = optimal_time(&m).unwrap() - PI;
        let (t_num, _) = numeric_peak(&m, 2.0 * PI).unwrap();
        assert!((t_num - PI - shift).abs() < 1e-8);
        assert!((shift - 1.448).abs() / 1.448 < 0.1);
    }

    #[test]
    fn peak_fidelity_shape() {
        let grid: Vec<f64> = (0..=100).map(|k| -1.0 + k as f64 * (4.0 / 3.0) / 100.0).collect();
        let f: Vec<f64> = grid.iter().map(|&g| max_fidelity(w(g))).collect();
        for (g, v) in grid.iter().zip(&f) {
            assert!(*v >= 7.0 / 8.0 - 1e-15, "g = {g}: {v}");
        }
        for k in 1..grid.len() {
            if grid[k] <= 0.0 {
                assert!(f[k] <= f[k - 1] + 1e-15);
            } else if grid[k - 1] >= 0.0 {
                assert!(f[k] >= f[k - 1] - 1e-15);
            }
        }
    }

    #[test]
    fn validity_flag_recorded() {
        let spec = ChainSpec::new(8, 1.0, 1.0).unwrap();
        let spectral = SpectralData::two_spin(0.1);
        let m = effective_model_from(&spec, &spectral, GammaChoice::Auto, 0.0, Some(0.5)).unwrap();
        let v = m.validity.unwrap();
        assert!(!v.valid);
        assert_eq!(v.length, 8);
        assert_eq!(m.gamma, m.j_eff);
    }
}
