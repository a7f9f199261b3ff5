//! Entanglement sharing: half of a singlet held by X is sent through the
//! transfer channel, so X and B end up sharing `(1 (x) channel)(singlet)`.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::thermal::WernerParameter;
use crate::transfer::max_fidelity;

/// Concurrence of the probe Werner state.
pub fn werner_concurrence(g: WernerParameter) -> f64 {
    (-1.5 * g.value() - 0.5).max(0.0)
}

/// Concurrence shared by X and B after a channel of peak fidelity `f_star`.
pub fn sharing_concurrence(f_star: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&f_star) {
        return Err(Error::Domain { what: "transfer fidelity must lie in [0, 1]", value: f_star });
    }
    Ok((3.0 * f_star - 2.0).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharingResult {
    pub g: WernerParameter,
    pub f_star: f64,
    pub error_prob: f64,
    pub concurrence_out: f64,
    pub concurrence_in: f64,
}

impl SharingResult {
    pub fn enhancement(&self) -> f64 {
        self.concurrence_out - self.concurrence_in
    }
}

/// Sharing figures for probes starting in the Werner state `g`, transferred
/// at the commensurate optimum.
pub fn sharing_report(g: WernerParameter) -> Result<SharingResult> {
    let f_star = max_fidelity(g);
    let theta = 2.0 * f_star - 1.0;
    let result = SharingResult {
        g,
        f_star,
        error_prob: 0.75 * (1.0 - theta),
        concurrence_out: sharing_concurrence(f_star)?,
        concurrence_in: werner_concurrence(g),
    };
    if result.enhancement() < -1e-12 {
        return Err(Error::Consistency(format!(
            "shared concurrence {} below the probe concurrence {} at g = {}",
            result.concurrence_out,
            result.concurrence_in,
            g.value()
        )));
    }
    Ok(result)
}

/// X-B state after one half of the singlet passes through a depolarizing
/// channel with shrinking factor `theta`, in the basis `{uu, ud, du, dd}`.
pub fn shared_state(theta: f64) -> Matrix4<Complex64> {
    let mixed = Matrix4::<f64>::identity() * 0.25;
    let mut singlet = Matrix4::<f64>::zeros();
    singlet[(1, 1)] = 0.5;
    singlet[(2, 2)] = 0.5;
    singlet[(1, 2)] = -0.5;
    singlet[(2, 1)] = -0.5;
    (singlet * theta + mixed * (1.0 - theta)).map(|v| Complex64::new(v, 0.0))
}
