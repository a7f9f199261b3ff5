//! `exp(-i H t) psi` for a real symmetric sparse `H` by Lanczos projection.
//!
//! Each step builds an orthonormal Krylov basis `V` (at most `max_dim`
//! vectors) and a tridiagonal `T = V^H H V`. Inside the step the state is
//! `V exp(-i T tau) e_1 |psi|`, and the local error is estimated by
//! `beta_m |[exp(-i T tau) e_1]_m|`. All grid times that fall inside a step
//! are evaluated from the same basis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::eigen::dense::symmetric_eigen_sorted;
use crate::error::{Error, Result};
use crate::linalg::{caxpy, cdot, cnorm};
use crate::spin::SparseOperator;

/// Below this `beta` the Krylov space is invariant and the projection exact.
const BREAKDOWN: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOptions {
    /// Per-step local error bound.
    pub tol: f64,
    pub max_dim: usize,
    pub max_steps: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions { tol: 1e-10, max_dim: 30, max_steps: 200_000 }
    }
}

impl KrylovOptions {
    pub fn with_tol(tol: f64) -> Self {
        KrylovOptions { tol, ..Self::default() }
    }
}

/// Observable values at the requested times plus propagation diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub values: Vec<f64>,
    /// `| |psi(t)| - |psi(0)| |` at each requested time.
    pub norm_drift: Vec<f64>,
    pub steps: usize,
    /// Sum of the per-step error estimates.
    pub error_bound: f64,
}

struct Subspace {
    basis: Vec<Vec<Complex64>>,
    eigvals: Vec<f64>,
    eigvecs: DMatrix<f64>,
    beta_next: f64,
    scale: f64,
}

impl Subspace {
    fn build(op: &SparseOperator, psi: &[Complex64], max_dim: usize) -> Result<Self> {
        let scale = cnorm(psi);
        let mut basis = vec![psi.iter().map(|z| z / scale).collect::<Vec<_>>()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![Complex64::new(0.0, 0.0); psi.len()];
        let max_dim = max_dim.min(psi.len());
        let beta_next = loop {
            let k = basis.len() - 1;
            op.apply_complex_into(&basis[k], &mut w)?;
            let a = cdot(&basis[k], &w).re;
            alpha.push(a);
            // two passes of Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for v in &basis {
                    let overlap = cdot(v, &w);
                    caxpy(-overlap, v, &mut w);
                }
            }
            let b = cnorm(&w);
            if b < BREAKDOWN || basis.len() == max_dim {
                break if b < BREAKDOWN { 0.0 } else { b };
            }
            beta.push(b);
            basis.push(w.iter().map(|z| z / b).collect());
        };
        let m = basis.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for k in 0..m {
            t[(k, k)] = alpha[k];
            if k + 1 < m {
                t[(k, k + 1)] = beta[k];
                t[(k + 1, k)] = beta[k];
            }
        }
        let (eigvals, eigvecs) = symmetric_eigen_sorted(t);
        Ok(Subspace { basis, eigvals, eigvecs, beta_next, scale })
    }

    /// Coefficients of `psi(tau)` in the Krylov basis.
    fn coefficients(&self, tau: f64) -> DVector<Complex64> {
        let m = self.basis.len();
        let weights = DVector::from_fn(m, |j, _| {
            Complex64::from_polar(self.eigvecs[(0, j)] * self.scale, -self.eigvals[j] * tau)
        });
        DVector::from_fn(m, |k, _| (0..m).map(|j| weights[j] * self.eigvecs[(k, j)]).sum())
    }

    fn error(&self, tau: f64) -> f64 {
        if self.beta_next == 0.0 {
            return 0.0;
        }
        self.beta_next * self.coefficients(tau)[self.basis.len() - 1].norm()
    }

    fn state(&self, tau: f64) -> Vec<Complex64> {
        let coeffs = self.coefficients(tau);
        let mut out = vec![Complex64::new(0.0, 0.0); self.basis[0].len()];
        for (v, &ck) in self.basis.iter().zip(coeffs.iter()) {
            caxpy(ck, v, &mut out);
        }
        out
    }

    /// Largest step not beyond `remaining` whose error estimate meets `tol`.
    fn step_length(&self, remaining: f64, guess: f64, tol: f64) -> Option<f64> {
        if self.error(remaining) <= tol {
            return Some(remaining);
        }
        let mut lo = guess.min(remaining);
        while self.error(lo) > tol {
            lo *= 0.5;
            if lo < 1e-300 {
                return None;
            }
        }
        let mut hi = (2.0 * lo).min(remaining);
        while hi < remaining && self.error(hi) <= tol {
            lo = hi;
            hi = (2.0 * hi).min(remaining);
        }
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            if self.error(mid) <= tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }
}

/// Evolves `psi` under `H` and evaluates `observe` at each of `times`
/// (non-decreasing, starting at or after 0).
pub fn propagate(
    op: &SparseOperator,
    psi: Vec<Complex64>,
    times: &[f64],
    opts: &KrylovOptions,
    observe: impl Fn(&[Complex64]) -> f64,
) -> Result<Propagation> {
    if psi.len() != op.dim() {
        return Err(Error::Dimension { expected: op.dim(), actual: psi.len() });
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Config("time grid must be finite, non-negative and non-decreasing".into()));
    }
    if !(opts.tol > 0.0) || opts.max_dim < 2 {
        return Err(Error::Config("krylov tolerance must be positive and the subspace at least 2".into()));
    }
    let norm0 = cnorm(&psi);
    if !(norm0 > 0.0) {
        return Err(Error::Domain { what: "initial state must be nonzero", value: norm0 });
    }
    let mut out = Propagation { values: Vec::with_capacity(times.len()), norm_drift: Vec::new(), steps: 0, error_bound: 0.0 };
    let record = |state: &[Complex64], out: &mut Propagation| {
        out.values.push(observe(state));
        out.norm_drift.push((cnorm(state) - norm0).abs());
    };

    let mut psi = psi;
    let mut now = 0.0;
    let mut next = 0;
    let mut guess = f64::INFINITY;
    while next < times.len() && times[next] <= now {
        record(&psi, &mut out);
        next += 1;
    }
    while next < times.len() {
        if out.steps == opts.max_steps {
            return Err(Error::Propagation(format!("step budget of {} exhausted at t = {now}", opts.max_steps)));
        }
        let sub = Subspace::build(op, &psi, opts.max_dim)?;
        let remaining = times[times.len() - 1] - now;
        let tau = sub
            .step_length(remaining, guess.min(remaining), opts.tol)
            .ok_or_else(|| Error::Propagation(format!("step size collapsed at t = {now}")))?;
        if tau <= f64::EPSILON * now.max(1.0) {
            return Err(Error::Propagation(format!("step size {tau:e} too small at t = {now}")));
        }
        let end = if tau == remaining { times[times.len() - 1] } else { now + tau };
        while next < times.len() && times[next] <= end {
            let state = sub.state(times[next] - now);
            record(&state, &mut out);
            next += 1;
        }
        out.error_bound += sub.error(tau);
        out.steps += 1;
        psi = sub.state(tau);
        now = end;
        guess = 2.0 * tau;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::dense::symmetric_eigen_sorted;
    use crate::spin::{build_chain_hamiltonian, enumerate_sector, ChainSpec};

    fn exact_evolution(op: &SparseOperator, psi: &[Complex64], t: f64) -> Vec<Complex64> {
        let (vals, vecs) = symmetric_eigen_sorted(op.to_dense());
        let n = psi.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let overlap: Complex64 = (0..n).map(|i| psi[i] * vecs[(i, j)]).sum();
            let phase = Complex64::from_polar(1.0, -vals[j] * t);
            for i in 0..n {
                out[i] += vecs[(i, j)] * overlap * phase;
            }
        }
        out
    }

    fn setup() -> (SparseOperator, Vec<Complex64>) {
        let spec = ChainSpec::new(8, 1.0, 0.3).unwrap();
        let sector = enumerate_sector(8, 0).unwrap();
        let op = build_chain_hamiltonian(&spec, &sector).unwrap();
        let mut psi = vec![Complex64::new(0.0, 0.0); sector.dim()];
        psi[sector.index_of(0b0101_0101).unwrap()] = Complex64::new(1.0, 0.0);
        (op, psi)
    }

    #[test]
    fn matches_exact_exponential() {
        let (op, psi) = setup();
        let times: Vec<f64> = (0..=40).map(|k| k as f64 * 1.7).collect();
        let exact: Vec<f64> = times.iter().map(|&t| exact_evolution(&op, &psi, t)[5].norm_sqr()).collect();
        let run = propagate(&op, psi, &times, &KrylovOptions::with_tol(1e-12), |s| s[5].norm_sqr()).unwrap();
        for (a, b) in run.values.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert!(run.norm_drift.iter().all(|d| *d < 1e-10));
        assert!(run.steps > 1);
    }

    #[test]
    fn eigenstate_only_picks_up_a_phase() {
        let (op, _) = setup();
        let (_, vecs) = symmetric_eigen_sorted(op.to_dense());
        let psi: Vec<Complex64> = vecs.column(0).iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let target = psi.clone();
        let run = propagate(&op, psi, &[0.0, 100.0, 1000.0], &KrylovOptions::default(), |s| cdot(&target, s).norm())
            .unwrap();
        for v in run.values {
            assert!((v - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let (op, psi) = setup();
        let opts = KrylovOptions::default();
        assert!(propagate(&op, psi.clone(), &[1.0, 0.5], &opts, |_| 0.0).is_err());
        assert!(propagate(&op, psi.clone(), &[-1.0], &opts, |_| 0.0).is_err());
        assert!(propagate(&op, psi[1..].to_vec(), &[1.0], &opts, |_| 0.0).is_err());
    }

    #[test]
    fn step_budget_is_enforced() {
        let (op, psi) = setup();
        let opts = KrylovOptions { tol: 1e-14, max_dim: 3, max_steps: 5 };
        assert!(matches!(propagate(&op, psi, &[500.0], &opts, |_| 0.0), Err(Error::Propagation(_))));
    }
}
