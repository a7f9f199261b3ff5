//! Restarted Lanczos with full reorthogonalization.
//!
//! Every new Krylov vector is orthogonalized twice against the whole stored
//! basis, and the projected matrix `V^T H V` is filled column by column from
//! those projections. When the basis reaches its cap the lowest Ritz vectors
//! are kept and the iteration continues from the current residual direction
//! (thick restart). If the Krylov space becomes invariant before `k` pairs
//! converge, a fresh random direction orthogonal to the basis is appended.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigen::dense::symmetric_eigen_sorted;
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm, scale};
use crate::spin::SparseOperator;

/// Seed of the deterministic start vector.
pub const DEFAULT_SEED: u64 = 0x5eed_0f_1a2c;

/// Residual tolerance in units of J.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Eigenvalue with its unit eigenvector and residual `||Hv - Ev||`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub energy: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    pub tol: f64,
    pub seed: u64,
    /// Maximum number of stored Krylov vectors; `None` picks by dimension.
    pub max_basis: Option<usize>,
    pub max_matvecs: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { tol: DEFAULT_TOL, seed: DEFAULT_SEED, max_basis: None, max_matvecs: 50_000 }
    }
}

impl LanczosOptions {
    pub fn with_tol(tol: f64) -> Self {
        LanczosOptions { tol, ..Default::default() }
    }

    fn basis_cap(&self, dim: usize, k: usize) -> usize {
        let cap = self.max_basis.unwrap_or(if dim > 1_000_000 { 24 } else { 48 });
        cap.max(2 * k + 8).min(dim)
    }
}

/// The `k` lowest eigenpairs of `op`, energies ascending.
pub fn lowest_eigenpairs(op: &SparseOperator, k: usize, tol: f64) -> Result<Vec<EigenPair>> {
    lowest_eigenpairs_with(op, k, &LanczosOptions::with_tol(tol))
}

pub fn lowest_eigenpairs_with(op: &SparseOperator, k: usize, opts: &LanczosOptions) -> Result<Vec<EigenPair>> {
    let dim = op.dim();
    if k == 0 || k > dim {
        return Err(Error::Config(format!("requested {k} eigenpairs of a {dim}-dimensional operator")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if dim == 1 {
        return Ok(vec![EigenPair { energy: op.diagonal(0), vector: vec![1.0], residual: 0.0 }]);
    }

    let cap = opts.basis_cap(dim, k);
    let keep = (cap / 2).max(k + 1).min(cap - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cap);
    let mut projected = DMatrix::<f64>::zeros(cap, cap);
    let mut w = vec![0.0; dim];
    let mut matvecs = 0usize;
    let mut best_residual = f64::INFINITY;

    let start = random_orthogonal(dim, &basis, &mut rng).expect("empty basis cannot span the space");
    basis.push(start);

    loop {
        let j = basis.len() - 1;
        op.apply_into(&basis[j], &mut w)?;
        matvecs += 1;
        let coeffs = orthogonalize(&mut w, &basis);
        for (i, &c) in coeffs.iter().enumerate() {
            projected[(i, j)] = c;
            projected[(j, i)] = c;
        }
        let beta = norm(&w);
        let m = basis.len();
        let (theta, s) = symmetric_eigen_sorted(projected.view((0, 0), (m, m)).into_owned());

        // H V = V T + w e_m^T, so Ritz pair i has residual beta * |s[m-1, i]|.
        let wanted = k.min(m);
        let estimates: Vec<f64> = (0..wanted).map(|i| (beta * s[(m - 1, i)]).abs()).collect();
        let worst = estimates.iter().copied().fold(0.0, f64::max);
        if wanted == k {
            best_residual = best_residual.min(worst);
        }

        if wanted == k && worst <= 0.5 * opts.tol {
            let pairs = ritz_pairs(op, &basis, &theta, &s, k)?;
            let explicit = pairs.iter().map(|p| p.residual).fold(0.0, f64::max);
            best_residual = best_residual.min(explicit);
            if explicit <= opts.tol {
                return Ok(pairs);
            }
        }
        if matvecs >= opts.max_matvecs {
            return Err(Error::Convergence { iterations: matvecs, residual: best_residual });
        }

        let invariant = beta <= 1e-12 * theta.iter().fold(1.0f64, |a, t| a.max(t.abs()));
        if m == dim {
            return ritz_pairs(op, &basis, &theta, &s, k);
        }
        if m == cap {
            // thick restart on the lowest Ritz vectors
            let p = keep.min(m);
            let kept: Vec<Vec<f64>> = (0..p).map(|i| combine(&basis, s.column(i).as_slice())).collect();
            basis = kept;
            projected.fill(0.0);
            for (i, &t) in theta.iter().take(p).enumerate() {
                projected[(i, i)] = t;
            }
            if invariant {
                match random_orthogonal(dim, &basis, &mut rng) {
                    Some(v) => basis.push(v),
                    None => return finalize(op, &basis, &projected, k),
                }
            } else {
                scale(1.0 / beta, &mut w);
                basis.push(w.clone());
            }
        } else if invariant {
            match random_orthogonal(dim, &basis, &mut rng) {
                Some(v) => basis.push(v),
                None => return finalize(op, &basis, &projected, k),
            }
        } else {
            scale(1.0 / beta, &mut w);
            basis.push(w.clone());
        }
    }
}

/// The basis spans the whole space: the Ritz pairs are exact.
fn finalize(op: &SparseOperator, basis: &[Vec<f64>], projected: &DMatrix<f64>, k: usize) -> Result<Vec<EigenPair>> {
    let m = basis.len();
    let (theta, s) = symmetric_eigen_sorted(projected.view((0, 0), (m, m)).into_owned());
    ritz_pairs(op, basis, &theta, &s, k)
}

/// Classical Gram-Schmidt applied twice; returns the accumulated projections.
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut total = vec![0.0; basis.len()];
    for _ in 0..2 {
        let coeffs: Vec<f64> = basis.iter().map(|v| dot(v, w)).collect();
        for (v, &c) in basis.iter().zip(&coeffs) {
            axpy(-c, v, w);
        }
        total.iter_mut().zip(&coeffs).for_each(|(t, c)| *t += c);
    }
    total
}

fn random_orthogonal(dim: usize, basis: &[Vec<f64>], rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
    if basis.len() >= dim {
        return None;
    }
    for _ in 0..8 {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let before = norm(&v);
        orthogonalize(&mut v, basis);
        let after = norm(&v);
        if after > 1e-8 * before {
            scale(1.0 / after, &mut v);
            return Some(v);
        }
    }
    None
}

fn combine(basis: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; basis[0].len()];
    for (v, &c) in basis.iter().zip(coeffs) {
        axpy(c, v, &mut out);
    }
    out
}

fn ritz_pairs(
    op: &SparseOperator,
    basis: &[Vec<f64>],
    theta: &[f64],
    s: &DMatrix<f64>,
    k: usize,
) -> Result<Vec<EigenPair>> {
    (0..k)
        .map(|i| {
            let mut y = combine(basis, s.column(i).as_slice());
            let n = norm(&y);
            scale(1.0 / n, &mut y);
            let mut hy = op.apply(&y)?;
            axpy(-theta[i], &y, &mut hy);
            Ok(EigenPair { energy: theta[i], residual: norm(&hy), vector: y })
        })
        .collect()
}
