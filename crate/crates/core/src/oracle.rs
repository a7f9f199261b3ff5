//! Independent reference computations used by the test suites and by
//! `spinchannel validate`. None of these share code paths with the
//! routines they check.

use nalgebra::{DMatrix, Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::eigen::SpectralData;
use crate::spin::Bond;
use crate::thermal::thermal_g;

/// Heisenberg Hamiltonian on the full `2^n` space, assembled from Kronecker
/// products of single-site spin matrices. Index bit `i` is site `i` (1 = up).
pub fn dense_full_hamiltonian(n_sites: usize, bonds: &[Bond]) -> DMatrix<f64> {
    // local basis (down, up) = (0, 1)
    let sz = DMatrix::from_row_slice(2, 2, &[-0.5, 0.0, 0.0, 0.5]);
    let sp = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
    let sm = sp.transpose();
    let id = DMatrix::<f64>::identity(2, 2);
    let embed = |ops: &[(usize, &DMatrix<f64>)]| -> DMatrix<f64> {
        // kron from the most significant site down to site 0
        let mut out = DMatrix::<f64>::identity(1, 1);
        for site in (0..n_sites).rev() {
            let local = ops.iter().find(|(s, _)| *s == site).map_or(&id, |(_, m)| *m);
            out = out.kronecker(local);
        }
        out
    };
    let dim = 1usize << n_sites;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for b in bonds {
        h += embed(&[(b.i, &sz), (b.j, &sz)]) * b.coupling;
        h += embed(&[(b.i, &sp), (b.j, &sm)]) * (0.5 * b.coupling);
        h += embed(&[(b.i, &sm), (b.j, &sp)]) * (0.5 * b.coupling);
    }
    h
}

pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Wootters concurrence of a two-qubit density matrix in the basis
/// `{uu, ud, du, dd}`.
pub fn wootters_concurrence(rho: &Matrix4<Complex64>) -> f64 {
    let sy = Matrix2::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, 0.0),
    );
    let syy = sy.kronecker(&sy);
    let tilde = syy * rho.map(|z| z.conj()) * syy;
    let sqrt_rho = hermitian_sqrt(rho);
    let m = sqrt_rho * tilde * sqrt_rho;
    let m = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut lambdas: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().map(|&v| v.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}

fn hermitian_sqrt(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let eig = SymmetricEigen::new(*rho);
    let d = Matrix4::from_diagonal(&eig.eigenvalues.map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0)));
    eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Temperature where the thermal Werner parameter crosses -1/3, found by
/// bisection on `thermal_g`. `None` when the probes start unentangled.
pub fn threshold_by_bisection(spectral: &SpectralData) -> Option<f64> {
    let excess = |t: f64| thermal_g(spectral, t).map(|g| g.value() + 1.0 / 3.0).unwrap_or(f64::NAN);
    if !(spectral.gzz_ground < -1.0 / 3.0) {
        return None;
    }
    let mut lo = spectral.gap * 1e-3;
    let mut hi = spectral.gap;
    while excess(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e6 * spectral.gap {
            return None;
        }
    }
    while excess(lo) > 0.0 {
        lo *= 0.5;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimer_full_space_spectrum() {
        let h = dense_full_hamiltonian(2, &[Bond::new(0, 1, 1.0)]);
        let e = sorted_eigenvalues(&h);
        assert_eq!(e.len(), 4);
        assert!((e[0] + 0.75).abs() < 1e-14);
        for v in &e[1..] {
            assert!((v - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn concurrence_of_bell_and_product_states() {
        let z = Complex64::new(0.0, 0.0);
        let h = Complex64::new(0.5, 0.0);
        let singlet = Matrix4::new(z, z, z, z, z, h, -h, z, z, -h, h, z, z, z, z, z);
        assert!((wootters_concurrence(&singlet) - 1.0).abs() < 1e-12);
        let mut product = Matrix4::zeros();
        product[(0, 0)] = Complex64::new(1.0, 0.0);
        assert!(wootters_concurrence(&product).abs() < 1e-12);
        let mixed = Matrix4::identity() * Complex64::new(0.25, 0.0);
        assert!(wootters_concurrence(&mixed).abs() < 1e-12);
    }
}
