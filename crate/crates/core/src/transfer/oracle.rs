//! Brute-force evolution of the effective three-spin problem, used to check
//! the closed-form transfer fidelity.

use nalgebra::{Matrix2, SMatrix, SymmetricEigen, Vector2};
use num_complex::Complex64;

use crate::thermal::werner_density_matrix;
use crate::transfer::effective::EffectiveModel;

type M8 = SMatrix<Complex64, 8, 8>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn paulis() -> [Matrix2<Complex64>; 3] {
    let z = c(0.0, 0.0);
    [
        Matrix2::new(z, c(1.0, 0.0), c(1.0, 0.0), z),
        Matrix2::new(z, c(0.0, -1.0), c(0.0, 1.0), z),
        Matrix2::new(c(1.0, 0.0), z, z, c(-1.0, 0.0)),
    ]
}

/// `A (x) B (x) C` for the sender, probe A and probe B (sender most significant).
fn kron3(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>, d: &Matrix2<Complex64>) -> M8 {
    let ab = a.kronecker(b);
    let full = ab.kronecker(d);
    M8::from_fn(|r, col| full[(r, col)])
}

/// `gamma S_S.S_A + j_eff S_A.S_B` in the product basis with local order (up, down).
pub fn three_site_hamiltonian(model: &EffectiveModel) -> M8 {
    let id = Matrix2::identity();
    let mut h = M8::zeros();
    for s in paulis() {
        h += kron3(&s, &s, &id) * c(0.25 * model.gamma, 0.0);
        h += kron3(&id, &s, &s) * c(0.25 * model.j_eff, 0.0);
    }
    h
}

/// Probability that probe B holds `xi` at time `t`, starting from `xi` on the
/// sender and the Werner state of `model.g` on the probes. `xi` need not be
/// normalized.
pub fn three_site_oracle(model: &EffectiveModel, t: f64, xi: Vector2<Complex64>) -> f64 {
    let xi = xi / c(xi.norm(), 0.0);
    let projector = xi * xi.adjoint();
    let werner = werner_density_matrix(model.g).map(|v| c(v, 0.0));
    let rho0 = projector.kronecker(&werner);
    let rho0 = M8::from_fn(|r, col| rho0[(r, col)]);

    let eig = SymmetricEigen::new(three_site_hamiltonian(model));
    let phases = M8::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t)));
    let u = eig.eigenvectors * phases * eig.eigenvectors.adjoint();
    let rho_t = u * rho0 * u.adjoint();

    let id = Matrix2::identity();
    (rho_t * kron3(&id, &id, &projector)).trace().re
}
