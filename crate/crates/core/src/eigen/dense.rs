//! Dense reference diagonalization for small operators.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::spin::SparseOperator;

/// Largest dimension [`dense_spectrum`] will materialize.
pub const DENSE_CAP: usize = 4096;

/// All eigenvalues of a symmetric operator, ascending.
pub fn dense_spectrum(op: &SparseOperator) -> Result<Vec<f64>> {
    if op.dim() > DENSE_CAP {
        return Err(Error::TooLarge { dim: op.dim(), cap: DENSE_CAP });
    }
    Ok(symmetric_eigen_sorted(op.to_dense()).0)
}

/// Eigenvalues ascending with matching eigenvector columns.
pub(crate) fn symmetric_eigen_sorted(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), m);
    }
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_operator_gives_sorted_diagonal() {
        let op = SparseOperator::from_rows(vec![vec![(0, 3.0)], vec![(1, -1.0)], vec![(2, 2.0)]]).unwrap();
        assert_eq!(dense_spectrum(&op).unwrap(), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn refuses_large_operators() {
        let op = SparseOperator::from_rows((0..DENSE_CAP + 1).map(|r| vec![(r, 1.0)]).collect()).unwrap();
        assert_eq!(dense_spectrum(&op), Err(Error::TooLarge { dim: DENSE_CAP + 1, cap: DENSE_CAP }));
    }
}
