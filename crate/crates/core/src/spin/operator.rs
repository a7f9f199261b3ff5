use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Rows below this count are applied sequentially.
const PAR_ROWS: usize = 1 << 14;

/// Real symmetric operator in compressed-row layout. Immutable once built;
/// entries within a row are sorted by column.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseOperator {
    /// Build from per-row `(column, value)` lists. Duplicate columns within
    /// a row are summed; exact zeros off the diagonal are dropped.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let dim = rows.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for (r, mut row) in rows.into_iter().enumerate() {
            row.sort_by_key(|&(c, _)| c);
            let start = cols.len();
            for (c, v) in row {
                if c >= dim {
                    return Err(Error::Dimension { expected: dim, actual: c + 1 });
                }
                if cols.len() > start && *cols.last().unwrap() == c {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                }
            }
            // drop cancelled off-diagonal entries
            let mut k = start;
            for idx in start..cols.len() {
                if vals[idx] != 0.0 || cols[idx] == r {
                    cols[k] = cols[idx];
                    vals[k] = vals[idx];
                    k += 1;
                }
            }
            cols.truncate(k);
            vals.truncate(k);
            row_ptr.push(cols.len());
        }
        Ok(SparseOperator { dim, row_ptr, cols, vals })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `(column, value)` entries of one row.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[range.clone()].iter().copied().zip(self.vals[range].iter().copied())
    }

    pub fn diagonal(&self, r: usize) -> f64 {
        self.row(r).find(|&(c, _)| c == r).map_or(0.0, |(_, v)| v)
    }

    /// `op * v`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    /// Writes `op * v` into `out`. Each output row is accumulated in entry
    /// order, so the result does not depend on thread scheduling.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        self.check_len(v.len())?;
        self.check_len(out.len())?;
        let row = |(r, o): (usize, &mut f64)| {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * v[self.cols[k]];
            }
            *o = acc;
        };
        if self.dim >= PAR_ROWS {
            out.par_iter_mut().enumerate().for_each(row);
        } else {
            out.iter_mut().enumerate().for_each(row);
        }
        Ok(())
    }

    /// Complex counterpart of [`apply_into`](Self::apply_into).
    pub fn apply_complex_into(&self, v: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        self.check_len(v.len())?;
        self.check_len(out.len())?;
        let row = |(r, o): (usize, &mut Complex64)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += v[self.cols[k]] * self.vals[k];
            }
            *o = acc;
        };
        if self.dim >= PAR_ROWS {
            out.par_iter_mut().enumerate().for_each(row);
        } else {
            out.iter_mut().enumerate().for_each(row);
        }
        Ok(())
    }

    /// True when every entry `(r, c, v)` has a bitwise-equal mirror `(c, r, v)`.
    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|r| {
            self.row(r).all(|(c, v)| self.row(c).any(|(c2, v2)| c2 == r && v2 == v))
        })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        m
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.dim {
            Ok(())
        } else {
            Err(Error::Dimension { expected: self.dim, actual: len })
        }
    }
}
