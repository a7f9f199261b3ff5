//! Vector kernels with scheduling-independent results.
//!
//! Reductions split the input into fixed-size chunks, sum each chunk
//! sequentially, and add the partial sums in chunk order, so results are
//! bit-identical for any thread count.

use num_complex::Complex64;
use rayon::prelude::*;

const CHUNK: usize = 1 << 13;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() <= CHUNK {
        return a.iter().zip(b).map(|(x, y)| x * y).sum();
    }
    let partial: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum())
        .collect();
    partial.iter().sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    if y.len() <= CHUNK {
        y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
    } else {
        y.par_iter_mut().zip(x.par_iter()).for_each(|(yi, xi)| *yi += alpha * xi);
    }
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    x.iter_mut().for_each(|v| *v *= alpha);
}

/// `<a, b>` with `a` conjugated.
pub fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    let chunk_sum = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).fold(Complex64::new(0.0, 0.0), |acc, (p, q)| acc + p.conj() * q)
    };
    if a.len() <= CHUNK {
        return chunk_sum(a, b);
    }
    let partial: Vec<Complex64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| chunk_sum(x, y))
        .collect();
    partial.iter().fold(Complex64::new(0.0, 0.0), |acc, p| acc + p)
}

pub fn cnorm(a: &[Complex64]) -> f64 {
    cdot(a, a).re.max(0.0).sqrt()
}

/// `y += alpha * x`
pub fn caxpy(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    if y.len() <= CHUNK {
        y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
    } else {
        y.par_iter_mut().zip(x.par_iter()).for_each(|(yi, xi)| *yi += alpha * xi);
    }
}
