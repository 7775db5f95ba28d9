//! Seeded random generators. Every random object is derived from an explicit
//! `(seed, stream)` pair so results never depend on ambient state.

use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::matrix::{c, inner, vec_norm, Complex, ComplexMatrix};

pub type QldpRng = ChaCha20Rng;

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> QldpRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian with E|z|² = 1.
pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex> {
    (0..n).map(|_| gaussian_complex(rng)).collect()
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_raw(rows, cols, gaussian_vector(rows * cols, rng))
}

/// Haar-random unit vector (normalized complex Gaussian).
pub fn haar_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex> {
    loop {
        let v = gaussian_vector(n, rng);
        let norm = vec_norm(&v);
        if norm > 1e-12 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random unitary: Gram-Schmidt on the columns of a complex Gaussian
/// matrix, which fixes the triangular factor's diagonal positive real.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let mut cols: Vec<Vec<Complex>> = Vec::with_capacity(n);
        let mut ok = true;
        for _ in 0..n {
            let mut v = gaussian_vector(n, rng);
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for q in &cols {
                    let proj = inner(q, &v);
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= proj * qi;
                    }
                }
            }
            let norm = vec_norm(&v);
            if norm < 1e-10 {
                ok = false;
                break;
            }
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
        if ok {
            let mut data = Vec::with_capacity(n * n);
            for i in 0..n {
                for col in &cols {
                    data.push(col[i]);
                }
            }
            return ComplexMatrix::from_raw(n, n, data);
        }
    }
}

/// Uniform draw in [0, 1).
pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen::<f64>()
}
