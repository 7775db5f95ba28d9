//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! PSD matrix functions built on it.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{QldpError, Result};
use crate::matrix::{c, vec_norm, Complex, ComplexMatrix, ONE, ZERO};

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Hermiticity tolerance used by the PSD functions.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues in [−CLAMP_TOL, 0) are treated as exactly zero.
pub const CLAMP_TOL: f64 = 1e-9;

/// Eigenvalues below −NEGATIVE_TOL make a PSD routine fail.
pub const NEGATIVE_TOL: f64 = 1e-6;

const OFF_REL_TOL: f64 = 1e-15;

/// Spectrum of a Hermitian matrix, ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    /// Unit eigenvectors in the same order as `eigenvalues`.
    pub eigenvectors: Vec<Vec<Complex>>,
}

impl HermitianEig {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Σ g(λᵢ) vᵢvᵢ†.
    pub fn map_spectrum(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (&lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let w = g(lambda);
            if w != 0.0 {
                out.add_outer_assign(v, w);
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| x)
    }

    /// max_i ‖H vᵢ − λᵢ vᵢ‖₂.
    pub fn residual(&self, h: &ComplexMatrix) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&lambda, v)| {
                let hv = h.mul_vec(v);
                let r: Vec<Complex> = hv.iter().zip(v).map(|(a, b)| a - b * lambda).collect();
                vec_norm(&r)
            })
            .fold(0.0, f64::max)
    }
}

fn check_hermitian(h: &ComplexMatrix, tol: f64) -> Result<()> {
    if !h.is_square() {
        return Err(QldpError::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let deviation = h.hermitian_deviation();
    if deviation > tol * h.frobenius_norm().max(1.0) {
        return Err(QldpError::NotHermitian { deviation });
    }
    Ok(())
}

fn off_diagonal_norm(a: &[Complex], n: usize) -> f64 {
    let mut acc = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            acc += a[p * n + q].norm_sqr();
        }
    }
    libm::sqrt(2.0 * acc)
}

/// Runs cyclic Jacobi on a Hermitian matrix in place, optionally
/// accumulating the rotations into `v`. Returns the number of sweeps used,
/// or the final off-diagonal norm on failure.
fn jacobi(a: &mut [Complex], n: usize, mut v: Option<&mut [Complex]>) -> core::result::Result<usize, f64> {
    let scale = libm::sqrt(a.iter().map(Complex::norm_sqr).sum::<f64>());
    let target = OFF_REL_TOL * scale.max(f64::MIN_POSITIVE);
    for i in 0..n {
        a[i * n + i] = c(a[i * n + i].re, 0.0);
    }
    for sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(a, n) <= target {
            return Ok(sweep);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag <= target * 1e-3 {
                    continue;
                }
                let phase_conj = apq.conj() / mag;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let cs = 1.0 / libm::sqrt(1.0 + t * t);
                let sn = t * cs;
                // U restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                let upp = c(cs, 0.0);
                let upq = c(sn, 0.0);
                let uqp = phase_conj * (-sn);
                let uqq = phase_conj * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * upp + akq * uqp;
                    a[k * n + q] = akp * upq + akq * uqq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = upp.conj() * apk + uqp.conj() * aqk;
                    a[q * n + k] = upq.conj() * apk + uqq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = c(a[p * n + p].re, 0.0);
                a[q * n + q] = c(a[q * n + q].re, 0.0);
                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * upp + vkq * uqp;
                        v[k * n + q] = vkp * upq + vkq * uqq;
                    }
                }
            }
        }
    }
    let off = off_diagonal_norm(a, n);
    if off <= target {
        Ok(MAX_SWEEPS)
    } else {
        Err(off)
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// `tol` bounds the accepted Hermitian deviation relative to max(1, ‖h‖_F).
pub fn hermitian_eig(h: &ComplexMatrix, tol: f64) -> Result<HermitianEig> {
    check_hermitian(h, tol)?;
    let n = h.rows();
    let mut a = h.hermitian_part().into_vec();
    let mut v = ComplexMatrix::identity(n).into_vec();
    if let Err(off) = jacobi(&mut a, n, Some(&mut v)) {
        let partial = collect(&a, &v, n);
        return Err(QldpError::NoConvergence {
            sweeps: MAX_SWEEPS,
            residual: partial.residual(h).max(off),
        });
    }
    Ok(collect(&a, &v, n))
}

fn collect(a: &[Complex], v: &[Complex], n: usize) -> HermitianEig {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors = order
        .iter()
        .map(|&j| {
            let col: Vec<Complex> = (0..n).map(|k| v[k * n + j]).collect();
            let norm = vec_norm(&col);
            col.into_iter().map(|z| z / norm).collect()
        })
        .collect();
    HermitianEig {
        eigenvalues,
        eigenvectors,
    }
}

/// Eigenvalues only, ascending. Uses the closed form for 2×2 input.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h, HERMITIAN_TOL)?;
    Ok(eigenvalues_unchecked(h))
}

/// Eigenvalues of a matrix already known to be Hermitian.
pub(crate) fn eigenvalues_unchecked(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.rows();
    let s = h.as_slice();
    match n {
        1 => vec![s[0].re],
        2 => {
            let (a, d) = (s[0].re, s[3].re);
            let b = (s[1] + s[2].conj()) * 0.5;
            let mean = 0.5 * (a + d);
            let half = 0.5 * (a - d);
            let r = libm::hypot(half, b.norm());
            vec![mean - r, mean + r]
        }
        _ => {
            let mut a = h.hermitian_part().into_vec();
            // Jacobi without vectors converges on every Hermitian input well
            // inside the sweep cap; a failure leaves usable diagonal estimates.
            let _ = jacobi(&mut a, n, None);
            let mut vals: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
            vals.sort_by(f64::total_cmp);
            vals
        }
    }
}

/// Relative size below which a computed eigenvalue is rounding noise.
const SPECTRUM_FLOOR: f64 = 64.0 * f64::EPSILON;

fn psd_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    let eig = hermitian_eig(m, HERMITIAN_TOL)?;
    if eig.min() < -NEGATIVE_TOL {
        return Err(QldpError::NegativeEigenvalue { value: eig.min() });
    }
    Ok(eig)
}

/// Principal square root of a PSD matrix.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = psd_eig(m)?;
    // eigenvalues at the solver's rounding floor are zero; their square
    // roots would otherwise be ~1e-8
    let floor = SPECTRUM_FLOOR * eig.max().abs().max(eig.min().abs());
    Ok(eig.map_spectrum(|x| if x <= floor { 0.0 } else { libm::sqrt(x) }))
}

/// Inverse square root of a positive-definite matrix.
pub(crate) fn pd_inverse_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = psd_eig(m)?;
    if eig.min() <= CLAMP_TOL {
        return Err(QldpError::NegativeEigenvalue { value: eig.min() });
    }
    Ok(eig.map_spectrum(|x| 1.0 / libm::sqrt(x)))
}

/// |H|: eigenvalues replaced by their magnitudes.
pub fn abs_hermitian(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(m, HERMITIAN_TOL)?.map_spectrum(f64::abs))
}

/// Clamps eigenvalues in [−CLAMP_TOL, 0) to zero.
pub fn clamp_eigenvalue(lambda: f64) -> f64 {
    if (-CLAMP_TOL..0.0).contains(&lambda) {
        0.0
    } else {
        lambda
    }
}

pub(crate) fn one_hot(n: usize, k: usize) -> Vec<Complex> {
    let mut v = vec![ZERO; n];
    v[k] = ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pauli;
    use crate::rng::{gaussian_matrix, stream_rng};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = stream_rng(seed, 0);
        gaussian_matrix(n, n, &mut rng).hermitian_part()
    }

    #[test]
    fn spectrum_examples() {
        let z = hermitian_eig(&pauli::z(), 1e-12).unwrap();
        assert!(close(&z.eigenvalues, &[-1.0, 1.0], 1e-14));
        let x = hermitian_eig(&pauli::x(), 1e-12).unwrap();
        assert!(close(&x.eigenvalues, &[-1.0, 1.0], 1e-14));
        let m = ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let e = hermitian_eig(&m, 1e-12).unwrap();
        assert!(close(&e.eigenvalues, &[1.0, 3.0], 1e-14));
        assert!(close(&hermitian_eigenvalues(&m).unwrap(), &[1.0, 3.0], 1e-14));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            hermitian_eig(&m, 1e-9),
            Err(QldpError::NotHermitian { .. })
        ));
        assert!(abs_hermitian(&m).is_err());
    }

    #[test]
    fn residual_and_orthonormality_contract() {
        for (seed, n) in [(1u64, 3usize), (2, 7), (3, 16), (4, 32)] {
            let h = random_hermitian(n, seed);
            let eig = hermitian_eig(&h, 1e-12).unwrap();
            let bound = 1e-10 * h.frobenius_norm().max(1.0);
            assert!(eig.residual(&h) <= bound, "n={n}");
            for i in 0..n {
                for j in 0..n {
                    let ip = crate::matrix::inner(&eig.eigenvectors[i], &eig.eigenvectors[j]);
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - c(expected, 0.0)).norm() < 1e-8);
                }
            }
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            assert!(eig.reconstruct().distance(&h).unwrap() < 1e-8);
            let fast = eigenvalues_unchecked(&h);
            assert!(close(&fast, &eig.eigenvalues, 1e-10));
        }
    }

    #[test]
    fn degenerate_and_diagonal_input() {
        let eig = hermitian_eig(&ComplexMatrix::identity(5), 1e-12).unwrap();
        assert!(close(&eig.eigenvalues, &[1.0; 5], 0.0));
        let zero = hermitian_eig(&ComplexMatrix::zeros(3, 3), 1e-12).unwrap();
        assert!(close(&zero.eigenvalues, &[0.0; 3], 0.0));
    }

    #[test]
    fn psd_sqrt_examples() {
        let id = ComplexMatrix::identity(3);
        assert!(psd_sqrt(&id).unwrap().max_abs_diff(&id) < 1e-14);
        let d = ComplexMatrix::from_real(2, 2, &[4.0, 0.0, 0.0, 9.0]).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[2.0, 0.0, 0.0, 3.0]).unwrap();
        assert!(psd_sqrt(&d).unwrap().max_abs_diff(&expected) < 1e-14);
        let psi = [c(0.6, 0.0), c(0.0, 0.8)];
        let proj = ComplexMatrix::outer(&psi, &psi);
        assert!(psd_sqrt(&proj).unwrap().max_abs_diff(&proj) < 1e-12);
    }

    #[test]
    fn psd_sqrt_rejects_negative() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1e-3]).unwrap();
        assert!(matches!(
            psd_sqrt(&m),
            Err(QldpError::NegativeEigenvalue { .. })
        ));
        // rounding-level negatives are clamped
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1e-10]).unwrap();
        let r = psd_sqrt(&m).unwrap();
        assert_eq!(r[(1, 1)], ZERO);
    }

    #[test]
    fn psd_sqrt_squares_back_on_random_gram_matrices() {
        for seed in 0..10u64 {
            let n = 2 + (seed as usize % 6);
            let mut rng = stream_rng(seed, 7);
            let g = gaussian_matrix(n, n, &mut rng);
            let m = g.matmul(&g.adjoint()).unwrap();
            let r = psd_sqrt(&m).unwrap();
            let err = r.matmul(&r).unwrap().distance(&m).unwrap();
            assert!(err <= 1e-8 * m.frobenius_norm().max(1.0));
            assert!(r.is_hermitian(1e-12));
        }
    }

    #[test]
    fn abs_examples() {
        assert!(abs_hermitian(&pauli::z())
            .unwrap()
            .max_abs_diff(&ComplexMatrix::identity(2))
            < 1e-14);
        let d = ComplexMatrix::from_real(2, 2, &[-3.0, 0.0, 0.0, 2.0]).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[3.0, 0.0, 0.0, 2.0]).unwrap();
        assert!(abs_hermitian(&d).unwrap().max_abs_diff(&expected) < 1e-14);
        let rho = ComplexMatrix::outer(&one_hot(2, 0), &one_hot(2, 0));
        let sigma = ComplexMatrix::outer(&one_hot(2, 1), &one_hot(2, 1));
        let diff = rho.sub(&sigma).unwrap();
        assert!(abs_hermitian(&diff)
            .unwrap()
            .max_abs_diff(&ComplexMatrix::identity(2))
            < 1e-14);
    }

    #[test]
    fn clamp_only_touches_rounding_noise() {
        assert_eq!(clamp_eigenvalue(-5e-10), 0.0);
        assert_eq!(clamp_eigenvalue(-2e-9), -2e-9);
        assert_eq!(clamp_eigenvalue(0.25), 0.25);
    }
}
