//! Pure states, density matrices and the state-level metrics.

use alloc::vec::Vec;

use crate::eig::{
    clamp_eigenvalue, eigenvalues_unchecked, hermitian_eigenvalues, psd_sqrt, CLAMP_TOL,
    HERMITIAN_TOL,
};
use crate::error::{QldpError, Result};
use crate::matrix::{c, inner, kron_vec, vec_norm, Complex, ComplexMatrix, ONE, ZERO};
use crate::rng::{gaussian_matrix, haar_vector, stream_rng};

/// Unit-norm tolerance for pure states.
pub const NORM_TOL: f64 = 1e-10;

/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-9;

/// Minimum eigenvalue threshold of the PPT test.
pub const PPT_TOL: f64 = 1e-9;

/// A unit vector |ψ⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex>,
}

impl PureState {
    /// Wraps amplitudes that already have unit norm.
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(QldpError::InvalidState("empty amplitude vector"));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QldpError::InvalidState("non-finite amplitude"));
        }
        if (vec_norm(&amplitudes) - 1.0).abs() > NORM_TOL {
            return Err(QldpError::InvalidState("amplitudes are not normalized"));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes arbitrary non-zero amplitudes.
    pub fn normalized(amplitudes: Vec<Complex>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(QldpError::InvalidState("cannot normalize a zero vector"));
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    pub(crate) fn from_unit_unchecked(amplitudes: Vec<Complex>) -> Self {
        Self { amplitudes }
    }

    /// Computational basis state |k⟩ of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        Self {
            amplitudes: crate::eig::one_hot(dim, k),
        }
    }

    /// |+⟩ = (|0⟩ + |1⟩)/√2.
    pub fn plus() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self {
            amplitudes: alloc::vec![c(h, 0.0), c(h, 0.0)],
        }
    }

    /// cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        let (s, co) = (libm::sin(theta / 2.0), libm::cos(theta / 2.0));
        Self {
            amplitudes: alloc::vec![c(co, 0.0), c(libm::cos(phi) * s, libm::sin(phi) * s)],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    /// |⟨self|other⟩|².
    pub fn overlap(&self, other: &Self) -> f64 {
        inner(&self.amplitudes, &other.amplitudes).norm_sqr()
    }

    /// |ψ⟩⟨ψ|.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: self.projector(),
        }
    }
}

/// A Hermitian, PSD, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates the density-matrix invariants.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(QldpError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(QldpError::NotHermitian { deviation });
        }
        let tr = matrix.trace()?;
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(QldpError::InvalidState("trace is not 1"));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < -CLAMP_TOL {
            return Err(QldpError::NegativeEigenvalue { value: min });
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.tensor(&other.matrix),
        }
    }

    /// tr(M ρ).
    pub fn expectation(&self, m: &ComplexMatrix) -> Result<Complex> {
        m.matmul(&self.matrix)?.trace()
    }
}

fn same_dim(rho: &DensityMatrix, sigma: &DensityMatrix, op: &'static str) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(QldpError::DimensionMismatch {
            op,
            left: rho.matrix.shape(),
            right: sigma.matrix.shape(),
        });
    }
    Ok(())
}

/// Uhlmann fidelity [tr √(√ρ σ √ρ)]².
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma, "fidelity")?;
    let root = psd_sqrt(&rho.matrix)?;
    let inner = root.matmul(&sigma.matrix)?.matmul(&root)?.hermitian_part();
    let s: f64 = eigenvalues_unchecked(&inner)
        .into_iter()
        .map(|x| libm::sqrt(clamp_eigenvalue(x).max(0.0)))
        .sum();
    Ok((s * s).clamp(0.0, 1.0))
}

/// Trace distance ½ tr|ρ − σ|.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma, "trace_distance")?;
    let diff = rho.matrix.sub(&sigma.matrix)?.hermitian_part();
    let t: f64 = eigenvalues_unchecked(&diff).iter().map(|x| x.abs()).sum();
    Ok((0.5 * t).clamp(0.0, 1.0))
}

/// Haar-random pure state on `n_qubits` qubits, deterministic per seed.
pub fn random_pure_state(n_qubits: u32, seed: u64) -> PureState {
    assert!(n_qubits >= 1, "need at least one qubit");
    let mut rng = stream_rng(seed, 0);
    PureState::from_unit_unchecked(haar_vector(1usize << n_qubits, &mut rng))
}

/// Random mixed state G G†/tr(G G†) for a complex Gaussian G.
pub fn random_density_matrix(dim: usize, seed: u64) -> DensityMatrix {
    let mut rng = stream_rng(seed, 1);
    let g = gaussian_matrix(dim, dim, &mut rng);
    let gg = g.matmul(&g.adjoint()).unwrap().hermitian_part();
    let tr = gg.trace().unwrap().re;
    DensityMatrix::from_unchecked(gg.scale_real(1.0 / tr))
}

/// Transpose on subsystem B of a state on A ⊗ B.
pub fn partial_transpose(rho: &DensityMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != rho.dim() {
        return Err(QldpError::DimensionMismatch {
            op: "partial_transpose",
            left: rho.matrix.shape(),
            right: dims,
        });
    }
    let n = rho.dim();
    let src = rho.matrix.as_slice();
    let mut out = alloc::vec![ZERO; n * n];
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    // ⟨a b|ρ^{T_B}|a2 b2⟩ = ⟨a b2|ρ|a2 b⟩
                    out[(a * db + b) * n + a2 * db + b2] = src[(a * db + b2) * n + a2 * db + b];
                }
            }
        }
    }
    ComplexMatrix::new(n, n, out)
}

/// Minimum eigenvalue of the partial transpose.
pub fn partial_transpose_min_eigenvalue(rho: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    let pt = partial_transpose(rho, dims)?;
    Ok(hermitian_eigenvalues(&pt)?[0])
}

/// Positive-partial-transpose test.
pub fn is_ppt(rho: &DensityMatrix, dims: (usize, usize)) -> Result<bool> {
    Ok(partial_transpose_min_eigenvalue(rho, dims)? >= -PPT_TOL)
}

/// (|00⟩ + |11⟩)/√2.
pub fn bell_state() -> PureState {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    PureState::from_unit_unchecked(alloc::vec![c(h, 0.0), ZERO, ZERO, c(h, 0.0)])
}
