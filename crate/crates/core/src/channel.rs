//! Quantum mechanisms in Kraus form, and POVM measurements.

use alloc::string::String;
use alloc::vec::Vec;

use crate::eig::{hermitian_eigenvalues, pd_inverse_sqrt, CLAMP_TOL, HERMITIAN_TOL};
use crate::error::{QldpError, Result};
use crate::matrix::{Complex, ComplexMatrix};
use crate::rng::{gaussian_matrix, haar_unitary, stream_rng, uniform};
use crate::state::DensityMatrix;

/// Σ E†E = I tolerance (Frobenius).
pub const TP_TOL: f64 = 1e-8;

/// Σ M = I tolerance for POVMs (Frobenius).
pub const POVM_TOL: f64 = 1e-8;

/// Default tolerance for [`KrausChannel::is_unital`].
pub const UNITAL_TOL: f64 = 1e-8;

/// A trace-preserving channel E(ρ) = Σ_k E_k ρ E_k†.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
    label: Option<String>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>, label: Option<String>) -> Result<Self> {
        let first = kraus.first().ok_or(QldpError::EmptyKraus)?;
        if !first.is_square() {
            return Err(QldpError::NotSquare {
                rows: first.rows(),
                cols: first.cols(),
            });
        }
        let dim = first.rows();
        if let Some(bad) = kraus.iter().find(|k| k.shape() != (dim, dim)) {
            return Err(QldpError::DimensionMismatch {
                op: "kraus operator",
                left: (dim, dim),
                right: bad.shape(),
            });
        }
        let channel = Self { dim, kraus, label };
        let deviation = channel
            .trace_preservation_sum()
            .distance(&ComplexMatrix::identity(dim))?;
        if deviation > TP_TOL {
            return Err(QldpError::NotTracePreserving { deviation });
        }
        Ok(channel)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus: alloc::vec![ComplexMatrix::identity(dim)],
            label: Some("identity".into()),
        }
    }

    /// The unitary channel ρ ↦ UρU†.
    pub fn unitary(u: ComplexMatrix, label: Option<String>) -> Result<Self> {
        Self::new(alloc::vec![u], label)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus.len()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    fn trace_preservation_sum(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc.add_assign_unchecked(&k.adjoint().matmul(k).expect("square kraus"));
        }
        acc
    }

    fn check_operand(&self, m: &ComplexMatrix, op: &'static str) -> Result<()> {
        if m.shape() != (self.dim, self.dim) {
            return Err(QldpError::DimensionMismatch {
                op,
                left: (self.dim, self.dim),
                right: m.shape(),
            });
        }
        Ok(())
    }

    /// Σ E_k m E_k† for an arbitrary square operand.
    pub fn apply_operator(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_operand(m, "apply")?;
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc.add_assign_unchecked(&k.matmul(m)?.matmul(&k.adjoint())?);
        }
        Ok(acc)
    }

    /// E(ρ), re-validated as a density matrix.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.matrix())?.hermitian_part();
        DensityMatrix::new(out)
    }

    /// Heisenberg-picture map E†(m) = Σ E_k† m E_k.
    pub fn apply_adjoint(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_operand(m, "apply_adjoint")?;
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc.add_assign_unchecked(&k.adjoint().matmul(m)?.matmul(k)?);
        }
        Ok(acc)
    }

    /// E†(|ψ⟩⟨ψ|) = Σ_k |E_k†ψ⟩⟨E_k†ψ|, without forming the projector.
    pub fn adjoint_of_pure(&self, psi: &[Complex]) -> ComplexMatrix {
        debug_assert_eq!(psi.len(), self.dim);
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc.add_outer_assign(&k.adjoint_mul_vec(psi), 1.0);
        }
        acc
    }

    /// E(|ψ⟩⟨ψ|) = Σ_k |E_kψ⟩⟨E_kψ|.
    pub fn forward_of_pure(&self, psi: &[Complex]) -> ComplexMatrix {
        debug_assert_eq!(psi.len(), self.dim);
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc.add_outer_assign(&k.mul_vec(psi), 1.0);
        }
        acc
    }

    /// ‖Σ E_k E_k† − I‖_F.
    pub fn unitality_deviation(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc.add_assign_unchecked(&k.matmul(&k.adjoint()).expect("square kraus"));
        }
        acc.distance(&ComplexMatrix::identity(self.dim))
            .expect("same shape")
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.unitality_deviation() <= tol
    }

    /// (E† ⊗ I)(|Ω⟩⟨Ω|) with |Ω⟩ = Σ_j |j,j⟩ unnormalized.
    ///
    /// (A ⊗ I)|Ω⟩ is the row-major flattening of A, so the result is
    /// Σ_k vec(E_k†) vec(E_k†)†.
    pub fn choi_of_adjoint(&self) -> ComplexMatrix {
        let n2 = self.dim * self.dim;
        let mut acc = ComplexMatrix::zeros(n2, n2);
        for k in &self.kraus {
            acc.add_outer_assign(k.adjoint().as_slice(), 1.0);
        }
        acc
    }
}

/// Kraus set {A_i ⊗ B_j}.
pub fn tensor_channels(a: &KrausChannel, b: &KrausChannel) -> KrausChannel {
    let mut kraus = Vec::with_capacity(a.kraus.len() * b.kraus.len());
    for ka in &a.kraus {
        for kb in &b.kraus {
            kraus.push(ka.tensor(kb));
        }
    }
    let label = match (a.label(), b.label()) {
        (Some(x), Some(y)) => Some(alloc::format!("{x} ⊗ {y}")),
        _ => None,
    };
    KrausChannel {
        dim: a.dim * b.dim,
        kraus,
        label,
    }
}

/// `outer ∘ inner`, Kraus set {N_i E_j}.
pub fn compose_serial(outer: &KrausChannel, inner: &KrausChannel) -> Result<KrausChannel> {
    if outer.dim != inner.dim {
        return Err(QldpError::DimensionMismatch {
            op: "compose_serial",
            left: (outer.dim, outer.dim),
            right: (inner.dim, inner.dim),
        });
    }
    let mut kraus = Vec::with_capacity(outer.kraus.len() * inner.kraus.len());
    for n in &outer.kraus {
        for e in &inner.kraus {
            kraus.push(n.matmul(e)?);
        }
    }
    let label = match (outer.label(), inner.label()) {
        (Some(x), Some(y)) => Some(alloc::format!("{x} ∘ {y}")),
        _ => None,
    };
    Ok(KrausChannel {
        dim: outer.dim,
        kraus,
        label,
    })
}

/// Random mixture of unitaries ρ ↦ Σ pᵢ UᵢρUᵢ†.
pub fn random_unital_channel(n_qubits: u32, num_unitaries: usize, seed: u64) -> KrausChannel {
    assert!(num_unitaries >= 1, "need at least one unitary");
    let dim = 1usize << n_qubits;
    let mut rng = stream_rng(seed, 2);
    // exponential weights give a uniform point on the simplex
    let weights: Vec<f64> = (0..num_unitaries)
        .map(|_| -libm::log(1.0 - uniform(&mut rng)))
        .collect();
    let total: f64 = weights.iter().sum();
    let kraus = weights
        .iter()
        .map(|w| haar_unitary(dim, &mut rng).scale_real(libm::sqrt(w / total)))
        .collect();
    KrausChannel {
        dim,
        kraus,
        label: Some(alloc::format!("random-unital(n={n_qubits},m={num_unitaries},seed={seed})")),
    }
}

/// A POVM {M_k} with Σ M_k = I.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    elements: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        let first = elements.first().ok_or(QldpError::InvalidPovm {
            index: None,
            reason: "no elements",
        })?;
        let dim = first.rows();
        if !labels.is_empty() && labels.len() != elements.len() {
            return Err(QldpError::InvalidPovm {
                index: None,
                reason: "label count does not match element count",
            });
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (i, m) in elements.iter().enumerate() {
            if m.shape() != (dim, dim) {
                return Err(QldpError::InvalidPovm {
                    index: Some(i),
                    reason: "element shape differs",
                });
            }
            if m.hermitian_deviation() > HERMITIAN_TOL {
                return Err(QldpError::InvalidPovm {
                    index: Some(i),
                    reason: "element is not Hermitian",
                });
            }
            if hermitian_eigenvalues(m)?[0] < -CLAMP_TOL {
                return Err(QldpError::InvalidPovm {
                    index: Some(i),
                    reason: "element is not positive semi-definite",
                });
            }
            sum.add_assign_unchecked(m);
        }
        if sum.distance(&ComplexMatrix::identity(dim))? > POVM_TOL {
            return Err(QldpError::InvalidPovm {
                index: None,
                reason: "elements do not sum to identity",
            });
        }
        let labels = if labels.is_empty() {
            (0..elements.len()).map(|k| alloc::format!("{k}")).collect()
        } else {
            labels
        };
        Ok(Self {
            dim,
            elements,
            labels,
        })
    }

    /// Projective measurement in the computational basis.
    pub fn computational(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|k| {
                let e = crate::eig::one_hot(dim, k);
                ComplexMatrix::outer(&e, &e)
            })
            .collect();
        Self {
            dim,
            elements,
            labels: (0..dim).map(|k| alloc::format!("{k}")).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Outcome probabilities tr(M_k ρ).
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        self.elements
            .iter()
            .map(|m| rho.expectation(m).map(|z| z.re))
            .collect()
    }
}

/// Random POVM: M_k = S^{-1/2} A_k S^{-1/2} with A_k = G_k G_k† and S = Σ A_k.
pub fn random_povm(dim: usize, outcomes: usize, seed: u64) -> Povm {
    assert!(outcomes >= 1);
    let mut rng = stream_rng(seed, 3);
    let raw: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let g = gaussian_matrix(dim, dim, &mut rng);
            g.matmul(&g.adjoint()).unwrap().hermitian_part()
        })
        .collect();
    let mut total = ComplexMatrix::zeros(dim, dim);
    for a in &raw {
        total.add_assign_unchecked(a);
    }
    let w = pd_inverse_sqrt(&total).expect("Gaussian Gram sum is positive definite");
    let elements = raw
        .iter()
        .map(|a| w.matmul(a).unwrap().matmul(&w).unwrap().hermitian_part())
        .collect();
    Povm {
        dim,
        elements,
        labels: (0..outcomes).map(|k| alloc::format!("{k}")).collect(),
    }
}

/// Random channel with `kraus_count` operators: Gaussian A_k rescaled as
/// A_k S^{-1/2} with S = Σ A_k†A_k. Generally not unital.
pub fn random_channel(dim: usize, kraus_count: usize, seed: u64) -> KrausChannel {
    assert!(kraus_count >= 1);
    let mut rng = stream_rng(seed, 4);
    let raw: Vec<ComplexMatrix> = (0..kraus_count)
        .map(|_| gaussian_matrix(dim, dim, &mut rng))
        .collect();
    let mut total = ComplexMatrix::zeros(dim, dim);
    for a in &raw {
        total.add_assign_unchecked(&a.adjoint().matmul(a).unwrap().hermitian_part());
    }
    let w = pd_inverse_sqrt(&total).expect("Gaussian Gram sum is positive definite");
    KrausChannel {
        dim,
        kraus: raw.iter().map(|a| a.matmul(&w).unwrap()).collect(),
        label: None,
    }
}
