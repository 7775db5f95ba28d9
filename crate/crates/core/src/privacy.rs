//! Privacy analysis: the ε* finiteness decision, ε* optimization, the
//! closed-form catalog, measurement-specific LDP and post-processing.

use alloc::vec::Vec;
use core::fmt;

use crate::channel::{compose_serial, KrausChannel, Povm, UNITAL_TOL};
use crate::eig::eigenvalues_unchecked;
use crate::error::{QldpError, Result};
use crate::matrix::{vec_norm, inner, Complex, ComplexMatrix};
use crate::noise::NoiseSpec;
use crate::optimize::{maximize_bloch, maximize_pure_state, OptimizerOpts};
use crate::state::PureState;

/// Choi eigenvalues at or below this count as zero.
pub const CHOI_TOL: f64 = 1e-12;

/// Residual norm below which Gram-Schmidt drops a vector.
pub const SPAN_DROP_TOL: f64 = 1e-9;

/// λmin below this at any probe makes the leakage infinite.
pub const ZERO_EIG_TOL: f64 = 1e-12;

/// Subset enumeration cap for [`measurement_ldp`].
pub const DEFAULT_MAX_OUTCOMES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InfiniteReason {
    /// Fewer Kraus operators than dim².
    KrausCount,
    /// The adjoint's Choi matrix is singular.
    ChoiSingular,
    /// The search reached a state whose E†(ψ) has a vanishing eigenvalue.
    ZeroMinEigenvalue,
}

impl InfiniteReason {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::KrausCount => "kraus-count",
            Self::ChoiSingular => "choi-singular",
            Self::ZeroMinEigenvalue => "zero-min-eigenvalue",
        }
    }
}

impl fmt::Display for InfiniteReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A leakage value that may be unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Leakage {
    Finite(f64),
    Infinite,
}

impl Leakage {
    pub fn value(self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }

    /// Value with ∞ for the unbounded case.
    pub fn as_f64(self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for Leakage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EpsilonStar {
    Finite {
        value: f64,
        /// Maximizing state; `None` for closed-form values.
        witness: Option<PureState>,
    },
    Infinite {
        reason: InfiniteReason,
        /// Probe that exposed a zero eigenvalue, when there is one.
        evidence: Option<PureState>,
    },
}

impl EpsilonStar {
    fn closed(value: f64) -> Self {
        Self::Finite {
            value,
            witness: None,
        }
    }

    fn unbounded(reason: InfiniteReason) -> Self {
        Self::Infinite {
            reason,
            evidence: None,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Finite { value, .. } => Some(*value),
            Self::Infinite { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite { .. })
    }

    pub fn leakage(&self) -> Leakage {
        self.value().map_or(Leakage::Infinite, Leakage::Finite)
    }

    pub fn reason(&self) -> Option<InfiniteReason> {
        match self {
            Self::Infinite { reason, .. } => Some(*reason),
            Self::Finite { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&PureState> {
        match self {
            Self::Finite { witness, .. } => witness.as_ref(),
            Self::Infinite { evidence, .. } => evidence.as_ref(),
        }
    }
}

/// Result of the finiteness decision.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitenessReport {
    pub kraus_count: usize,
    pub dim: usize,
    /// K < dim² decided the verdict without further work.
    pub short_circuit: bool,
    /// `None` when short-circuited.
    pub choi_min_eig: Option<f64>,
    /// `None` when short-circuited.
    pub span_rank: Option<usize>,
    pub finite: bool,
}

impl FinitenessReport {
    pub fn infinite_reason(&self) -> Option<InfiniteReason> {
        match (self.finite, self.short_circuit) {
            (true, _) => None,
            (false, true) => Some(InfiniteReason::KrausCount),
            (false, false) => Some(InfiniteReason::ChoiSingular),
        }
    }
}

/// Rank of a set of vectors by modified Gram-Schmidt with an absolute drop
/// tolerance on the residual norm.
pub fn span_rank(vectors: &[&[Complex]], drop_tol: f64) -> usize {
    let mut basis: Vec<Vec<Complex>> = Vec::new();
    for v in vectors {
        let mut r = v.to_vec();
        for _ in 0..2 {
            for q in &basis {
                let proj = inner(q, &r);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= proj * qi;
                }
            }
        }
        let norm = vec_norm(&r);
        if norm > drop_tol {
            basis.push(r.into_iter().map(|z| z / norm).collect());
        }
    }
    basis.len()
}

/// Decides whether ε* is finite: the adjoint's Choi matrix must be
/// positive definite, equivalently the E_k† must span all dim×dim matrices.
/// Both tests run and must agree.
pub fn check_finite(channel: &KrausChannel) -> Result<FinitenessReport> {
    let dim = channel.dim();
    let k = channel.kraus_count();
    if k < dim * dim {
        return Ok(FinitenessReport {
            kraus_count: k,
            dim,
            short_circuit: true,
            choi_min_eig: None,
            span_rank: None,
            finite: false,
        });
    }
    let choi_min = eigenvalues_unchecked(&channel.choi_of_adjoint())[0];
    let adjoints: Vec<ComplexMatrix> = channel.kraus().iter().map(ComplexMatrix::adjoint).collect();
    let flat: Vec<&[Complex]> = adjoints.iter().map(ComplexMatrix::as_slice).collect();
    let rank = span_rank(&flat, SPAN_DROP_TOL);
    let by_choi = choi_min > CHOI_TOL;
    let by_span = rank == dim * dim;
    if by_choi != by_span {
        return Err(QldpError::FinitenessDisagreement {
            choi_min_eig: choi_min,
            span_rank: rank,
            dim,
        });
    }
    Ok(FinitenessReport {
        kraus_count: k,
        dim,
        short_circuit: false,
        choi_min_eig: Some(choi_min),
        span_rank: Some(rank),
        finite: by_choi,
    })
}

/// ln λmax − ln λmin of a PSD matrix, +∞ when λmin < [`ZERO_EIG_TOL`].
pub(crate) fn log_condition(m: &ComplexMatrix) -> f64 {
    let vals = eigenvalues_unchecked(m);
    let (lo, hi) = (vals[0], vals[vals.len() - 1]);
    if lo < ZERO_EIG_TOL {
        f64::INFINITY
    } else {
        libm::log(hi) - libm::log(lo)
    }
}

/// The leakage objective ln(λmax/λmin) of E†(ψ) at a single state.
pub fn leakage_at(channel: &KrausChannel, psi: &PureState) -> Result<Leakage> {
    if psi.dim() != channel.dim() {
        return Err(QldpError::DimensionMismatch {
            op: "leakage_at",
            left: (channel.dim(), 1),
            right: (psi.dim(), 1),
        });
    }
    let v = log_condition(&channel.adjoint_of_pure(psi.amplitudes()));
    Ok(if v.is_finite() {
        Leakage::Finite(v)
    } else {
        Leakage::Infinite
    })
}

/// ε* by multi-start search over pure states, after the finiteness check.
///
/// The returned value is the largest objective value evaluated, so it is a
/// lower bound on the true maximum.
pub fn epsilon_star(channel: &KrausChannel, opts: &OptimizerOpts) -> Result<EpsilonStar> {
    opts.validate()?;
    let report = check_finite(channel)?;
    if let Some(reason) = report.infinite_reason() {
        return Ok(EpsilonStar::unbounded(reason));
    }
    let f = |psi: &[Complex]| log_condition(&channel.adjoint_of_pure(psi));
    let found = maximize_pure_state(channel.dim(), &f, opts);
    Ok(if found.is_singular() {
        EpsilonStar::Infinite {
            reason: InfiniteReason::ZeroMinEigenvalue,
            evidence: Some(found.witness()),
        }
    } else {
        EpsilonStar::Finite {
            value: found.value,
            witness: Some(found.witness()),
        }
    })
}

/// ε* of a unital qubit channel from the largest eigenvalue alone:
/// ln(m) − ln(1 − m) with m the maximum of λmax(E†(ψ)) over the Bloch sphere.
pub fn epsilon_star_1qubit(channel: &KrausChannel, opts: &OptimizerOpts) -> Result<EpsilonStar> {
    opts.validate()?;
    if channel.dim() != 2 {
        return Err(QldpError::DimensionMismatch {
            op: "epsilon_star_1qubit",
            left: (2, 2),
            right: (channel.dim(), channel.dim()),
        });
    }
    let deviation = channel.unitality_deviation();
    if deviation > UNITAL_TOL {
        return Err(QldpError::NonUnital { deviation });
    }
    let report = check_finite(channel)?;
    if let Some(reason) = report.infinite_reason() {
        return Ok(EpsilonStar::unbounded(reason));
    }
    let f = |psi: &[Complex]| {
        let vals = eigenvalues_unchecked(&channel.adjoint_of_pure(psi));
        vals[vals.len() - 1]
    };
    let best = maximize_bloch(&f, opts);
    let m = best.value;
    let witness = PureState::bloch(best.theta, best.phi);
    if 1.0 - m < ZERO_EIG_TOL {
        return Ok(EpsilonStar::Infinite {
            reason: InfiniteReason::ZeroMinEigenvalue,
            evidence: Some(witness),
        });
    }
    Ok(EpsilonStar::Finite {
        value: libm::log(m) - libm::log(1.0 - m),
        witness: Some(witness),
    })
}

/// Catalog closed forms for ε*.
pub fn closed_form_epsilon(spec: &NoiseSpec) -> Result<EpsilonStar> {
    use InfiniteReason::{ChoiSingular, KrausCount};
    spec.validate()?;
    Ok(match *spec {
        NoiseSpec::BitFlip { .. }
        | NoiseSpec::BitPhaseFlip { .. }
        | NoiseSpec::PhaseFlip { .. }
        | NoiseSpec::PhaseDamping { .. }
        | NoiseSpec::AmplitudeDamping { .. } => EpsilonStar::unbounded(KrausCount),
        NoiseSpec::Depolarizing { p } => {
            if p >= 1.0 {
                EpsilonStar::unbounded(ChoiSingular)
            } else {
                EpsilonStar::closed(libm::log1p(p) - libm::log1p(-p))
            }
        }
        NoiseSpec::DepolarizingN { p, n } => {
            if p >= 1.0 {
                EpsilonStar::unbounded(ChoiSingular)
            } else {
                let scale = libm::ldexp(1.0, n as i32);
                EpsilonStar::closed(libm::log1p(scale * p / (1.0 - p)))
            }
        }
        NoiseSpec::GeneralizedAmplitudeDamping { q, gamma } => {
            if q == 0.0 || q == 1.0 || gamma == 0.0 {
                EpsilonStar::unbounded(ChoiSingular)
            } else {
                let s = libm::sqrt((1.0 - 4.0 * gamma * q * (1.0 - q)).max(0.0));
                EpsilonStar::closed(libm::log1p(s) - libm::log1p(-s))
            }
        }
    })
}

/// Classical LDP leakage of measuring E(ρ) with `povm`: the largest
/// ln(λmax/λmin) of E†(M_S) over non-empty proper outcome subsets S.
pub fn measurement_ldp(channel: &KrausChannel, povm: &Povm, max_outcomes: usize) -> Result<Leakage> {
    if povm.dim() != channel.dim() {
        return Err(QldpError::DimensionMismatch {
            op: "measurement_ldp",
            left: (channel.dim(), channel.dim()),
            right: (povm.dim(), povm.dim()),
        });
    }
    let k = povm.len();
    if k > max_outcomes || k >= usize::BITS as usize {
        return Err(QldpError::TooManyOutcomes {
            outcomes: k,
            cap: max_outcomes,
        });
    }
    let images: Vec<ComplexMatrix> = povm
        .elements()
        .iter()
        .map(|m| channel.apply_adjoint(m).map(|a| a.hermitian_part()))
        .collect::<Result<_>>()?;
    let dim = channel.dim();
    let full = (1usize << k) - 1;
    let mut worst = 0.0f64;
    for mask in 1..full {
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (i, img) in images.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum.add_assign_unchecked(img);
            }
        }
        let vals = eigenvalues_unchecked(&sum);
        let (lo, hi) = (vals[0], vals[dim - 1]);
        if lo <= ZERO_EIG_TOL {
            return Ok(Leakage::Infinite);
        }
        worst = worst.max(libm::log(hi) - libm::log(lo));
    }
    Ok(Leakage::Finite(worst))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostProcessingReport {
    pub eps_inner: f64,
    pub eps_composed: Leakage,
    pub holds: bool,
}

/// Checks ε*(outer ∘ inner) ≤ ε*(inner) up to twice the optimizer tolerance.
pub fn verify_post_processing(
    inner: &KrausChannel,
    outer: &KrausChannel,
    opts: &OptimizerOpts,
) -> Result<PostProcessingReport> {
    let composed = compose_serial(outer, inner)?;
    let eps_inner = epsilon_star(inner, opts)?
        .value()
        .ok_or(QldpError::InnerNotFinite)?;
    let eps_composed = epsilon_star(&composed, opts)?.leakage();
    let holds = match eps_composed {
        Leakage::Finite(v) => v <= eps_inner + 2.0 * opts.tol,
        Leakage::Infinite => false,
    };
    Ok(PostProcessingReport {
        eps_inner,
        eps_composed,
        holds,
    })
}
