use core::fmt;

/// Errors raised by the analysis library.
#[derive(Debug, Clone, PartialEq)]
pub enum QldpError {
    /// Operand shapes are incompatible for the named operation.
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// The operation needs a square matrix.
    NotSquare { rows: usize, cols: usize },
    /// Matrix construction failed (zero dimension, wrong length or a non-finite entry).
    InvalidMatrix(&'static str),
    /// Input to a Hermitian routine is not Hermitian within tolerance.
    NotHermitian { deviation: f64 },
    /// Jacobi sweeps hit the cap before the off-diagonal mass vanished.
    NoConvergence { sweeps: usize, residual: f64 },
    /// A PSD routine found a materially negative eigenvalue.
    NegativeEigenvalue { value: f64 },
    /// A state failed its invariants.
    InvalidState(&'static str),
    /// Kraus operators do not satisfy Σ E†E = I.
    NotTracePreserving { deviation: f64 },
    /// A channel was built from an empty Kraus list.
    EmptyKraus,
    /// A POVM failed its invariants.
    InvalidPovm { index: Option<usize>, reason: &'static str },
    /// A numeric parameter is outside its admissible range.
    InvalidParameter { name: &'static str, value: f64 },
    /// A noise parameter the kind needs was not supplied.
    MissingParameter { kind: &'static str, name: &'static str },
    /// A noise parameter was supplied that the kind does not take.
    UnexpectedParameter { kind: &'static str, name: &'static str },
    /// The single-qubit fast path only applies to unital channels.
    NonUnital { deviation: f64 },
    /// The Choi test and the span-rank test disagree.
    FinitenessDisagreement {
        choi_min_eig: f64,
        span_rank: usize,
        dim: usize,
    },
    /// Subset enumeration guard for measurement LDP.
    TooManyOutcomes { outcomes: usize, cap: usize },
    /// Post-processing verification needs a finite inner mechanism.
    InnerNotFinite,
    /// A computed quantity disagreed with its closed form beyond tolerance.
    ConsistencyCheck { what: &'static str, deviation: f64 },
}

pub type Result<T> = core::result::Result<T, QldpError>;

impl fmt::Display for QldpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DimensionMismatch { op, left, right } => write!(
                f,
                "{op}: dimension mismatch {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Self::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, expected square"),
            Self::InvalidMatrix(why) => write!(f, "invalid matrix: {why}"),
            Self::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (deviation {deviation:.3e})")
            }
            Self::NoConvergence { sweeps, residual } => write!(
                f,
                "eigensolver did not converge after {sweeps} sweeps (best residual {residual:.3e})"
            ),
            Self::NegativeEigenvalue { value } => {
                write!(f, "matrix has a negative eigenvalue {value:.3e}")
            }
            Self::InvalidState(why) => write!(f, "invalid state: {why}"),
            Self::NotTracePreserving { deviation } => write!(
                f,
                "Kraus operators are not trace preserving (deviation {deviation:.3e})"
            ),
            Self::EmptyKraus => write!(f, "channel needs at least one Kraus operator"),
            Self::InvalidPovm { index, reason } => match index {
                Some(i) => write!(f, "invalid POVM element {i}: {reason}"),
                None => write!(f, "invalid POVM: {reason}"),
            },
            Self::MissingParameter { kind, name } => {
                write!(f, "{kind} noise needs parameter `{name}`")
            }
            Self::UnexpectedParameter { kind, name } => {
                write!(f, "{kind} noise does not take parameter `{name}`")
            }
            Self::InvalidParameter { name, value } => {
                write!(f, "parameter {name} = {value} is out of range")
            }
            Self::NonUnital { deviation } => write!(
                f,
                "channel is not unital (deviation {deviation:.3e}); use the general epsilon_star"
            ),
            Self::FinitenessDisagreement {
                choi_min_eig,
                span_rank,
                dim,
            } => write!(
                f,
                "finiteness criteria disagree: choi min eigenvalue {choi_min_eig:.3e}, span rank {span_rank} of {}",
                dim * dim
            ),
            Self::TooManyOutcomes { outcomes, cap } => {
                write!(f, "POVM has {outcomes} outcomes, enumeration cap is {cap}")
            }
            Self::InnerNotFinite => write!(f, "inner mechanism has infinite epsilon*"),
            Self::ConsistencyCheck { what, deviation } => {
                write!(f, "{what} deviates from its closed form by {deviation:.3e}")
            }
        }
    }
}

impl core::error::Error for QldpError {}
