//! The standard noise catalog.
//!
//! `p` is always the noiseless probability (p = 1 is the identity channel),
//! `gamma` the damping probability and `q` the GAD mixing probability.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::channel::KrausChannel;
use crate::error::{QldpError, Result};
use crate::matrix::{pauli, ComplexMatrix};

/// Largest qubit count accepted by [`NoiseSpec::validate`] for `DepN`.
pub const MAX_DEPN_QUBITS: u32 = 30;

/// Largest qubit count for which [`make_noise`] materializes the 4ⁿ Kraus set.
pub const MAX_DEPN_KRAUS_QUBITS: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    XF,
    YF,
    ZF,
    Dep,
    PD,
    AD,
    GAD,
    DepN,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 8] = [
        Self::XF,
        Self::YF,
        Self::ZF,
        Self::Dep,
        Self::PD,
        Self::AD,
        Self::GAD,
        Self::DepN,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::XF => "XF",
            Self::YF => "YF",
            Self::ZF => "ZF",
            Self::Dep => "Dep",
            Self::PD => "PD",
            Self::AD => "AD",
            Self::GAD => "GAD",
            Self::DepN => "DepN",
        }
    }

    /// Case-insensitive lookup by short name.
    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(name))
    }

    /// Parameter names the kind takes, in canonical order.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Self::XF | Self::YF | Self::ZF | Self::Dep => &["p"],
            Self::PD | Self::AD => &["gamma"],
            Self::GAD => &["q", "gamma"],
            Self::DepN => &["p", "n"],
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Optional raw parameters, as collected by a parser.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NoiseParams {
    pub p: Option<f64>,
    pub gamma: Option<f64>,
    pub q: Option<f64>,
    pub n: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    BitFlip { p: f64 },
    BitPhaseFlip { p: f64 },
    PhaseFlip { p: f64 },
    Depolarizing { p: f64 },
    PhaseDamping { gamma: f64 },
    AmplitudeDamping { gamma: f64 },
    GeneralizedAmplitudeDamping { q: f64, gamma: f64 },
    DepolarizingN { p: f64, n: u32 },
}

fn unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(QldpError::InvalidParameter { name, value })
    }
}

impl NoiseSpec {
    pub fn kind(&self) -> NoiseKind {
        match self {
            Self::BitFlip { .. } => NoiseKind::XF,
            Self::BitPhaseFlip { .. } => NoiseKind::YF,
            Self::PhaseFlip { .. } => NoiseKind::ZF,
            Self::Depolarizing { .. } => NoiseKind::Dep,
            Self::PhaseDamping { .. } => NoiseKind::PD,
            Self::AmplitudeDamping { .. } => NoiseKind::AD,
            Self::GeneralizedAmplitudeDamping { .. } => NoiseKind::GAD,
            Self::DepolarizingN { .. } => NoiseKind::DepN,
        }
    }

    pub fn n_qubits(&self) -> u32 {
        match self {
            Self::DepolarizingN { n, .. } => *n,
            _ => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::BitFlip { p }
            | Self::BitPhaseFlip { p }
            | Self::PhaseFlip { p }
            | Self::Depolarizing { p } => unit_interval("p", p),
            Self::PhaseDamping { gamma } | Self::AmplitudeDamping { gamma } => {
                unit_interval("gamma", gamma)
            }
            Self::GeneralizedAmplitudeDamping { q, gamma } => {
                unit_interval("q", q)?;
                unit_interval("gamma", gamma)
            }
            Self::DepolarizingN { p, n } => {
                unit_interval("p", p)?;
                if n == 0 || n > MAX_DEPN_QUBITS {
                    return Err(QldpError::InvalidParameter {
                        name: "n",
                        value: n as f64,
                    });
                }
                Ok(())
            }
        }
    }

    /// Builds and validates a spec, rejecting missing or irrelevant parameters.
    pub fn from_params(kind: NoiseKind, params: NoiseParams) -> Result<Self> {
        let allowed = kind.parameters();
        let supplied = [
            ("p", params.p.is_some()),
            ("gamma", params.gamma.is_some()),
            ("q", params.q.is_some()),
            ("n", params.n.is_some()),
        ];
        for (name, present) in supplied {
            if present && !allowed.contains(&name) {
                return Err(QldpError::UnexpectedParameter {
                    kind: kind.as_str(),
                    name,
                });
            }
        }
        let need = |name: &'static str, v: Option<f64>| {
            v.ok_or(QldpError::MissingParameter {
                kind: kind.as_str(),
                name,
            })
        };
        let spec = match kind {
            NoiseKind::XF => Self::BitFlip { p: need("p", params.p)? },
            NoiseKind::YF => Self::BitPhaseFlip { p: need("p", params.p)? },
            NoiseKind::ZF => Self::PhaseFlip { p: need("p", params.p)? },
            NoiseKind::Dep => Self::Depolarizing { p: need("p", params.p)? },
            NoiseKind::PD => Self::PhaseDamping {
                gamma: need("gamma", params.gamma)?,
            },
            NoiseKind::AD => Self::AmplitudeDamping {
                gamma: need("gamma", params.gamma)?,
            },
            NoiseKind::GAD => Self::GeneralizedAmplitudeDamping {
                q: need("q", params.q)?,
                gamma: need("gamma", params.gamma)?,
            },
            NoiseKind::DepN => Self::DepolarizingN {
                p: need("p", params.p)?,
                n: params.n.ok_or(QldpError::MissingParameter {
                    kind: kind.as_str(),
                    name: "n",
                })?,
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Canonical `KIND:name=value,...` form.
    pub fn to_spec_string(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.kind())?;
        match *self {
            Self::BitFlip { p }
            | Self::BitPhaseFlip { p }
            | Self::PhaseFlip { p }
            | Self::Depolarizing { p } => write!(f, "p={p}"),
            Self::PhaseDamping { gamma } | Self::AmplitudeDamping { gamma } => {
                write!(f, "gamma={gamma}")
            }
            Self::GeneralizedAmplitudeDamping { q, gamma } => write!(f, "q={q},gamma={gamma}"),
            Self::DepolarizingN { p, n } => write!(f, "p={p},n={n}"),
        }
    }
}

fn sqrt(x: f64) -> f64 {
    libm::sqrt(x.max(0.0))
}

fn real2(a: f64, b: f64, cc: f64, d: f64) -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[a, b, cc, d]).expect("2x2")
}

fn pauli_mixture(p: f64, pauli_op: ComplexMatrix) -> Vec<ComplexMatrix> {
    alloc::vec![
        ComplexMatrix::identity(2).scale_real(sqrt(p)),
        pauli_op.scale_real(sqrt(1.0 - p)),
    ]
}

/// Kraus set for ρ ↦ pρ + (1−p)I/2ⁿ built from the 4ⁿ Pauli words.
fn depolarizing_kraus(p: f64, n: u32) -> Vec<ComplexMatrix> {
    let words = 1usize << (2 * n);
    let w = words as f64;
    let id_weight = sqrt((1.0 + (w - 1.0) * p) / w);
    let off_weight = sqrt((1.0 - p) / w);
    (0..words)
        .map(|code| {
            let scale = if code == 0 { id_weight } else { off_weight };
            pauli::word(n as usize, code).scale_real(scale)
        })
        .collect()
}

/// Kraus realization of a catalog noise.
pub fn make_noise(spec: &NoiseSpec) -> Result<KrausChannel> {
    spec.validate()?;
    let kraus = match *spec {
        NoiseSpec::BitFlip { p } => pauli_mixture(p, pauli::x()),
        NoiseSpec::BitPhaseFlip { p } => pauli_mixture(p, pauli::y()),
        NoiseSpec::PhaseFlip { p } => pauli_mixture(p, pauli::z()),
        NoiseSpec::Depolarizing { p } => depolarizing_kraus(p, 1),
        NoiseSpec::PhaseDamping { gamma } => alloc::vec![
            real2(1.0, 0.0, 0.0, sqrt(1.0 - gamma)),
            real2(0.0, 0.0, 0.0, sqrt(gamma)),
        ],
        NoiseSpec::AmplitudeDamping { gamma } => alloc::vec![
            real2(1.0, 0.0, 0.0, sqrt(1.0 - gamma)),
            real2(0.0, sqrt(gamma), 0.0, 0.0),
        ],
        NoiseSpec::GeneralizedAmplitudeDamping { q, gamma } => {
            let (a, b) = (sqrt(q), sqrt(1.0 - q));
            alloc::vec![
                real2(a, 0.0, 0.0, a * sqrt(1.0 - gamma)),
                real2(0.0, a * sqrt(gamma), 0.0, 0.0),
                real2(0.0, 0.0, b * sqrt(gamma), 0.0),
                real2(b * sqrt(1.0 - gamma), 0.0, 0.0, b),
            ]
        }
        NoiseSpec::DepolarizingN { p, n } => {
            if n > MAX_DEPN_KRAUS_QUBITS {
                return Err(QldpError::InvalidParameter {
                    name: "n",
                    value: n as f64,
                });
            }
            depolarizing_kraus(p, n)
        }
    };
    KrausChannel::new(kraus, Some(spec.to_spec_string()))
}
