//! Quantum local differential privacy (QLDP) analysis for channels given by
//! Kraus operators.
//!
//! The crate is `no_std` with `alloc`. Enabling the default `std` feature
//! only adds thread-parallel optimizer restarts; results are identical with
//! and without it.
//!
//! Layout:
//!
//! * [`matrix`], [`eig`]: dense complex linear algebra and the Hermitian
//!   Jacobi eigensolver.
//! * [`state`], [`channel`], [`noise`]: quantum states, Kraus channels,
//!   POVMs and the standard single-qubit noise catalog.
//! * [`optimize`]: multi-start Nelder-Mead search over pure states.
//! * [`privacy`]: finiteness tests, ε* optimization and closed forms,
//!   measurement-specific LDP, post-processing checks.
//! * [`utility`]: fidelity / anti-trace-distance utilities, the unital
//!   trade-off bound and the optimal depolarizing mechanism.
//! * [`composition`]: tensor composition, additivity verification and the
//!   Bell-state demonstration.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod channel;
pub mod composition;
pub mod eig;
pub mod error;
pub mod matrix;
pub mod noise;
pub mod optimize;
pub mod privacy;
pub mod rng;
pub mod state;
pub mod utility;

pub use channel::{KrausChannel, Povm};
pub use composition::{AdditivityOutcome, BellDemo, CompositionReport};
pub use eig::HermitianEig;
pub use error::{QldpError, Result};
pub use matrix::{Complex, ComplexMatrix};
pub use noise::{NoiseKind, NoiseSpec};
pub use optimize::OptimizerOpts;
pub use privacy::{EpsilonStar, FinitenessReport, InfiniteReason, Leakage};
pub use state::{DensityMatrix, PureState};
pub use utility::{UtilityKind, UtilityReport};
