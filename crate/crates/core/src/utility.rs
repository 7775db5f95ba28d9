//! Utility of a mechanism (worst-case fidelity and anti-trace-distance),
//! the unital trade-off bound and the optimal depolarizing mechanism.

use alloc::vec::Vec;

use crate::channel::{KrausChannel, UNITAL_TOL};
use crate::eig::{eigenvalues_unchecked, one_hot};
use crate::error::{QldpError, Result};
use crate::matrix::{inner, Complex, ComplexMatrix};
use crate::noise::{make_noise, NoiseSpec};
use crate::optimize::{maximize_pure_state, OptimizerOpts};
use crate::privacy::epsilon_star;
use crate::state::PureState;

/// Largest budget accepted by [`make_optimal_mechanism`].
pub const MAX_EPSILON: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UtilityKind {
    Fidelity,
    AntiTrace,
}

impl UtilityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Fidelity => "fidelity",
            Self::AntiTrace => "anti_trace",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtilityReport {
    pub fidelity_utility: f64,
    pub anti_trace_utility: f64,
    pub fidelity_witness: PureState,
    pub trace_witness: PureState,
    /// Trade-off bound at the channel's ε*, for unital channels with finite ε*.
    pub bound: Option<f64>,
}

/// ⟨ψ|N(ψ)|ψ⟩ = Σ_k |⟨ψ|E_k|ψ⟩|².
fn pure_fidelity(channel: &KrausChannel, psi: &[Complex]) -> f64 {
    channel
        .kraus()
        .iter()
        .map(|k| inner(psi, &k.mul_vec(psi)).norm_sqr())
        .sum()
}

/// T(N(ψ), ψ) for a unit vector ψ.
fn pure_trace_distance(channel: &KrausChannel, psi: &[Complex]) -> f64 {
    let mut diff = channel.forward_of_pure(psi);
    diff.add_outer_assign(psi, -1.0);
    0.5 * eigenvalues_unchecked(&diff).iter().map(|v| v.abs()).sum::<f64>()
}

/// min over pure ψ of F(N(ψ), ψ), with the minimizing state.
pub fn fidelity_utility(channel: &KrausChannel, opts: &OptimizerOpts) -> Result<(f64, PureState)> {
    opts.validate()?;
    let f = |psi: &[Complex]| -pure_fidelity(channel, psi);
    let r = maximize_pure_state(channel.dim(), &f, opts);
    Ok((-r.value, r.witness()))
}

/// 1 − max over pure ψ of T(N(ψ), ψ), with the maximizing state.
pub fn anti_trace_utility(channel: &KrausChannel, opts: &OptimizerOpts) -> Result<(f64, PureState)> {
    opts.validate()?;
    let f = |psi: &[Complex]| pure_trace_distance(channel, psi);
    let r = maximize_pure_state(channel.dim(), &f, opts);
    Ok((1.0 - r.value, r.witness()))
}

fn qubit_count(dim: usize) -> Option<u32> {
    dim.is_power_of_two().then(|| dim.trailing_zeros())
}

/// Both utilities, plus the trade-off bound when it applies.
pub fn utility_report(channel: &KrausChannel, opts: &OptimizerOpts) -> Result<UtilityReport> {
    let (fidelity_utility, fidelity_witness) = fidelity_utility(channel, opts)?;
    let (anti_trace_utility, trace_witness) = anti_trace_utility(channel, opts)?;
    let bound = match qubit_count(channel.dim()) {
        Some(n) if channel.is_unital(UNITAL_TOL) => {
            epsilon_star(channel, opts)?.value().map(|e| tradeoff_bound(n, e))
        }
        _ => None,
    };
    Ok(UtilityReport {
        fidelity_utility,
        anti_trace_utility,
        fidelity_witness,
        trace_witness,
        bound,
    })
}

/// Catalog closed forms (fidelity, anti-trace); the two coincide for every
/// catalog noise.
pub fn closed_form_utility(spec: &NoiseSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    let u = match *spec {
        NoiseSpec::BitFlip { p } | NoiseSpec::BitPhaseFlip { p } | NoiseSpec::PhaseFlip { p } => p,
        NoiseSpec::Depolarizing { p } => (1.0 + p) / 2.0,
        NoiseSpec::DepolarizingN { p, n } => {
            let d = libm::ldexp(1.0, n as i32);
            ((d - 1.0) * p + 1.0) / d
        }
        NoiseSpec::PhaseDamping { gamma } => (1.0 + libm::sqrt(1.0 - gamma)) / 2.0,
        NoiseSpec::AmplitudeDamping { gamma } => 1.0 - gamma,
        NoiseSpec::GeneralizedAmplitudeDamping { q, gamma } => {
            if q >= 0.5 {
                1.0 - q * gamma
            } else {
                1.0 - (1.0 - q) * gamma
            }
        }
    };
    Ok((u, u))
}

/// eᵋ/(eᵋ + 2ⁿ − 1), the best utility a unital ε-QLDP mechanism can reach.
pub fn tradeoff_bound(n_qubits: u32, epsilon: f64) -> f64 {
    let others = libm::ldexp(1.0, n_qubits as i32) - 1.0;
    1.0 / (1.0 + others * libm::exp(-epsilon))
}

fn check_budget(epsilon: f64) -> Result<()> {
    if (0.0..=MAX_EPSILON).contains(&epsilon) {
        Ok(())
    } else {
        Err(QldpError::InvalidParameter {
            name: "epsilon",
            value: epsilon,
        })
    }
}

/// Noiseless probability of the depolarizing channel with ε* = `epsilon`.
pub fn optimal_noiseless_probability(n_qubits: u32, epsilon: f64) -> Result<f64> {
    check_budget(epsilon)?;
    let x = libm::expm1(epsilon);
    Ok(x / (x + libm::ldexp(1.0, n_qubits as i32)))
}

/// The n-qubit depolarizing channel ρ ↦ ((eᵋ−1)ρ + I)/(eᵋ + 2ⁿ − 1).
pub fn make_optimal_mechanism(n_qubits: u32, epsilon: f64) -> Result<KrausChannel> {
    let p = optimal_noiseless_probability(n_qubits, epsilon)?;
    let spec = if n_qubits == 1 {
        NoiseSpec::Depolarizing { p }
    } else {
        NoiseSpec::DepolarizingN { p, n: n_qubits }
    };
    make_noise(&spec)
}

/// Smallest ε at which the optimal mechanism reaches utility `target`:
/// ln[(2ⁿ−1)(1/(1−target) − 1)], clamped at 0.
///
/// Fidelity and anti-trace utility coincide on the optimal mechanism, so
/// `kind` does not change the value.
pub fn min_epsilon_for_utility(n_qubits: u32, target: f64, kind: UtilityKind) -> Result<f64> {
    let _ = kind;
    if !(0.0..1.0).contains(&target) {
        return Err(QldpError::InvalidParameter {
            name: "target",
            value: target,
        });
    }
    let others = libm::ldexp(1.0, n_qubits as i32) - 1.0;
    let eps = libm::log(others) + libm::log(target) - libm::log1p(-target);
    Ok(if eps > 0.0 { eps } else { 0.0 })
}

/// Pr(read k | prepared j) for the optimal mechanism, measured in the
/// computational basis. Checked against the randomized-response closed form.
pub fn randomized_response_matrix(n_qubits: u32, epsilon: f64) -> Result<Vec<Vec<f64>>> {
    let channel = make_optimal_mechanism(n_qubits, epsilon)?;
    let dim = channel.dim();
    let denom = libm::exp(epsilon) + (dim as f64 - 1.0);
    let (keep, flip) = (libm::exp(epsilon) / denom, 1.0 / denom);
    let mut rows = Vec::with_capacity(dim);
    let mut deviation = 0.0f64;
    for j in 0..dim {
        let out: ComplexMatrix = channel.forward_of_pure(&one_hot(dim, j));
        let row: Vec<f64> = (0..dim).map(|k| out[(k, k)].re).collect();
        for (k, v) in row.iter().enumerate() {
            let expect = if k == j { keep } else { flip };
            deviation = deviation.max((v - expect).abs());
        }
        rows.push(row);
    }
    if deviation > 1e-10 {
        return Err(QldpError::ConsistencyCheck {
            what: "randomized-response matrix",
            deviation,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::privacy::closed_form_epsilon;
    use crate::state::random_density_matrix;

    fn quick() -> OptimizerOpts {
        OptimizerOpts {
            restarts: 8,
            ..OptimizerOpts::default()
        }
    }

    fn noise(spec: NoiseSpec) -> KrausChannel {
        make_noise(&spec).unwrap()
    }

    #[test]
    fn fidelity_examples() {
        let (f, w) = fidelity_utility(&noise(NoiseSpec::BitFlip { p: 0.6 }), &quick()).unwrap();
        assert!((f - 0.6).abs() < 1e-7);
        // witness has ⟨X⟩ = 0
        let x = crate::matrix::pauli::x();
        assert!(inner(w.amplitudes(), &x.mul_vec(w.amplitudes())).norm() < 1e-3);
        let (f, _) = fidelity_utility(&noise(NoiseSpec::Depolarizing { p: 0.5 }), &quick()).unwrap();
        assert!((f - 0.75).abs() < 1e-7);
        let (f, _) = fidelity_utility(&KrausChannel::identity(2), &quick()).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn anti_trace_examples() {
        let (t, _) = anti_trace_utility(&noise(NoiseSpec::PhaseDamping { gamma: 0.36 }), &quick()).unwrap();
        assert!((t - 0.9).abs() < 1e-7);
        let (t, _) = anti_trace_utility(&noise(NoiseSpec::AmplitudeDamping { gamma: 0.3 }), &quick()).unwrap();
        assert!((t - 0.7).abs() < 1e-7);
        let (t, _) = anti_trace_utility(&KrausChannel::identity(2), &quick()).unwrap();
        assert!((t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_utility_examples() {
        let gad = NoiseSpec::GeneralizedAmplitudeDamping { q: 0.75, gamma: 0.4 };
        assert!((closed_form_utility(&gad).unwrap().0 - 0.7).abs() < 1e-15);
        let d3 = NoiseSpec::DepolarizingN { p: 0.5, n: 3 };
        assert!((closed_form_utility(&d3).unwrap().0 - 0.5625).abs() < 1e-15);
        assert_eq!(closed_form_utility(&NoiseSpec::Depolarizing { p: 1.0 }).unwrap(), (1.0, 1.0));
        // both GAD branches give 1 − γ/2 at q = 1/2
        let half = NoiseSpec::GeneralizedAmplitudeDamping { q: 0.5, gamma: 0.3 };
        assert!((closed_form_utility(&half).unwrap().0 - 0.85).abs() < 1e-15);
    }

    #[test]
    fn tradeoff_examples() {
        assert!((tradeoff_bound(1, libm::log(3.0)) - 0.75).abs() < 1e-15);
        for n in 1..5 {
            assert!((tradeoff_bound(n, 0.0) - 1.0 / (1u32 << n) as f64).abs() < 1e-15);
        }
        assert!((tradeoff_bound(2, libm::log(5.0)) - 0.625).abs() < 1e-15);
        assert_eq!(tradeoff_bound(1, f64::INFINITY), 1.0);
    }

    #[test]
    fn optimal_mechanism_examples() {
        let zero = make_optimal_mechanism(1, 0.0).unwrap();
        let rho = random_density_matrix(2, 4);
        let out = zero.apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-12);

        let ln3 = make_optimal_mechanism(1, libm::log(3.0)).unwrap();
        let dep = noise(NoiseSpec::Depolarizing { p: 0.5 });
        for (a, b) in ln3.kraus().iter().zip(dep.kraus()) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }

        let m = make_optimal_mechanism(2, libm::log(7.0)).unwrap();
        let (f, _) = fidelity_utility(&m, &quick()).unwrap();
        assert!((f - 0.7).abs() < 1e-6);

        for (n, eps) in [(1u32, 0.3), (2, 1.7), (3, 2.5)] {
            let ch = make_optimal_mechanism(n, eps).unwrap();
            let dim = 1usize << n;
            let denom = libm::exp(eps) + dim as f64 - 1.0;
            let rho = random_density_matrix(dim, n as u64);
            let expect = rho
                .matrix()
                .scale_real(libm::expm1(eps) / denom)
                .add(&ComplexMatrix::identity(dim).scale_real(1.0 / denom))
                .unwrap();
            assert!(ch.apply(&rho).unwrap().matrix().max_abs_diff(&expect) < 1e-10);
            let p = optimal_noiseless_probability(n, eps).unwrap();
            let spec = NoiseSpec::DepolarizingN { p, n };
            assert!((closed_form_epsilon(&spec).unwrap().value().unwrap() - eps).abs() < 1e-10);
        }
        assert!(make_optimal_mechanism(1, 701.0).is_err());
        assert!(make_optimal_mechanism(1, -0.1).is_err());
    }

    #[test]
    fn min_epsilon_examples() {
        let f = UtilityKind::Fidelity;
        assert!((min_epsilon_for_utility(1, 0.75, f).unwrap() - libm::log(3.0)).abs() < 1e-12);
        assert_eq!(min_epsilon_for_utility(1, 0.5, f).unwrap(), 0.0);
        assert_eq!(min_epsilon_for_utility(1, 0.2, f).unwrap(), 0.0);
        assert!((min_epsilon_for_utility(3, 0.9, f).unwrap() - libm::log(63.0)).abs() < 1e-12);
        assert!(min_epsilon_for_utility(1, 1.0, f).is_err());
    }

    #[test]
    fn randomized_response_examples() {
        let rr = randomized_response_matrix(1, libm::log(3.0)).unwrap();
        let expect = [[0.75, 0.25], [0.25, 0.75]];
        for j in 0..2 {
            for k in 0..2 {
                assert!((rr[j][k] - expect[j][k]).abs() < 1e-10);
            }
        }
        for n in 1..4 {
            let rr = randomized_response_matrix(n, 0.0).unwrap();
            let uniform = 1.0 / (1u32 << n) as f64;
            for row in &rr {
                assert!(row.iter().all(|v| (v - uniform).abs() < 1e-12));
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }
}
