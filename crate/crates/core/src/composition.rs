//! Tensor composition of mechanisms: additivity of ε* and the Bell-state
//! demonstration.

use alloc::vec::Vec;

use crate::channel::{tensor_channels, KrausChannel, Povm};
use crate::error::{QldpError, Result};
use crate::matrix::{Complex, ComplexMatrix};
use crate::noise::{make_noise, NoiseSpec};
use crate::optimize::{maximize_product, maximize_pure_state_from, OptimizerOpts};
use crate::privacy::{closed_form_epsilon, epsilon_star, log_condition, InfiniteReason, Leakage};
use crate::rng::{haar_vector, stream_rng};
use crate::state::{bell_state, is_ppt, partial_transpose_min_eigenvalue, DensityMatrix, PureState};

/// Alternation rounds in [`verify_additivity`].
pub const ALTERNATION_ROUNDS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CompositionReport {
    pub per_party_eps: Vec<f64>,
    pub sum_eps: f64,
    pub measured_eps: f64,
    pub gap: f64,
    pub product_witnesses: Vec<PureState>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AdditivityOutcome {
    Measured(CompositionReport),
    /// A party (or, with `party = None`, the joint search) is unbounded.
    Infinite {
        party: Option<usize>,
        reason: InfiniteReason,
    },
}

/// Sum of the parties' closed-form ε*.
pub fn epsilon_star_additive(specs: &[NoiseSpec]) -> Result<Leakage> {
    let mut total = 0.0;
    for s in specs {
        match closed_form_epsilon(s)?.value() {
            Some(v) => total += v,
            None => return Ok(Leakage::Infinite),
        }
    }
    Ok(Leakage::Finite(total))
}

fn sub_seed(seed: u64, index: u64) -> u64 {
    seed ^ (index + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Measures ε* of `a ⊗ b` over product inputs ψ₁ ⊗ ψ₂ by alternating
/// searches (ψ₂ fixed, then ψ₁ fixed) followed by one joint polish, and
/// compares it with the sum of the parties' ε*.
pub fn verify_additivity(a: &KrausChannel, b: &KrausChannel, opts: &OptimizerOpts) -> Result<AdditivityOutcome> {
    opts.validate()?;
    let mut per_party = Vec::with_capacity(2);
    for (i, ch) in [a, b].into_iter().enumerate() {
        let e = epsilon_star(ch, opts)?;
        match e.value() {
            Some(v) => per_party.push(v),
            None => {
                return Ok(AdditivityOutcome::Infinite {
                    party: Some(i),
                    reason: e.reason().expect("infinite has a reason"),
                })
            }
        }
    }
    let sum_eps = per_party[0] + per_party[1];
    let joint = tensor_channels(a, b);
    let (da, db) = (a.dim(), b.dim());
    let joint_objective = |psi: &[Complex]| log_condition(&joint.adjoint_of_pure(psi));

    let mut rng = stream_rng(opts.seed, u64::MAX);
    let mut psi_a = haar_vector(da, &mut rng);
    let mut psi_b = haar_vector(db, &mut rng);
    let round_opts = |k: u64| OptimizerOpts {
        restarts: (opts.restarts / 4).max(1),
        seed: sub_seed(opts.seed, k),
        ..*opts
    };
    let mut measured = f64::NEG_INFINITY;
    for round in 0..ALTERNATION_ROUNDS as u64 {
        let fixed_b = psi_b.clone();
        let fa = |x: &[Complex]| joint_objective(&crate::matrix::kron_vec(x, &fixed_b));
        let ra = maximize_pure_state_from(da, &fa, &round_opts(2 * round), &[psi_a.clone()]);
        if ra.is_singular() {
            return Ok(AdditivityOutcome::Infinite {
                party: None,
                reason: InfiniteReason::ZeroMinEigenvalue,
            });
        }
        psi_a = ra.state;

        let fixed_a = psi_a.clone();
        let fb = |x: &[Complex]| joint_objective(&crate::matrix::kron_vec(&fixed_a, x));
        let rb = maximize_pure_state_from(db, &fb, &round_opts(2 * round + 1), &[psi_b.clone()]);
        if rb.is_singular() {
            return Ok(AdditivityOutcome::Infinite {
                party: None,
                reason: InfiniteReason::ZeroMinEigenvalue,
            });
        }
        psi_b = rb.state;
        measured = measured.max(rb.value);
    }
    let polish_opts = OptimizerOpts {
        restarts: 0,
        ..*opts
    };
    let polished = maximize_product(
        &[da, db],
        &joint_objective,
        &polish_opts,
        &[alloc::vec![psi_a.clone(), psi_b.clone()]],
    );
    if polished.is_singular() {
        return Ok(AdditivityOutcome::Infinite {
            party: None,
            reason: InfiniteReason::ZeroMinEigenvalue,
        });
    }
    if polished.value > measured {
        measured = polished.value;
        psi_a = polished.blocks[0].clone();
        psi_b = polished.blocks[1].clone();
    }
    Ok(AdditivityOutcome::Measured(CompositionReport {
        per_party_eps: per_party,
        sum_eps,
        measured_eps: measured,
        gap: (measured - sum_eps).abs(),
        product_witnesses: alloc::vec![
            PureState::from_unit_unchecked(psi_a),
            PureState::from_unit_unchecked(psi_b),
        ],
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellDemo {
    /// (N ⊗ N) applied to the Bell state.
    pub state: DensityMatrix,
    pub outcome_probs_before: (f64, f64),
    pub outcome_probs_after: (f64, f64),
    pub ppt_before: bool,
    pub ppt_after: bool,
    pub pt_min_eig_before: f64,
    pub pt_min_eig_after: f64,
}

fn alice_probabilities(rho: &DensityMatrix) -> Result<(f64, f64)> {
    let p = Povm::computational(2);
    let e0 = p.elements()[0].tensor(&ComplexMatrix::identity(2));
    let e1 = p.elements()[1].tensor(&ComplexMatrix::identity(2));
    Ok((rho.expectation(&e0)?.re, rho.expectation(&e1)?.re))
}

/// Sends each half of (|00⟩ + |11⟩)/√2 through `per_party_noise` and
/// reports Alice's computational-basis statistics and PPT verdicts.
pub fn bell_demo(per_party_noise: &NoiseSpec) -> Result<BellDemo> {
    if per_party_noise.n_qubits() != 1 {
        return Err(QldpError::InvalidParameter {
            name: "n",
            value: per_party_noise.n_qubits() as f64,
        });
    }
    let noise = make_noise(per_party_noise)?;
    let joint = tensor_channels(&noise, &noise);
    let before = bell_state().density();
    let after = joint.apply(&before)?;
    Ok(BellDemo {
        outcome_probs_before: alice_probabilities(&before)?,
        outcome_probs_after: alice_probabilities(&after)?,
        ppt_before: is_ppt(&before, (2, 2))?,
        ppt_after: is_ppt(&after, (2, 2))?,
        pt_min_eig_before: partial_transpose_min_eigenvalue(&before, (2, 2))?,
        pt_min_eig_after: partial_transpose_min_eigenvalue(&after, (2, 2))?,
        state: after,
    })
}

/// Largest ln(Pr[o | ρ] / Pr[o | σ]) over product outcomes o = (i, j) of
/// `povm_a ⊗ povm_b` and ordered pairs of `inputs`, after `a ⊗ b`.
/// Returns ∞ when some outcome has zero probability under one input only.
pub fn product_measurement_log_ratio(
    a: &KrausChannel,
    b: &KrausChannel,
    povm_a: &Povm,
    povm_b: &Povm,
    inputs: &[DensityMatrix],
) -> Result<f64> {
    let joint = tensor_channels(a, b);
    let mut probs: Vec<Vec<f64>> = Vec::with_capacity(inputs.len());
    for rho in inputs {
        let out = joint.apply(rho)?;
        let mut row = Vec::with_capacity(povm_a.len() * povm_b.len());
        for ma in povm_a.elements() {
            for mb in povm_b.elements() {
                row.push(out.expectation(&ma.tensor(mb))?.re);
            }
        }
        probs.push(row);
    }
    let mut worst = 0.0f64;
    for p in &probs {
        for q in &probs {
            for (x, y) in p.iter().zip(q) {
                if *x <= 1e-15 {
                    continue;
                }
                if *y <= 1e-15 {
                    return Ok(f64::INFINITY);
                }
                worst = worst.max(libm::log(*x) - libm::log(*y));
            }
        }
    }
    Ok(worst)
}
