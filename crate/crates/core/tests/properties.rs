use std::sync::Mutex;

use proptest::prelude::*;
use qldp_core::channel::{random_povm, random_unital_channel, tensor_channels};
use qldp_core::eig::{hermitian_eig, psd_sqrt};
use qldp_core::matrix::{kron_vec, trace_inner};
use qldp_core::noise::make_noise;
use qldp_core::optimize::maximize_pure_state;
use qldp_core::privacy::{
    check_finite, epsilon_star, leakage_at, measurement_ldp, DEFAULT_MAX_OUTCOMES,
};
use qldp_core::rng::{gaussian_matrix, stream_rng};
use qldp_core::state::{fidelity, random_density_matrix, random_pure_state, trace_distance};
use qldp_core::utility::{min_epsilon_for_utility, tradeoff_bound, UtilityKind};
use qldp_core::{ComplexMatrix, KrausChannel, NoiseSpec, OptimizerOpts, PureState};

fn quick(seed: u64) -> OptimizerOpts {
    OptimizerOpts {
        restarts: 8,
        seed,
        ..OptimizerOpts::default()
    }
}

fn catalog(p: f64, q: f64) -> Vec<NoiseSpec> {
    vec![
        NoiseSpec::BitFlip { p },
        NoiseSpec::BitPhaseFlip { p },
        NoiseSpec::PhaseFlip { p },
        NoiseSpec::Depolarizing { p },
        NoiseSpec::PhaseDamping { gamma: p },
        NoiseSpec::AmplitudeDamping { gamma: p },
        NoiseSpec::GeneralizedAmplitudeDamping { q, gamma: p },
    ]
}

fn int_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = stream_rng(seed, 7);
    let g = gaussian_matrix(rows, cols, &mut rng);
    let data: Vec<_> = g
        .as_slice()
        .iter()
        .map(|z| qldp_core::Complex::new((z.re * 3.0).round(), (z.im * 3.0).round()))
        .collect();
    ComplexMatrix::new(rows, cols, data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn catalog_channels_are_trace_preserving(p in 0.0f64..=1.0, q in 0.0f64..=1.0) {
        for spec in catalog(p, q) {
            let ch = make_noise(&spec).unwrap();
            // the validating constructor re-checks Σ E†E = I
            prop_assert!(KrausChannel::new(ch.kraus().to_vec(), None).is_ok());
        }
    }

    #[test]
    fn duality(seed in any::<u64>(), qubits in 1u32..=2, m in 1usize..=6) {
        let ch = random_unital_channel(qubits, m, seed);
        let dim = ch.dim();
        let mut rng = stream_rng(seed, 50);
        let op = gaussian_matrix(dim, dim, &mut rng);
        let rho = random_density_matrix(dim, seed);
        let lhs = trace_inner(&op, &ch.apply_operator(rho.matrix()).unwrap());
        let rhs = trace_inner(&ch.apply_adjoint(&op).unwrap(), rho.matrix());
        prop_assert!((lhs - rhs).norm() <= 1e-10);
    }

    #[test]
    fn fuchs_van_de_graaf(seed in any::<u64>(), dim in 2usize..=4) {
        let rho = random_density_matrix(dim, seed);
        let sigma = random_density_matrix(dim, seed ^ 0xABCD);
        let f = fidelity(&rho, &sigma).unwrap();
        let t = trace_distance(&rho, &sigma).unwrap();
        prop_assert!(1.0 - f.sqrt() <= t + 1e-8);
        prop_assert!(t <= (1.0 - f).sqrt() + 1e-8);
        prop_assert!((f - fidelity(&sigma, &rho).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn pure_state_refinement(seed in any::<u64>()) {
        let rho = random_density_matrix(2, seed);
        let psi = random_pure_state(1, seed).density();
        let f = fidelity(&rho, &psi).unwrap();
        let t = trace_distance(&rho, &psi).unwrap();
        prop_assert!(1.0 - f <= t + 1e-8);
    }

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>()) {
        let a = random_density_matrix(3, seed);
        let b = random_density_matrix(3, seed.wrapping_add(1));
        let c = random_density_matrix(3, seed.wrapping_add(2));
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert!(trace_distance(&a, &a).unwrap() <= 1e-8);
        prop_assert!((ab - trace_distance(&b, &a).unwrap()).abs() <= 1e-8);
        prop_assert!(ab <= trace_distance(&a, &c).unwrap() + trace_distance(&c, &b).unwrap() + 1e-8);
    }

    #[test]
    fn choi_is_psd(seed in any::<u64>(), m in 1usize..=6) {
        let choi = random_unital_channel(1, m, seed).choi_of_adjoint();
        prop_assert!(choi.is_hermitian(1e-8));
        let eig = hermitian_eig(&choi, 1e-8).unwrap();
        prop_assert!(eig.min() >= -1e-8);
    }

    #[test]
    fn tensor_associative_on_integer_matrices(seed in any::<u64>()) {
        let a = int_matrix(2, 3, seed);
        let b = int_matrix(3, 2, seed ^ 1);
        let c = int_matrix(2, 2, seed ^ 2);
        prop_assert_eq!(a.tensor(&b).tensor(&c), a.tensor(&b.tensor(&c)));
    }

    #[test]
    fn trace_cyclicity(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = stream_rng(seed, 0);
        let a = gaussian_matrix(n, n, &mut rng);
        let b = gaussian_matrix(n, n, &mut rng);
        let ab = a.matmul(&b).unwrap().trace().unwrap();
        let ba = b.matmul(&a).unwrap().trace().unwrap();
        prop_assert!((ab - ba).norm() <= 1e-12 * ab.norm().max(1.0));
    }

    #[test]
    fn psd_sqrt_squares_back(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = stream_rng(seed, 0);
        let g = gaussian_matrix(n, n, &mut rng);
        let m = g.matmul(&g.adjoint()).unwrap().hermitian_part();
        let r = psd_sqrt(&m).unwrap();
        let err = r.matmul(&r).unwrap().distance(&m).unwrap();
        prop_assert!(err <= 1e-8 * m.frobenius_norm().max(1.0));
        prop_assert!(r.is_hermitian(1e-10));
    }

    #[test]
    fn eigen_residual(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = stream_rng(seed, 0);
        let g = gaussian_matrix(n, n, &mut rng);
        let h = g.add(&g.adjoint()).unwrap();
        let eig = hermitian_eig(&h, 1e-12).unwrap();
        prop_assert!(eig.residual(&h) <= 1e-10 * h.frobenius_norm().max(1.0));
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn tradeoff_round_trip(n in 1u32..=6, eps in 0.0f64..12.0) {
        let t = tradeoff_bound(n, eps);
        prop_assert!(t > 0.0 && t <= 1.0);
        let back = min_epsilon_for_utility(n, t, UtilityKind::Fidelity).unwrap();
        prop_assert!((back - eps).abs() <= 1e-10, "{} vs {}", back, eps);
    }

    #[test]
    fn product_objective_factorizes(seed in any::<u64>(), pa in 0.0f64..0.95, g in 0.05f64..1.0) {
        let a = make_noise(&NoiseSpec::Depolarizing { p: pa }).unwrap();
        let b = make_noise(&NoiseSpec::GeneralizedAmplitudeDamping { q: 0.5, gamma: g }).unwrap();
        let joint = tensor_channels(&a, &b);
        let x = random_pure_state(1, seed);
        let y = random_pure_state(1, seed ^ 0x55);
        let xy = PureState::new(kron_vec(x.amplitudes(), y.amplitudes())).unwrap();
        let lhs = leakage_at(&joint, &xy).unwrap().as_f64();
        let rhs = leakage_at(&a, &x).unwrap().as_f64() + leakage_at(&b, &y).unwrap().as_f64();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn finiteness_criteria_agree(seed in any::<u64>(), m in 1usize..=6) {
        // an Err here would be a disagreement between the two tests
        let r = check_finite(&random_unital_channel(1, m, seed)).unwrap();
        prop_assert_eq!(r.finite, m >= 4);
    }

    #[test]
    fn optimizer_returns_max_over_evaluations(seed in any::<u64>(), q in 0.05f64..0.95, g in 0.05f64..1.0) {
        let ch = make_noise(&NoiseSpec::GeneralizedAmplitudeDamping { q, gamma: g }).unwrap();
        let seen = Mutex::new(f64::NEG_INFINITY);
        let f = |psi: &[qldp_core::Complex]| {
            let v = leakage_at(&ch, &PureState::new(psi.to_vec()).unwrap()).unwrap().as_f64();
            let mut m = seen.lock().unwrap();
            *m = m.max(v);
            v
        };
        let opts = quick(seed);
        let r = maximize_pure_state(2, &f, &opts);
        prop_assert!(*seen.lock().unwrap() <= r.value + opts.tol);
        let e = epsilon_star(&ch, &opts).unwrap();
        let again = leakage_at(&ch, e.witness().unwrap()).unwrap().as_f64();
        prop_assert!((again - e.value().unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn measurement_leakage_below_epsilon_star(seed in any::<u64>(), k in 2usize..=5, p in 0.0f64..0.95) {
        let ch = make_noise(&NoiseSpec::Depolarizing { p }).unwrap();
        let eps = epsilon_star(&ch, &quick(seed)).unwrap().value().unwrap();
        let povm = random_povm(2, k, seed);
        let l = measurement_ldp(&ch, &povm, DEFAULT_MAX_OUTCOMES).unwrap().as_f64();
        prop_assert!(l <= eps + 1e-6);
    }
}

#[test]
fn dep_epsilon_star_is_increasing() {
    let mut last = -1.0;
    for i in 0..10 {
        let ch = make_noise(&NoiseSpec::Depolarizing { p: i as f64 / 10.0 }).unwrap();
        let v = epsilon_star(&ch, &quick(1)).unwrap().value().unwrap();
        assert!(v > last);
        last = v;
    }
}
