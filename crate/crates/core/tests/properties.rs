//! Property tests for the invariants the bounds rely on.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use steering_core::bounds::{lhs_bound_bruteforce, lhs_bound_bruteforce_with, lhs_bound_dichotomic, spectral_sign};
use steering_core::constructions::{
    bernoulli_signs, build_random_functional, build_rho_lambda, ppt_threshold, pt_min_eigenvalue, SchmidtState,
};
use steering_core::io::canonical_hash;
use steering_core::linalg::random::{haar_unitary, random_density, random_hermitian, random_unit_vector};
use steering_core::linalg::{hermitian_eigen, kron_hermitian, operator_norm, top_eigenpair, HermitianMatrix, C64};
use steering_core::model::{pair, realize_assemblage, BipartiteState, Completeness, DichotomicFunctional, Povm, SteeringFunctional};
use steering_core::Exec;

const TOL: f64 = 1e-10;

fn random_functional(n: usize, m: usize, d: usize, rng: &mut ChaCha8Rng) -> SteeringFunctional {
    SteeringFunctional::new((0..n).map(|_| (0..m).map(|_| random_hermitian(d, rng)).collect()).collect()).unwrap()
}

/// Projective measurements: each basis vector of a Haar unitary goes to a random outcome.
fn random_povm(n: usize, m: usize, d: usize, rng: &mut ChaCha8Rng) -> Povm {
    let elements = (0..n)
        .map(|_| {
            let u = haar_unitary(d, rng);
            let mut row = vec![HermitianMatrix::zeros(d); m];
            for c in 0..d {
                let col: Vec<C64> = (0..d).map(|r| u[(r, c)]).collect();
                row[rng.random_range(0..m)].add_scaled(&HermitianMatrix::projector(&col), 1.0);
            }
            row
        })
        .collect();
    Povm::new(elements, Completeness::Complete).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigen_reconstructs_and_preserves_trace(seed in any::<u64>(), d in 1usize..10) {
        let h = random_hermitian(d, &mut ChaCha8Rng::seed_from_u64(seed));
        let e = hermitian_eigen(&h).unwrap();
        prop_assert!(e.reconstruct().as_matrix().max_abs_diff(h.as_matrix()) < TOL);
        let sum: f64 = e.eigenvalues.iter().sum();
        prop_assert!((sum - h.trace()).abs() < TOL);
    }

    #[test]
    fn lanczos_agrees_with_jacobi(seed in any::<u64>(), d in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(d, &mut rng);
        let start = random_unit_vector(d, &mut rng);
        let (top, _) = top_eigenpair(d, |v| h.as_matrix().apply(v), &start, 1e-12).unwrap();
        prop_assert!((top - hermitian_eigen(&h).unwrap().max()).abs() < 1e-9);
    }

    #[test]
    fn separable_assemblages_respect_lhs_bound(
        seed in any::<u64>(), n in 1usize..4, m in 2usize..4, da in 2usize..4, d in 1usize..4,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_functional(n, m, d, &mut rng);
        let povm = random_povm(n, m, da, &mut rng);
        let rho = kron_hermitian(&random_density(da, &mut rng), &random_density(d, &mut rng));
        let sigma = realize_assemblage(&povm, &BipartiteState::mixed(rho, da, d).unwrap()).unwrap();
        let complete = lhs_bound_bruteforce(&f, Completeness::Complete, Exec::Sequential).unwrap().value;
        let incomplete = lhs_bound_bruteforce(&f, Completeness::Incomplete, Exec::Sequential).unwrap().value;
        prop_assert!(pair(&f, &sigma).unwrap().abs() <= complete + TOL);
        prop_assert!(incomplete >= complete - TOL);
    }

    #[test]
    fn lhs_bound_is_absolutely_homogeneous(seed in any::<u64>(), c in -4.0f64..4.0) {
        let f = random_functional(2, 2, 2, &mut ChaCha8Rng::seed_from_u64(seed));
        let b = lhs_bound_bruteforce(&f, Completeness::Incomplete, Exec::Sequential).unwrap().value;
        let bc = lhs_bound_bruteforce(&f.scale(c), Completeness::Incomplete, Exec::Sequential).unwrap().value;
        prop_assert!((bc - c.abs() * b).abs() < TOL * (1.0 + b));
    }

    #[test]
    fn rank_one_fast_path_matches_eigensolves(seed in any::<u64>(), n in 1usize..5) {
        let f = build_random_functional(n, &bernoulli_signs(n, seed).unwrap()).unwrap();
        for mode in [Completeness::Complete, Completeness::Incomplete] {
            let fast = lhs_bound_bruteforce_with(&f, mode, Exec::Sequential, true).unwrap();
            let slow = lhs_bound_bruteforce_with(&f, mode, Exec::Sequential, false).unwrap();
            prop_assert!((fast.value - slow.value).abs() < TOL);
        }
    }

    #[test]
    fn parallel_and_sequential_searches_agree(seed in any::<u64>()) {
        let f = random_functional(3, 2, 3, &mut ChaCha8Rng::seed_from_u64(seed));
        let a = lhs_bound_bruteforce(&f, Completeness::Incomplete, Exec::Sequential).unwrap();
        let b = lhs_bound_bruteforce(&f, Completeness::Incomplete, Exec::Parallel).unwrap();
        prop_assert_eq!(a.value, b.value);
        prop_assert_eq!(a.strategy, b.strategy);
    }

    #[test]
    fn dichotomic_bound_matches_binary_form(seed in any::<u64>(), n in 1usize..5, d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = DichotomicFunctional::new((0..n).map(|_| random_hermitian(d, &mut rng)).collect()).unwrap();
        let dich = lhs_bound_dichotomic(&f, Exec::Sequential).unwrap().value;
        let binary = lhs_bound_bruteforce(&f.to_steering(), Completeness::Complete, Exec::Sequential).unwrap().value;
        prop_assert!((dich - binary).abs() < TOL * (1.0 + dich));
    }

    #[test]
    fn spectral_sign_is_an_involution_of_unit_norm(seed in any::<u64>(), d in 1usize..8) {
        let s = spectral_sign(&random_hermitian(d, &mut ChaCha8Rng::seed_from_u64(seed))).unwrap();
        let sq = s.as_matrix().matmul(s.as_matrix());
        prop_assert!(sq.max_abs_diff(HermitianMatrix::identity(d).as_matrix()) < TOL);
        prop_assert!((operator_norm(&s).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn ppt_threshold_separates_ppt_from_npt(seed in any::<u64>(), n in 2usize..5) {
        let alpha = SchmidtState::random(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let t = ppt_threshold(&alpha).unwrap();
        prop_assert!(t > 0.0 && t < 1.0);
        let below = pt_min_eigenvalue(&build_rho_lambda(&alpha, t * (1.0 - 1e-6)).unwrap(), n, n).unwrap();
        let above = pt_min_eigenvalue(&build_rho_lambda(&alpha, (t * (1.0 + 1e-3)).min(1.0)).unwrap(), n, n).unwrap();
        prop_assert!(below >= -1e-12);
        prop_assert!(above < 0.0);
    }

    #[test]
    fn functional_json_round_trips_bit_exactly(seed in any::<u64>(), n in 1usize..4, m in 1usize..4, d in 1usize..4) {
        let f = random_functional(n, m, d, &mut ChaCha8Rng::seed_from_u64(seed));
        let js = serde_json::to_string(&f).unwrap();
        let back: SteeringFunctional = serde_json::from_str(&js).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(canonical_hash(&back).unwrap(), canonical_hash(&f).unwrap());
    }
}
