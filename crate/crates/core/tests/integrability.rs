use pointbethe::bethe::{coefficients_bc_oracle, propagate, propagate_along};
use pointbethe::exec::Execution;
use pointbethe::factorization::{scan_couplings, yang_baxter_matrix_check, Verdict};
use pointbethe::permutation::{compose_word, decompose};
use pointbethe::sampling::{random_momenta, seeded_rng, SamplePanel};
use pointbethe::wavefunction::{all_pairs_boundary_residual, PositionVector};
use pointbethe::{
    BetheState, CoefficientVector, Complex64, CouplingParameters, Error, GridSpec, IntegrabilityClass, MomentumVector,
    SymmetricGroup,
};
use proptest::prelude::*;

fn coeffs(n: usize, seed: u64) -> CoefficientVector {
    use rand::Rng;
    let mut rng = seeded_rng(seed);
    let order = SymmetricGroup::shared(n).unwrap().order();
    CoefficientVector::new(n, (0..order).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect())
        .unwrap()
}

#[test]
fn standard_scan_reproduces_the_two_families() {
    let report = scan_couplings(&GridSpec::standard(), Execution::default()).unwrap();
    assert!(report.misclassified().is_empty());
    for row in report.passing() {
        assert_ne!(row.class, IntegrabilityClass::NotIntegrable);
    }
    let family2: Vec<_> = report.rows.iter().filter(|r| r.class == IntegrabilityClass::Family2).collect();
    assert_eq!(family2.len(), 4);
    assert!(family2.iter().all(|r| r.verdict() == Verdict::Pass));
}

#[test]
fn scans_are_policy_independent() {
    let grid = GridSpec::new(vec![-1.0, 1.0], vec![0.0, 1.0, -1.0], vec![0.0, 0.5], vec![0.0, 0.5]);
    let a = scan_couplings(&grid, Execution::Sequential).unwrap();
    let b = scan_couplings(&grid, Execution::Parallel).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
}

#[test]
fn five_particle_state_matches_word_independence() {
    let params = CouplingParameters::delta_with_drift(0.8, -0.6);
    let k = MomentumVector::new(vec![0.3, -1.4, 2.2, 0.9, -0.2]).unwrap();
    let a = coeffs(5, 1);
    let state = BetheState::new(params, k.clone(), a.clone()).unwrap();
    let group = state.group().clone();
    // reversed-word products give the same permutation via different paths
    for (offset, p) in group.elements().iter().enumerate().step_by(7) {
        let word = decompose(p);
        let inverse_word: Vec<usize> = decompose(&p.inverse()).into_iter().rev().collect();
        assert_eq!(compose_word(5, &inverse_word).unwrap(), *p);
        let via_inverse = propagate_along(&params, &k, &a, &inverse_word).unwrap();
        let scale = via_inverse.entries().iter().map(|z| z.norm()).fold(1.0, f64::max);
        assert!(via_inverse.max_abs_difference(&state.table()[offset]) <= 1e-11 * scale, "{p} via {word:?}");
    }
}

#[test]
fn yang_baxter_at_six_particles_spot_check() {
    let panel = SamplePanel::seeded(9, 2);
    let r = yang_baxter_matrix_check(&CouplingParameters::delta_prime_balanced(1.1), 6, &panel, Execution::default()).unwrap();
    assert!(r.max_residual() <= 1e-10);
}

#[test]
fn errors_surface_through_the_public_api() {
    let k = MomentumVector::new(vec![0.1, 0.2, 0.3]).unwrap();
    let generic = CouplingParameters::new(1.0, 0.3, 0.2, 0.1).unwrap();
    assert!(matches!(BetheState::new(generic, k.clone(), coeffs(3, 0)), Err(Error::NotIntegrable { .. })));
    assert!(matches!(
        propagate(&CouplingParameters::delta(1.0), &k, &coeffs(2, 0), &"(213)".parse().unwrap()),
        Err(Error::SizeMismatch { .. })
    ));
    assert!(matches!(CouplingParameters::new(f64::NAN, 0.0, 0.0, 0.0), Err(Error::NonFiniteCoupling { .. })));
    assert!(matches!(PositionVector::new(vec![f64::INFINITY]), Err(Error::InvalidInput(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_agrees_with_propagation_for_random_family_points(
        c in 0.2..3.0f64, eta in -2.0..2.0f64, second in any::<bool>(), seed in 0u64..1000,
    ) {
        let params = if second { CouplingParameters::delta_prime_balanced(c) } else { CouplingParameters::delta_with_drift(c, eta) };
        let k = MomentumVector::new(random_momenta(&mut seeded_rng(seed), 3, 2.0, 0.2)).unwrap();
        let a = coeffs(3, seed);
        let state = BetheState::new(params, k.clone(), a.clone()).unwrap();
        let sol = coefficients_bc_oracle(&params, &k, &a).unwrap();
        prop_assert!(sol.residual <= 1e-9);
        prop_assert!(state.max_table_difference(&sol.table) <= 1e-9);
        let r = all_pairs_boundary_residual(&state.expansion(), &params, &mut seeded_rng(seed + 1), 10).unwrap();
        prop_assert!(r.max() <= 1e-9);
    }
}
