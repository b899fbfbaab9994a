mod common;

use inna_lab::landscape::{symmetric_eigen_ascending, DiagQuadratic, Landscape};
use inna_lab::spectrum::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

#[test]
fn discriminant_sign_matches_interval_on_grid() {
    let (checked, violations) = common::spiral_grid_violations(1e-9);
    assert_eq!(checked, 31 * 40 * 412);
    assert_eq!(violations, 0);
}

#[test]
fn printed_permutations_are_reproduced() {
    let rows_to_cols = |p: usize| {
        let u = permutation_matrix(p).unwrap();
        (0..2 * p).map(|i| (0..2 * p).find(|&j| u[(i, j)] == 1.0).unwrap() + 1).collect::<Vec<_>>()
    };
    assert_eq!(rows_to_cols(3), vec![5, 2, 3, 6, 1, 4]);
    assert_eq!(rows_to_cols(4), vec![1, 5, 3, 7, 2, 6, 4, 8]);
    for p in 1..=12 {
        assert!(is_permutation_matrix(&permutation_matrix(p).unwrap()), "P = {p}");
    }
}

fn random_symmetric(p: usize, seed: &[f64]) -> DMatrix<f64> {
    let a = DMatrix::from_fn(p, p, |i, j| seed[(i * p + j) % seed.len()] * (1.0 + i as f64) - 0.3 * j as f64);
    (&a + a.transpose()) * 0.5
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10_000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn continuous_vieta(alpha in 0.0f64..5.0, beta in 0.01f64..5.0, lambda in -50.0f64..500.0) {
        let s = din_block_eigs(alpha, beta, lambda);
        let sum = s.sigma_plus + s.sigma_minus;
        let prod = s.sigma_plus * s.sigma_minus;
        let scale = 1.0 + (alpha + beta * lambda).abs() + lambda.abs();
        prop_assert!((sum.re + alpha + beta * lambda).abs() <= 1e-10 * scale);
        prop_assert!(sum.im.abs() <= 1e-10 * scale);
        prop_assert!((prod.re - lambda).abs() <= 1e-9 * scale);
    }

    #[test]
    fn discrete_vieta_and_determinant(alpha in 0.0f64..5.0, beta in 0.01f64..5.0, gamma in 1e-4f64..1.0, lambda in -50.0f64..500.0) {
        let hp = HyperParams::new(alpha, beta, gamma).unwrap();
        let s = inna_block_eigs(&hp, lambda);
        let b = alpha + beta * lambda;
        let det = 1.0 - gamma * b + gamma * gamma * lambda;
        let prod = s.eigenvalues[0] * s.eigenvalues[1];
        let scale = 1.0 + gamma * b.abs() + gamma * gamma * lambda.abs();
        prop_assert!((s.trace() - (2.0 - gamma * b)).abs() <= 1e-12 * scale);
        prop_assert!((prod.re - det).abs() <= 1e-12 * scale);
        // Against a dense 2x2 block built from the continuous block.
        let block = DMatrix::from_row_slice(2, 2, &[1.0 - gamma * b, -gamma * lambda, gamma, 1.0]);
        prop_assert!((block.determinant() - det).abs() <= 1e-12 * scale);
    }

    #[test]
    fn saddles_expand(alpha in 0.0f64..5.0, beta in 0.01f64..5.0, lambda in -100.0f64..-1e-6, frac in 0.01f64..0.99) {
        let s = din_block_eigs(alpha, beta, lambda);
        prop_assert!(s.sigma_plus.re > 0.0);
        if alpha > 0.0 {
            let gamma = frac * gamma_diffeo_bound(alpha, beta, -lambda).unwrap();
            let d = inna_block_eigs(&HyperParams::new(alpha, beta, gamma).unwrap(), lambda);
            prop_assert!(d.max_magnitude() > 1.0);
        }
    }

    #[test]
    fn minimizers_contract(alpha in 1e-3f64..5.0, beta in 0.01f64..5.0, l in 0.1f64..500.0, t in 1e-3f64..=1.0, frac in 0.01f64..0.99) {
        let lambda = t * l;
        let s = din_block_eigs(alpha, beta, lambda);
        prop_assert!(s.sigma_plus.re < 0.0 && s.sigma_minus.re < 0.0);
        let bound = gamma_diffeo_bound(alpha, beta, l).unwrap().min(gamma_convergence_bound(alpha, beta, l).unwrap());
        let d = inna_block_eigs(&HyperParams::new(alpha, beta, frac * bound).unwrap(), lambda);
        prop_assert!(d.max_magnitude() <= 1.0 + 1e-12, "{d:?}");
    }

    #[test]
    fn frequency_decreases_with_beta(alpha in 0.0f64..2.0, lambda in 1.0f64..50.0, u1 in 0.01f64..0.99, u2 in 0.01f64..0.99) {
        // β < (2√λ − α)/λ keeps α + βλ < 2√λ, i.e. the complex regime.
        let b_max = (2.0 * lambda.sqrt() - alpha) / lambda;
        prop_assume!(b_max > 1e-6);
        let b1 = u1 * b_max;
        let b2 = b1 + u2 * (b_max - b1);
        prop_assert!(spiral_frequency(alpha, b2, lambda).unwrap() < spiral_frequency(alpha, b1, lambda).unwrap());
    }

    #[test]
    fn diagonal_quadratics_block_diagonalize(
        p in 1usize..=5,
        lambdas in prop::collection::vec(-20.0f64..50.0, 5),
        alpha in 0.0f64..4.0,
        beta in 0.05f64..2.0,
    ) {
        let lambdas = &lambdas[..p];
        prop_assert!(common::block_union_error(lambdas, alpha, beta) < 1e-9);
        let l = DiagQuadratic::new(lambdas.to_vec()).unwrap();
        let theta = DVector::zeros(p);
        let b = block_diagonalize(&din_jacobian(&l, &theta, alpha, beta), &l.hessian(&theta)).unwrap();
        prop_assert!(is_block_diagonal(&b, 1e-9));
    }

    #[test]
    fn rotated_hessians_block_diagonalize(p in 1usize..=5, seed in prop::collection::vec(-3.0f64..3.0, 25), alpha in 0.0f64..4.0, beta in 0.05f64..2.0) {
        let h = random_symmetric(p, &seed);
        let jac = {
            let q = DiagQuadratic::new(vec![0.0; p]).unwrap();
            let mut j = din_jacobian(&q, &DVector::zeros(p), alpha, beta);
            let mut top = j.view_mut((0, 0), (p, p));
            top += &h * -beta;
            j
        };
        let b = block_diagonalize(&jac, &h).unwrap();
        prop_assert!(is_block_diagonal(&b, 1e-9));
        // Block q pairs with the q-th ascending Hessian eigenvalue.
        let (values, _) = symmetric_eigen_ascending(&h);
        let u = permutation_matrix(p).unwrap();
        for q in 0..p {
            let i = (0..2 * p).find(|&i| u[(i, 2 * q)] == 1.0).unwrap() % p;
            let blk = b.view((2 * q, 2 * q), (2, 2)).into_owned();
            let s = din_block_eigs(alpha, beta, values[i]);
            let dense: Vec<_> = blk.complex_eigenvalues().iter().copied().collect();
            prop_assert!(common::multiset_distance(dense, &[s.sigma_plus, s.sigma_minus]).unwrap() < 1e-8);
        }
    }
}
