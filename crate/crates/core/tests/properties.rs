use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotrange_core::boundary::{boundary_curve, support, support_derivative_flagged, SampleFlag};
use rotrange_core::cert::{certify, extract_P, simplified_conditions, DEFAULT_TOL};
use rotrange_core::linalg::hermitian_eigen;
use rotrange_core::{
    charpoly_theta, hermitian_eigenvalues, hermitian_part, perm_family, ComplexMatrix, PermFamilySpec,
};

fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let entries = (0..d * d).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    ComplexMatrix::new(d, entries).unwrap()
}

/// Eigenvectors of a random Hermitian matrix form a random unitary.
fn random_unitary(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let g = random_matrix(rng, d);
    let h = &g + &g.adjoint();
    hermitian_eigen(&h, 1e-14).unwrap().1
}

fn similar(u: &ComplexMatrix, a: &ComplexMatrix) -> ComplexMatrix {
    &(&u.adjoint() * a) * u
}

fn alphas_strategy() -> impl Strategy<Value = Vec<f64>> {
    (3usize..=6).prop_flat_map(|d| prop::collection::vec(0.2f64..3.0, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certificate_is_unitarily_invariant(alphas in alphas_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = perm_family(&PermFamilySpec::real(&alphas)).unwrap();
        let u = random_unitary(&mut rng, alphas.len());
        let cert = certify(&similar(&u, &m), DEFAULT_TOL).unwrap();
        prop_assert!(cert.passes, "{:?}", cert);
    }

    #[test]
    fn certificate_is_scale_invariant(alphas in alphas_strategy(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        prop_assume!(re.hypot(im) > 0.05);
        let m = perm_family(&PermFamilySpec::real(&alphas)).unwrap();
        let cert = certify(&m.scale(Complex64::new(re, im)), DEFAULT_TOL).unwrap();
        prop_assert!(cert.passes, "{:?}", cert);
    }

    #[test]
    fn reduced_conditions_agree_with_full_test(
        d in 3usize..=5,
        seed in any::<u64>(),
        perturb in prop::sample::select(vec![0.0, 1e-3, 1e-1]),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alphas: Vec<f64> = (0..d).map(|_| rng.gen_range(0.3..2.0)).collect();
        let base = perm_family(&PermFamilySpec::real(&alphas)).unwrap();
        let noise = random_matrix(&mut rng, d).scale(Complex64::new(perturb, 0.0));
        let u = random_unitary(&mut rng, d);
        let a = similar(&u, &(&base + &noise));
        let full = certify(&a, DEFAULT_TOL).unwrap();
        let reduced = simplified_conditions(&a, DEFAULT_TOL).unwrap();
        prop_assert_eq!(full.passes, reduced.passes);
        prop_assert_eq!(full.passes, perturb == 0.0);
    }

    #[test]
    fn newton_expansion_matches_spectrum(seed in any::<u64>(), d in 1usize..=6, theta in 0.0f64..6.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, d);
        let norm = a.frobenius_norm().max(1.0);
        let cp = charpoly_theta(&a).at(theta);
        let mu = hermitian_eigenvalues(&hermitian_part(&a, theta), 1e-14).unwrap().eigenvalues;
        // compare coefficients with the expansion of prod (w - mu_j)
        let mut expected = vec![1.0];
        for m in &mu {
            let mut next = vec![0.0; expected.len() + 1];
            for (k, c) in expected.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * m;
            }
            expected = next;
        }
        for (k, e) in expected.iter().enumerate() {
            prop_assert!((cp.coeff(k) - e).abs() < 1e-10 * norm.powi(d as i32), "k {}: {} vs {}", k, cp.coeff(k), e);
        }
    }
}

#[test]
fn extracted_polynomial_is_scale_covariant() {
    // P_{sA}(w) = s^d P_A(w / s) for real s > 0
    let alphas = [0.9, 1.4, 2.1, 0.6];
    let m = perm_family(&PermFamilySpec::real(&alphas)).unwrap();
    let p = extract_P(&m, DEFAULT_TOL).unwrap().poly;
    let s = 1.7;
    let q = extract_P(&m.scale(Complex64::new(s, 0.0)), DEFAULT_TOL).unwrap().poly;
    for k in 0..=4 {
        let expected = p.coeff(k) * s.powi(4 - k as i32);
        assert!((q.coeff(k) - expected).abs() < 1e-12 * expected.abs().max(1.0));
    }
}

#[test]
fn derivative_agrees_with_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in 3..=6 {
        let alphas: Vec<f64> = (0..d).map(|_| rng.gen_range(0.3..2.5)).collect();
        let m = perm_family(&PermFamilySpec::real(&alphas)).unwrap();
        let norm = m.frobenius_norm();
        for i in 0..40 {
            let theta = 0.157 * i as f64 + 0.01;
            let (dw, flag) = support_derivative_flagged(&m, theta).unwrap();
            if flag != SampleFlag::Regular {
                continue;
            }
            let h = 1e-5;
            let fd = (support(&m, theta + h).unwrap() - support(&m, theta - h).unwrap()) / (2.0 * h);
            assert!((dw - fd).abs() <= 1e-6 * norm, "d {d} theta {theta}: {dw} vs {fd}");
        }
    }
}

#[test]
fn curve_is_injective_without_flat_parts() {
    let m = perm_family(&PermFamilySpec::real(&[1.0, 2.5, 0.7, 1.6, 1.2])).unwrap();
    let curve = boundary_curve(&m, 400).unwrap();
    assert!(curve.iter().all(|s| s.flag == SampleFlag::Regular));
    let mut min_gap = f64::INFINITY;
    for i in 0..curve.len() {
        for j in i + 1..curve.len() {
            min_gap = min_gap.min((curve[i].zeta - curve[j].zeta).norm());
        }
    }
    assert!(min_gap > 1e-6, "{min_gap}");
}
