use super::*;
use crate::ncalg::CMatrix;
use faer::Mat;
use proptest::prelude::*;

fn c64() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn upper() -> impl Strategy<Value = Complex64> {
    (-4.0f64..4.0, 0.05f64..3.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(k: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(c64(), k * k).prop_map(move |v| CMatrix::from_row_slice(k, k, &v))
}

fn measures() -> Vec<MeasureR> {
    vec![
        MeasureR::semicircle(0.0, 1.0),
        MeasureR::arcsine(-1.0, 3.0),
        MeasureR::bernoulli(1.0),
        MeasureR::atoms(vec![(-1.0, 0.2), (0.5, 0.3), (2.0, 0.5)]).unwrap(),
    ]
}

fn faer_min_eig(h: &CMatrix) -> f64 {
    let k = h.nrows();
    let m = Mat::<faer::c64>::from_fn(k, k, |i, j| faer::c64::new(h[(i, j)].re, h[(i, j)].im));
    m.self_adjoint_eigenvalues(faer::Side::Lower).unwrap().into_iter().fold(f64::INFINITY, f64::min)
}

fn faer_norm(x: &CMatrix) -> f64 {
    let k = x.nrows();
    let m = Mat::<faer::c64>::from_fn(k, k, |i, j| faer::c64::new(x[(i, j)].re, x[(i, j)].im));
    m.singular_values().unwrap().into_iter().fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nevanlinna_property(z in upper()) {
        for mu in measures() {
            let g = cauchy_G(&mu, z).unwrap();
            prop_assert!(g.im < 0.0);
            prop_assert!(cauchy_F(&mu, z).unwrap().im >= z.im - 1e-12);
        }
    }

    #[test]
    fn psi_maps_into_half_plane(r in 0.0f64..0.99, th in -3.2f64..3.2) {
        let z = Complex64::from_polar(r, th);
        let mus = [
            MeasureT::angles(vec![(0.3, 0.4), (2.0, 0.6)]).unwrap(),
            MeasureT::dirac_one(),
            MeasureT::haar(),
        ];
        for mu in &mus {
            prop_assert!(psi_scalar(mu, z).unwrap().value.re > -0.5);
            prop_assert_eq!(psi_scalar(mu, Complex64::new(0.0, 0.0)).unwrap().value, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn block_diagonal_is_blockwise(z1 in upper(), z2 in upper()) {
        let b = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![z1, z2]));
        let b = HalfPlaneMatrix::new(b).unwrap();
        for mu in measures() {
            let g = matrix_cauchy_G(&mu, &b).unwrap().value;
            prop_assert!((g[(0, 0)] - cauchy_G(&mu, z1).unwrap()).norm() < 1e-12);
            prop_assert!((g[(1, 1)] - cauchy_G(&mu, z2).unwrap()).norm() < 1e-12);
            prop_assert!(g[(0, 1)].norm() < 1e-14 && g[(1, 0)].norm() < 1e-14);
        }
    }

    #[test]
    fn membership_matches_eigen_oracle(t in matrix(3)) {
        let oracle = faer_min_eig(&im_part(&t));
        match half_plane_membership(&t) {
            Membership::Member(eps) => prop_assert!((eps - oracle).abs() < 1e-12 && oracle > 0.0),
            Membership::NotMember => prop_assert!(oracle <= 1e-12),
        }
    }

    #[test]
    fn matrix_cauchy_obeys_bounds(x in matrix(2), eps in 0.1f64..1.5) {
        let t = &x + CMatrix::identity(2, 2) * Complex64::new(0.0, eps + faer_min_eig(&im_part(&x)).abs());
        let b = HalfPlaneMatrix::new(t).unwrap();
        for mu in measures() {
            let g = matrix_cauchy_G(&mu, &b).unwrap();
            prop_assert!(faer_norm(&g.value) <= g.norm_bound + 1e-10);
            prop_assert!(max_hermitian_eigenvalue(&im_part(&g.value)) <= g.im_bound + 1e-10);
        }
    }

    #[test]
    fn disk_criteria_agree(x in matrix(3), scale in 0.5f64..1.5) {
        let n = faer_norm(&x);
        prop_assume!(n > 1e-6);
        let x = &x * Complex64::new(scale / n, 0.0);
        let d = disk_criterion(&x);
        prop_assert!((d.norm - scale).abs() < 1e-12);
        prop_assert!(d.agree(), "{:?}", d);
    }
}

#[test]
fn inversion_recovers_smooth_laws() {
    let x: Vec<f64> = (0..=30).map(|i| -0.9 + 0.06 * i as f64).collect();
    let arcsine = MeasureR::arcsine(-1.0, 1.0);
    let lad = stieltjes_ladder(&x, &DEFAULT_ETA_LADDER, 5e-3, |z| cauchy_G(&arcsine, z)).unwrap();
    assert!(lad.stable);
    for (t, d) in x.iter().zip(&lad.extrapolated) {
        assert!((d - 1.0 / (std::f64::consts::PI * (1.0 - t * t).sqrt())).abs() < 5e-3);
    }
}
