use super::*;
use crate::freeprob::AlgebraSpec;
use crate::scalar::{rat, Scalar};
use crate::transforms::{cauchy_G, MeasureR, MeasureT};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn measure_r() -> impl Strategy<Value = MeasureR> {
    prop_oneof![
        (-1.0f64..1.0, 0.2f64..2.0).prop_map(|(m, v)| MeasureR::semicircle(m, v)),
        proptest::collection::vec((-2.0f64..2.0, 0.1f64..1.0), 1..4).prop_map(|a| {
            let total: f64 = a.iter().map(|x| x.1).sum();
            MeasureR::atoms(a.into_iter().map(|(t, w)| (t, w / total)).collect()).unwrap()
        }),
        (0.2f64..1.5).prop_map(|a| MeasureR::arcsine(-a, a)),
    ]
}

fn upper_point() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, 0.3f64..2.0).prop_map(|(x, y)| c(x, y))
}

/// Circle atoms with real moments (closed under conjugation) and nonzero mean.
fn symmetric_circle() -> impl Strategy<Value = MeasureT> {
    (0.1f64..3.0, 0.05f64..0.45).prop_map(|(th, w)| MeasureT::angles(vec![(0.0, 1.0 - 2.0 * w), (th, w), (-th, w)]).unwrap())
}

fn disk_point() -> impl Strategy<Value = Complex64> {
    (0.0f64..0.9, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn variance2_g(z: Complex64) -> Complex64 {
    let r = 8f64.sqrt();
    (z - (z - r).sqrt() * (z + r).sqrt()) / 4.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn additive_invariants(mu in measure_r(), nu in measure_r(), z in upper_point()) {
        let cfg = SolverConfig { tol: 1e-11, ..SolverConfig::default() };
        let r = additive_subord(&mu, &nu, z, &cfg).unwrap();
        prop_assert!(r.residual <= cfg.tol);
        prop_assert!(r.omega1.im >= z.im - 1e-12 && r.omega2.im >= z.im - 1e-12);
        prop_assert!((r.omega1 + r.omega2 - z - 1.0 / r.value).norm() <= 1e-9 * (1.0 + 1.0 / r.value.norm()));
        // the reported residual is the recomputed defect at the returned point
        let defect = (cauchy_G(&mu, r.omega1).unwrap() - cauchy_G(&nu, r.omega2).unwrap()).norm();
        prop_assert!((defect - r.residual).abs() <= 1e-15);
        let s = additive_subord(&nu, &mu, z, &cfg).unwrap();
        prop_assert!((s.omega1 - r.omega2).norm() <= 1e-8 && (s.omega2 - r.omega1).norm() <= 1e-8);
        prop_assert!((s.value - r.value).norm() <= 1e-9);
    }

    #[test]
    fn dirac_zero_gives_identity(mu in measure_r(), z in upper_point()) {
        let r = additive_subord(&mu, &MeasureR::dirac(0.0), z, &SolverConfig::default()).unwrap();
        prop_assert!((r.omega1 - z).norm() <= 1e-12);
    }

    #[test]
    fn multiplicative_invariants(u in symmetric_circle(), v in symmetric_circle(), z in disk_point()) {
        let cfg = SolverConfig::default();
        let r = mult_unitary_subord(&u, &v, z, &cfg).unwrap();
        prop_assert!(r.residual <= cfg.tol);
        prop_assert!(r.omega1.norm() <= z.norm() + 1e-12 && r.omega2.norm() <= z.norm() + 1e-12);
        let rc = mult_unitary_subord(&u, &v, z.conj(), &cfg).unwrap();
        prop_assert!((rc.omega1 - r.omega1.conj()).norm() <= 1e-10);
        // ω₁ω₂ = z·η_{UV}(z)
        let eta = r.value / (1.0 + r.value);
        prop_assert!((r.omega1 * r.omega2 - z * eta).norm() <= 1e-10);
    }
}

#[test]
fn semicircle_grid_oracle() {
    let mu = MeasureR::semicircle(0.0, 1.0);
    let cfg = SolverConfig::default();
    let mut worst = 0.0f64;
    for i in 0..50 {
        let z = c(-3.0 + 6.0 * i as f64 / 49.0, 0.5 + 0.02 * (i % 7) as f64);
        let r = additive_subord(&mu, &mu, z, &cfg).unwrap();
        worst = worst.max((r.value - variance2_g(z)).norm());
    }
    assert!(worst <= 1e-10, "{worst:e}");
}

#[test]
fn bernoulli_gives_arcsine() {
    let cfg = SolverConfig::default();
    let half = MeasureR::bernoulli(std::f64::consts::FRAC_1_SQRT_2);
    let unit = MeasureR::bernoulli(1.0);
    for i in 0..50 {
        let z = c(-3.0 + 6.0 * i as f64 / 49.0, 0.5);
        let r = additive_subord(&half, &half, z, &cfg).unwrap();
        let g = 1.0 / ((z - 2f64.sqrt()).sqrt() * (z + 2f64.sqrt()).sqrt());
        assert!((r.value - g).norm() <= 1e-10, "{z} {}", (r.value - g).norm());
        let r = additive_subord(&unit, &unit, z, &cfg).unwrap();
        let g = 1.0 / ((z - 2.0).sqrt() * (z + 2.0).sqrt());
        assert!((r.value - g).norm() <= 1e-10);
    }
}

#[test]
fn series_matches_fixed_point_taylor() {
    // (2/3)δ₁ + (1/3)δ₋₁ for both factors
    let atoms = vec![(Scalar::one(), rat(2, 3)), (Scalar::from_int(-1), rat(1, 3))];
    let su = AlgebraSpec::circle_atoms(0, atoms.clone()).unwrap();
    let sv = AlgebraSpec::circle_atoms(1, atoms).unwrap();
    let exact = mult_series_subord(&su, &sv, 8).unwrap();
    let mu = MeasureT::from_spec(&su).unwrap();
    let cfg = SolverConfig::default();
    let numeric = taylor_coefficients(0.5, 64, 8, |z| mult_unitary_subord(&mu, &mu, z, &cfg).map(|r| r.omega1)).unwrap();
    assert!(numeric[0].norm() <= 1e-12);
    for (n, a) in exact.iter().enumerate() {
        assert!((numeric[n + 1] - a.to_c64()).norm() <= 1e-8, "order {}: {} vs {}", n + 1, numeric[n + 1], a.to_c64());
    }
    assert_eq!(exact[0], Scalar::real(rat(1, 3)));
    for k in 0..=10 {
        let z = Complex64::from_polar(0.5 * k as f64 / 10.0, 0.7 * k as f64);
        let r = mult_unitary_subord(&mu, &mu, z, &cfg).unwrap();
        assert!(r.residual <= 1e-10);
    }
}

#[test]
fn haar_product_has_vanishing_psi() {
    let haar = AlgebraSpec::haar(0, 10);
    let v = AlgebraSpec::circle_atoms(1, vec![(Scalar::one(), rat(1, 2)), (Scalar::i(), rat(1, 2))]).unwrap();
    let state = crate::freeprob::FreeState::symbolic([haar, v]).unwrap();
    let uv = crate::ncalg::NCWord::from_letters([crate::ncalg::GenSymbol::unitary(0), crate::ncalg::GenSymbol::unitary(1)]);
    for n in 1..=10 {
        assert!(state.tau_word(&uv.pow(n)).unwrap().is_zero());
    }
}

#[test]
fn matrix_fixed_point_random_points() {
    use rand::{Rng, SeedableRng};
    let mu = MeasureR::semicircle(0.0, 1.0);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let cfg = SolverConfig::default();
    for _ in 0..5 {
        let mut b = CMatrix::from_fn(2, 2, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-0.3..0.3)));
        b += CMatrix::identity(2, 2) * c(0.0, 1.5);
        let hb = crate::transforms::HalfPlaneMatrix::new(b).unwrap();
        let chk = resolvent_identity_check(&mu, &mu, &hb, &cfg).unwrap();
        assert!(chk.residual <= 1e-9, "{chk:?}");
    }
    let z = c(0.3, 0.8);
    let s = additive_subord(&mu, &MeasureR::bernoulli(1.0), z, &cfg).unwrap();
    let m = resolvent_identity_check(&mu, &MeasureR::bernoulli(1.0), &crate::transforms::HalfPlaneMatrix::scalar(z).unwrap(), &cfg).unwrap();
    assert!((m.result.value[(0, 0)] - s.value).norm() <= 1e-12);
}
