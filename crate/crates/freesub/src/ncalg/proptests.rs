use super::*;
use crate::scalar::Scalar;
use nalgebra::DMatrix;
use num::complex::Complex64;
use proptest::prelude::*;
use std::collections::BTreeSet;

const A: Tag = 0;
const B: Tag = 1;
const U: Tag = 2;
const X: Tag = 3;

fn alphabet() -> Vec<GenSymbol> {
    let b = GenSymbol::general(B);
    let u = GenSymbol::unitary(U);
    vec![GenSymbol::selfadjoint(A), b, b.star(), u, u.star(), GenSymbol::selfadjoint(X)]
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=3, -2i64..=2, 1i64..=3).prop_map(|(a, b, c, d)| Scalar::complex((a, b), (c, d)))
}

fn word(max_len: usize) -> impl Strategy<Value = NCWord> {
    prop::collection::vec(0..alphabet().len(), 0..=max_len).prop_map(|ix| NCWord::from_letters(ix.into_iter().map(|i| alphabet()[i])))
}

fn poly(max_len: usize, max_terms: usize) -> impl Strategy<Value = NCPoly> {
    prop::collection::vec((word(max_len), scalar()), 1..=max_terms).prop_map(NCPoly::from_terms)
}

fn derivations() -> Vec<Derivation> {
    vec![Derivation::delta([A]), Derivation::Unitary { u: U }, Derivation::DiffQuotient { x: X }]
}

fn leibniz_rhs(d: &Derivation, f: &NCPoly, g: &NCPoly) -> TensorPoly {
    let one = NCPoly::one();
    let left = &TensorPoly::simple(&[f, &one]) * &d.apply(g).unwrap();
    let right = &d.apply(f).unwrap() * &TensorPoly::simple(&[&one, g]);
    &left + &right
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn leibniz_rule(f in poly(5, 3), g in poly(5, 3)) {
        for d in derivations() {
            let lhs = d.apply(&(&f * &g)).unwrap();
            prop_assert_eq!(lhs, leibniz_rhs(&d, &f, &g));
        }
    }

    #[test]
    fn higher_leibniz(f in poly(3, 2), g in poly(3, 2), p in 1usize..=4) {
        for d in derivations() {
            let lhs = iterate_derivation(&d, p, &(&f * &g)).unwrap();
            let mut rhs = TensorPoly::zero(p + 1);
            for k in 0..=p {
                let df = iterate_derivation(&d, k, &f).unwrap().pad_right(p - k);
                let dg = iterate_derivation(&d, p - k, &g).unwrap().pad_left(k);
                rhs = &rhs + &(&df * &dg);
            }
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn adjoint_is_involution(f in poly(5, 4)) {
        prop_assert_eq!(f.adjoint().adjoint(), f.clone());
    }

    #[test]
    fn adjoint_reverses_products(f in poly(3, 3), g in poly(3, 3)) {
        prop_assert_eq!((&f * &g).adjoint(), &g.adjoint() * &f.adjoint());
    }

    #[test]
    fn multiplication_is_associative(f in poly(3, 3), g in poly(3, 3), h in poly(3, 3)) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
    }

    #[test]
    fn words_stay_reduced(f in poly(5, 3), g in poly(5, 3)) {
        for (w, _) in (&f * &g).terms() {
            for pair in w.letters().windows(2) {
                prop_assert!(!pair[0].cancels(&pair[1]));
            }
        }
    }

    #[test]
    fn json_round_trip(f in poly(4, 4)) {
        let s = serde_json::to_string(&f).unwrap();
        let g: NCPoly = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(f, g);
    }
}

#[test]
fn derivations_kill_one() {
    for d in derivations() {
        assert!(d.apply(&NCPoly::one()).unwrap().is_zero());
        assert!(d.apply(&NCPoly::constant(Scalar::complex((3, 7), (1, 2)))).unwrap().is_zero());
    }
}

#[test]
fn d_of_unitary_product_is_zero() {
    let u = GenSymbol::unitary(U);
    let uu = &NCPoly::letter(u) * &NCPoly::letter(u.star());
    assert!(derive_d(U, &uu).unwrap().is_zero());
}

#[test]
fn resolvent_series_vanish_through_order_eight() {
    for k in 0..=8 {
        assert!(verify_resolvent_series_d(U, B, k).unwrap().is_zero(), "d, K = {k}");
        assert!(verify_resolvent_series_delta(&BTreeSet::from([A]), A, k).is_zero(), "delta, K = {k}");
    }
}

fn small_matrix(n: usize, seed: u64, scale: f64) -> CMatrix {
    let mut s = seed;
    let mut next = move || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let m = DMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
    let norm = op_norm(&m);
    m * Complex64::new(scale / norm, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rho_series_is_multiplicative(f in poly(2, 2), g in poly(2, 2), seed in 0u64..1000) {
        let n = 3;
        let mut asg = Assignment::new();
        asg.insert(A, small_matrix(n, seed, 1.0)).unwrap();
        asg.insert(B, small_matrix(n, seed + 1, 1.5)).unwrap();
        asg.insert(X, small_matrix(n, seed + 2, 0.7)).unwrap();
        let q = small_matrix(n, seed + 3, 1.0);
        let unitary = q.clone().qr().q();
        asg.insert(U, unitary).unwrap();
        let m = small_matrix(n, seed + 4, 0.08);
        let split = BTreeSet::from([A]);
        let sf = rho_series_eval(&f, &split, &m, &asg, 24).unwrap();
        let sg = rho_series_eval(&g, &split, &m, &asg, 24).unwrap();
        let sfg = rho_series_eval(&(&f * &g), &split, &m, &asg, 24).unwrap();
        let (tf, tg, tfg) = (sf.tail_bound.unwrap(), sg.tail_bound.unwrap(), sfg.tail_bound.unwrap());
        let budget = tfg + op_norm(&sf.value) * tg + tf * op_norm(&sg.value) + tf * tg + 1e-11;
        let defect = op_norm(&(&sfg.value - &sf.value * &sg.value));
        prop_assert!(defect <= budget, "defect {defect} budget {budget}");
    }
}
