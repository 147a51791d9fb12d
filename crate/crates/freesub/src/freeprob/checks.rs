use super::state::FreeState;
use super::FpError;
use crate::ncalg::{derive_conjugated_delta, derive_d, derive_d_product, derive_delta, NCPoly, NCWord, Tag, TensorPoly};
use crate::scalar::Scalar;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// Scalar value of a defining pairing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingValue {
    pub value: Scalar,
}

impl fmt::Display for PairingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `(τ⊗τ)(δ_split(w))`.
pub fn liberation_pairing(state: &FreeState, split: &BTreeSet<Tag>, w: &NCWord) -> Result<PairingValue, FpError> {
    let t = derive_delta(split, &NCPoly::word(w.clone()));
    Ok(PairingValue { value: state.tau_tensor(&t)? })
}

/// `(τ⊗τ)(d_u(w))`.
pub fn conjugate_pairing(state: &FreeState, u: Tag, w: &NCWord) -> Result<PairingValue, FpError> {
    let t = derive_d(u, &NCPoly::word(w.clone()))?;
    Ok(PairingValue { value: state.tau_tensor(&t)? })
}

fn expect_slots(state: &FreeState, target: &BTreeSet<Tag>, t: &TensorPoly) -> Result<TensorPoly, FpError> {
    let mut out = TensorPoly::zero(t.order());
    for (slots, c) in t.terms() {
        let mut acc = TensorPoly::unit(t.order());
        for (i, w) in slots.iter().enumerate() {
            let e = state.cond_expect(target, &NCPoly::word(w.clone()))?;
            let mut factor = vec![NCPoly::one(); t.order()];
            factor[i] = e;
            let refs: Vec<&NCPoly> = factor.iter().collect();
            acc = &acc * &TensorPoly::simple(&refs);
        }
        out.accumulate(&acc, c);
    }
    Ok(out)
}

fn check_tags(w: &NCWord, allowed: &BTreeSet<Tag>) -> Result<(), FpError> {
    match w.letters().iter().find(|l| !allowed.contains(&l.tag)) {
        Some(l) => Err(FpError::OutsideDomain(format!("letter {l} not in the stated algebras"))),
        None => Ok(()),
    }
}

/// `(E_A⊗E_A)(δ_A(w)) − δ_A(E_A(w))` for `w` over `A ∪ C`.
pub fn check_coalgebra_delta(
    state: &FreeState,
    a_tags: &BTreeSet<Tag>,
    c_tags: &BTreeSet<Tag>,
    w: &NCWord,
) -> Result<TensorPoly, FpError> {
    check_tags(w, &a_tags.union(c_tags).copied().collect())?;
    let f = NCPoly::word(w.clone());
    let lhs = expect_slots(state, a_tags, &derive_delta(a_tags, &f))?;
    let rhs = derive_delta(a_tags, &state.cond_expect(a_tags, &f)?);
    Ok(&lhs - &rhs)
}

/// `(E_U⊗E_U)(d_{UV}(w)) − d_U(E_U(w))` for `w` over `UV, (UV)*`.
pub fn check_coalgebra_d(state: &FreeState, u: Tag, v: Tag, w: &NCWord) -> Result<TensorPoly, FpError> {
    let f = NCPoly::word(w.clone());
    let target = BTreeSet::from([u]);
    let lhs = expect_slots(state, &target, &derive_d_product(u, v, &f)?)?;
    let rhs = derive_d(u, &state.cond_expect(&target, &f)?)?;
    Ok(&lhs - &rhs)
}

/// `d_U(w) + δ_{UAU*:A}(w)` for `w` over `A` and `U A U*`.
pub fn check_d_equals_minus_delta(u: Tag, a_tags: &BTreeSet<Tag>, w: &NCWord) -> Result<TensorPoly, FpError> {
    let f = NCPoly::word(w.clone());
    let d = derive_d(u, &f)?;
    let delta = derive_conjugated_delta(u, a_tags, &f)?;
    Ok(&d + &delta)
}

/// `(τ⊗τ)(d_U(w)) − (τ⊗τ)(d_U(E_U(w)))` for `w` over `A` and `U`.
pub fn check_freeconj_pairing(state: &FreeState, u: Tag, a_tags: &BTreeSet<Tag>, w: &NCWord) -> Result<Scalar, FpError> {
    let mut allowed = a_tags.clone();
    allowed.insert(u);
    check_tags(w, &allowed)?;
    let f = NCPoly::word(w.clone());
    let lhs = state.tau_tensor(&derive_d(u, &f)?)?;
    let rhs = state.tau_tensor(&derive_d(u, &state.cond_expect(&BTreeSet::from([u]), &f)?)?)?;
    Ok(&lhs - &rhs)
}

/// `‖j‖ / √(1 + ‖j‖²)`.
pub fn graddist_bound(norm_j: f64) -> f64 {
    assert!(norm_j >= 0.0, "norm must be nonnegative");
    norm_j / (1.0 + norm_j * norm_j).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeprob::{AlgebraSpec, QMatrix};
    use crate::ncalg::{GenKind, GenSymbol};
    use crate::scalar::rat;

    fn w(letters: &[GenSymbol]) -> NCWord {
        NCWord::from_letters(letters.iter().copied())
    }

    #[test]
    fn conjugate_pairing_of_powers() {
        let spec = AlgebraSpec::circle_atoms(0, vec![(Scalar::one(), rat(1, 3)), (Scalar::i(), rat(2, 3))]).unwrap();
        let s = FreeState::symbolic([spec.clone()]).unwrap();
        let u = GenSymbol::unitary(0);
        for n in 1..=5 {
            let expected: Scalar = (0..n).map(|k| &spec.moment(k).unwrap() * &spec.moment(n - k).unwrap()).sum();
            assert_eq!(conjugate_pairing(&s, 0, &w(&[u]).pow(n as usize)).unwrap().value, expected);
        }
        assert!(conjugate_pairing(&s, 0, &NCWord::empty()).unwrap().value.is_zero());
        let haar = FreeState::symbolic([AlgebraSpec::haar(0, 8)]).unwrap();
        assert!(conjugate_pairing(&haar, 0, &w(&[u, u])).unwrap().value.is_zero());
    }

    #[test]
    fn coalgebra_d_one_step() {
        let cu = AlgebraSpec::circle_atoms(0, vec![(Scalar::one(), rat(1, 2)), (-Scalar::one(), rat(1, 2))]).unwrap();
        let cv = AlgebraSpec::circle_atoms(1, vec![(Scalar::one(), rat(3, 4)), (Scalar::i(), rat(1, 4))]).unwrap();
        let s = FreeState::symbolic([cu, cv]).unwrap();
        let uv = w(&[GenSymbol::unitary(0), GenSymbol::unitary(1)]);
        assert!(check_coalgebra_d(&s, 0, 1, &uv).unwrap().is_zero());
        assert!(check_coalgebra_d(&s, 0, 1, &uv.concat(&uv.adjoint())).unwrap().is_zero());
    }

    #[test]
    fn d_equals_minus_delta_examples() {
        let (u, a1, a2) = (GenSymbol::unitary(0), GenSymbol::selfadjoint(1), GenSymbol::selfadjoint(2));
        let a_tags = BTreeSet::from([1, 2]);
        for word in [w(&[u, a1, u.star()]), w(&[a1]), w(&[a1, u, a2, u.star()])] {
            assert!(check_d_equals_minus_delta(0, &a_tags, &word).unwrap().is_zero());
        }
    }

    #[test]
    fn matrix_centered_identity() {
        let m = QMatrix::diagonal(vec![Scalar::from_int(1), Scalar::from_int(-1)]);
        let mp = QMatrix::from_rows(vec![
            vec![Scalar::from_int(2), Scalar::from_int(1)],
            vec![Scalar::from_int(1), Scalar::from_int(-2)],
        ])
        .unwrap();
        let s = FreeState::matrix([(0, GenKind::SelfAdjoint, m), (1, GenKind::SelfAdjoint, mp)]).unwrap();
        let (x, y) = (GenSymbol::selfadjoint(0), GenSymbol::selfadjoint(1));
        let split = BTreeSet::from([0]);
        let t = s.tau_word(&w(&[x, y])).unwrap();
        assert_eq!(t, Scalar::from_int(2));
        assert_eq!(liberation_pairing(&s, &split, &w(&[x, y])).unwrap().value, -&t);
    }

    #[test]
    fn graddist_values() {
        assert_eq!(graddist_bound(0.0), 0.0);
        assert!((graddist_bound(1.0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(graddist_bound(1e3) < 1.0 && graddist_bound(1e3) > 0.999_999);
    }
}
