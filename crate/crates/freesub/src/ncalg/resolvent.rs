use super::derive::{derive_d, derive_delta};
use super::poly::NCPoly;
use super::tensor::TensorPoly;
use super::word::{GenSymbol, NCWord, Tag};
use super::NcError;
use crate::scalar::Scalar;
use std::collections::BTreeSet;

/// `α_K = Σ_{1≤k≤K} (Ub)^k`; returns `d(α_K) − (α_K + 1) ⊗ α_K` with terms of `U`-degree `> K` discarded.
pub fn verify_resolvent_series_d(u_tag: Tag, b_tag: Tag, k: usize) -> Result<TensorPoly, NcError> {
    let ub = NCPoly::word(NCWord::from_letters([GenSymbol::unitary(u_tag), GenSymbol::general(b_tag)]));
    let mut alpha = NCPoly::zero();
    for j in 1..=k {
        alpha = &alpha + &ub.pow(j);
    }
    let lhs = derive_d(u_tag, &alpha)?;
    let rhs = TensorPoly::simple(&[&(&alpha + &NCPoly::one()), &alpha]);
    let u_degree = |slots: &[NCWord]| slots.iter().map(|w| w.count_tags(|l| l.tag == u_tag)).sum::<usize>();
    Ok((&lhs - &rhs).filter(|s| u_degree(s) <= k))
}

/// `α_K = Σ_{0≤k≤K} (−a)^k`; returns `δ(α_K) + (α_K ⊗ 1)(a ⊗ 1 − 1 ⊗ a)(1 ⊗ α_K)` with total degree `> K` discarded.
pub fn verify_resolvent_series_delta(split: &BTreeSet<Tag>, a_tag: Tag, k: usize) -> TensorPoly {
    let a = NCPoly::letter(GenSymbol::general(a_tag));
    let minus_a = a.scale(&Scalar::from_int(-1));
    let mut alpha = NCPoly::zero();
    for j in 0..=k {
        alpha = &alpha + &minus_a.pow(j);
    }
    let one = NCPoly::one();
    let da = &TensorPoly::simple(&[&a, &one]) - &TensorPoly::simple(&[&one, &a]);
    let sandwich = &(&TensorPoly::simple(&[&alpha, &one]) * &da) * &TensorPoly::simple(&[&one, &alpha]);
    (&derive_delta(split, &alpha) + &sandwich).filter(|s| TensorPoly::total_degree(s) <= k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_series_low_orders() {
        for k in 0..=3 {
            assert!(verify_resolvent_series_d(0, 1, k).unwrap().is_zero(), "K = {k}");
        }
    }

    #[test]
    fn delta_series_low_orders() {
        for k in 0..=3 {
            assert!(verify_resolvent_series_delta(&BTreeSet::from([2]), 2, k).is_zero(), "K = {k}");
        }
    }

    #[test]
    fn truncation_is_not_vacuous() {
        let ub = NCPoly::word(NCWord::from_letters([GenSymbol::unitary(0), GenSymbol::general(1)]));
        let alpha = &ub + &ub.pow(2);
        let lhs = derive_d(0, &alpha).unwrap();
        let rhs = TensorPoly::simple(&[&(&alpha + &NCPoly::one()), &alpha]);
        let raw = &lhs - &rhs;
        assert!(!raw.is_zero());
        let cross = vec![NCWord::from_letters([GenSymbol::unitary(0), GenSymbol::general(1)]); 2];
        assert_eq!(lhs.coeff(&cross), Scalar::one());
    }
}
