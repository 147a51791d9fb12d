use super::derive::Derivation;
use super::poly::NCPoly;
use super::tensor::TensorPoly;
use super::word::{GenKind, NCWord, Tag};
use super::NcError;
use crate::scalar::{rat_to_f64, Rational};
use std::collections::{BTreeMap, BTreeSet};

const MAX_CUTOFF: usize = 200;
const TAIL_RELATIVE_STOP: f64 = 1e-16;

/// Outcome of [`smooth_norm_bound`].
#[derive(Clone, Debug, PartialEq)]
pub enum NormBound {
    Finite { value: f64, partial: f64, tail: f64, cutoff: usize },
    /// `2kR ≥ 1` for some leftmost slot with `k` split letters.
    Divergent { k: usize, r: f64 },
}

impl NormBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            NormBound::Finite { value, .. } => Some(*value),
            NormBound::Divergent { .. } => None,
        }
    }
}

/// Letter norms; unitary letters default to 1.
#[derive(Clone, Debug, Default)]
pub struct GenNorms(pub BTreeMap<Tag, f64>);

impl GenNorms {
    pub fn word(&self, w: &NCWord) -> Result<f64, NcError> {
        let mut n = 1.0;
        for l in w.letters() {
            n *= match self.0.get(&l.tag) {
                Some(&x) => x,
                None if l.kind == GenKind::Unitary => 1.0,
                None => return Err(NcError::MissingNorm(l.tag)),
            };
        }
        Ok(n)
    }

    /// Triangle-inequality bound `Σ |c| Π ‖slot‖` on the projective norm.
    pub fn tensor(&self, t: &TensorPoly) -> Result<f64, NcError> {
        let mut total = 0.0;
        for (slots, c) in t.terms() {
            let mut x = c.abs_f64();
            for w in slots {
                x *= self.word(w)?;
            }
            total += x;
        }
        Ok(total)
    }
}

fn split_count(w: &NCWord, split: &BTreeSet<Tag>) -> usize {
    w.count_tags(|l| split.contains(&l.tag))
}

/// `R^p Σ_t ν_t (2k_t R)/(1 − 2k_t R)`: bound on `Σ_{q>p} ‖δ^{(q)}‖ R^q` from the level-`p` terms.
pub(crate) fn geometric_tail(t: &TensorPoly, split: &BTreeSet<Tag>, r: f64, p: usize, norms: &GenNorms) -> Result<Option<f64>, NcError> {
    let mut tail = 0.0;
    for (slots, c) in t.terms() {
        let k = split_count(&slots[0], split);
        if k == 0 {
            continue;
        }
        let q = 2.0 * k as f64 * r;
        if q >= 1.0 {
            return Ok(None);
        }
        let mut nu = c.abs_f64();
        for w in slots {
            nu *= norms.word(w)?;
        }
        tail += nu * q / (1.0 - q);
    }
    Ok(Some(tail * r.powi(p as i32)))
}

/// Upper bound on `Σ_p ‖δ^{(p)}(f)‖ R^p` from exact iterates plus a geometric tail.
pub fn smooth_norm_bound(f: &NCPoly, r: &Rational, split: &BTreeSet<Tag>, norms: &GenNorms) -> Result<NormBound, NcError> {
    smooth_norm_bound_f64(f, rat_to_f64(r), split, norms)
}

pub fn smooth_norm_bound_f64(f: &NCPoly, r: f64, split: &BTreeSet<Tag>, norms: &GenNorms) -> Result<NormBound, NcError> {
    assert!(r > 0.0 && r < 1.0, "R must lie in (0, 1)");
    let kmax = f.terms().map(|(w, _)| split_count(w, split)).max().unwrap_or(0);
    if 2.0 * kmax as f64 * r >= 1.0 {
        return Ok(NormBound::Divergent { k: kmax, r });
    }
    let delta = Derivation::Delta { split: split.clone() };
    let mut t = TensorPoly::from_poly(f);
    let mut partial = 0.0;
    let mut p = 0;
    loop {
        partial += norms.tensor(&t)? * r.powi(p as i32);
        let tail = match geometric_tail(&t, split, r, p, norms)? {
            Some(x) => x,
            None => return Ok(NormBound::Divergent { k: kmax, r }),
        };
        if tail <= TAIL_RELATIVE_STOP * partial || p >= MAX_CUTOFF {
            return Ok(NormBound::Finite { value: partial + tail, partial, tail, cutoff: p });
        }
        t = delta.apply_leftmost(&t)?;
        p += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::word::GenSymbol;
    use crate::scalar::rat;

    fn norms() -> GenNorms {
        GenNorms(BTreeMap::from([(0, 2.0), (1, 3.0)]))
    }

    #[test]
    fn no_split_letters() {
        let b = NCPoly::letter(GenSymbol::selfadjoint(1));
        let nb = smooth_norm_bound(&b, &rat(1, 3), &BTreeSet::from([0]), &norms()).unwrap();
        assert_eq!(nb.value(), Some(3.0));
    }

    #[test]
    fn single_split_letter_geometric_sum() {
        let a = NCPoly::letter(GenSymbol::selfadjoint(0));
        let nb = smooth_norm_bound(&a, &rat(1, 4), &BTreeSet::from([0]), &norms()).unwrap();
        let exact = 2.0 * 5.0 / 3.0;
        let v = nb.value().unwrap();
        assert!(v >= exact * (1.0 - 1e-15));
        assert!((v - exact).abs() <= 1e-12 * exact);
    }

    #[test]
    fn divergent_when_criterion_fails() {
        let a = GenSymbol::selfadjoint(0);
        let f = NCPoly::word(NCWord::from_letters([a, a]));
        let nb = smooth_norm_bound(&f, &rat(1, 4), &BTreeSet::from([0]), &norms()).unwrap();
        assert_eq!(nb, NormBound::Divergent { k: 2, r: 0.25 });
    }

    #[test]
    fn missing_norm_is_an_error() {
        let f = NCPoly::letter(GenSymbol::selfadjoint(4));
        assert!(matches!(smooth_norm_bound(&f, &rat(1, 4), &BTreeSet::from([0]), &norms()), Err(NcError::MissingNorm(4))));
    }
}
