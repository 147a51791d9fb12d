use super::poly::NCPoly;
use super::tensor::TensorPoly;
use super::word::{GenKind, GenSymbol, NCWord, Tag};
use super::NcError;
use crate::scalar::Scalar;
use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

/// The three derivations on letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    /// `δ`: letters with a tag in `split` map to `x ⊗ 1 − 1 ⊗ x`.
    Delta { split: BTreeSet<Tag> },
    /// `d`: `U ↦ 1 ⊗ U`, `U* ↦ −U* ⊗ 1`.
    Unitary { u: Tag },
    /// `∂`: `X ↦ 1 ⊗ 1`.
    DiffQuotient { x: Tag },
}

/// `(left, right, coefficient)` triples of an order-2 value.
type Pieces = Vec<(NCWord, NCWord, Scalar)>;

impl Derivation {
    pub fn delta<I: IntoIterator<Item = Tag>>(split: I) -> Self {
        Derivation::Delta { split: split.into_iter().collect() }
    }

    fn on_letter(&self, l: &GenSymbol) -> Result<Pieces, NcError> {
        let one = NCWord::empty;
        let x = NCWord::letter(*l);
        Ok(match self {
            Derivation::Delta { split } if split.contains(&l.tag) => {
                vec![(x.clone(), one(), Scalar::one()), (one(), x, Scalar::from_int(-1))]
            }
            Derivation::Unitary { u } if *u == l.tag => {
                if l.kind != GenKind::Unitary {
                    return Err(NcError::NotUnitary(l.tag));
                }
                if l.starred {
                    vec![(x, one(), Scalar::from_int(-1))]
                } else {
                    vec![(one(), x, Scalar::one())]
                }
            }
            Derivation::DiffQuotient { x: t } if *t == l.tag && !l.starred => vec![(one(), one(), Scalar::one())],
            _ => Vec::new(),
        })
    }

    fn on_word(&self, w: &NCWord) -> Result<TensorPoly, NcError> {
        leibniz_word(w, |w| Ok((0..w.len()).map(|i| i..i + 1).collect()), |f| self.on_letter(&f.letters()[0]))
    }

    pub fn apply(&self, f: &NCPoly) -> Result<TensorPoly, NcError> {
        let mut out = TensorPoly::zero(2);
        for (w, c) in f.terms() {
            out.accumulate(&self.on_word(w)?, c);
        }
        Ok(out)
    }

    /// `(D ⊗ id^{⊗(s−1)})(t)`: the derivation hits the leftmost slot.
    pub fn apply_leftmost(&self, t: &TensorPoly) -> Result<TensorPoly, NcError> {
        let mut cache: HashMap<&NCWord, TensorPoly> = HashMap::new();
        let mut out = TensorPoly::zero(t.order() + 1);
        for (slots, c) in t.terms() {
            let head = &slots[0];
            if !cache.contains_key(head) {
                cache.insert(head, self.on_word(head)?);
            }
            for (pair, d) in cache[head].terms() {
                let mut s = Vec::with_capacity(slots.len() + 1);
                s.push(pair[0].clone());
                s.push(pair[1].clone());
                s.extend(slots[1..].iter().cloned());
                out.add_term(s, c * d);
            }
        }
        Ok(out)
    }
}

/// Generic Leibniz expansion over a factorization of `w`:
/// `D(f₁⋯f_m) = Σ_j (f₁⋯f_{j−1} ⊗ 1)·D(f_j)·(1 ⊗ f_{j+1}⋯f_m)`.
pub fn leibniz_word(
    w: &NCWord,
    factorize: impl Fn(&NCWord) -> Result<Vec<Range<usize>>, NcError>,
    on_factor: impl Fn(&NCWord) -> Result<Pieces, NcError>,
) -> Result<TensorPoly, NcError> {
    let mut out = TensorPoly::zero(2);
    for r in factorize(w)? {
        let factor = w.slice(r.clone());
        let prefix = w.slice(0..r.start);
        let suffix = w.slice(r.end..w.len());
        for (u, v, s) in on_factor(&factor)? {
            out.add_term(vec![prefix.concat(&u), v.concat(&suffix)], s);
        }
    }
    Ok(out)
}

/// Linear extension of [`leibniz_word`].
pub fn leibniz(
    f: &NCPoly,
    factorize: impl Fn(&NCWord) -> Result<Vec<Range<usize>>, NcError>,
    on_factor: impl Fn(&NCWord) -> Result<Pieces, NcError>,
) -> Result<TensorPoly, NcError> {
    let mut out = TensorPoly::zero(2);
    for (w, c) in f.terms() {
        out.accumulate(&leibniz_word(w, &factorize, &on_factor)?, c);
    }
    Ok(out)
}

pub fn derive_delta(split: &BTreeSet<Tag>, f: &NCPoly) -> TensorPoly {
    Derivation::Delta { split: split.clone() }.apply(f).expect("delta has no failure mode")
}

pub fn derive_d(u: Tag, f: &NCPoly) -> Result<TensorPoly, NcError> {
    Derivation::Unitary { u }.apply(f)
}

pub fn derive_fdq(x: Tag, f: &NCPoly) -> TensorPoly {
    Derivation::DiffQuotient { x }.apply(f).expect("difference quotient has no failure mode")
}

/// `D^{(0)} = id`, `D^{(p+1)} = (D ⊗ id^{⊗p}) ∘ D^{(p)}`.
pub fn iterate_derivation(deriv: &Derivation, p: usize, f: &NCPoly) -> Result<TensorPoly, NcError> {
    let mut t = TensorPoly::from_poly(f);
    for _ in 0..p {
        t = deriv.apply_leftmost(&t)?;
    }
    Ok(t)
}

/// Splits a word of `A ∨ UAU*` into single `A` letters and `U x U*` blocks.
pub fn conjugated_blocks(u: Tag, a_tags: &BTreeSet<Tag>, w: &NCWord) -> Result<Vec<(Range<usize>, bool)>, NcError> {
    let ls = w.letters();
    let not_in = || NcError::NotInAlgebra(w.to_string());
    let mut out = Vec::new();
    let mut i = 0;
    while i < ls.len() {
        let l = ls[i];
        if a_tags.contains(&l.tag) {
            out.push((i..i + 1, false));
            i += 1;
        } else if l.tag == u && l.kind == GenKind::Unitary && !l.starred {
            let mut j = i + 1;
            while j < ls.len() && a_tags.contains(&ls[j].tag) {
                j += 1;
            }
            if j == i + 1 || j >= ls.len() || !(ls[j].tag == u && ls[j].starred) {
                return Err(not_in());
            }
            out.push((i..j + 1, true));
            i = j + 1;
        } else {
            return Err(not_in());
        }
    }
    Ok(out)
}

/// `δ_{UAU*:A}` on `A ∨ UAU*`: blocks `UxU*` are split, letters of `A` are constants.
pub fn derive_conjugated_delta(u: Tag, a_tags: &BTreeSet<Tag>, f: &NCPoly) -> Result<TensorPoly, NcError> {
    leibniz(
        f,
        |w| Ok(conjugated_blocks(u, a_tags, w)?.into_iter().map(|(r, _)| r).collect()),
        |factor| {
            if factor.len() == 1 {
                return Ok(Vec::new());
            }
            Ok(vec![(factor.clone(), NCWord::empty(), Scalar::one()), (NCWord::empty(), factor.clone(), Scalar::from_int(-1))])
        },
    )
}

/// Splits a word of `⟨W⟩` with `W = UV` into factors `UV` and `V*U*`.
pub fn product_unitary_blocks(u: Tag, v: Tag, w: &NCWord) -> Result<Vec<(Range<usize>, bool)>, NcError> {
    let ls = w.letters();
    if ls.len() % 2 != 0 {
        return Err(NcError::NotInAlgebra(w.to_string()));
    }
    let mut out = Vec::new();
    for i in (0..ls.len()).step_by(2) {
        let (x, y) = (ls[i], ls[i + 1]);
        if x.tag == u && !x.starred && y.tag == v && !y.starred {
            out.push((i..i + 2, false));
        } else if x.tag == v && x.starred && y.tag == u && y.starred {
            out.push((i..i + 2, true));
        } else {
            return Err(NcError::NotInAlgebra(w.to_string()));
        }
    }
    Ok(out)
}

/// `d_{W}` for the unitary `W = UV`: `W ↦ 1 ⊗ W`, `W* ↦ −W* ⊗ 1`.
pub fn derive_d_product(u: Tag, v: Tag, f: &NCPoly) -> Result<TensorPoly, NcError> {
    leibniz(
        f,
        |w| Ok(product_unitary_blocks(u, v, w)?.into_iter().map(|(r, _)| r).collect()),
        |factor| {
            let starred = factor.letters()[0].starred;
            Ok(if starred {
                vec![(factor.clone(), NCWord::empty(), Scalar::from_int(-1))]
            } else {
                vec![(NCWord::empty(), factor.clone(), Scalar::one())]
            })
        },
    )
}
