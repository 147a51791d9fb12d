use super::json::TensorJson;
use super::poly::NCPoly;
use super::word::NCWord;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Element of the algebraic tensor power of order `order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "TensorJson", try_from = "TensorJson")]
pub struct TensorPoly {
    order: usize,
    terms: BTreeMap<Vec<NCWord>, Scalar>,
}

impl TensorPoly {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "tensor order must be at least 1");
        TensorPoly { order, terms: BTreeMap::new() }
    }

    /// `1 ⊗ … ⊗ 1`.
    pub fn unit(order: usize) -> Self {
        TensorPoly::elementary(vec![NCWord::empty(); order], Scalar::one())
    }

    pub fn elementary(slots: Vec<NCWord>, c: Scalar) -> Self {
        let mut t = TensorPoly::zero(slots.len());
        t.add_term(slots, c);
        t
    }

    pub fn from_poly(f: &NCPoly) -> Self {
        let mut t = TensorPoly::zero(1);
        for (w, c) in f.terms() {
            t.add_term(vec![w.clone()], c.clone());
        }
        t
    }

    /// `f₁ ⊗ f₂ ⊗ … ⊗ f_s`.
    pub fn simple(factors: &[&NCPoly]) -> Self {
        assert!(!factors.is_empty(), "tensor order must be at least 1");
        let mut t = TensorPoly { order: 0, terms: BTreeMap::from([(Vec::new(), Scalar::one())]) };
        for f in factors {
            let mut next = BTreeMap::new();
            for (slots, c) in &t.terms {
                for (w, d) in f.terms() {
                    let mut s = slots.clone();
                    s.push(w.clone());
                    insert(&mut next, s, c * d);
                }
            }
            t.terms = next;
            t.order += 1;
        }
        t
    }

    pub fn add_term(&mut self, slots: Vec<NCWord>, c: Scalar) {
        assert_eq!(slots.len(), self.order, "slot count must match tensor order");
        insert(&mut self.terms, slots, c);
    }

    /// `self += c · other`.
    pub fn accumulate(&mut self, other: &TensorPoly, c: &Scalar) {
        assert_eq!(self.order, other.order, "tensor order mismatch");
        for (s, x) in &other.terms {
            insert(&mut self.terms, s.clone(), x * c);
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<NCWord>, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, slots: &[NCWord]) -> Scalar {
        self.terms.get(slots).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, c: &Scalar) -> TensorPoly {
        let mut out = TensorPoly::zero(self.order);
        for (s, x) in &self.terms {
            out.add_term(s.clone(), x * c);
        }
        out
    }

    /// `t ⊗ 1^{⊗m}`.
    pub fn pad_right(&self, m: usize) -> TensorPoly {
        let mut out = TensorPoly::zero(self.order + m);
        for (s, c) in &self.terms {
            let mut s = s.clone();
            s.extend(std::iter::repeat_n(NCWord::empty(), m));
            out.add_term(s, c.clone());
        }
        out
    }

    /// `1^{⊗m} ⊗ t`.
    pub fn pad_left(&self, m: usize) -> TensorPoly {
        let mut out = TensorPoly::zero(self.order + m);
        for (s, c) in &self.terms {
            let mut v = vec![NCWord::empty(); m];
            v.extend(s.iter().cloned());
            out.add_term(v, c.clone());
        }
        out
    }

    /// Keeps the terms whose slots satisfy `keep`.
    pub fn filter(&self, keep: impl Fn(&[NCWord]) -> bool) -> TensorPoly {
        TensorPoly {
            order: self.order,
            terms: self.terms.iter().filter(|(s, _)| keep(s)).map(|(s, c)| (s.clone(), c.clone())).collect(),
        }
    }

    /// Applies `f` to every slot of every term (linear extension).
    pub fn map_slots(&self, f: impl Fn(usize, &NCWord) -> NCPoly) -> TensorPoly {
        let mut out = TensorPoly::zero(self.order);
        for (slots, c) in &self.terms {
            let images: Vec<NCPoly> = slots.iter().enumerate().map(|(i, w)| f(i, w)).collect();
            let refs: Vec<&NCPoly> = images.iter().collect();
            let t = TensorPoly::simple(&refs);
            for (s, d) in t.terms {
                out.add_term(s, c * &d);
            }
        }
        out
    }

    pub fn total_degree(slots: &[NCWord]) -> usize {
        slots.iter().map(|w| w.len()).sum()
    }
}

fn insert(map: &mut BTreeMap<Vec<NCWord>, Scalar>, slots: Vec<NCWord>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&slots) {
        Some(existing) => {
            *existing += &c;
            if existing.is_zero() {
                map.remove(&slots);
            }
        }
        None => {
            map.insert(slots, c);
        }
    }
}

impl<'a> Add<&'a TensorPoly> for &'a TensorPoly {
    type Output = TensorPoly;
    fn add(self, o: &TensorPoly) -> TensorPoly {
        assert_eq!(self.order, o.order, "tensor order mismatch");
        let mut out = self.clone();
        for (s, c) in &o.terms {
            insert(&mut out.terms, s.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a TensorPoly> for &'a TensorPoly {
    type Output = TensorPoly;
    fn sub(self, o: &TensorPoly) -> TensorPoly {
        assert_eq!(self.order, o.order, "tensor order mismatch");
        let mut out = self.clone();
        for (s, c) in &o.terms {
            insert(&mut out.terms, s.clone(), -c);
        }
        out
    }
}

/// Slotwise product.
impl<'a> Mul<&'a TensorPoly> for &'a TensorPoly {
    type Output = TensorPoly;
    fn mul(self, o: &TensorPoly) -> TensorPoly {
        assert_eq!(self.order, o.order, "tensor order mismatch");
        let mut out = TensorPoly::zero(self.order);
        for (s1, c1) in &self.terms {
            for (s2, c2) in &o.terms {
                let slots = s1.iter().zip(s2).map(|(x, y)| x.concat(y)).collect();
                insert(&mut out.terms, slots, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &TensorPoly {
    type Output = TensorPoly;
    fn neg(self) -> TensorPoly {
        self.scale(&Scalar::from_int(-1))
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·")?;
            for (j, w) in s.iter().enumerate() {
                if j > 0 {
                    write!(f, " ⊗ ")?;
                }
                write!(f, "[{w}]")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::word::GenSymbol;

    #[test]
    fn simple_tensor_is_bilinear() {
        let a = NCPoly::letter(GenSymbol::selfadjoint(0));
        let b = NCPoly::letter(GenSymbol::selfadjoint(1));
        let sum = &a + &b;
        let lhs = TensorPoly::simple(&[&sum, &a]);
        let rhs = &TensorPoly::simple(&[&a, &a]) + &TensorPoly::simple(&[&b, &a]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn slotwise_product_and_padding() {
        let a = NCPoly::letter(GenSymbol::selfadjoint(0));
        let one = NCPoly::one();
        let left = TensorPoly::simple(&[&a, &one]);
        let right = TensorPoly::simple(&[&one, &a]);
        assert_eq!(&left * &right, TensorPoly::simple(&[&a, &a]));
        assert_eq!(TensorPoly::from_poly(&a).pad_right(2), TensorPoly::simple(&[&a, &one, &one]));
        assert_eq!(TensorPoly::from_poly(&a).pad_left(1), right);
    }
}
