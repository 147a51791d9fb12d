use super::poly::NCPoly;
use super::tensor::TensorPoly;
use super::word::{GenSymbol, NCWord};
use crate::scalar::{ParseRationalError, Scalar};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTermJson {
    pub word: Vec<GenSymbol>,
    pub coeff: [String; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub terms: Vec<PolyTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorTermJson {
    pub slots: Vec<Vec<GenSymbol>>,
    pub coeff: [String; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorJson {
    pub order: usize,
    pub terms: Vec<TensorTermJson>,
}

impl From<NCPoly> for PolyJson {
    fn from(p: NCPoly) -> Self {
        PolyJson { terms: p.terms().map(|(w, c)| PolyTermJson { word: w.letters().to_vec(), coeff: c.to_pair() }).collect() }
    }
}

impl TryFrom<PolyJson> for NCPoly {
    type Error = ParseRationalError;
    fn try_from(j: PolyJson) -> Result<Self, Self::Error> {
        let mut p = NCPoly::zero();
        for t in j.terms {
            p.add_term(NCWord::from_letters(t.word), Scalar::from_pair(&t.coeff[0], &t.coeff[1])?);
        }
        Ok(p)
    }
}

impl From<TensorPoly> for TensorJson {
    fn from(t: TensorPoly) -> Self {
        TensorJson {
            order: t.order(),
            terms: t
                .terms()
                .map(|(s, c)| TensorTermJson { slots: s.iter().map(|w| w.letters().to_vec()).collect(), coeff: c.to_pair() })
                .collect(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TensorJsonError {
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("term has {found} slots, tensor order is {order}")]
    Order { order: usize, found: usize },
}

impl TryFrom<TensorJson> for TensorPoly {
    type Error = TensorJsonError;
    fn try_from(j: TensorJson) -> Result<Self, Self::Error> {
        if j.order == 0 {
            return Err(TensorJsonError::Order { order: 0, found: 0 });
        }
        let mut t = TensorPoly::zero(j.order);
        for term in j.terms {
            if term.slots.len() != j.order {
                return Err(TensorJsonError::Order { order: j.order, found: term.slots.len() });
            }
            let slots = term.slots.into_iter().map(NCWord::from_letters).collect();
            t.add_term(slots, Scalar::from_pair(&term.coeff[0], &term.coeff[1])?);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_round_trip() {
        let a = NCPoly::letter(GenSymbol::selfadjoint(0));
        let u = NCPoly::letter(GenSymbol::unitary(1));
        let f = &(&a * &u).scale(&Scalar::complex((1, 2), (-3, 4))) + &u.adjoint();
        let s = serde_json::to_string(&f).unwrap();
        let g: NCPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn tensor_order_is_checked() {
        let bad = r#"{"order":2,"terms":[{"slots":[[]],"coeff":["1/1","0/1"]}]}"#;
        assert!(serde_json::from_str::<TensorPoly>(bad).is_err());
    }
}
