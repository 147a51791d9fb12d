use super::FpError;
use crate::ncalg::{GenKind, Tag};
use crate::scalar::{parse_rat, rat, Rational, Scalar};
use num::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_MOMENT_ORDER: usize = 16;

/// Moment data of a single generator.
#[derive(Clone, Debug, PartialEq)]
pub enum MomentData {
    /// `m₁, …, m_N` of a selfadjoint generator.
    Real(Vec<Rational>),
    /// `τ(U^n)` for `n = 1, …, N` of a unitary generator.
    Circle(Vec<Scalar>),
    /// Finitely many real atoms `(t, w)`.
    RealAtoms(Vec<(Rational, Rational)>),
    /// Finitely many atoms `(ζ, w)` with `|ζ| = 1`.
    CircleAtoms(Vec<(Scalar, Rational)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    pub tag: Tag,
    pub kind: GenKind,
    pub data: MomentData,
}

impl AlgebraSpec {
    pub fn new(tag: Tag, kind: GenKind, data: MomentData) -> Result<Self, FpError> {
        let spec = AlgebraSpec { tag, kind, data };
        spec.validate()?;
        Ok(spec)
    }

    /// Standard semicircular: `m_{2k}` are Catalan numbers.
    pub fn semicircular(tag: Tag, order: usize) -> Self {
        let mut m = Vec::with_capacity(order);
        let mut catalan = Rational::one();
        for n in 1..=order {
            if n % 2 == 1 {
                m.push(Rational::zero());
            } else {
                let k = (n / 2) as i64;
                catalan = catalan * rat(2 * (2 * k - 1), k + 1);
                m.push(catalan.clone());
            }
        }
        AlgebraSpec { tag, kind: GenKind::SelfAdjoint, data: MomentData::Real(m) }
    }

    /// Haar unitary: `τ(U^n) = 0` for `n ≠ 0`.
    pub fn haar(tag: Tag, order: usize) -> Self {
        AlgebraSpec { tag, kind: GenKind::Unitary, data: MomentData::Circle(vec![Scalar::zero(); order]) }
    }

    pub fn real_atoms(tag: Tag, atoms: Vec<(Rational, Rational)>) -> Result<Self, FpError> {
        Self::new(tag, GenKind::SelfAdjoint, MomentData::RealAtoms(atoms))
    }

    pub fn circle_atoms(tag: Tag, atoms: Vec<(Scalar, Rational)>) -> Result<Self, FpError> {
        Self::new(tag, GenKind::Unitary, MomentData::CircleAtoms(atoms))
    }

    /// Highest moment order available; `None` for atomic data.
    pub fn max_order(&self) -> Option<usize> {
        match &self.data {
            MomentData::Real(m) => Some(m.len()),
            MomentData::Circle(c) => Some(c.len()),
            _ => None,
        }
    }

    /// `τ(x^n)`; negative `n` only for unitaries.
    pub fn moment(&self, n: i64) -> Result<Scalar, FpError> {
        if n == 0 {
            return Ok(Scalar::one());
        }
        let short = |avail: usize| FpError::InsufficientMoments { tag: self.tag, needed: n.unsigned_abs() as usize, available: avail };
        match &self.data {
            MomentData::Real(m) => {
                if n < 0 {
                    return Err(FpError::KindMismatch(self.tag));
                }
                m.get(n as usize - 1).map(|x| Scalar::real(x.clone())).ok_or_else(|| short(m.len()))
            }
            MomentData::Circle(c) => {
                let v = c.get(n.unsigned_abs() as usize - 1).ok_or_else(|| short(c.len()))?;
                Ok(if n > 0 { v.clone() } else { v.conj() })
            }
            MomentData::RealAtoms(atoms) => {
                if n < 0 {
                    return Err(FpError::KindMismatch(self.tag));
                }
                Ok(Scalar::real(atoms.iter().map(|(t, w)| w * num::pow(t.clone(), n as usize)).fold(Rational::zero(), |a, b| a + b)))
            }
            MomentData::CircleAtoms(atoms) => {
                let mut s = Scalar::zero();
                for (z, w) in atoms {
                    let zp = if n > 0 { z.pow(n as u32) } else { z.conj().pow((-n) as u32) };
                    s += &(&zp * &Scalar::real(w.clone()));
                }
                Ok(s)
            }
        }
    }

    fn validate(&self) -> Result<(), FpError> {
        let bad = |why: &str| FpError::InvalidSpec { tag: self.tag, reason: why.to_string() };
        match (&self.data, self.kind) {
            (MomentData::Real(_) | MomentData::RealAtoms(_), GenKind::SelfAdjoint) => {}
            (MomentData::Circle(_) | MomentData::CircleAtoms(_), GenKind::Unitary) => {}
            _ => return Err(bad("moment data does not match generator kind")),
        }
        match &self.data {
            MomentData::RealAtoms(atoms) => check_weights(atoms.iter().map(|a| &a.1)).map_err(|e| bad(e))?,
            MomentData::CircleAtoms(atoms) => {
                check_weights(atoms.iter().map(|a| &a.1)).map_err(|e| bad(e))?;
                if atoms.iter().any(|(z, _)| !z.norm_sqr().is_one()) {
                    return Err(bad("circle atom off the unit circle"));
                }
            }
            MomentData::Real(m) => {
                let size = m.len() / 2 + 1;
                let hankel: Vec<Vec<Scalar>> =
                    (0..size).map(|i| (0..size).map(|j| self.moment((i + j) as i64).unwrap()).collect()).collect();
                if !is_psd_exact(hankel) {
                    return Err(FpError::NotPositive(self.tag));
                }
            }
            MomentData::Circle(c) => {
                let size = c.len() + 1;
                let toeplitz: Vec<Vec<Scalar>> =
                    (0..size).map(|i| (0..size).map(|j| self.moment(j as i64 - i as i64).unwrap()).collect()).collect();
                if !is_psd_exact(toeplitz) {
                    return Err(FpError::NotPositive(self.tag));
                }
            }
        }
        Ok(())
    }

    /// Random atomic law with 1–3 rational atoms.
    pub fn random_real<R: Rng>(tag: Tag, rng: &mut R) -> Self {
        let k = rng.random_range(1..=3);
        let points: Vec<Rational> = (0..k).map(|_| rat(rng.random_range(-6..=6), rng.random_range(1..=4))).collect();
        let weights = random_weights(k, rng);
        AlgebraSpec { tag, kind: GenKind::SelfAdjoint, data: MomentData::RealAtoms(points.into_iter().zip(weights).collect()) }
    }

    /// Random atomic law on the circle with 1–3 rational points.
    pub fn random_circle<R: Rng>(tag: Tag, rng: &mut R) -> Self {
        let k = rng.random_range(1..=3);
        let points: Vec<Scalar> = (0..k).map(|_| circle_point(&rat(rng.random_range(-5..=5), rng.random_range(1..=3)))).collect();
        let weights = random_weights(k, rng);
        AlgebraSpec { tag, kind: GenKind::Unitary, data: MomentData::CircleAtoms(points.into_iter().zip(weights).collect()) }
    }
}

/// `((1 − t²)/(1 + t²), 2t/(1 + t²))`: rational points of the unit circle.
pub fn circle_point(t: &Rational) -> Scalar {
    let t2 = t * t;
    let d = Rational::one() + &t2;
    Scalar::new((Rational::one() - &t2) / &d, (t * rat(2, 1)) / &d)
}

fn random_weights<R: Rng>(k: usize, rng: &mut R) -> Vec<Rational> {
    let raw: Vec<i64> = (0..k).map(|_| rng.random_range(1..=5)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|x| rat(x, total)).collect()
}

fn check_weights<'a>(ws: impl Iterator<Item = &'a Rational>) -> Result<(), &'static str> {
    let mut total = Rational::zero();
    let mut any = false;
    for w in ws {
        if !w.is_positive() {
            return Err("atom weights must be positive");
        }
        total += w;
        any = true;
    }
    if !any || !total.is_one() {
        return Err("atom weights must sum to 1");
    }
    Ok(())
}

/// Exact positive-semidefiniteness of a Hermitian matrix by symmetric elimination.
pub fn is_psd_exact(mut a: Vec<Vec<Scalar>>) -> bool {
    let n = a.len();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if !pivot.im.is_zero() || pivot.re.is_negative() {
            return false;
        }
        if pivot.re.is_zero() {
            if (k + 1..n).any(|j| !a[k][j].is_zero() || !a[j][k].is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k + 1..n {
                let d = &f * &a[k][j];
                a[i][j] -= &d;
            }
        }
    }
    true
}

/// Exact real or complex number in JSON: `"p/q"` or `["p/q", "p/q"]`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ExactJson {
    Real(String),
    Complex([String; 2]),
}

impl ExactJson {
    pub fn to_scalar(&self) -> Result<Scalar, FpError> {
        let parse = |s: &str| parse_rat(s).map_err(|e| FpError::Parse(e.to_string()));
        Ok(match self {
            ExactJson::Real(s) => Scalar::real(parse(s)?),
            ExactJson::Complex([re, im]) => Scalar::new(parse(re)?, parse(im)?),
        })
    }

    fn from_scalar(s: &Scalar) -> Self {
        if s.is_real() {
            ExactJson::Real(crate::scalar::rat_to_string(&s.re))
        } else {
            let [re, im] = s.to_pair();
            ExactJson::Complex([re, im])
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpecJson {
    pub tag: Tag,
    pub kind: GenKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<Vec<ExactJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<(ExactJson, ExactJson)>>,
}

impl TryFrom<&AlgebraSpecJson> for AlgebraSpec {
    type Error = FpError;
    fn try_from(j: &AlgebraSpecJson) -> Result<Self, FpError> {
        let real = |x: &ExactJson| -> Result<Rational, FpError> {
            let s = x.to_scalar()?;
            if !s.is_real() {
                return Err(FpError::Parse("expected a real number".into()));
            }
            Ok(s.re)
        };
        let data = match (&j.moments, &j.atoms, j.kind) {
            (Some(m), None, GenKind::SelfAdjoint) => MomentData::Real(m.iter().map(real).collect::<Result<_, _>>()?),
            (Some(m), None, GenKind::Unitary) => MomentData::Circle(m.iter().map(|x| x.to_scalar()).collect::<Result<_, _>>()?),
            (None, Some(a), GenKind::SelfAdjoint) => {
                MomentData::RealAtoms(a.iter().map(|(t, w)| Ok((real(t)?, real(w)?))).collect::<Result<_, FpError>>()?)
            }
            (None, Some(a), GenKind::Unitary) => {
                MomentData::CircleAtoms(a.iter().map(|(z, w)| Ok((z.to_scalar()?, real(w)?))).collect::<Result<_, FpError>>()?)
            }
            _ => {
                return Err(FpError::InvalidSpec {
                    tag: j.tag,
                    reason: "exactly one of moments/atoms is required, kind selfadjoint or unitary".into(),
                })
            }
        };
        AlgebraSpec::new(j.tag, j.kind, data)
    }
}

impl From<&AlgebraSpec> for AlgebraSpecJson {
    fn from(s: &AlgebraSpec) -> Self {
        let r = |x: &Rational| ExactJson::Real(crate::scalar::rat_to_string(x));
        let (moments, atoms) = match &s.data {
            MomentData::Real(m) => (Some(m.iter().map(r).collect()), None),
            MomentData::Circle(c) => (Some(c.iter().map(ExactJson::from_scalar).collect()), None),
            MomentData::RealAtoms(a) => (None, Some(a.iter().map(|(t, w)| (r(t), r(w))).collect())),
            MomentData::CircleAtoms(a) => (None, Some(a.iter().map(|(z, w)| (ExactJson::from_scalar(z), r(w))).collect())),
        };
        AlgebraSpecJson { tag: s.tag, kind: s.kind, moments, atoms }
    }
}
