use super::derive::Derivation;
use super::norm::{geometric_tail, GenNorms};
use super::poly::NCPoly;
use super::tensor::TensorPoly;
use super::word::{GenKind, GenSymbol, NCWord, Tag};
use super::NcError;
use nalgebra::DMatrix;
use num::complex::Complex64;
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub type CMatrix = DMatrix<Complex64>;

const UNITARY_TOL: f64 = 1e-12;

/// Operator norm (largest singular value).
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Concrete matrices for each generator `(tag, index)`.
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    dim: Option<usize>,
    mats: BTreeMap<(Tag, u32), CMatrix>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn insert(&mut self, tag: Tag, m: CMatrix) -> Result<(), NcError> {
        self.insert_indexed(tag, 0, m)
    }

    pub fn insert_indexed(&mut self, tag: Tag, index: u32, m: CMatrix) -> Result<(), NcError> {
        if !m.is_square() {
            return Err(NcError::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        match self.dim {
            Some(d) if d != m.nrows() => return Err(NcError::DimensionMismatch { expected: d, found: m.nrows() }),
            _ => self.dim = Some(m.nrows()),
        }
        self.mats.insert((tag, index), m);
        Ok(())
    }

    pub fn get(&self, tag: Tag, index: u32) -> Option<&CMatrix> {
        self.mats.get(&(tag, index))
    }

    fn require_dim(&self) -> Result<usize, NcError> {
        self.dim.ok_or(NcError::EmptyAssignment)
    }

    pub fn letter(&self, l: &GenSymbol) -> Result<CMatrix, NcError> {
        let m = self.mats.get(&(l.tag, l.index)).ok_or(NcError::MissingAssignment(l.tag))?;
        if l.kind == GenKind::Unitary {
            let defect = op_norm(&(m.adjoint() * m - CMatrix::identity(m.nrows(), m.nrows())));
            if defect > UNITARY_TOL {
                return Err(NcError::NotUnitaryMatrix { tag: l.tag, defect });
            }
        }
        Ok(if l.starred { m.adjoint() } else { m.clone() })
    }

    pub fn word(&self, w: &NCWord) -> Result<CMatrix, NcError> {
        let n = self.require_dim()?;
        let mut out = CMatrix::identity(n, n);
        for l in w.letters() {
            out = out * self.letter(l)?;
        }
        Ok(out)
    }

    /// Operator norms of the assigned matrices, maximized over generators of a tag.
    pub fn norms(&self) -> GenNorms {
        let mut out = BTreeMap::new();
        for (&(t, _), m) in &self.mats {
            let e = out.entry(t).or_insert(0.0f64);
            *e = e.max(op_norm(m));
        }
        GenNorms(out)
    }
}

struct WordCache<'a> {
    asg: &'a Assignment,
    cache: HashMap<NCWord, CMatrix>,
}

impl<'a> WordCache<'a> {
    fn new(asg: &'a Assignment) -> Self {
        WordCache { asg, cache: HashMap::new() }
    }

    fn get(&mut self, w: &NCWord) -> Result<&CMatrix, NcError> {
        if !self.cache.contains_key(w) {
            let m = self.asg.word(w)?;
            self.cache.insert(w.clone(), m);
        }
        Ok(&self.cache[w])
    }
}

fn c64(s: &crate::scalar::Scalar) -> Complex64 {
    s.to_c64()
}

pub fn eval_poly(f: &NCPoly, asg: &Assignment) -> Result<CMatrix, NcError> {
    let n = asg.require_dim()?;
    let mut wc = WordCache::new(asg);
    let mut out = CMatrix::zeros(n, n);
    for (w, c) in f.terms() {
        out += wc.get(w)? * c64(c);
    }
    Ok(out)
}

/// Order-`s` tensors land in the `n^s`-dimensional Kronecker space.
pub fn eval_tensor(t: &TensorPoly, asg: &Assignment) -> Result<CMatrix, NcError> {
    let n = asg.require_dim()?;
    let size = n.pow(t.order() as u32);
    let mut wc = WordCache::new(asg);
    let mut out = CMatrix::zeros(size, size);
    for (slots, c) in t.terms() {
        let mut k = wc.get(&slots[0])?.clone();
        for w in &slots[1..] {
            k = k.kronecker(wc.get(w)?);
        }
        out += k * c64(c);
    }
    Ok(out)
}

/// `θ_s[m₁,…,m_s](w₁ ⊗ ⋯ ⊗ w_{s+1}) = w₁ m₁ w₂ ⋯ m_s w_{s+1}`, extended linearly.
pub fn theta_contract(ms: &[CMatrix], t: &TensorPoly, asg: &Assignment) -> Result<CMatrix, NcError> {
    if ms.len() + 1 != t.order() {
        return Err(NcError::OrderMismatch { expected: ms.len() + 1, found: t.order() });
    }
    let n = asg.require_dim()?;
    for m in ms {
        if m.nrows() != n || m.ncols() != n {
            return Err(NcError::DimensionMismatch { expected: n, found: m.nrows() });
        }
    }
    let mut wc = WordCache::new(asg);
    let mut out = CMatrix::zeros(n, n);
    for (slots, c) in t.terms() {
        let mut acc = wc.get(&slots[0])?.clone();
        for (j, w) in slots[1..].iter().enumerate() {
            acc *= &ms[j];
            if !w.is_empty() {
                acc *= wc.get(w)?;
            }
        }
        out += acc * c64(c);
    }
    Ok(out)
}

/// `θ_s[m,…,m]`, grouping runs of empty slots into powers of `m`.
fn theta_same(m_pows: &mut Vec<CMatrix>, t: &TensorPoly, wc: &mut WordCache) -> Result<CMatrix, NcError> {
    let n = m_pows[0].nrows();
    let mut out = CMatrix::zeros(n, n);
    for (slots, c) in t.terms() {
        let mut acc = (!slots[0].is_empty()).then(|| wc.get(&slots[0]).cloned()).transpose()?;
        let mut run = 0usize;
        for w in &slots[1..] {
            run += 1;
            if !w.is_empty() {
                acc = Some(times(acc, power(m_pows, run)) * wc.get(w)?);
                run = 0;
            }
        }
        if run > 0 {
            acc = Some(times(acc, power(m_pows, run)));
        }
        out += acc.unwrap_or_else(|| CMatrix::identity(n, n)) * c64(c);
    }
    Ok(out)
}

fn times(acc: Option<CMatrix>, m: &CMatrix) -> CMatrix {
    match acc {
        Some(a) => a * m,
        None => m.clone(),
    }
}

fn power(pows: &mut Vec<CMatrix>, k: usize) -> &CMatrix {
    while pows.len() <= k {
        let next = pows.last().unwrap() * &pows[1];
        pows.push(next);
    }
    &pows[k]
}

/// Partial sum of the `δ`-series for `ρ_{(1−m)}(f)` and a certified tail.
#[derive(Clone, Debug)]
pub struct RhoSeries {
    pub value: CMatrix,
    /// `None` when the geometric tail criterion fails.
    pub tail_bound: Option<f64>,
    pub p_max: usize,
}

/// `Σ_{p ≤ p_max} θ_p[m,…,m](δ^{(p)}(f))` with a tail bound at `R = ‖m‖`.
pub fn rho_series_eval(f: &NCPoly, split: &BTreeSet<Tag>, m: &CMatrix, asg: &Assignment, p_max: usize) -> Result<RhoSeries, NcError> {
    let n = asg.require_dim()?;
    if m.nrows() != n || m.ncols() != n {
        return Err(NcError::DimensionMismatch { expected: n, found: m.nrows() });
    }
    let r = op_norm(m);
    if r >= 1.0 {
        return Err(NcError::NormTooLarge(r));
    }
    let delta = Derivation::Delta { split: split.clone() };
    let mut wc = WordCache::new(asg);
    let mut pows = vec![CMatrix::identity(n, n), m.clone()];
    let mut t = TensorPoly::from_poly(f);
    let mut value = eval_poly(f, asg)?;
    for _ in 1..=p_max {
        t = delta.apply_leftmost(&t)?;
        if t.is_zero() {
            break;
        }
        value += theta_same(&mut pows, &t, &mut wc)?;
    }
    let tail_bound = if t.is_zero() || r == 0.0 {
        Some(0.0)
    } else {
        geometric_tail(&t, split, r, t.order() - 1, &asg.norms())?
    };
    Ok(RhoSeries { value, tail_bound, p_max })
}

/// `ρ_{(1−m)}(f)` evaluated directly: split letters become `(1−m) x (1−m)^{-1}`.
pub fn rho_direct(f: &NCPoly, split: &BTreeSet<Tag>, m: &CMatrix, asg: &Assignment) -> Result<CMatrix, NcError> {
    let n = asg.require_dim()?;
    let s = CMatrix::identity(n, n) - m;
    let s_inv = s.clone().try_inverse().ok_or(NcError::NormTooLarge(op_norm(m)))?;
    let mut out = CMatrix::zeros(n, n);
    for (w, c) in f.terms() {
        let mut acc = CMatrix::identity(n, n);
        for l in w.letters() {
            let x = asg.letter(l)?;
            acc = if split.contains(&l.tag) { acc * &s * x * &s_inv } else { acc * x };
        }
        out += acc * c64(c);
    }
    Ok(out)
}
