use super::qmatrix::QMatrix;
use super::spec::AlgebraSpec;
use super::FpError;
use crate::ncalg::{GenKind, GenSymbol, NCPoly, NCWord, Tag, TensorPoly};
use crate::scalar::Scalar;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::RwLock;

/// A power `x^k` of one generator; negative powers only for unitaries.
type Block = (Tag, i64);
type TauKey = (Vec<Block>, Vec<Block>);

#[derive(Debug)]
pub enum Backend {
    /// Reduced free product of the single-generator laws.
    Symbolic(BTreeMap<Tag, AlgebraSpec>),
    /// Normalized trace on exact matrices; no freeness is assumed.
    Matrix(BTreeMap<Tag, (GenKind, QMatrix)>),
}

#[derive(Debug)]
pub struct FreeState {
    backend: Backend,
    memo: RwLock<HashMap<TauKey, Scalar>>,
}

impl FreeState {
    pub fn symbolic<I: IntoIterator<Item = AlgebraSpec>>(specs: I) -> Result<Self, FpError> {
        let mut map = BTreeMap::new();
        for s in specs {
            if map.insert(s.tag, s).is_some() {
                return Err(FpError::DuplicateTag);
            }
        }
        Ok(FreeState { backend: Backend::Symbolic(map), memo: RwLock::new(HashMap::new()) })
    }

    pub fn matrix<I: IntoIterator<Item = (Tag, GenKind, QMatrix)>>(mats: I) -> Result<Self, FpError> {
        let mut map = BTreeMap::new();
        let mut dim = None;
        for (tag, kind, m) in mats {
            if *dim.get_or_insert(m.dim()) != m.dim() {
                return Err(FpError::InvalidSpec { tag, reason: "matrix dimensions differ".into() });
            }
            let ok = match kind {
                GenKind::SelfAdjoint => m.is_hermitian(),
                GenKind::Unitary => m.is_unitary(),
                GenKind::General => true,
            };
            if !ok {
                return Err(FpError::InvalidSpec { tag, reason: format!("matrix is not {kind:?}") });
            }
            if map.insert(tag, (kind, m)).is_some() {
                return Err(FpError::DuplicateTag);
            }
        }
        Ok(FreeState { backend: Backend::Matrix(map), memo: RwLock::new(HashMap::new()) })
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.backend, Backend::Symbolic(_))
    }

    pub fn tau(&self, f: &NCPoly) -> Result<Scalar, FpError> {
        let mut s = Scalar::zero();
        for (w, c) in f.terms() {
            s += &(c * &self.tau_word(w)?);
        }
        Ok(s)
    }

    pub fn tau_word(&self, w: &NCWord) -> Result<Scalar, FpError> {
        match &self.backend {
            Backend::Symbolic(specs) => {
                let blocks = self.blocks(specs, w)?;
                self.tau_rec(specs, &[], &blocks)
            }
            Backend::Matrix(mats) => {
                let n = mats.values().next().map(|(_, m)| m.dim()).unwrap_or(1);
                let mut acc = QMatrix::identity(n);
                for l in w.letters() {
                    let (kind, m) = mats.get(&l.tag).ok_or(FpError::UnknownTag(l.tag))?;
                    if *kind != l.kind || l.index != 0 {
                        return Err(FpError::KindMismatch(l.tag));
                    }
                    acc = if l.starred { &acc * &m.adjoint() } else { &acc * m };
                }
                Ok(acc.normalized_trace())
            }
        }
    }

    /// `τ⊗…⊗τ`, slotwise.
    pub fn tau_tensor(&self, t: &TensorPoly) -> Result<Scalar, FpError> {
        let mut s = Scalar::zero();
        for (slots, c) in t.terms() {
            let mut prod = c.clone();
            for w in slots {
                if prod.is_zero() {
                    break;
                }
                prod *= &self.tau_word(w)?;
            }
            s += &prod;
        }
        Ok(s)
    }

    fn blocks(&self, specs: &BTreeMap<Tag, AlgebraSpec>, w: &NCWord) -> Result<Vec<Block>, FpError> {
        let mut out: Vec<Block> = Vec::new();
        for l in w.letters() {
            let spec = specs.get(&l.tag).ok_or(FpError::UnknownTag(l.tag))?;
            if spec.kind != l.kind || l.index != 0 {
                return Err(FpError::KindMismatch(l.tag));
            }
            push_block(&mut out, (l.tag, if l.starred { -1 } else { 1 }));
        }
        Ok(out)
    }

    fn moment(specs: &BTreeMap<Tag, AlgebraSpec>, b: Block) -> Result<Scalar, FpError> {
        specs.get(&b.0).ok_or(FpError::UnknownTag(b.0))?.moment(b.1)
    }

    /// `τ(p̊₁ ⋯ p̊ⱼ · r₁ ⋯ rₖ)` where `p̊ = p − τ(p)` alternate between components.
    /// Each `r` is split as `r̊ + τ(r)`, a centered `r̊` next to a centered piece of the
    /// same component is merged back, and a fully centered alternating product has trace 0.
    fn tau_rec(&self, specs: &BTreeMap<Tag, AlgebraSpec>, p: &[Block], r: &[Block]) -> Result<Scalar, FpError> {
        if r.is_empty() {
            return Ok(if p.is_empty() { Scalar::one() } else { Scalar::zero() });
        }
        if p.is_empty() && r.len() == 1 {
            return Self::moment(specs, r[0]);
        }
        let key = (p.to_vec(), r.to_vec());
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let x = r[0];
        let value = match p.last() {
            Some(&last) if last.0 == x.0 => {
                let head = &p[..p.len() - 1];
                let merged = (x.0, last.1 + x.1);
                let first = if merged.1 == 0 {
                    self.tau_rec(specs, head, &r[1..])?
                } else {
                    let mut rr = Vec::with_capacity(r.len());
                    rr.push(merged);
                    rr.extend_from_slice(&r[1..]);
                    self.tau_rec(specs, head, &rr)?
                };
                let t_last = Self::moment(specs, last)?;
                if t_last.is_zero() {
                    first
                } else {
                    &first - &(&t_last * &self.tau_rec(specs, head, r)?)
                }
            }
            _ => {
                let mut pp = p.to_vec();
                pp.push(x);
                let mut v = self.tau_rec(specs, &pp, &r[1..])?;
                let tx = Self::moment(specs, x)?;
                if !tx.is_zero() {
                    v += &(&tx * &self.tau_rec(specs, p, &r[1..])?);
                }
                v
            }
        };
        self.memo.write().unwrap().insert(key, value.clone());
        Ok(value)
    }

    /// Conditional expectation onto the subalgebra generated by `target`.
    pub fn cond_expect(&self, target: &BTreeSet<Tag>, f: &NCPoly) -> Result<NCPoly, FpError> {
        if !self.is_symbolic() {
            return Err(FpError::SymbolicOnly);
        }
        let mut memo = HashMap::new();
        let mut out = NCPoly::zero();
        for (w, c) in f.terms() {
            let pieces = split_pieces(w, target);
            out = &out + &self.expect_rec(target, &[], &pieces, &mut memo)?.scale(c);
        }
        Ok(out)
    }

    /// `E(p̊₁ ⋯ p̊ⱼ · r₁ ⋯ rₖ)` with pieces alternating between the target algebra and
    /// the rest. Leading target pieces factor out to the left.
    fn expect_rec(
        &self,
        target: &BTreeSet<Tag>,
        p: &[NCWord],
        r: &[NCWord],
        memo: &mut HashMap<(Vec<NCWord>, Vec<NCWord>), NCPoly>,
    ) -> Result<NCPoly, FpError> {
        if r.is_empty() {
            return Ok(if p.is_empty() { NCPoly::one() } else { NCPoly::zero() });
        }
        let key = (p.to_vec(), r.to_vec());
        if let Some(v) = memo.get(&key) {
            return Ok(v.clone());
        }
        let x = &r[0];
        let in_target = |w: &NCWord| target.contains(&w.letters()[0].tag);
        let value = if p.is_empty() && in_target(x) {
            &NCPoly::word(x.clone()) * &self.expect_rec(target, p, &r[1..], memo)?
        } else {
            match p.last() {
                Some(last) if in_target(last) == in_target(x) => {
                    let head = &p[..p.len() - 1];
                    let merged = last.concat(x);
                    let first = if merged.is_empty() {
                        self.expect_rec(target, head, &r[1..], memo)?
                    } else {
                        let mut rr = vec![merged];
                        rr.extend_from_slice(&r[1..]);
                        self.expect_rec(target, head, &rr, memo)?
                    };
                    let t_last = self.tau_word(last)?;
                    if t_last.is_zero() {
                        first
                    } else {
                        &first - &self.expect_rec(target, head, r, memo)?.scale(&t_last)
                    }
                }
                _ => {
                    let mut pp = p.to_vec();
                    pp.push(x.clone());
                    let mut v = self.expect_rec(target, &pp, &r[1..], memo)?;
                    let tx = self.tau_word(x)?;
                    if !tx.is_zero() {
                        v = &v + &self.expect_rec(target, p, &r[1..], memo)?.scale(&tx);
                    }
                    v
                }
            }
        };
        memo.insert(key, value.clone());
        Ok(value)
    }
}

fn push_block(out: &mut Vec<Block>, b: Block) {
    match out.last_mut() {
        Some(last) if last.0 == b.0 => {
            last.1 += b.1;
            if last.1 == 0 {
                out.pop();
            }
        }
        _ => out.push(b),
    }
}

/// Maximal runs of letters inside and outside `target`.
fn split_pieces(w: &NCWord, target: &BTreeSet<Tag>) -> Vec<NCWord> {
    let mut out: Vec<Vec<GenSymbol>> = Vec::new();
    let mut prev: Option<bool> = None;
    for &l in w.letters() {
        let t = target.contains(&l.tag);
        if prev == Some(t) {
            out.last_mut().unwrap().push(l);
        } else {
            out.push(vec![l]);
            prev = Some(t);
        }
    }
    out.into_iter().map(NCWord::from_letters).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn semicircles() -> FreeState {
        FreeState::symbolic([AlgebraSpec::semicircular(0, 12), AlgebraSpec::semicircular(1, 12)]).unwrap()
    }

    fn w(letters: &[GenSymbol]) -> NCWord {
        NCWord::from_letters(letters.iter().copied())
    }

    #[test]
    fn free_semicircular_moments() {
        let s = semicircles();
        let (x, y) = (GenSymbol::selfadjoint(0), GenSymbol::selfadjoint(1));
        assert_eq!(s.tau_word(&w(&[x, y, x, y])).unwrap(), Scalar::zero());
        assert_eq!(s.tau_word(&w(&[x, x, y, y])).unwrap(), Scalar::one());
        assert_eq!(s.tau_word(&w(&[x, x, y, y, x, x])).unwrap(), Scalar::from_int(2));
        assert_eq!(s.tau_word(&w(&[x, y, y, x])).unwrap(), Scalar::one());
    }

    #[test]
    fn haar_products_vanish() {
        let s = FreeState::symbolic([AlgebraSpec::haar(0, 16), AlgebraSpec::haar(1, 16)]).unwrap();
        let uv = w(&[GenSymbol::unitary(0), GenSymbol::unitary(1)]);
        for n in 1..=6 {
            assert!(s.tau_word(&uv.pow(n)).unwrap().is_zero());
        }
    }

    #[test]
    fn bimodule_expectation() {
        let a_spec = AlgebraSpec::real_atoms(0, vec![(rat(1, 1), rat(1, 3)), (rat(-2, 1), rat(2, 3))]).unwrap();
        let c_spec = AlgebraSpec::real_atoms(1, vec![(rat(3, 1), rat(1, 2)), (rat(1, 2), rat(1, 2))]).unwrap();
        let s = FreeState::symbolic([a_spec, c_spec.clone()]).unwrap();
        let (a, c) = (GenSymbol::selfadjoint(0), GenSymbol::selfadjoint(1));
        let target = BTreeSet::from([0]);
        // E(c a c) = τ(c)² a + τ(a)(τ(c²) − τ(c)²)
        let e = s.cond_expect(&target, &NCPoly::word(w(&[c, a, c]))).unwrap();
        let (t1, t2) = (c_spec.moment(1).unwrap(), c_spec.moment(2).unwrap());
        let ta = s.tau_word(&w(&[a])).unwrap();
        let var = &t2 - &(&t1 * &t1);
        let expected = NCPoly::from_terms([(w(&[a]), &t1 * &t1), (NCWord::empty(), &ta * &var)]);
        assert_eq!(e, expected);
        let e = s.cond_expect(&target, &NCPoly::word(w(&[a, c, a]))).unwrap();
        assert_eq!(e, NCPoly::monomial(w(&[a, a]), t1.clone()));
    }

    #[test]
    fn matrix_backend_is_plain_trace() {
        let d = QMatrix::diagonal(vec![Scalar::from_int(1), Scalar::from_int(-1)]);
        let p = QMatrix::from_fn(2, |i, j| if i != j { Scalar::one() } else { Scalar::zero() });
        let s = FreeState::matrix([(0, GenKind::SelfAdjoint, d), (1, GenKind::Unitary, p)]).unwrap();
        let (a, u) = (GenSymbol::selfadjoint(0), GenSymbol::unitary(1));
        assert_eq!(s.tau_word(&w(&[a, u, a, u.star()])).unwrap(), Scalar::from_int(-1));
        assert!(matches!(s.cond_expect(&BTreeSet::from([0]), &NCPoly::one()), Err(FpError::SymbolicOnly)));
    }
}
