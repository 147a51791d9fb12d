use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;

pub type Tag = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    SelfAdjoint,
    Unitary,
    General,
}

/// A generator letter of a free component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenSymbol {
    pub tag: Tag,
    pub index: u32,
    pub starred: bool,
    pub kind: GenKind,
}

impl GenSymbol {
    pub fn new(tag: Tag, index: u32, kind: GenKind) -> Self {
        GenSymbol { tag, index, starred: false, kind }
    }

    pub fn selfadjoint(tag: Tag) -> Self {
        Self::new(tag, 0, GenKind::SelfAdjoint)
    }

    pub fn unitary(tag: Tag) -> Self {
        Self::new(tag, 0, GenKind::Unitary)
    }

    pub fn general(tag: Tag) -> Self {
        Self::new(tag, 0, GenKind::General)
    }

    /// Selfadjoint letters are fixed by the star flip.
    pub fn star(self) -> Self {
        match self.kind {
            GenKind::SelfAdjoint => self,
            _ => GenSymbol { starred: !self.starred, ..self },
        }
    }

    /// Drops a spurious star on a selfadjoint letter.
    pub fn normalized(self) -> Self {
        match self.kind {
            GenKind::SelfAdjoint => GenSymbol { starred: false, ..self },
            _ => self,
        }
    }

    pub fn same_generator(&self, other: &GenSymbol) -> bool {
        self.tag == other.tag && self.index == other.index
    }

    /// True when `self · other` reduces to 1.
    pub fn cancels(&self, other: &GenSymbol) -> bool {
        self.kind == GenKind::Unitary
            && other.kind == GenKind::Unitary
            && self.same_generator(other)
            && self.starred != other.starred
    }
}

impl fmt::Display for GenSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.tag)?;
        if self.index > 0 {
            write!(f, "_{}", self.index)?;
        }
        if self.starred {
            write!(f, "*")?;
        }
        Ok(())
    }
}

/// A reduced word: no adjacent `U U*` or `U* U`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct NCWord(Vec<GenSymbol>);

impl NCWord {
    pub fn empty() -> Self {
        NCWord(Vec::new())
    }

    pub fn letter(s: GenSymbol) -> Self {
        NCWord(vec![s.normalized()])
    }

    pub fn from_letters<I: IntoIterator<Item = GenSymbol>>(letters: I) -> Self {
        let mut w = NCWord::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, l: GenSymbol) {
        let l = l.normalized();
        match self.0.last() {
            Some(last) if last.cancels(&l) => {
                self.0.pop();
            }
            _ => self.0.push(l),
        }
    }

    pub fn letters(&self) -> &[GenSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Subwords of reduced words are reduced.
    pub fn slice(&self, r: Range<usize>) -> NCWord {
        NCWord(self.0[r].to_vec())
    }

    pub fn concat(&self, other: &NCWord) -> NCWord {
        let mut out = self.clone();
        for &l in &other.0 {
            out.push(l);
        }
        out
    }

    pub fn adjoint(&self) -> NCWord {
        NCWord::from_letters(self.0.iter().rev().map(|l| l.star()))
    }

    pub fn pow(&self, k: usize) -> NCWord {
        let mut out = NCWord::empty();
        for _ in 0..k {
            out = out.concat(self);
        }
        out
    }

    pub fn count_tags(&self, pred: impl Fn(&GenSymbol) -> bool) -> usize {
        self.0.iter().filter(|l| pred(l)).count()
    }
}

impl Ord for NCWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for NCWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NCWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_reduction() {
        let u = GenSymbol::unitary(0);
        let a = GenSymbol::selfadjoint(1);
        assert!(NCWord::from_letters([u, u.star()]).is_empty());
        assert!(NCWord::from_letters([u.star(), u]).is_empty());
        let w = NCWord::from_letters([u, a, u.star()]);
        assert_eq!(w.len(), 3);
        assert_eq!(w.concat(&NCWord::from_letters([u, a])), NCWord::from_letters([u, a, a]));
        let x = NCWord::from_letters([a, u]);
        assert_eq!(x.concat(&x.adjoint()), NCWord::from_letters([a, a]));
    }

    #[test]
    fn selfadjoint_star_is_identity() {
        let a = GenSymbol::selfadjoint(3);
        assert_eq!(a.star(), a);
        let g = GenSymbol::general(3);
        assert_ne!(g.star(), g);
        assert_eq!(g.star().star(), g);
    }
}
