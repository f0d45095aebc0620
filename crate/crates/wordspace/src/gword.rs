//! Group words: sequences of signed letters with free reduction.

use crate::letter::{Letter, SLetter};
use std::fmt;

/// A word over a group alphabet. Not automatically reduced; call
/// [`GWord::reduced`] where a reduced word is required.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GWord(pub Vec<SLetter>);

impl GWord {
    pub fn empty() -> Self {
        GWord(Vec::new())
    }

    pub fn from_letters<I: IntoIterator<Item = SLetter>>(it: I) -> Self {
        GWord(it.into_iter().collect())
    }

    /// Positive word from plain letters.
    pub fn positive<I: IntoIterator<Item = Letter>>(it: I) -> Self {
        GWord(it.into_iter().map(SLetter::pos).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: SLetter) {
        self.0.push(l);
    }

    /// Appends a letter, cancelling against the current last letter when the
    /// two form an inverse pair.
    pub fn push_reduce(&mut self, l: SLetter) {
        if self.0.last().is_some_and(|last| last.is_inverse_of(&l)) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn concat(&self, other: &GWord) -> GWord {
        let mut w = self.clone();
        w.0.extend(other.0.iter().cloned());
        w
    }

    /// Free reduction (removes all `x x^-1` pairs).
    pub fn reduced(&self) -> GWord {
        let mut out = GWord::empty();
        for l in &self.0 {
            out.push_reduce(l.clone());
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| !p[0].is_inverse_of(&p[1]))
    }

    pub fn inverse(&self) -> GWord {
        GWord(self.0.iter().rev().map(SLetter::inverse).collect())
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|l| !l.inv)
    }

    /// True when every base letter lies in `allowed`.
    pub fn over<'a, F: Fn(&Letter) -> bool>(&'a self, allowed: F) -> bool {
        self.0.iter().all(|l| allowed(&l.base))
    }

    /// Mirror image: reverses the letter sequence, letters untouched.
    pub fn mirror(&self) -> GWord {
        GWord(self.0.iter().rev().cloned().collect())
    }

    pub fn cyclic_shift(&self, offset: usize) -> GWord {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = offset % self.0.len();
        let mut v = Vec::with_capacity(self.0.len());
        v.extend(self.0[k..].iter().cloned());
        v.extend(self.0[..k].iter().cloned());
        GWord(v)
    }

    /// Cyclically reduced form: free reduction, then repeated cancellation of
    /// the first letter against the last.
    pub fn cyclic_reduced(&self) -> GWord {
        let mut w = self.reduced();
        while w.0.len() >= 2 && w.0[0].is_inverse_of(w.0.last().unwrap()) {
            w.0.pop();
            w.0.remove(0);
        }
        w
    }

    /// Lexicographically least rotation. Deterministic canonical form for
    /// states that identify words up to a cyclic shift.
    pub fn least_rotation(&self) -> GWord {
        if self.0.len() <= 1 {
            return self.clone();
        }
        let mut best = self.clone();
        for k in 1..self.0.len() {
            let rot = self.cyclic_shift(k);
            if rot < best {
                best = rot;
            }
        }
        best
    }

    /// Index of the rotation `r` of `self` such that
    /// `self.cyclic_shift(r) == target`, if one exists.
    pub fn rotation_to(&self, target: &GWord) -> Option<usize> {
        if self.0.len() != target.0.len() {
            return None;
        }
        if self.0.is_empty() {
            return Some(0);
        }
        (0..self.0.len()).find(|&k| &self.cyclic_shift(k) == target)
    }

    pub fn parse(tokens: &[&str]) -> Option<GWord> {
        let mut w = GWord::empty();
        for t in tokens {
            w.push(SLetter::parse(t)?);
        }
        Some(w)
    }
}

impl fmt::Display for GWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        let mut first = true;
        for l in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for GWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GWord {
        if s.is_empty() {
            return GWord::empty();
        }
        GWord::parse(&s.split_whitespace().collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn reduction() {
        assert_eq!(w("a a^-1 b").reduced(), w("b"));
        assert_eq!(w("a b b^-1 a^-1").reduced(), GWord::empty());
        assert!(w("a b a^-1").is_reduced());
    }

    #[test]
    fn inverse_concat_reduces_to_empty() {
        let x = w("a b c^-1");
        assert_eq!(x.concat(&x.inverse()).reduced(), GWord::empty());
    }

    #[test]
    fn mirror_is_involution() {
        let x = w("a b c");
        assert_eq!(x.mirror().mirror(), x);
        assert_eq!(x.mirror(), w("c b a"));
        assert_eq!(GWord::empty().mirror(), GWord::empty());
    }

    #[test]
    fn rotations() {
        let x = w("a b c");
        assert_eq!(x.cyclic_shift(1), w("b c a"));
        assert_eq!(x.rotation_to(&w("c a b")), Some(2));
        assert_eq!(w("b a a").least_rotation(), w("a a b"));
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(w("a b a^-1").cyclic_reduced(), w("b"));
    }
}
