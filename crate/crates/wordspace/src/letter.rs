//! Letters and signed letters.
//!
//! Every alphabet in the workbench (tape alphabets, state sets, generator
//! sets of presentations) is a set of `Letter`s. A letter is an interned
//! string token; tokens are whitespace-free and must not contain `^`, `(`
//! or `)`, which are reserved by the file formats.

use std::fmt;
use std::sync::Arc;

/// An atomic symbol. Cheap to clone, ordered by its token.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(Arc<str>);

impl Letter {
    pub fn new(name: &str) -> Self {
        debug_assert!(Self::valid_token(name), "invalid letter token: {name:?}");
        Letter(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Derived letter `<self>.<suffix>`, used by the transformation passes
    /// for fresh states and renamed copies.
    pub fn dot(&self, suffix: &str) -> Letter {
        Letter::new(&format!("{}.{}", self.0, suffix))
    }

    pub fn valid_token(name: &str) -> bool {
        !name.is_empty()
            && !name.contains(|c: char| c.is_whitespace())
            && !name.contains(['^', '(', ')'])
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Letter {
    fn from(s: &str) -> Self {
        Letter::new(s)
    }
}

/// A letter with a sign: `x` or `x^-1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SLetter {
    pub base: Letter,
    pub inv: bool,
}

impl SLetter {
    pub fn pos(base: Letter) -> Self {
        SLetter { base, inv: false }
    }

    pub fn neg(base: Letter) -> Self {
        SLetter { base, inv: true }
    }

    pub fn inverse(&self) -> Self {
        SLetter { base: self.base.clone(), inv: !self.inv }
    }

    pub fn is_inverse_of(&self, other: &SLetter) -> bool {
        self.base == other.base && self.inv != other.inv
    }

    /// Parses `tok` or `tok^-1`.
    pub fn parse(tok: &str) -> Option<SLetter> {
        if let Some(base) = tok.strip_suffix("^-1") {
            if Letter::valid_token(base) {
                return Some(SLetter::neg(Letter::new(base)));
            }
            return None;
        }
        if Letter::valid_token(tok) {
            return Some(SLetter::pos(Letter::new(tok)));
        }
        None
    }
}

impl fmt::Display for SLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv {
            write!(f, "{}^-1", self.base)
        } else {
            write!(f, "{}", self.base)
        }
    }
}

impl fmt::Debug for SLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_validity() {
        assert!(Letter::valid_token("a'"));
        assert!(Letter::valid_token("p1.open.3-"));
        assert!(!Letter::valid_token("a b"));
        assert!(!Letter::valid_token("x^-1"));
        assert!(!Letter::valid_token(""));
    }

    #[test]
    fn signed_parse_roundtrip() {
        let x = SLetter::parse("k1").unwrap();
        assert!(!x.inv);
        let y = SLetter::parse("k1^-1").unwrap();
        assert!(y.inv);
        assert!(x.is_inverse_of(&y));
        assert_eq!(format!("{y}"), "k1^-1");
    }
}
