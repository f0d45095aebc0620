//! Group presentations: ordered generators, relators tagged by kind.
//!
//! The text format is line-based and bit-exact across runs: one
//! `gen <name>` line per generator, one `rel <letters...>` line per
//! relator, inverse letters written `x^-1`.

use crate::gword::GWord;
use crate::letter::{Letter, SLetter};
use crate::machine_io::{Lines, ParseError};
use std::collections::BTreeSet;
use std::fmt::Write as _;

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum RelatorKind {
    /// Relates a rule's left side at one position to its right side.
    Transition,
    /// A rule letter commuting with a tape letter of its domain.
    Commutator,
    /// The single relator identifying the accept word with the identity.
    Hub,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relator {
    pub word: GWord,
    pub kind: RelatorKind,
    /// Rule name and position the relator came from, for reports.
    pub source: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Presentation {
    pub generators: Vec<Letter>,
    pub relators: Vec<Relator>,
}

impl Presentation {
    pub fn generator_set(&self) -> BTreeSet<Letter> {
        self.generators.iter().cloned().collect()
    }

    /// Report-valued validation: letters registered, relator words freely
    /// and cyclically reduced.
    pub fn validate(&self) -> Vec<String> {
        let mut report = Vec::new();
        let set = self.generator_set();
        if set.len() != self.generators.len() {
            report.push("duplicate generator".into());
        }
        for (i, r) in self.relators.iter().enumerate() {
            if !r.word.over(|l| set.contains(l)) {
                report.push(format!("relator {i} uses an unregistered letter"));
            }
            if r.word.cyclic_reduced() != r.word {
                report.push(format!("relator {i} is not cyclically reduced"));
            }
        }
        report
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(|r| r.word.len()).max().unwrap_or(0)
    }

    /// Relator words only, for comparisons that ignore provenance tags.
    pub fn relator_words(&self) -> Vec<&GWord> {
        self.relators.iter().map(|r| &r.word).collect()
    }
}

pub fn emit_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    for g in &p.generators {
        let _ = writeln!(out, "gen {g}");
    }
    for r in &p.relators {
        out.push_str("rel");
        for l in &r.word.0 {
            let _ = write!(out, " {l}");
        }
        out.push('\n');
    }
    out
}

/// Parses the line format back. Relator kinds and sources are not part of
/// the text; parsed relators carry the `Transition` kind and an empty
/// source, so equality with an emitted presentation is checked on
/// generators and relator words.
pub fn parse_presentation(file: &str, text: &str) -> Result<Presentation, ParseError> {
    let mut lines = Lines::new(file, text);
    let mut p = Presentation::default();
    while let Some((n, toks)) = lines.next_tokens() {
        match toks[0] {
            "gen" => {
                if toks.len() != 2 || !Letter::valid_token(toks[1]) {
                    return Err(lines.err(n, "expected 'gen <name>'"));
                }
                p.generators.push(Letter::new(toks[1]));
            }
            "rel" => {
                let mut w = GWord::empty();
                for t in &toks[1..] {
                    match SLetter::parse(t) {
                        Some(l) => w.push(l),
                        None => return Err(lines.err(n, format!("invalid letter {t:?}"))),
                    }
                }
                p.relators.push(Relator {
                    word: w,
                    kind: RelatorKind::Transition,
                    source: String::new(),
                });
            }
            other => return Err(lines.err(n, format!("unknown directive {other:?}"))),
        }
    }
    Ok(p)
}

/// A tiny presentation from inline text, mostly for tests and the
/// command-line word searches: generators listed once, each relator a
/// whitespace-separated word.
pub fn small_presentation(generators: &[&str], relators: &[&str]) -> Presentation {
    Presentation {
        generators: generators.iter().map(|g| Letter::new(g)).collect(),
        relators: relators
            .iter()
            .map(|r| Relator {
                word: GWord::parse(&r.split_whitespace().collect::<Vec<_>>()).unwrap(),
                kind: RelatorKind::Transition,
                source: String::new(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_presentation_emits_empty_text() {
        assert_eq!(emit_presentation(&Presentation::default()), "");
    }

    #[test]
    fn roundtrip_words() {
        let p = small_presentation(&["a", "b"], &["a b a^-1 b^-1", "a a a"]);
        let text = emit_presentation(&p);
        let back = parse_presentation("mem", &text).unwrap();
        assert_eq!(back.generators, p.generators);
        assert_eq!(back.relator_words(), p.relator_words());
        assert_eq!(emit_presentation(&back), text);
    }
}
