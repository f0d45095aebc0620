//! S-machines: rewriting systems on admissible words over group alphabets.
//!
//! An admissible word is `q1 u1 q2 u2 ... uk q(k+1)` with exactly one
//! state letter from each position set, in index order, and every sector
//! word freely reduced. Rules substitute around the state letters and the
//! result is reduced automatically; the heads never observe tape letters
//! except through per-sector domain alphabets, an empty domain forcing an
//! empty sector.

use crate::gword::GWord;
use crate::letter::{Letter, SLetter};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Per-sector domain alphabet of a rule.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Domain {
    /// The whole sector alphabet.
    Full,
    /// The empty set: the sector must be empty when the rule fires.
    Empty,
    /// An explicit subset of the sector alphabet.
    Set(BTreeSet<Letter>),
}

impl Domain {
    pub fn admits(&self, sector_alphabet: &BTreeSet<Letter>, w: &GWord) -> bool {
        match self {
            Domain::Full => w.over(|l| sector_alphabet.contains(l)),
            Domain::Empty => w.is_empty(),
            Domain::Set(set) => w.over(|l| set.contains(l)),
        }
    }

    pub fn letters<'a>(&'a self, sector_alphabet: &'a BTreeSet<Letter>) -> BTreeSet<Letter> {
        match self {
            Domain::Full => sector_alphabet.clone(),
            Domain::Empty => BTreeSet::new(),
            Domain::Set(set) => set.clone(),
        }
    }
}

/// One position of a rule: `lhs_left q lhs_right -> rhs_left q' rhs_right`,
/// the left words living in the sector before the state letter and the
/// right words in the sector after it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SRulePart {
    pub lhs_left: GWord,
    pub lhs_state: Letter,
    pub lhs_right: GWord,
    pub rhs_left: GWord,
    pub rhs_state: Letter,
    pub rhs_right: GWord,
}

impl SRulePart {
    pub fn state_only(from: Letter, to: Letter) -> Self {
        SRulePart {
            lhs_left: GWord::empty(),
            lhs_state: from,
            lhs_right: GWord::empty(),
            rhs_left: GWord::empty(),
            rhs_state: to,
            rhs_right: GWord::empty(),
        }
    }

    pub fn inverted(&self) -> SRulePart {
        SRulePart {
            lhs_left: self.rhs_left.clone(),
            lhs_state: self.rhs_state.clone(),
            lhs_right: self.rhs_right.clone(),
            rhs_left: self.lhs_left.clone(),
            rhs_state: self.lhs_state.clone(),
            rhs_right: self.lhs_right.clone(),
        }
    }

    /// Left side as a single word (`U_i`).
    pub fn lhs_word(&self) -> GWord {
        let mut w = self.lhs_left.clone();
        w.push(SLetter::pos(self.lhs_state.clone()));
        w.0.extend(self.lhs_right.0.iter().cloned());
        w
    }

    pub fn rhs_word(&self) -> GWord {
        let mut w = self.rhs_left.clone();
        w.push(SLetter::pos(self.rhs_state.clone()));
        w.0.extend(self.rhs_right.0.iter().cloned());
        w
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SRule {
    pub name: String,
    pub positive: bool,
    /// Marks rules that copy a command of an underlying Turing machine in
    /// composed machines; stored, not inferred.
    pub basic: bool,
    /// k+1 parts, one per state position.
    pub parts: Vec<SRulePart>,
    /// k domains, one per sector.
    pub domains: Vec<Domain>,
}

impl SRule {
    pub fn inverted(&self, name: String) -> SRule {
        SRule {
            name,
            positive: !self.positive,
            basic: self.basic,
            parts: self.parts.iter().map(|p| p.inverted()).collect(),
            domains: self.domains.clone(),
        }
    }
}

/// An S-machine configuration.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AdmissibleWord {
    pub states: Vec<Letter>,
    pub sectors: Vec<GWord>,
}

impl AdmissibleWord {
    pub fn new(states: Vec<Letter>, sectors: Vec<GWord>) -> Self {
        debug_assert_eq!(states.len(), sectors.len() + 1);
        debug_assert!(sectors.iter().all(|s| s.is_reduced()));
        AdmissibleWord { states, sectors }
    }

    /// Total letter count, state letters included.
    pub fn norm(&self) -> usize {
        self.states.len() + self.a_len()
    }

    /// Tape-letter count.
    pub fn a_len(&self) -> usize {
        self.sectors.iter().map(|s| s.len()).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.sectors.iter().all(|s| s.is_positive())
    }

    /// The word as a flat letter sequence.
    pub fn flatten(&self) -> GWord {
        let mut w = GWord::empty();
        for (i, q) in self.states.iter().enumerate() {
            w.push(SLetter::pos(q.clone()));
            if let Some(sec) = self.sectors.get(i) {
                w.0.extend(sec.0.iter().cloned());
            }
        }
        w
    }
}

impl fmt::Display for AdmissibleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, q) in self.states.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "[{q}]")?;
            if let Some(sec) = self.sectors.get(i) {
                if !sec.is_empty() {
                    write!(f, " {sec}")?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SMachineError {
    #[error("rule {rule}: sector {sector} uses a letter outside the rule's domain")]
    DomainViolation { rule: String, sector: usize },
    #[error("rule {rule} does not match the word's state letters")]
    StateMismatch { rule: String },
    #[error("unknown rule {0}")]
    UnknownRule(String),
    #[error("word has wrong arity for this machine")]
    Arity,
    #[error("invalid S-machine: {0}")]
    Invalid(String),
    #[error("malformed trace: {0}")]
    MalformedTrace(String),
    #[error("computation is not positive")]
    NotPositive,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SMachine {
    /// Input letters (a subset of the first sector's alphabet) over which
    /// input admissible words are written.
    pub input_alphabet: BTreeSet<Letter>,
    /// State letter sets, positions 1..=k+1.
    pub state_sets: Vec<BTreeSet<Letter>>,
    /// Sector alphabets (positive base letters), sectors 1..=k.
    pub sector_alphabets: Vec<BTreeSet<Letter>>,
    pub rules: Vec<SRule>,
    pub start_word: AdmissibleWord,
    pub accept_word: AdmissibleWord,
}

impl SMachine {
    pub fn sector_count(&self) -> usize {
        self.sector_alphabets.len()
    }

    pub fn positions(&self) -> usize {
        self.state_sets.len()
    }

    pub fn rule(&self, name: &str) -> Option<(usize, &SRule)> {
        self.rules.iter().enumerate().find(|(_, r)| r.name == name)
    }

    /// Structural inversion check used by reduced-history enumeration.
    pub fn are_mutually_inverse(&self, a: usize, b: usize) -> bool {
        let (ra, rb) = (&self.rules[a], &self.rules[b]);
        ra.positive != rb.positive
            && ra.parts.len() == rb.parts.len()
            && ra.parts.iter().zip(&rb.parts).all(|(x, y)| *x == y.inverted())
            && ra.domains == rb.domains
    }

    /// Report-valued validation; empty report means well-formed.
    pub fn validate(&self) -> Vec<String> {
        let mut report = Vec::new();
        let k = self.sector_count();
        if self.state_sets.len() != k + 1 {
            report.push("state position count must be sector count + 1".into());
            return report;
        }
        let mut seen: BTreeSet<Letter> = BTreeSet::new();
        for set in self.state_sets.iter().chain(self.sector_alphabets.iter()) {
            for l in set {
                if !seen.insert(l.clone()) {
                    report.push(format!("letter {l} appears in more than one alphabet"));
                }
            }
        }
        let all_tape: BTreeSet<&Letter> = self.sector_alphabets.iter().flatten().collect();
        if !self.input_alphabet.iter().all(|l| all_tape.contains(l)) {
            report.push("input alphabet not contained in the sector alphabets".into());
        }
        for (label, w) in [("start", &self.start_word), ("accept", &self.accept_word)] {
            if let Err(e) = self.check_word(w) {
                report.push(format!("{label} word: {e}"));
            }
        }
        let mut names = BTreeSet::new();
        for r in &self.rules {
            if !names.insert(r.name.clone()) {
                report.push(format!("duplicate rule name {}", r.name));
            }
            if r.parts.len() != k + 1 || r.domains.len() != k {
                report.push(format!("rule {}: wrong arity", r.name));
                continue;
            }
            for (i, p) in r.parts.iter().enumerate() {
                if !self.state_sets[i].contains(&p.lhs_state) || !self.state_sets[i].contains(&p.rhs_state) {
                    report.push(format!("rule {} position {}: state letter outside its set", r.name, i + 1));
                }
                // Restriction on rule shape: the left words live in sector
                // i-1's domain, the right words in sector i's domain.
                if i == 0 && (!p.lhs_left.is_empty() || !p.rhs_left.is_empty()) {
                    report.push(format!("rule {}: first part cannot have left words", r.name));
                }
                if i == k && (!p.lhs_right.is_empty() || !p.rhs_right.is_empty()) {
                    report.push(format!("rule {}: last part cannot have right words", r.name));
                }
                if i > 0 {
                    let dom = self.domains_letters(r, i - 1);
                    for w in [&p.lhs_left, &p.rhs_left] {
                        if !w.over(|l| dom.contains(l)) {
                            report.push(format!(
                                "rule {} position {}: left word outside sector {} domain",
                                r.name, i + 1, i
                            ));
                        }
                        if !w.is_reduced() {
                            report.push(format!("rule {}: unreduced word", r.name));
                        }
                    }
                }
                if i < k {
                    let dom = self.domains_letters(r, i);
                    for w in [&p.lhs_right, &p.rhs_right] {
                        if !w.over(|l| dom.contains(l)) {
                            report.push(format!(
                                "rule {} position {}: right word outside sector {} domain",
                                r.name, i + 1, i + 1
                            ));
                        }
                    }
                }
            }
            // Closure under inversion with sign flip.
            if !self.rules.iter().any(|other| {
                other.positive != r.positive
                    && other.domains == r.domains
                    && other.parts.iter().zip(&r.parts).all(|(x, y)| *x == y.inverted())
            }) {
                report.push(format!("rule {} has no inverse in the rule set", r.name));
            }
        }
        report
    }

    fn domains_letters(&self, r: &SRule, sector: usize) -> BTreeSet<Letter> {
        r.domains[sector].letters(&self.sector_alphabets[sector])
    }

    pub fn check_word(&self, w: &AdmissibleWord) -> Result<(), SMachineError> {
        if w.states.len() != self.positions() || w.sectors.len() != self.sector_count() {
            return Err(SMachineError::Arity);
        }
        for (i, q) in w.states.iter().enumerate() {
            if !self.state_sets[i].contains(q) {
                return Err(SMachineError::Invalid(format!("state {q} outside position {}", i + 1)));
            }
        }
        for (i, sec) in w.sectors.iter().enumerate() {
            if !sec.over(|l| self.sector_alphabets[i].contains(l)) {
                return Err(SMachineError::Invalid(format!("sector {} letter outside alphabet", i + 1)));
            }
            if !sec.is_reduced() {
                return Err(SMachineError::Invalid(format!("sector {} not reduced", i + 1)));
            }
        }
        Ok(())
    }

    /// Applies rule `idx`. The rule is disabled (DomainViolation) when some
    /// sector uses a letter outside the rule's domain alphabet; otherwise
    /// the substitution around each state letter is performed and every
    /// sector freely reduced.
    pub fn apply_rule(&self, w: &AdmissibleWord, idx: usize) -> Result<AdmissibleWord, SMachineError> {
        let r = &self.rules[idx];
        if w.states.len() != r.parts.len() {
            return Err(SMachineError::Arity);
        }
        for (i, p) in r.parts.iter().enumerate() {
            if w.states[i] != p.lhs_state {
                return Err(SMachineError::StateMismatch { rule: r.name.clone() });
            }
        }
        for (i, sec) in w.sectors.iter().enumerate() {
            if !r.domains[i].admits(&self.sector_alphabets[i], sec) {
                return Err(SMachineError::DomainViolation { rule: r.name.clone(), sector: i + 1 });
            }
        }
        // Sector i receives (rhs_right_i . lhs_right_i^-1) on its left and
        // (lhs_left_{i+1}^-1 . rhs_left_{i+1}) on its right.
        let mut sectors = Vec::with_capacity(w.sectors.len());
        for (i, sec) in w.sectors.iter().enumerate() {
            let left_part = &r.parts[i];
            let right_part = &r.parts[i + 1];
            let mut out = left_part.rhs_right.clone();
            out.0.extend(left_part.lhs_right.inverse().0);
            out.0.extend(sec.0.iter().cloned());
            out.0.extend(right_part.lhs_left.inverse().0);
            out.0.extend(right_part.rhs_left.0.iter().cloned());
            sectors.push(out.reduced());
        }
        let states = r.parts.iter().map(|p| p.rhs_state.clone()).collect();
        Ok(AdmissibleWord { states, sectors })
    }

    pub fn apply_named(&self, w: &AdmissibleWord, name: &str) -> Result<AdmissibleWord, SMachineError> {
        let (idx, _) = self.rule(name).ok_or_else(|| SMachineError::UnknownRule(name.to_string()))?;
        self.apply_rule(w, idx)
    }

    /// Rules applicable to `w`, in declaration order.
    pub fn applicable(&self, w: &AdmissibleWord) -> Vec<usize> {
        (0..self.rules.len()).filter(|&i| self.apply_rule(w, i).is_ok()).collect()
    }

    /// The inverse rule's index, by structural match.
    pub fn inverse_of(&self, idx: usize) -> Option<usize> {
        (0..self.rules.len()).find(|&j| self.are_mutually_inverse(idx, j))
    }
}

/// A computation of an S-machine with cached words and space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct STrace {
    pub start: AdmissibleWord,
    /// Rule indices into the machine's rule vector.
    pub rules: Vec<usize>,
    pub words: Vec<AdmissibleWord>,
    /// Maximal a-length over the words.
    pub space: usize,
    /// Maximal full norm over the words.
    pub peak_norm: usize,
}

impl STrace {
    pub fn initial(w: AdmissibleWord) -> Self {
        let space = w.a_len();
        let peak_norm = w.norm();
        STrace { start: w.clone(), rules: vec![], words: vec![w], space, peak_norm }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn last(&self) -> &AdmissibleWord {
        self.words.last().unwrap()
    }

    pub fn push(&mut self, _s: &SMachine, rule: usize, w: AdmissibleWord) {
        self.space = self.space.max(w.a_len());
        self.peak_norm = self.peak_norm.max(w.norm());
        self.rules.push(rule);
        self.words.push(w);
    }

    pub fn pop(&mut self) {
        self.rules.pop();
        self.words.pop();
        self.space = self.words.iter().map(|w| w.a_len()).max().unwrap_or(0);
        self.peak_norm = self.words.iter().map(|w| w.norm()).max().unwrap_or(0);
    }

    pub fn is_positive(&self) -> bool {
        self.words.iter().all(|w| w.is_positive())
    }

    /// History as rule names.
    pub fn history<'a>(&self, s: &'a SMachine) -> Vec<&'a str> {
        self.rules.iter().map(|&i| s.rules[i].name.as_str()).collect()
    }

    pub fn is_reduced(&self, s: &SMachine) -> bool {
        self.rules.windows(2).all(|p| !s.are_mutually_inverse(p[0], p[1]))
    }

    pub fn validate(&self, s: &SMachine) -> Result<(), SMachineError> {
        let mut w = self.start.clone();
        if self.words.first() != Some(&self.start) {
            return Err(SMachineError::MalformedTrace("start mismatch".into()));
        }
        for (i, &r) in self.rules.iter().enumerate() {
            w = s.apply_rule(&w, r)?;
            if self.words.get(i + 1) != Some(&w) {
                return Err(SMachineError::MalformedTrace(format!("word mismatch at step {}", i + 1)));
            }
        }
        let space = self.words.iter().map(|x| x.a_len()).max().unwrap_or(0);
        if space != self.space {
            return Err(SMachineError::MalformedTrace("cached space mismatch".into()));
        }
        Ok(())
    }

    /// Collapses one adjacent mutually-inverse pair, if any; replaying
    /// yields a valid trace with space bounded by the original.
    pub fn collapse_once(&self, s: &SMachine) -> Option<STrace> {
        let pos = self.rules.windows(2).position(|p| s.are_mutually_inverse(p[0], p[1]))?;
        let mut out = STrace::initial(self.start.clone());
        for (i, &r) in self.rules.iter().enumerate() {
            if i == pos || i == pos + 1 {
                continue;
            }
            let next = s.apply_rule(out.last(), r).expect("collapsed trace replays");
            out.push(s, r, next);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adder::make_adder;

    fn letters(s: &str) -> BTreeSet<Letter> {
        s.split_whitespace().map(Letter::new).collect()
    }

    /// A 1-sector machine with a rule `q -> a^-1 b q'` for the
    /// substitution examples.
    fn tiny() -> SMachine {
        let q = Letter::new("q");
        let q2 = Letter::new("q'");
        let e = Letter::new("e");
        let part = SRulePart {
            lhs_left: GWord::empty(),
            lhs_state: q.clone(),
            lhs_right: GWord::empty(),
            rhs_left: GWord::parse(&["a^-1", "b"]).unwrap(),
            rhs_state: q2.clone(),
            rhs_right: GWord::empty(),
        };
        let rule = SRule {
            name: "r".into(),
            positive: true,
            basic: false,
            parts: vec![SRulePart::state_only(e.clone(), e.clone()), part],
            domains: vec![Domain::Full],
        };
        let inv = rule.inverted("r^-1".into());
        let start = AdmissibleWord::new(vec![e.clone(), q.clone()], vec![GWord::empty()]);
        SMachine {
            input_alphabet: letters("a b"),
            state_sets: vec![letters("e"), letters("q q'")],
            sector_alphabets: vec![letters("a b")],
            rules: vec![rule, inv],
            start_word: start.clone(),
            accept_word: start,
        }
    }

    #[test]
    fn substitution_reduces_sector() {
        let s = tiny();
        assert!(s.validate().is_empty(), "{:?}", s.validate());
        let w = AdmissibleWord::new(
            vec![Letter::new("e"), Letter::new("q")],
            vec![GWord::parse(&["a"]).unwrap()],
        );
        let out = s.apply_rule(&w, 0).unwrap();
        assert_eq!(out.sectors[0], GWord::parse(&["b"]).unwrap());
        assert_eq!(out.states[1], Letter::new("q'"));
    }

    #[test]
    fn rule_then_inverse_is_identity() {
        let s = tiny();
        let w = AdmissibleWord::new(
            vec![Letter::new("e"), Letter::new("q")],
            vec![GWord::parse(&["b", "a^-1"]).unwrap()],
        );
        let mid = s.apply_rule(&w, 0).unwrap();
        let back = s.apply_rule(&mid, 1).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn empty_domain_forces_empty_sector() {
        let a: BTreeSet<Letter> = letters("x");
        let adder = make_adder(&a);
        // The turnaround rule requires the first sector to be empty.
        let (idx, _) = adder.rule("last").unwrap();
        let w = AdmissibleWord::new(
            vec![Letter::new("L"), Letter::new("p1"), Letter::new("R")],
            vec![GWord::parse(&["x.0"]).unwrap(), GWord::empty()],
        );
        let err = adder.apply_rule(&w, idx).unwrap_err();
        assert!(matches!(err, SMachineError::DomainViolation { sector: 1, .. }));
    }

    #[test]
    fn collapse_preserves_validity_and_space() {
        let s = tiny();
        let w = AdmissibleWord::new(
            vec![Letter::new("e"), Letter::new("q")],
            vec![GWord::parse(&["a"]).unwrap()],
        );
        let mut t = STrace::initial(w);
        let w1 = s.apply_rule(t.last(), 0).unwrap();
        t.push(&s, 0, w1);
        let w2 = s.apply_rule(t.last(), 1).unwrap();
        t.push(&s, 1, w2);
        let collapsed = t.collapse_once(&s).unwrap();
        collapsed.validate(&s).unwrap();
        assert!(collapsed.space <= t.space);
        assert_eq!(collapsed.len(), 0);
    }
}
