//! Compiling a multiplied S-machine into a finite group presentation.
//!
//! Generators are the state letters, tape letters, and one rule letter
//! `t{j}.{rule}` per position `j` and positive rule. For a rule with
//! parts `U_j -> V_j` the transition relators read `U_j t{j+1} V_j^-1
//! t{j}^-1` (position indices wrap: `t{N+1} = t{1}`), each tape letter of
//! a sector's domain commutes with the rule letter crossing that sector,
//! and the accept word is the hub relator. Relators are cyclically
//! reduced and rotated to their lexicographically least form, except the
//! hub, which is emitted verbatim so it visibly starts at `k1`.

use crate::gword::GWord;
use crate::letter::{Letter, SLetter};
use crate::multiply::{multiply, multiply_hatted, MultipliedMachine, MultiplyError};
use crate::presentation::{Presentation, Relator, RelatorKind};
use crate::smachine::SMachine;
use std::collections::{BTreeSet, HashMap};

/// A compiled presentation together with the machine it came from and the
/// relator index maps the rewriting engine uses.
pub struct Compiled {
    pub mult: MultipliedMachine,
    /// Present only in embedding mode.
    pub hat: Option<MultipliedMachine>,
    pub presentation: Presentation,
    /// (positive rule name, position 1..=N) -> transition relator index.
    pub transition_index: HashMap<(String, usize), usize>,
    /// (positive rule name, rule-letter position, tape letter) ->
    /// commutator relator index.
    pub commutator_index: HashMap<(String, usize, Letter), usize>,
    pub hub_index: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CompileMode {
    Simple,
    Embedding,
}

pub fn rule_letter(j: usize, rule: &str, hat: bool) -> Letter {
    if hat {
        Letter::new(&format!("h.t{j}.{rule}"))
    } else {
        Letter::new(&format!("t{j}.{rule}"))
    }
}

impl Compiled {
    pub fn state_letters(&self) -> usize {
        self.mult.state_letters()
    }

    /// The rule letter at position `j` (1-based, wrapping) for a rule of
    /// the multiplied machine, inverted for negative rules.
    pub fn theta_letter(&self, rule_name: &str, j: usize) -> SLetter {
        let n = self.state_letters();
        let j = ((j - 1) % n) + 1;
        let (base, inv) = match rule_name.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (rule_name, false),
        };
        let (hat, plain) = match base.strip_prefix("h.") {
            Some(p) => (true, p),
            None => (false, base),
        };
        SLetter { base: rule_letter(j, plain, hat), inv }
    }
}

fn canonical_relator(w: GWord, kind: RelatorKind, source: String) -> Relator {
    let word = w.cyclic_reduced().least_rotation();
    Relator { word, kind, source }
}

/// Generators and relators of one multiplied machine, appended to `p`.
fn push_machine(
    p: &mut Presentation,
    seen: &mut BTreeSet<Letter>,
    mm: &MultipliedMachine,
    hat: bool,
    transition_index: &mut HashMap<(String, usize), usize>,
    commutator_index: &mut HashMap<(String, usize, Letter), usize>,
) {
    let mut push_gen = |l: Letter, p: &mut Presentation| {
        if seen.insert(l.clone()) {
            p.generators.push(l);
        }
    };
    let n = mm.state_letters();
    for set in &mm.machine.state_sets {
        for l in set {
            push_gen(l.clone(), p);
        }
    }
    for set in &mm.machine.sector_alphabets {
        for l in set {
            push_gen(l.clone(), p);
        }
    }
    for r in mm.machine.rules.iter().filter(|r| r.positive) {
        let plain = r.name.strip_prefix("h.").unwrap_or(&r.name);
        for j in 1..=n {
            push_gen(rule_letter(j, plain, hat), p);
        }
    }
    for r in mm.machine.rules.iter().filter(|r| r.positive) {
        let plain = r.name.strip_prefix("h.").unwrap_or(&r.name).to_string();
        let t = |j: usize| -> SLetter {
            let j = ((j - 1) % n) + 1;
            SLetter::pos(rule_letter(j, &plain, hat))
        };
        for j in 1..=n {
            // U_j t_{j+1} V_j^-1 t_j^-1
            let part = &r.parts[j - 1];
            let mut w = part.lhs_word();
            w.push(t(j + 1));
            w.0.extend(part.rhs_word().inverse().0);
            w.push(t(j).inverse());
            transition_index.insert((r.name.clone(), j), p.relators.len());
            p.relators.push(canonical_relator(
                w,
                RelatorKind::Transition,
                format!("{}@{}", r.name, j),
            ));
        }
        for j in 1..n {
            // Tape letters of sector j commute with the rule letter at
            // position j+1, the one crossing that sector.
            let dom = r.domains[j - 1].letters(&mm.machine.sector_alphabets[j - 1]);
            for a in dom {
                let mut w = GWord::empty();
                w.push(t(j + 1));
                w.push(SLetter::pos(a.clone()));
                w.push(t(j + 1).inverse());
                w.push(SLetter::neg(a.clone()));
                commutator_index.insert((r.name.clone(), j + 1, a.clone()), p.relators.len());
                p.relators.push(canonical_relator(
                    w,
                    RelatorKind::Commutator,
                    format!("{}@{}:{}", r.name, j + 1, a),
                ));
            }
        }
    }
}

pub fn compile(s: &SMachine, l: usize, mode: CompileMode) -> Result<Compiled, MultiplyError> {
    let mult = multiply(s, l)?;
    let hat = match mode {
        CompileMode::Simple => None,
        CompileMode::Embedding => Some(multiply_hatted(s, l)?),
    };
    let mut p = Presentation::default();
    let mut seen = BTreeSet::new();
    let mut transition_index = HashMap::new();
    let mut commutator_index = HashMap::new();
    push_machine(&mut p, &mut seen, &mult, false, &mut transition_index, &mut commutator_index);
    if let Some(h) = &hat {
        push_machine(&mut p, &mut seen, h, true, &mut transition_index, &mut commutator_index);
    }
    // One hub: the accept word of the multiplied machine (the hatted
    // accept word consists of the same shared letters).
    let hub_index = p.relators.len();
    let hub = mult.sigma0_word().flatten();
    debug_assert!(hub.is_reduced() && hub.cyclic_reduced() == hub);
    p.relators.push(Relator { word: hub, kind: RelatorKind::Hub, source: "hub".into() });
    debug_assert!(p.validate().is_empty(), "{:?}", p.validate());
    Ok(Compiled { mult, hat, presentation: p, transition_index, commutator_index, hub_index })
}

pub fn compile_simple(s: &SMachine, l: usize) -> Result<Compiled, MultiplyError> {
    compile(s, l, CompileMode::Simple)
}

pub fn compile_embedding(s: &SMachine, l: usize) -> Result<Compiled, MultiplyError> {
    compile(s, l, CompileMode::Embedding)
}

/// Closed-form generator and relator counts, used to cross-check the
/// emitted presentation.
pub struct Counts {
    pub generators: usize,
    pub transition: usize,
    pub commutator: usize,
    pub hub: usize,
}

pub fn expected_counts(c: &Compiled) -> Counts {
    let mut machines: Vec<&MultipliedMachine> = vec![&c.mult];
    if let Some(h) = &c.hat {
        machines.push(h);
    }
    let mut gens: BTreeSet<Letter> = BTreeSet::new();
    let mut transition = 0;
    let mut commutator = 0;
    for (mi, mm) in machines.iter().enumerate() {
        let n = mm.state_letters();
        for set in mm.machine.state_sets.iter().chain(mm.machine.sector_alphabets.iter()) {
            gens.extend(set.iter().cloned());
        }
        let hat = mi == 1;
        for r in mm.machine.rules.iter().filter(|r| r.positive) {
            let plain = r.name.strip_prefix("h.").unwrap_or(&r.name);
            for j in 1..=n {
                gens.insert(rule_letter(j, plain, hat));
            }
            transition += n;
            for j in 1..n {
                commutator += r.domains[j - 1]
                    .letters(&mm.machine.sector_alphabets[j - 1])
                    .len();
            }
        }
    }
    Counts { generators: gens.len(), transition, commutator, hub: 1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::compose_with_adder;
    use crate::fixtures;
    use crate::presentation::{emit_presentation, parse_presentation, RelatorKind};

    fn toy_composed() -> SMachine {
        compose_with_adder(&fixtures::m_toy()).unwrap().machine
    }

    #[test]
    fn counts_match_closed_forms() {
        let s = toy_composed();
        for mode in [CompileMode::Simple, CompileMode::Embedding] {
            let c = compile(&s, 4, mode).unwrap();
            let n = c.state_letters();
            let counts = expected_counts(&c);
            assert_eq!(c.presentation.generators.len(), counts.generators);
            let by_kind = |k: RelatorKind| {
                c.presentation.relators.iter().filter(|r| r.kind == k).count()
            };
            assert_eq!(by_kind(RelatorKind::Transition), counts.transition);
            assert_eq!(by_kind(RelatorKind::Commutator), counts.commutator);
            assert_eq!(by_kind(RelatorKind::Hub), 1);
            // N transition relators per positive rule of each side.
            let positives = s.rules.iter().filter(|r| r.positive).count();
            let sides = if matches!(mode, CompileMode::Embedding) { 2 } else { 1 };
            assert_eq!(counts.transition, sides * positives * n);
            // The hub has exactly N letters.
            assert_eq!(c.presentation.relators[c.hub_index].word.len(), n);
        }
    }

    #[test]
    fn hub_line_starts_at_first_separator() {
        let s = toy_composed();
        let c = compile_simple(&s, 4).unwrap();
        let text = emit_presentation(&c.presentation);
        assert!(text.lines().any(|l| l.starts_with("rel k1 ")), "hub emitted verbatim");
    }

    #[test]
    fn emission_roundtrips_and_is_stable() {
        let s = toy_composed();
        let c = compile_simple(&s, 4).unwrap();
        let text = emit_presentation(&c.presentation);
        let back = parse_presentation("mem", &text).unwrap();
        assert_eq!(back.generators, c.presentation.generators);
        assert_eq!(back.relator_words(), c.presentation.relator_words());
        assert_eq!(emit_presentation(&back), text);
        // Identical invocations emit identical bytes.
        let again = emit_presentation(&compile_simple(&s, 4).unwrap().presentation);
        assert_eq!(text, again);
    }

    #[test]
    fn embedding_shares_input_letters_and_hub() {
        let s = toy_composed();
        let c = compile_embedding(&s, 4).unwrap();
        // Exactly one hub relator.
        assert_eq!(
            c.presentation.relators.iter().filter(|r| r.kind == RelatorKind::Hub).count(),
            1
        );
        // Input letters appear once, not twice: block >= 2 sectors hold a
        // single copy of each input letter (no h.-prefixed duplicate).
        for g in &c.presentation.generators {
            if let Some(rest) = g.as_str().strip_prefix("h.a") {
                assert!(
                    !rest.ends_with(".a.0"),
                    "hatted copy of an input letter leaked: {g}"
                );
            }
        }
        // Hatted commutators only outside block 1: every h.-prefixed
        // commutator's rule letter position lies past the first block.
        let k = c.mult.base_positions;
        for r in &c.presentation.relators {
            if r.kind == RelatorKind::Commutator && r.source.starts_with("h.") {
                let pos: usize = r
                    .source
                    .split('@')
                    .nth(1)
                    .unwrap()
                    .split(':')
                    .next()
                    .unwrap()
                    .parse()
                    .unwrap();
                assert!(pos > k + 1, "hatted commutator at position {pos} inside block 1");
            }
        }
    }
}
