//! Multiplying an S-machine into a ring of blocks.
//!
//! For an even block count, the machine is copied around a cycle of
//! separator letters `k1 .. kL`: odd blocks are plain letter-renamed
//! copies, even blocks are mirror copies (within-block position order
//! reversed, every word of a rule mirrored). Each rule of the base
//! machine becomes one rule acting on every block simultaneously and
//! fixing the separators. Letters carry their position/sector index:
//! state letter `x` at position `j` becomes `q{j}.{x}`, tape letter `x`
//! in sector `j` becomes `a{j}.{x}`; a hatted copy prefixes non-shared
//! letters with `h.`.

use crate::gword::GWord;
use crate::letter::{Letter, SLetter};
use crate::smachine::{AdmissibleWord, Domain, SMachine, SRule, SRulePart};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MultiplyError {
    #[error("block count must be even and at least 4, got {0}")]
    BadL(usize),
    #[error("letter {0} is not an input letter")]
    BadLetter(Letter),
}

/// Letter-sequence reversal; letters untouched.
pub fn mirror(w: &GWord) -> GWord {
    w.mirror()
}

/// What a hatted copy shares with the plain machine: input letters keep
/// their names, as do the start and accept state letters.
#[derive(Clone, Debug, Default)]
pub struct HatSharing {
    pub shared_tape: BTreeSet<Letter>,
    pub shared_states: BTreeSet<Letter>,
}

/// The hatted copy of a base machine: shared input letters and
/// start/accept state letters keep their names, everything else (and
/// every rule name) gets the `h.` prefix. The tape-emptying of the first
/// block happens at multiplication time.
pub fn hat_machine(s: &SMachine) -> SMachine {
    let sharing = hat_sharing(s);
    let tape = |l: &Letter| -> Letter {
        if sharing.shared_tape.contains(l) {
            l.clone()
        } else {
            Letter::new(&format!("h.{l}"))
        }
    };
    let state = |l: &Letter| -> Letter {
        if sharing.shared_states.contains(l) {
            l.clone()
        } else {
            Letter::new(&format!("h.{l}"))
        }
    };
    let word = |w: &GWord| GWord(w.0.iter().map(|x| SLetter { base: tape(&x.base), inv: x.inv }).collect());
    let adm = |w: &AdmissibleWord| AdmissibleWord {
        states: w.states.iter().map(&state).collect(),
        sectors: w.sectors.iter().map(&word).collect(),
    };
    SMachine {
        input_alphabet: s.input_alphabet.clone(),
        state_sets: s.state_sets.iter().map(|set| set.iter().map(&state).collect()).collect(),
        sector_alphabets: s.sector_alphabets.iter().map(|set| set.iter().map(&tape).collect()).collect(),
        rules: s
            .rules
            .iter()
            .map(|r| SRule {
                name: format!("h.{}", r.name),
                positive: r.positive,
                basic: r.basic,
                parts: r
                    .parts
                    .iter()
                    .map(|p| SRulePart {
                        lhs_left: word(&p.lhs_left),
                        lhs_state: state(&p.lhs_state),
                        lhs_right: word(&p.lhs_right),
                        rhs_left: word(&p.rhs_left),
                        rhs_state: state(&p.rhs_state),
                        rhs_right: word(&p.rhs_right),
                    })
                    .collect(),
                domains: r
                    .domains
                    .iter()
                    .map(|d| match d {
                        Domain::Full => Domain::Full,
                        Domain::Empty => Domain::Empty,
                        Domain::Set(set) => Domain::Set(set.iter().map(&tape).collect()),
                    })
                    .collect(),
            })
            .collect(),
        start_word: adm(&s.start_word),
        accept_word: adm(&s.accept_word),
    }
}

pub fn hat_sharing(s: &SMachine) -> HatSharing {
    HatSharing {
        shared_tape: s.input_alphabet.clone(),
        shared_states: s
            .start_word
            .states
            .iter()
            .chain(s.accept_word.states.iter())
            .cloned()
            .collect(),
    }
}

/// A multiplied machine plus the bookkeeping to move between base and
/// block coordinates.
pub struct MultipliedMachine {
    pub machine: SMachine,
    pub base: SMachine,
    /// Block count.
    pub l: usize,
    /// State letters of the base machine.
    pub base_positions: usize,
    /// Hatted variant: block 1 carries no tape letters.
    pub hatted: bool,
    sharing: Option<HatSharing>,
}

impl MultipliedMachine {
    /// Total state letters `N = (K+1) L`.
    pub fn state_letters(&self) -> usize {
        (self.base_positions + 1) * self.l
    }

    /// The block of position `j` (1-based); separators belong to their
    /// block.
    pub fn block_of_position(&self, j: usize) -> usize {
        (j - 1) / (self.base_positions + 1) + 1
    }

    pub fn is_separator_position(&self, j: usize) -> bool {
        (j - 1) % (self.base_positions + 1) == 0
    }

    /// Base position represented at multiplied position `j`, none for
    /// separators. Even blocks reverse the order.
    pub fn base_position(&self, j: usize) -> Option<usize> {
        let k = self.base_positions;
        let r = (j - 1) % (k + 1);
        if r == 0 {
            return None;
        }
        if self.block_of_position(j) % 2 == 1 {
            Some(r)
        } else {
            Some(k + 1 - r)
        }
    }

    /// Base sector represented at multiplied sector `j` (between positions
    /// `j` and `j+1`), none for the empty boundary sectors.
    pub fn base_sector(&self, j: usize) -> Option<usize> {
        let k = self.base_positions;
        let r = (j - 1) % (k + 1);
        let b = self.block_of_position(j);
        if r == 0 || r == k {
            return None;
        }
        if b % 2 == 1 {
            Some(r)
        } else {
            Some(k - r)
        }
    }

    fn block1_stripped(&self, j_sector: usize) -> bool {
        self.hatted && self.block_of_position(j_sector) == 1
    }

    fn tape_letter(&self, j_sector: usize, base: &Letter) -> Letter {
        let hat = self
            .sharing
            .as_ref()
            .map(|s| !s.shared_tape.contains(base))
            .unwrap_or(false);
        if hat {
            Letter::new(&format!("h.a{j_sector}.{base}"))
        } else {
            Letter::new(&format!("a{j_sector}.{base}"))
        }
    }

    fn state_letter(&self, j: usize, base: &Letter) -> Letter {
        let hat = self
            .sharing
            .as_ref()
            .map(|s| !s.shared_states.contains(base))
            .unwrap_or(false);
        if hat {
            Letter::new(&format!("h.q{j}.{base}"))
        } else {
            Letter::new(&format!("q{j}.{base}"))
        }
    }

    fn separator(&self, b: usize) -> Letter {
        Letter::new(&format!("k{b}"))
    }

    fn rename_word(&self, j_sector: usize, w: &GWord) -> GWord {
        GWord(
            w.0.iter()
                .map(|x| SLetter { base: self.tape_letter(j_sector, &x.base), inv: x.inv })
                .collect(),
        )
    }

    /// The multiplied admissible word whose every block is the (mirror)
    /// copy of `w`.
    pub fn widen(&self, w: &AdmissibleWord) -> AdmissibleWord {
        let n = self.state_letters();
        let mut states = Vec::with_capacity(n);
        let mut sectors = Vec::with_capacity(n - 1);
        for j in 1..=n {
            if self.is_separator_position(j) {
                states.push(self.separator(self.block_of_position(j)));
            } else {
                let base = &w.states[self.base_position(j).unwrap() - 1];
                states.push(self.state_letter(j, base));
            }
            if j == n {
                break;
            }
            let sector = match self.base_sector(j) {
                None => GWord::empty(),
                Some(_) if self.block1_stripped(j) => GWord::empty(),
                Some(i) => {
                    let content = &w.sectors[i - 1];
                    let oriented = if self.block_of_position(j) % 2 == 1 {
                        content.clone()
                    } else {
                        content.mirror()
                    };
                    self.rename_word(j, &oriented)
                }
            };
            sectors.push(sector);
        }
        AdmissibleWord::new(states, sectors)
    }

    /// The input configuration for `u`.
    pub fn sigma_word(&self, u: &[Letter]) -> Result<AdmissibleWord, MultiplyError> {
        for x in u {
            if !self.base.input_alphabet.contains(x) {
                return Err(MultiplyError::BadLetter(x.clone()));
            }
        }
        let mut w = self.base.start_word.clone();
        w.sectors[0] = GWord::positive(u.iter().cloned());
        Ok(self.widen(&w))
    }

    /// The accept configuration (the hub word).
    pub fn sigma0_word(&self) -> AdmissibleWord {
        self.widen(&self.base.accept_word)
    }
}

/// Multiplies `s` into `l` blocks. `l` must be even and at least 4 (the
/// presentation constructions downstream ask for at least 40; smaller
/// even counts are allowed for small-scale experiments).
pub fn multiply(s: &SMachine, l: usize) -> Result<MultipliedMachine, MultiplyError> {
    multiply_with(s, l, false)
}

/// The hatted multiplication: block 1 carries no tape letters and shared
/// letters keep their plain names.
pub fn multiply_hatted(s: &SMachine, l: usize) -> Result<MultipliedMachine, MultiplyError> {
    multiply_with(s, l, true)
}

fn multiply_with(s: &SMachine, l: usize, hatted: bool) -> Result<MultipliedMachine, MultiplyError> {
    if l < 4 || l % 2 != 0 {
        return Err(MultiplyError::BadL(l));
    }
    let k = s.positions();
    let n = (k + 1) * l;
    let mut mm = MultipliedMachine {
        machine: SMachine {
            input_alphabet: BTreeSet::new(),
            state_sets: Vec::new(),
            sector_alphabets: Vec::new(),
            rules: Vec::new(),
            start_word: s.start_word.clone(),  // placeholder
            accept_word: s.accept_word.clone(), // placeholder
        },
        base: s.clone(),
        l,
        base_positions: k,
        hatted,
        sharing: hatted.then(|| hat_sharing(s)),
    };

    let mut state_sets = Vec::with_capacity(n);
    let mut sector_alphabets = Vec::with_capacity(n - 1);
    for j in 1..=n {
        if mm.is_separator_position(j) {
            state_sets.push([mm.separator(mm.block_of_position(j))].into_iter().collect());
        } else {
            let base = mm.base_position(j).unwrap();
            state_sets
                .push(s.state_sets[base - 1].iter().map(|x| mm.state_letter(j, x)).collect());
        }
        if j == n {
            break;
        }
        let alphabet: BTreeSet<Letter> = match mm.base_sector(j) {
            None => BTreeSet::new(),
            Some(_) if mm.block1_stripped(j) => BTreeSet::new(),
            Some(i) => s.sector_alphabets[i - 1].iter().map(|x| mm.tape_letter(j, x)).collect(),
        };
        sector_alphabets.push(alphabet);
    }

    let rules = s
        .rules
        .iter()
        .map(|r| {
            let mut parts = Vec::with_capacity(n);
            let mut domains = Vec::with_capacity(n - 1);
            for j in 1..=n {
                if mm.is_separator_position(j) {
                    let sep = mm.separator(mm.block_of_position(j));
                    parts.push(SRulePart::state_only(sep.clone(), sep));
                } else {
                    let base = mm.base_position(j).unwrap();
                    let bp = &r.parts[base - 1];
                    let even = mm.block_of_position(j) % 2 == 0;
                    let strip = mm.block1_stripped(j);
                    // In an even block the base part's left and right words
                    // swap sides and are mirrored; sector indexing follows.
                    let (ll, lr, rl, rr) = if even {
                        (bp.lhs_right.mirror(), bp.lhs_left.mirror(), bp.rhs_right.mirror(), bp.rhs_left.mirror())
                    } else {
                        (bp.lhs_left.clone(), bp.lhs_right.clone(), bp.rhs_left.clone(), bp.rhs_right.clone())
                    };
                    let rn = |sector: usize, w: GWord| {
                        if strip || w.is_empty() {
                            GWord::empty()
                        } else {
                            mm.rename_word(sector, &w)
                        }
                    };
                    parts.push(SRulePart {
                        lhs_left: rn(j - 1, ll),
                        lhs_state: mm.state_letter(j, &bp.lhs_state),
                        lhs_right: rn(j, lr),
                        rhs_left: rn(j - 1, rl),
                        rhs_state: mm.state_letter(j, &bp.rhs_state),
                        rhs_right: rn(j, rr),
                    });
                }
                if j == n {
                    break;
                }
                let d = match mm.base_sector(j) {
                    None => Domain::Full,
                    Some(_) if mm.block1_stripped(j) => Domain::Full,
                    Some(i) => match &r.domains[i - 1] {
                        Domain::Full => Domain::Full,
                        Domain::Empty => Domain::Empty,
                        Domain::Set(set) => {
                            Domain::Set(set.iter().map(|x| mm.tape_letter(j, x)).collect())
                        }
                    },
                };
                domains.push(d);
            }
            SRule { name: r.name.clone(), positive: r.positive, basic: r.basic, parts, domains }
        })
        .collect();

    // Input words are formed at the base level (`sigma_word`); the
    // multiplied machine itself carries no input alphabet.
    mm.machine = SMachine {
        input_alphabet: BTreeSet::new(),
        state_sets,
        sector_alphabets,
        rules,
        start_word: s.start_word.clone(),
        accept_word: s.accept_word.clone(),
    };
    mm.machine.start_word = mm.widen(&s.start_word);
    mm.machine.accept_word = mm.widen(&s.accept_word);
    Ok(mm)
}

/// Replays a base-machine computation blockwise in the multiplied
/// machine (rule indices coincide).
pub fn widen_trace(mm: &MultipliedMachine, t: &crate::smachine::STrace) -> crate::smachine::STrace {
    let mut out = crate::smachine::STrace::initial(mm.widen(&t.start));
    for &idx in &t.rules {
        let next = mm.machine.apply_rule(out.last(), idx).expect("blockwise replay");
        out.push(&mm.machine, idx, next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compose::compose_with_adder;
    use crate::fixtures;
    use crate::letter::Letter;

    fn toy_composed() -> SMachine {
        compose_with_adder(&fixtures::m_toy()).unwrap().machine
    }

    #[test]
    fn mirror_examples() {
        let w = GWord::parse(&["a", "b", "c"]).unwrap();
        assert_eq!(mirror(&w), GWord::parse(&["c", "b", "a"]).unwrap());
        assert_eq!(mirror(&GWord::empty()), GWord::empty());
        assert_eq!(mirror(&mirror(&w)), w);
    }

    #[test]
    fn rejects_bad_block_counts() {
        let s = toy_composed();
        assert!(matches!(multiply(&s, 5), Err(MultiplyError::BadL(5))));
        assert!(matches!(multiply(&s, 2), Err(MultiplyError::BadL(2))));
    }

    #[test]
    fn state_letter_count_is_blocks_times_positions_plus_one() {
        let s = toy_composed();
        let mm = multiply(&s, 4).unwrap();
        assert!(mm.machine.validate().is_empty(), "{:?}", mm.machine.validate());
        assert_eq!(mm.machine.positions(), (s.positions() + 1) * 4);
        assert_eq!(mm.machine.start_word.states.len(), mm.state_letters());
    }

    #[test]
    fn multiplied_rule_acts_blockwise() {
        let s = toy_composed();
        let mm = multiply(&s, 4).unwrap();
        let u = [Letter::new("a.0")];
        let sigma = mm.sigma_word(&u).unwrap();
        // Apply the unique applicable rule in the multiplied machine and
        // compare against the blockwise widening of the base application.
        let mut base_w = s.start_word.clone();
        base_w.sectors[0] = GWord::positive(u.iter().cloned());
        for _ in 0..2 {
            let app = mm.machine.applicable(&sigma);
            let base_app = s.applicable(&base_w);
            assert_eq!(
                app.iter().map(|&i| &mm.machine.rules[i].name).collect::<Vec<_>>(),
                base_app.iter().map(|&i| &s.rules[i].name).collect::<Vec<_>>()
            );
            let step = mm.machine.apply_rule(&sigma, app[0]).unwrap();
            let base_step = s.apply_rule(&base_w, base_app[0]).unwrap();
            assert_eq!(step, mm.widen(&base_step));
            break;
        }
    }

    #[test]
    fn mirror_coherence_of_sigma() {
        let s = toy_composed();
        let mm = multiply(&s, 4).unwrap();
        let sigma = mm.sigma_word(&[Letter::new("a.0")]).unwrap();
        let k = mm.base_positions;
        // Strip position indices and compare block contents: each even
        // block is the mirror of the base block's letter sequence.
        let strip = |w: &GWord| -> Vec<String> {
            w.0.iter()
                .map(|l| {
                    let name = l.base.as_str();
                    let rest = name.strip_prefix("h.").unwrap_or(name);
                    rest.split_once('.').map(|(_, b)| b.to_string()).unwrap_or_default()
                })
                .collect()
        };
        for b in 1..=mm.l {
            let offset = (b - 1) * (k + 1);
            for r in 1..k {
                let j_odd = offset + 1 + r; // sector within block b
                let base_sector = mm.base_sector(j_odd).unwrap();
                let content = strip(&sigma.sectors[j_odd - 1]);
                let mut base_content: Vec<String> = s.start_word.sectors[base_sector - 1]
                    .0
                    .iter()
                    .map(|l| l.base.as_str().to_string())
                    .collect();
                if base_sector == 1 {
                    base_content = vec!["a.0".to_string()];
                }
                if b % 2 == 0 {
                    base_content.reverse();
                }
                assert_eq!(content, base_content, "block {b} sector {j_odd}");
            }
        }
    }

    #[test]
    fn sigma_length_formula() {
        let s = toy_composed();
        let mm = multiply(&s, 4).unwrap();
        let n = mm.state_letters();
        for u in [vec![], vec![Letter::new("a.0")], vec![Letter::new("a.0"), Letter::new("a.0")]] {
            let sigma = mm.sigma_word(&u).unwrap();
            assert_eq!(sigma.norm(), n + 4 * u.len(), "u of length {}", u.len());
        }
        assert_eq!(mm.sigma0_word().norm(), n);
        assert_eq!(mm.sigma0_word().a_len(), 0);
    }

    #[test]
    fn sigma_rejects_foreign_letters() {
        let s = toy_composed();
        let mm = multiply(&s, 4).unwrap();
        assert!(matches!(
            mm.sigma_word(&[Letter::new("zz")]),
            Err(MultiplyError::BadLetter(_))
        ));
    }

    #[test]
    fn hatted_machine_shares_exactly_the_input_interface() {
        let s = toy_composed();
        let h = hat_machine(&s);
        assert!(h.validate().is_empty(), "{:?}", h.validate());
        // Disjoint rule names.
        for r in &h.rules {
            assert!(s.rule(&r.name).is_none());
        }
        // Shared state letters are exactly the start/accept components.
        let shared: Vec<&Letter> = h
            .state_sets
            .iter()
            .flatten()
            .filter(|l| s.state_sets.iter().any(|set| set.contains(*l)))
            .collect();
        let expected: std::collections::BTreeSet<&Letter> = s
            .start_word
            .states
            .iter()
            .chain(s.accept_word.states.iter())
            .collect();
        assert_eq!(shared.iter().copied().collect::<std::collections::BTreeSet<_>>(), expected);
    }

    #[test]
    fn hatted_sigma_is_sigma_minus_first_input_occurrence() {
        let s = toy_composed();
        let plain = multiply(&s, 4).unwrap();
        let hat = multiply_hatted(&s, 4).unwrap();
        let u = [Letter::new("a.0"), Letter::new("a.0")];
        let sigma = plain.sigma_word(&u).unwrap().flatten();
        let hatted = hat.sigma_word(&u).unwrap().flatten();
        // Delete the first occurrence of the input content (block 1 holds
        // the first copy of u) from sigma; tokens must then agree once the
        // hat prefixes are ignored (hatted copies share every input
        // letter, so the words agree letter for letter).
        let pos = 2; // boundary separator, block-1 marker, then u
        let mut expect = sigma.0.clone();
        for _ in 0..u.len() {
            expect.remove(pos);
        }
        assert_eq!(hatted.0, expect);
    }
}
