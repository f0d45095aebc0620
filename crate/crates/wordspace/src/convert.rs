//! Viewing a symmetric machine as an S-machine.
//!
//! The machine must keep every head at the right end of its tape (all
//! interior command parts edit only the left side of the head), so a
//! configuration reads as `B u1 q1 u2 q2 ... uk qk`: one state position
//! per tape plus a fixed boundary letter in front, one sector per tape.
//! Commands translate letter for letter: a pop `a q -> q'` becomes the
//! substitution part `a q -> q'`, a push `q -> b q'`, and an emptiness
//! check becomes an empty domain on the checked sector.

use crate::gword::GWord;
use crate::letter::Letter;
use crate::machine::{CommandPart, Configuration, Machine, MachineError, TapeConfig, Word};
use crate::smachine::{AdmissibleWord, Domain, SMachine, SRule, SRulePart};

/// The immutable boundary state letter occupying position 1.
pub const BOUNDARY: &str = "bdry";

/// True when every command edits tapes only at the right ends.
pub fn is_stack_form(m: &Machine) -> bool {
    m.commands.iter().all(|cmd| {
        cmd.parts.iter().all(|p| match p {
            CommandPart::Interior { lhs, rhs } => lhs.2.is_empty() && rhs.2.is_empty(),
            _ => true,
        })
    })
}

/// Builds the S-machine reading of a symmetric one-letter machine.
pub fn from_turing(m: &Machine) -> Result<SMachine, MachineError> {
    if !m.is_symmetric() {
        return Err(MachineError::NotSymmetric);
    }
    if let Some(cmd) = m.commands.iter().find(|c| c.letters_involved() > 1) {
        return Err(MachineError::NotOneLetter(cmd.name.clone()));
    }
    if let Some(cmd) = m.commands.iter().find(|c| {
        c.parts.iter().any(|p| match p {
            CommandPart::Interior { lhs, rhs } => !lhs.2.is_empty() || !rhs.2.is_empty(),
            _ => false,
        })
    }) {
        return Err(MachineError::NotStackForm(cmd.name.clone()));
    }
    let boundary = Letter::new(BOUNDARY);
    let mut state_sets = vec![[boundary.clone()].into_iter().collect()];
    state_sets.extend(m.state_sets.iter().cloned());
    let sector_alphabets = m.tape_alphabets.clone();

    let rules = m
        .commands
        .iter()
        .map(|cmd| {
            let mut parts = vec![SRulePart::state_only(boundary.clone(), boundary.clone())];
            let mut domains = vec![Domain::Full; m.tape_count()];
            for (i, part) in cmd.parts.iter().enumerate() {
                let spart = match part {
                    CommandPart::Interior { lhs, rhs } => SRulePart {
                        lhs_left: GWord::positive(lhs.0.iter().cloned()),
                        lhs_state: lhs.1.clone(),
                        lhs_right: GWord::empty(),
                        rhs_left: GWord::positive(rhs.0.iter().cloned()),
                        rhs_state: rhs.1.clone(),
                        rhs_right: GWord::empty(),
                    },
                    CommandPart::LeftEnd { from, to } => {
                        // Emptiness of the tape is the domain condition.
                        domains[i] = Domain::Empty;
                        SRulePart::state_only(from.clone(), to.clone())
                    }
                    CommandPart::RightEnd { from, to } => {
                        // The head always sits at the right end here.
                        SRulePart::state_only(from.clone(), to.clone())
                    }
                };
                parts.push(spart);
            }
            SRule { name: cmd.name.clone(), positive: cmd.positive, basic: false, parts, domains }
        })
        .collect();

    let start_word = config_word(m, &m.input_config(&[])?);
    let accept_word = config_word(m, &m.accept_config());
    Ok(SMachine {
        input_alphabet: m.input_alphabet.clone(),
        state_sets,
        sector_alphabets,
        rules,
        start_word,
        accept_word,
    })
}

/// The admissible word reading of a head-at-right-end configuration.
pub fn config_word(_m: &Machine, c: &Configuration) -> AdmissibleWord {
    debug_assert!(c.tapes.iter().all(|t| t.right.is_empty()));
    let mut states = vec![Letter::new(BOUNDARY)];
    let mut sectors = Vec::new();
    for t in &c.tapes {
        sectors.push(GWord::positive(t.left.iter().cloned()));
        states.push(t.state.clone());
    }
    AdmissibleWord::new(states, sectors)
}

/// The configuration a positive admissible word spells, if any.
pub fn word_config(w: &AdmissibleWord) -> Option<Configuration> {
    if !w.is_positive() {
        return None;
    }
    let tapes = w
        .sectors
        .iter()
        .zip(&w.states[1..])
        .map(|(sec, q)| TapeConfig {
            left: sec.0.iter().map(|l| l.base.clone()).collect(),
            state: q.clone(),
            right: vec![],
        })
        .collect();
    Some(Configuration { tapes })
}

/// The input word of the S-machine reading for input `u`.
pub fn input_word(m: &Machine, u: &[Letter]) -> Result<AdmissibleWord, MachineError> {
    Ok(config_word(m, &m.input_config(u)?))
}

/// All head-at-right-end configurations of `m` with at most `bound` tape
/// letters, as admissible words.
pub fn small_positive_words(m: &Machine, bound: usize) -> Vec<AdmissibleWord> {
    fn words_of(alpha: &[Letter], len: usize) -> Vec<Word> {
        if len == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for w in words_of(alpha, len - 1) {
            for l in alpha {
                let mut v = w.clone();
                v.push(l.clone());
                out.push(v);
            }
        }
        out
    }
    let mut configs: Vec<Configuration> = vec![Configuration { tapes: vec![] }];
    for i in 0..m.tape_count() {
        let alpha: Vec<Letter> = m.tape_alphabets[i].iter().cloned().collect();
        let states: Vec<Letter> = m.state_sets[i].iter().cloned().collect();
        let mut next = Vec::new();
        for c in &configs {
            let used: usize = c.tapes.iter().map(|t| t.letters()).sum();
            for len in 0..=(bound - used) {
                for w in words_of(&alpha, len) {
                    for q in &states {
                        let mut c2 = c.clone();
                        c2.tapes.push(TapeConfig { left: w.clone(), state: q.clone(), right: vec![] });
                        next.push(c2);
                    }
                }
            }
        }
        configs = next;
    }
    configs.sort();
    configs.into_iter().map(|c| config_word(m, &c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::{enumerate_computations, EnumOptions};
    use crate::transforms::build_pipeline;

    #[test]
    fn rule_count_matches_command_count() {
        let m = fixtures::m_toy();
        let s = from_turing(&m).unwrap();
        assert!(s.validate().is_empty(), "{:?}", s.validate());
        assert_eq!(s.rules.len(), m.commands.len());
    }

    #[test]
    fn rejects_unnormalized_machines() {
        assert!(matches!(from_turing(&fixtures::f_bal()), Err(MachineError::NotSymmetric)));
        let sym = crate::transforms::symmetrize(&fixtures::f_bal());
        assert!(matches!(from_turing(&sym), Err(MachineError::NotOneLetter(_))));
    }

    /// Machine computations replay as S-machine computations with the same
    /// history, and positive S-machine computations from positive starts
    /// replay as machine computations.
    #[test]
    fn machine_and_smachine_computations_agree() {
        for m in [fixtures::m_toy(), build_pipeline(&fixtures::f_ev()).unwrap()] {
            let s = from_turing(&m).unwrap();
            assert!(s.validate().is_empty(), "{:?}", s.validate());
            for w in small_positive_words(&m, 2) {
                // Direction 1: every machine step sequence is an S-machine
                // computation with the same history (depth-limited walk).
                let c = word_config(&w).unwrap();
                let mut stack = vec![(c, w.clone(), 0usize)];
                while let Some((cfg, word, depth)) = stack.pop() {
                    if depth >= 3 {
                        continue;
                    }
                    for cmd in m.applicable_all(&cfg) {
                        let cfg2 = m.apply(&cfg, cmd).unwrap();
                        let word2 = s
                            .apply_named(&word, &cmd.name)
                            .unwrap_or_else(|e| panic!("rule {} must apply: {e}", cmd.name));
                        assert_eq!(word2, config_word(&m, &cfg2), "command {}", cmd.name);
                        stack.push((cfg2, word2, depth + 1));
                    }
                }
                // Direction 2: every positive S-machine computation is a
                // machine computation with the same history.
                for t in
                    enumerate_computations(&s, &w, &EnumOptions::reduced(3).positive().all_histories())
                {
                    let mut cfg = word_config(&t.start).unwrap();
                    for (step, &ridx) in t.rules.iter().enumerate() {
                        let name = &s.rules[ridx].name;
                        let h = crate::machine::HistoryLetter::parse(name);
                        cfg = m
                            .apply_named(&cfg, &h)
                            .unwrap_or_else(|e| panic!("command {name} must apply: {e}"));
                        assert_eq!(Some(&cfg), word_config(&t.words[step + 1]).as_ref());
                    }
                }
            }
        }
    }
}
