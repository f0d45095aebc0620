//! Built-in example machines used by the checking suites and tests.

use crate::letter::Letter;
use crate::machine::{Machine, Word};
use crate::machine_io::parse_machine;

pub const F_EV_TEXT: &str = include_str!("../fixtures/fev.mach");
pub const F_BAL_TEXT: &str = include_str!("../fixtures/fbal.mach");
pub const M_TOY_TEXT: &str = include_str!("../fixtures/mtoy.mach");
pub const F_BAL_LANG: &str = include_str!("../fixtures/fbal.lang");

/// One-tape machine accepting the even-length words over `{a}`.
pub fn f_ev() -> Machine {
    parse_machine("fev.mach", F_EV_TEXT).expect("fixture parses")
}

/// Two-tape machine deciding balanced `{a, a'}` words.
pub fn f_bal() -> Machine {
    parse_machine("fbal.mach", F_BAL_TEXT).expect("fixture parses")
}

/// Tiny symmetric one-letter machine in start/accept normal form.
pub fn m_toy() -> Machine {
    parse_machine("mtoy.mach", M_TOY_TEXT).expect("fixture parses")
}

/// The hand-listed members of `L(F-BAL)` up to length 4.
pub fn f_bal_expected_language() -> Vec<Word> {
    let mut words = Vec::new();
    for line in F_BAL_LANG.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (_, rest) = line.split_once(':').expect("length : letters");
        words.push(rest.split_whitespace().map(Letter::new).collect());
    }
    words.sort();
    words
}

pub fn lookup(name: &str) -> Option<Machine> {
    match name {
        "fev" => Some(f_ev()),
        "fbal" => Some(f_bal()),
        "mtoy" => Some(m_toy()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for m in [f_ev(), f_bal(), m_toy()] {
            assert!(m.validate().is_empty(), "{:?}", m.validate());
        }
    }

    #[test]
    fn m_toy_is_symmetric_one_letter_normal() {
        let m = m_toy();
        assert!(m.is_symmetric());
        assert!(m.is_s10());
        assert!(m.commands.iter().all(|c| c.letters_involved() <= 1));
    }

    #[test]
    fn validation_flags_bad_machines() {
        let mut m = f_bal();
        m.input_alphabet.insert(Letter::new("z"));
        assert!(m
            .validate()
            .iter()
            .any(|e| e.contains("input alphabet not contained in first tape alphabet")));

        let mut m2 = f_bal();
        // Duplicate an existing command under a new name: two positive
        // commands now share every applicable configuration.
        let mut dup = m2.commands[0].clone();
        dup.name = "open2".into();
        m2.commands.push(dup);
        assert!(m2.validate().iter().any(|e| e.contains("determinism violated")));

        let empty = Machine {
            input_alphabet: Default::default(),
            tape_alphabets: vec![],
            state_sets: vec![],
            start: vec![],
            accept: vec![],
            deterministic: false,
            count_input_tape: true,
            commands: vec![],
        };
        assert!(empty.validate().iter().any(|e| e.contains("zero tapes")));
    }
}
