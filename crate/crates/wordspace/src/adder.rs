//! The counter machine over a letter set `A`.
//!
//! Admissible words have the shape `L u p v R`: `u` is a reduced word over
//! the two working copies `A.0`, `A.1` of `A`, `v` a reduced word over the
//! plain copy, and `p` one of three mobile states. Subscripts on the
//! letters of `u` encode a binary counter (`.0` = 0-bit, `.1` = 1-bit,
//! least significant bit at the right end). The machine increments the
//! counter by zigzag sweeps:
//!
//!   * `lift.a`  — in `p1`, move the head left past a 1-bit, parking the
//!     letter (subscript erased) in the right zone;
//!   * `flip.a`  — turn the first 0-bit into a 1-bit, switch to `p2`;
//!   * `drop.a`  — in `p2`, return a parked letter as a 0-bit;
//!   * `next`    — close the cycle (right zone must be empty), back to `p1`;
//!   * `last`    — when the whole word has been lifted (left zone empty,
//!     so the counter has wrapped past all-ones), switch to `p3`;
//!   * `reset.a` — return parked letters as 0-bits in `p3`.
//!
//! A full run `L u p1 R -> L u p3 R` on a positive `u` over `A.0` therefore
//! performs 2^|u| increments and never changes the word's length. The
//! contract that the rest of the pipeline relies on (equal lengths, the
//! 2^|u| lower bound, no nontrivial loops between rest words) is enforced
//! by the `counter-contract` checking suite rather than by this module.

use crate::gword::GWord;
use crate::letter::{Letter, SLetter};
use crate::smachine::{AdmissibleWord, Domain, SMachine, SRule, SRulePart, STrace};
use std::collections::BTreeSet;

pub fn zero_copy(a: &Letter) -> Letter {
    a.dot("0")
}

pub fn one_copy(a: &Letter) -> Letter {
    a.dot("1")
}

pub const STATE_LEFT: &str = "L";
pub const STATE_RIGHT: &str = "R";

fn part_fixed(name: &str) -> SRulePart {
    SRulePart::state_only(Letter::new(name), Letter::new(name))
}

fn head_part(from: &str, to: &str, lhs_left: GWord, rhs_left: GWord, lhs_right: GWord, rhs_right: GWord) -> SRulePart {
    SRulePart {
        lhs_left,
        lhs_state: Letter::new(from),
        lhs_right,
        rhs_left,
        rhs_state: Letter::new(to),
        rhs_right,
    }
}

fn pos(l: Letter) -> GWord {
    GWord::from_letters([SLetter::pos(l)])
}

/// Builds the counter machine for a nonempty letter set.
pub fn make_adder(alphabet: &BTreeSet<Letter>) -> SMachine {
    assert!(!alphabet.is_empty(), "counter machine needs a nonempty alphabet");
    let mut work: BTreeSet<Letter> = BTreeSet::new();
    for a in alphabet {
        work.insert(zero_copy(a));
        work.insert(one_copy(a));
    }
    let both = Domain::Full;
    let zeros_only = Domain::Set(alphabet.iter().map(zero_copy).collect());

    let mut rules = Vec::new();
    let mut add = |name: String, part: SRulePart, dom1: Domain, dom2: Domain| {
        rules.push(SRule {
            name,
            positive: true,
            basic: false,
            parts: vec![part_fixed(STATE_LEFT), part, part_fixed(STATE_RIGHT)],
            domains: vec![dom1, dom2],
        });
    };

    for a in alphabet {
        add(
            format!("lift.{a}"),
            head_part("p1", "p1", pos(one_copy(a)), GWord::empty(), GWord::empty(), pos(a.clone())),
            both.clone(),
            Domain::Full,
        );
        add(
            format!("flip.{a}"),
            head_part("p1", "p2", pos(zero_copy(a)), pos(one_copy(a)), GWord::empty(), GWord::empty()),
            both.clone(),
            Domain::Full,
        );
        add(
            format!("drop.{a}"),
            head_part("p2", "p2", GWord::empty(), pos(zero_copy(a)), pos(a.clone()), GWord::empty()),
            both.clone(),
            Domain::Full,
        );
        add(
            format!("reset.{a}"),
            head_part("p3", "p3", GWord::empty(), pos(zero_copy(a)), pos(a.clone()), GWord::empty()),
            zeros_only.clone(),
            Domain::Full,
        );
    }
    add("next".into(), head_part("p2", "p1", GWord::empty(), GWord::empty(), GWord::empty(), GWord::empty()), both, Domain::Empty);
    add(
        "last".into(),
        head_part("p1", "p3", GWord::empty(), GWord::empty(), GWord::empty(), GWord::empty()),
        Domain::Empty,
        Domain::Full,
    );

    let inverses: Vec<SRule> = rules.iter().map(|r| r.inverted(format!("{}^-1", r.name))).collect();
    rules.extend(inverses);

    let states_p: BTreeSet<Letter> = ["p1", "p2", "p3"].iter().map(|s| Letter::new(s)).collect();
    let rest = |p: &str| {
        AdmissibleWord::new(
            vec![Letter::new(STATE_LEFT), Letter::new(p), Letter::new(STATE_RIGHT)],
            vec![GWord::empty(), GWord::empty()],
        )
    };
    SMachine {
        input_alphabet: alphabet.iter().map(zero_copy).collect(),
        state_sets: vec![
            [Letter::new(STATE_LEFT)].into_iter().collect(),
            states_p,
            [Letter::new(STATE_RIGHT)].into_iter().collect(),
        ],
        sector_alphabets: vec![work, alphabet.clone()],
        rules,
        start_word: rest("p1"),
        accept_word: rest("p3"),
    }
}

/// The rest word `L u p R` with `u` over the 0-copies of `input`.
pub fn rest_word(input: &[Letter], p: &str) -> AdmissibleWord {
    AdmissibleWord::new(
        vec![Letter::new(STATE_LEFT), Letter::new(p), Letter::new(STATE_RIGHT)],
        vec![GWord::positive(input.iter().map(zero_copy)), GWord::empty()],
    )
}

/// The canonical accepting computation `L u p1 R -> L u p3 R` for a
/// positive input `u` over the 0-copies: repeated increments, then the
/// wrap-around sweep. Every word it passes through has the same norm and
/// its history is positive.
pub fn canonical_run(z: &SMachine, input: &[Letter]) -> STrace {
    let mut trace = STrace::initial(rest_word(input, "p1"));
    let apply = |trace: &mut STrace, name: &str| {
        let (idx, _) = z.rule(name).unwrap_or_else(|| panic!("rule {name}"));
        let next = z
            .apply_rule(trace.last(), idx)
            .unwrap_or_else(|e| panic!("canonical step {name}: {e}"));
        trace.push(z, idx, next);
    };
    let n = input.len();
    // bits[j]: false = 0-bit. Least significant at the right end.
    let mut bits = vec![false; n];
    loop {
        // Letters currently at the right end of the left zone carrying
        // 1-bits, rightmost first.
        let ones: Vec<Letter> = input
            .iter()
            .zip(&bits)
            .rev()
            .take_while(|(_, &b)| b)
            .map(|(a, _)| a.clone())
            .collect();
        if ones.len() == n {
            // Counter wrapped: lift everything, turn, reset to zeros.
            for a in &ones {
                apply(&mut trace, &format!("lift.{a}"));
            }
            apply(&mut trace, "last");
            for a in ones.iter().rev() {
                apply(&mut trace, &format!("reset.{a}"));
            }
            return trace;
        }
        for a in &ones {
            apply(&mut trace, &format!("lift.{a}"));
        }
        let flip_at = n - 1 - ones.len();
        apply(&mut trace, &format!("flip.{}", input[flip_at]));
        for (j, b) in bits.iter_mut().enumerate().skip(flip_at + 1) {
            *b = false;
            let a = &input[j];
            apply(&mut trace, &format!("drop.{a}"));
        }
        bits[flip_at] = true;
        apply(&mut trace, "next");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(s: &str) -> BTreeSet<Letter> {
        s.split_whitespace().map(Letter::new).collect()
    }

    fn input(s: &str) -> Vec<Letter> {
        s.split_whitespace().map(Letter::new).collect()
    }

    #[test]
    fn machine_is_well_formed() {
        for letters in ["x", "x y"] {
            let z = make_adder(&alpha(letters));
            assert!(z.validate().is_empty(), "{:?}", z.validate());
        }
    }

    #[test]
    fn canonical_run_reaches_accept_with_equal_norms() {
        let z = make_adder(&alpha("x y"));
        for u in ["", "x", "x y", "y x x"] {
            let inp = input(u);
            let t = canonical_run(&z, &inp);
            t.validate(&z).unwrap();
            assert!(t.is_positive());
            assert!(t.rules.iter().all(|&i| z.rules[i].positive), "positive history");
            assert_eq!(t.last(), &rest_word(&inp, "p3"));
            let norm = t.start.norm();
            assert!(t.words.iter().all(|w| w.norm() == norm), "length stays {norm}");
            assert!(t.len() >= 1usize << inp.len(), "run of length {} for |u|={}", t.len(), inp.len());
        }
    }

    #[test]
    fn empty_input_wraps_in_one_step() {
        let z = make_adder(&alpha("x"));
        let t = canonical_run(&z, &[]);
        assert_eq!(t.len(), 1);
        assert_eq!(z.rules[t.rules[0]].name, "last");
    }
}
