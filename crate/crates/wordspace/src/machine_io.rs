//! Machine description files.
//!
//! Line-oriented, whitespace-tokenized, comment lines start with `#`.
//! Words are bracketed `( a b c )`, the empty word is `( )`. The format
//! round-trips bit-exactly through [`parse_machine`] / [`emit_machine`].
//!
//! ```text
//! machine
//! tapes 2
//! input a a'
//! alphabet 1 : a a'
//! alphabet 2 : c
//! states 1 : qs qf
//! states 2 : ps pf
//! start qs ps
//! accept qf pf
//! deterministic true
//! count_input_tape true
//! command open +
//!   1 int ( a' ) qs ( ) => ( ) qs ( )
//!   2 int ( ) ps ( ) => ( c ) ps ( )
//! end
//! ```

use crate::letter::Letter;
use crate::machine::{Command, CommandPart, Machine, Word};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("{file}:{line}: {msg}")]
pub struct ParseError {
    pub file: String,
    pub line: usize,
    pub msg: String,
}

pub(crate) struct Lines<'a> {
    file: String,
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    peeked: Option<(usize, &'a str)>,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(file: &str, text: &'a str) -> Self {
        Lines { file: file.to_string(), iter: text.lines().enumerate(), peeked: None }
    }

    /// Next non-empty, non-comment line as (1-based line number, tokens).
    pub(crate) fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        loop {
            let (n, line) = match self.peeked.take() {
                Some(x) => x,
                None => self.iter.next()?,
            };
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Some((n + 1, trimmed.split_whitespace().collect()));
        }
    }

    pub(crate) fn err(&self, line: usize, msg: impl Into<String>) -> ParseError {
        ParseError { file: self.file.clone(), line, msg: msg.into() }
    }
}

fn parse_letters(toks: &[&str], lines: &Lines, n: usize) -> Result<Vec<Letter>, ParseError> {
    toks.iter()
        .map(|t| {
            if Letter::valid_token(t) {
                Ok(Letter::new(t))
            } else {
                Err(lines.err(n, format!("invalid letter token {t:?}")))
            }
        })
        .collect()
}

/// Parses `( a b ) q ( c ) => ( ) q' ( d )` starting at `toks[i]`;
/// returns the two triples and the index after them.
fn parse_interior(
    toks: &[&str],
    mut i: usize,
    lines: &Lines,
    n: usize,
) -> Result<((Word, Letter, Word), (Word, Letter, Word), usize), ParseError> {
    let triple = |i: &mut usize| -> Result<(Word, Letter, Word), ParseError> {
        let word = |i: &mut usize| -> Result<Word, ParseError> {
            if toks.get(*i) != Some(&"(") {
                return Err(lines.err(n, "expected '('"));
            }
            *i += 1;
            let mut w = Vec::new();
            while let Some(t) = toks.get(*i) {
                *i += 1;
                if *t == ")" {
                    return Ok(w);
                }
                if !Letter::valid_token(t) {
                    return Err(lines.err(n, format!("invalid letter token {t:?}")));
                }
                w.push(Letter::new(t));
            }
            Err(lines.err(n, "unterminated word"))
        };
        let left = word(i)?;
        let q = toks.get(*i).ok_or_else(|| lines.err(n, "expected state letter"))?;
        if !Letter::valid_token(q) {
            return Err(lines.err(n, format!("invalid state token {q:?}")));
        }
        *i += 1;
        let right = word(i)?;
        Ok((left, Letter::new(q), right))
    };
    let lhs = triple(&mut i)?;
    if toks.get(i) != Some(&"=>") {
        return Err(lines.err(n, "expected '=>'"));
    }
    i += 1;
    let rhs = triple(&mut i)?;
    Ok((lhs, rhs, i))
}

pub fn parse_machine(file: &str, text: &str) -> Result<Machine, ParseError> {
    let mut lines = Lines::new(file, text);
    let (n0, head) = lines.next_tokens().ok_or_else(|| ParseError {
        file: file.to_string(),
        line: 1,
        msg: "empty file".into(),
    })?;
    if head != ["machine"] {
        return Err(lines.err(n0, "expected 'machine' header"));
    }
    let (n, toks) = lines.next_tokens().ok_or_else(|| lines.err(n0, "missing 'tapes'"))?;
    if toks.first() != Some(&"tapes") || toks.len() != 2 {
        return Err(lines.err(n, "expected 'tapes <k>'"));
    }
    let k: usize = toks[1].parse().map_err(|_| lines.err(n, "bad tape count"))?;
    if k == 0 {
        return Err(lines.err(n, "machine must have at least one tape"));
    }

    let mut input_alphabet = BTreeSet::new();
    let mut tape_alphabets = vec![BTreeSet::new(); k];
    let mut state_sets = vec![BTreeSet::new(); k];
    let mut start = Vec::new();
    let mut accept = Vec::new();
    let mut deterministic = false;
    let mut count_input_tape = true;
    let mut commands: Vec<Command> = Vec::new();

    while let Some((n, toks)) = lines.next_tokens() {
        match toks[0] {
            "input" => {
                input_alphabet = parse_letters(&toks[1..], &lines, n)?.into_iter().collect();
            }
            "alphabet" | "states" => {
                if toks.len() < 3 || toks[2] != ":" {
                    return Err(lines.err(n, format!("expected '{} <i> : letters...'", toks[0])));
                }
                let i: usize = toks[1].parse().map_err(|_| lines.err(n, "bad tape index"))?;
                if i == 0 || i > k {
                    return Err(lines.err(n, "tape index out of range"));
                }
                let set: BTreeSet<Letter> =
                    parse_letters(&toks[3..], &lines, n)?.into_iter().collect();
                if toks[0] == "alphabet" {
                    tape_alphabets[i - 1] = set;
                } else {
                    state_sets[i - 1] = set;
                }
            }
            "start" => start = parse_letters(&toks[1..], &lines, n)?,
            "accept" => accept = parse_letters(&toks[1..], &lines, n)?,
            "deterministic" => deterministic = toks.get(1) == Some(&"true"),
            "count_input_tape" => count_input_tape = toks.get(1) == Some(&"true"),
            "command" => {
                if toks.len() != 3 || (toks[2] != "+" && toks[2] != "-") {
                    return Err(lines.err(n, "expected 'command <name> <+|->'"));
                }
                let name = toks[1].to_string();
                let positive = toks[2] == "+";
                let mut parts: Vec<Option<CommandPart>> = vec![None; k];
                loop {
                    let (pn, ptoks) =
                        lines.next_tokens().ok_or_else(|| lines.err(n, "unterminated command"))?;
                    if ptoks == ["end"] {
                        break;
                    }
                    let tape: usize =
                        ptoks[0].parse().map_err(|_| lines.err(pn, "expected tape index"))?;
                    if tape == 0 || tape > k {
                        return Err(lines.err(pn, "tape index out of range"));
                    }
                    let part = match ptoks.get(1) {
                        Some(&"int") => {
                            let (lhs, rhs, end) = parse_interior(&ptoks, 2, &lines, pn)?;
                            if end != ptoks.len() {
                                return Err(lines.err(pn, "trailing tokens after part"));
                            }
                            CommandPart::Interior { lhs, rhs }
                        }
                        Some(&"left") | Some(&"right") => {
                            if ptoks.len() != 4 {
                                return Err(lines.err(pn, "expected '<i> left|right <q> <q'>'"));
                            }
                            let from = Letter::new(ptoks[2]);
                            let to = Letter::new(ptoks[3]);
                            if ptoks[1] == "left" {
                                CommandPart::LeftEnd { from, to }
                            } else {
                                CommandPart::RightEnd { from, to }
                            }
                        }
                        _ => return Err(lines.err(pn, "expected 'int', 'left' or 'right'")),
                    };
                    if parts[tape - 1].replace(part).is_some() {
                        return Err(lines.err(pn, format!("duplicate part for tape {tape}")));
                    }
                }
                let parts: Vec<CommandPart> = parts
                    .into_iter()
                    .enumerate()
                    .map(|(i, p)| p.ok_or_else(|| lines.err(n, format!("command {name} missing tape {}", i + 1))))
                    .collect::<Result<_, _>>()?;
                commands.push(Command { name, positive, parts });
            }
            other => return Err(lines.err(n, format!("unknown directive {other:?}"))),
        }
    }

    Ok(Machine {
        input_alphabet,
        tape_alphabets,
        state_sets,
        start,
        accept,
        deterministic,
        count_input_tape,
        commands,
    })
}

fn fmt_word(w: &[Letter]) -> String {
    let mut s = String::from("(");
    for l in w {
        s.push(' ');
        s.push_str(l.as_str());
    }
    s.push_str(" )");
    s
}

fn fmt_set(s: &BTreeSet<Letter>) -> String {
    s.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ")
}

pub fn emit_machine(m: &Machine) -> String {
    let mut out = String::new();
    out.push_str("machine\n");
    let _ = writeln!(out, "tapes {}", m.tape_count());
    let _ = writeln!(out, "input {}", fmt_set(&m.input_alphabet));
    for (i, set) in m.tape_alphabets.iter().enumerate() {
        let _ = writeln!(out, "alphabet {} : {}", i + 1, fmt_set(set));
    }
    for (i, set) in m.state_sets.iter().enumerate() {
        let _ = writeln!(out, "states {} : {}", i + 1, fmt_set(set));
    }
    let _ = writeln!(out, "start {}", m.start.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" "));
    let _ = writeln!(out, "accept {}", m.accept.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" "));
    let _ = writeln!(out, "deterministic {}", m.deterministic);
    let _ = writeln!(out, "count_input_tape {}", m.count_input_tape);
    for cmd in &m.commands {
        let _ = writeln!(out, "command {} {}", cmd.name, if cmd.positive { "+" } else { "-" });
        for (i, part) in cmd.parts.iter().enumerate() {
            match part {
                CommandPart::Interior { lhs, rhs } => {
                    let _ = writeln!(
                        out,
                        "  {} int {} {} {} => {} {} {}",
                        i + 1,
                        fmt_word(&lhs.0),
                        lhs.1,
                        fmt_word(&lhs.2),
                        fmt_word(&rhs.0),
                        rhs.1,
                        fmt_word(&rhs.2),
                    );
                }
                CommandPart::LeftEnd { from, to } => {
                    let _ = writeln!(out, "  {} left {} {}", i + 1, from, to);
                }
                CommandPart::RightEnd { from, to } => {
                    let _ = writeln!(out, "  {} right {} {}", i + 1, from, to);
                }
            }
        }
        out.push_str("end\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn roundtrip_fixtures() {
        for m in [fixtures::f_ev(), fixtures::f_bal(), fixtures::m_toy()] {
            let text = emit_machine(&m);
            let back = parse_machine("mem", &text).unwrap();
            assert_eq!(m, back);
            // Emission is stable: emit(parse(emit(m))) == emit(m).
            assert_eq!(emit_machine(&back), text);
        }
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = parse_machine("bad.mach", "machine\ntapes 1\nbogus x\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.to_string().contains("bad.mach:3"));
    }
}
