//! S-machine description files, mirroring the machine format with
//! per-rule domain alphabets and basic flags.
//!
//! ```text
//! smachine
//! positions 3
//! states 1 : L
//! states 2 : p1 p2 p3
//! states 3 : R
//! sector 1 : x.0 x.1
//! sector 2 : x
//! start L ( ) p1 ( ) R
//! accept L ( ) p3 ( ) R
//! rule lift.x + plain
//!   domain 1 full
//!   domain 2 full
//!   part 1 ( ) L ( ) => ( ) L ( )
//!   part 2 ( x.1 ) p1 ( ) => ( ) p1 ( x )
//!   part 3 ( ) R ( ) => ( ) R ( )
//! end
//! ```

use crate::gword::GWord;
use crate::letter::{Letter, SLetter};
use crate::machine_io::{Lines, ParseError};
use crate::smachine::{AdmissibleWord, Domain, SMachine, SRule, SRulePart};
use std::collections::BTreeSet;
use std::fmt::Write as _;

fn parse_gword(toks: &[&str], i: &mut usize, lines: &Lines, n: usize) -> Result<GWord, ParseError> {
    if toks.get(*i) != Some(&"(") {
        return Err(lines.err(n, "expected '('"));
    }
    *i += 1;
    let mut w = GWord::empty();
    while let Some(t) = toks.get(*i) {
        *i += 1;
        if *t == ")" {
            return Ok(w);
        }
        match SLetter::parse(t) {
            Some(l) => w.push(l),
            None => return Err(lines.err(n, format!("invalid letter token {t:?}"))),
        }
    }
    Err(lines.err(n, "unterminated word"))
}

fn parse_admissible(toks: &[&str], lines: &Lines, n: usize) -> Result<AdmissibleWord, ParseError> {
    let mut states = Vec::new();
    let mut sectors = Vec::new();
    let mut i = 0;
    loop {
        let q = toks.get(i).ok_or_else(|| lines.err(n, "expected state letter"))?;
        if !Letter::valid_token(q) {
            return Err(lines.err(n, format!("invalid state token {q:?}")));
        }
        states.push(Letter::new(q));
        i += 1;
        if i == toks.len() {
            break;
        }
        sectors.push(parse_gword(toks, &mut i, lines, n)?);
        if i == toks.len() {
            return Err(lines.err(n, "word must end with a state letter"));
        }
    }
    Ok(AdmissibleWord { states, sectors })
}

pub fn parse_smachine(file: &str, text: &str) -> Result<SMachine, ParseError> {
    let mut lines = Lines::new(file, text);
    let (n0, head) = lines
        .next_tokens()
        .ok_or_else(|| ParseError { file: file.into(), line: 1, msg: "empty file".into() })?;
    if head != ["smachine"] {
        return Err(lines.err(n0, "expected 'smachine' header"));
    }
    let (n, toks) = lines.next_tokens().ok_or_else(|| lines.err(n0, "missing 'positions'"))?;
    if toks.first() != Some(&"positions") || toks.len() != 2 {
        return Err(lines.err(n, "expected 'positions <k+1>'"));
    }
    let positions: usize = toks[1].parse().map_err(|_| lines.err(n, "bad position count"))?;
    if positions < 2 {
        return Err(lines.err(n, "need at least two state positions"));
    }
    let sectors = positions - 1;

    let mut input_alphabet = BTreeSet::new();
    let mut state_sets = vec![BTreeSet::new(); positions];
    let mut sector_alphabets = vec![BTreeSet::new(); sectors];
    let mut start_word = None;
    let mut accept_word = None;
    let mut rules: Vec<SRule> = Vec::new();

    while let Some((n, toks)) = lines.next_tokens() {
        match toks[0] {
            "input" => {
                input_alphabet = toks[1..].iter().map(|t| Letter::new(t)).collect();
            }
            "states" | "sector" => {
                if toks.len() < 3 || toks[2] != ":" {
                    return Err(lines.err(n, format!("expected '{} <i> : letters...'", toks[0])));
                }
                let i: usize = toks[1].parse().map_err(|_| lines.err(n, "bad index"))?;
                let bound = if toks[0] == "states" { positions } else { sectors };
                if i == 0 || i > bound {
                    return Err(lines.err(n, "index out of range"));
                }
                let set: BTreeSet<Letter> = toks[3..]
                    .iter()
                    .map(|t| {
                        if Letter::valid_token(t) {
                            Ok(Letter::new(t))
                        } else {
                            Err(lines.err(n, format!("invalid letter token {t:?}")))
                        }
                    })
                    .collect::<Result<_, _>>()?;
                if toks[0] == "states" {
                    state_sets[i - 1] = set;
                } else {
                    sector_alphabets[i - 1] = set;
                }
            }
            "start" => start_word = Some(parse_admissible(&toks[1..], &lines, n)?),
            "accept" => accept_word = Some(parse_admissible(&toks[1..], &lines, n)?),
            "rule" => {
                if toks.len() != 4 || (toks[2] != "+" && toks[2] != "-") {
                    return Err(lines.err(n, "expected 'rule <name> <+|-> <basic|plain>'"));
                }
                let name = toks[1].to_string();
                let positive = toks[2] == "+";
                let basic = match toks[3] {
                    "basic" => true,
                    "plain" => false,
                    other => return Err(lines.err(n, format!("expected basic|plain, got {other}"))),
                };
                let mut domains: Vec<Option<Domain>> = vec![None; sectors];
                let mut parts: Vec<Option<SRulePart>> = vec![None; positions];
                loop {
                    let (pn, ptoks) =
                        lines.next_tokens().ok_or_else(|| lines.err(n, "unterminated rule"))?;
                    match ptoks[0] {
                        "end" => break,
                        "domain" => {
                            let i: usize = ptoks
                                .get(1)
                                .and_then(|t| t.parse().ok())
                                .ok_or_else(|| lines.err(pn, "bad sector index"))?;
                            if i == 0 || i > sectors {
                                return Err(lines.err(pn, "sector index out of range"));
                            }
                            let d = match ptoks.get(2) {
                                Some(&"full") => Domain::Full,
                                Some(&"empty") => Domain::Empty,
                                Some(&":") => {
                                    Domain::Set(ptoks[3..].iter().map(|t| Letter::new(t)).collect())
                                }
                                _ => return Err(lines.err(pn, "expected full | empty | : letters")),
                            };
                            if domains[i - 1].replace(d).is_some() {
                                return Err(lines.err(pn, "duplicate domain"));
                            }
                        }
                        "part" => {
                            let i: usize = ptoks
                                .get(1)
                                .and_then(|t| t.parse().ok())
                                .ok_or_else(|| lines.err(pn, "bad position index"))?;
                            if i == 0 || i > positions {
                                return Err(lines.err(pn, "position index out of range"));
                            }
                            let mut j = 2;
                            let lhs_left = parse_gword(&ptoks, &mut j, &lines, pn)?;
                            let lq = ptoks.get(j).ok_or_else(|| lines.err(pn, "expected state"))?;
                            j += 1;
                            let lhs_right = parse_gword(&ptoks, &mut j, &lines, pn)?;
                            if ptoks.get(j) != Some(&"=>") {
                                return Err(lines.err(pn, "expected '=>'"));
                            }
                            j += 1;
                            let rhs_left = parse_gword(&ptoks, &mut j, &lines, pn)?;
                            let rq = ptoks.get(j).ok_or_else(|| lines.err(pn, "expected state"))?;
                            j += 1;
                            let rhs_right = parse_gword(&ptoks, &mut j, &lines, pn)?;
                            let part = SRulePart {
                                lhs_left,
                                lhs_state: Letter::new(lq),
                                lhs_right,
                                rhs_left,
                                rhs_state: Letter::new(rq),
                                rhs_right,
                            };
                            if parts[i - 1].replace(part).is_some() {
                                return Err(lines.err(pn, "duplicate part"));
                            }
                        }
                        other => return Err(lines.err(pn, format!("unknown rule item {other:?}"))),
                    }
                }
                let parts = parts
                    .into_iter()
                    .enumerate()
                    .map(|(i, p)| {
                        p.ok_or_else(|| lines.err(n, format!("rule {name} missing part {}", i + 1)))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let domains = domains
                    .into_iter()
                    .enumerate()
                    .map(|(i, d)| {
                        d.ok_or_else(|| lines.err(n, format!("rule {name} missing domain {}", i + 1)))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                rules.push(SRule { name, positive, basic, parts, domains });
            }
            other => return Err(lines.err(n, format!("unknown directive {other:?}"))),
        }
    }

    let start_word = start_word.ok_or_else(|| lines.err(n0, "missing start word"))?;
    let accept_word = accept_word.ok_or_else(|| lines.err(n0, "missing accept word"))?;
    Ok(SMachine { input_alphabet, state_sets, sector_alphabets, rules, start_word, accept_word })
}

fn fmt_gword(w: &GWord) -> String {
    let mut s = String::from("(");
    for l in &w.0 {
        s.push(' ');
        let _ = write!(s, "{l}");
    }
    s.push_str(" )");
    s
}

fn fmt_admissible(w: &AdmissibleWord) -> String {
    let mut s = String::new();
    for (i, q) in w.states.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(q.as_str());
        if let Some(sec) = w.sectors.get(i) {
            s.push(' ');
            s.push_str(&fmt_gword(sec));
        }
    }
    s
}

pub fn emit_smachine(s: &SMachine) -> String {
    let mut out = String::new();
    out.push_str("smachine\n");
    let _ = writeln!(out, "positions {}", s.positions());
    let _ = writeln!(
        out,
        "input {}",
        s.input_alphabet.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ")
    );
    for (i, set) in s.state_sets.iter().enumerate() {
        let _ = writeln!(
            out,
            "states {} : {}",
            i + 1,
            set.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ")
        );
    }
    for (i, set) in s.sector_alphabets.iter().enumerate() {
        let _ = writeln!(
            out,
            "sector {} : {}",
            i + 1,
            set.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ")
        );
    }
    let _ = writeln!(out, "start {}", fmt_admissible(&s.start_word));
    let _ = writeln!(out, "accept {}", fmt_admissible(&s.accept_word));
    for r in &s.rules {
        let _ = writeln!(
            out,
            "rule {} {} {}",
            r.name,
            if r.positive { "+" } else { "-" },
            if r.basic { "basic" } else { "plain" }
        );
        for (i, d) in r.domains.iter().enumerate() {
            match d {
                Domain::Full => {
                    let _ = writeln!(out, "  domain {} full", i + 1);
                }
                Domain::Empty => {
                    let _ = writeln!(out, "  domain {} empty", i + 1);
                }
                Domain::Set(set) => {
                    let _ = writeln!(
                        out,
                        "  domain {} : {}",
                        i + 1,
                        set.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ")
                    );
                }
            }
        }
        for (i, p) in r.parts.iter().enumerate() {
            let _ = writeln!(
                out,
                "  part {} {} {} {} => {} {} {}",
                i + 1,
                fmt_gword(&p.lhs_left),
                p.lhs_state,
                fmt_gword(&p.lhs_right),
                fmt_gword(&p.rhs_left),
                p.rhs_state,
                fmt_gword(&p.rhs_right),
            );
        }
        out.push_str("end\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adder::make_adder;

    #[test]
    fn adder_roundtrips() {
        let z = make_adder(&["x", "y"].iter().map(|s| Letter::new(s)).collect());
        let text = emit_smachine(&z);
        let back = parse_smachine("mem", &text).unwrap();
        assert_eq!(z, back);
        assert_eq!(emit_smachine(&back), text);
    }
}
