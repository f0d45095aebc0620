//! Rewriting over a presentation: tuples of words and the five
//! elementary moves — free pair insertion/removal, relator
//! insertion/removal (literal occurrences only), cyclic shift,
//! fragmentation, and removal of an empty word.
//!
//! On top of the raw moves sit two constructions: the expansion of one
//! S-machine step into a validated move sequence (the conjugation of an
//! admissible word by a rule letter), and the end-to-end vanishing
//! witness for an accepting computation, which rewrites the input
//! configuration down to the hub and erases it.

use crate::compile::Compiled;
use crate::gword::GWord;
use crate::letter::SLetter;
use crate::presentation::Presentation;
use crate::smachine::{AdmissibleWord, STrace};
use std::fmt;
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Move {
    /// Insert `letter . letter^-1` at `pos`.
    FreeInsert { word: usize, pos: usize, letter: SLetter },
    /// Remove the mutually inverse pair at `pos`, `pos+1`.
    FreeRemove { word: usize, pos: usize },
    /// Insert the relator (or its inverse) literally at `pos`.
    RelatorInsert { word: usize, pos: usize, relator: usize, inverted: bool },
    /// Remove a literal occurrence of the relator (or its inverse) at `pos`.
    RelatorRemove { word: usize, pos: usize, relator: usize, inverted: bool },
    /// Replace the word by its cyclic shift starting at `offset`.
    CyclicShift { word: usize, offset: usize },
    /// Split the word in two at `split`.
    Fragment { word: usize, split: usize },
    /// Remove the word, which must be empty.
    DropEmpty { word: usize },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::FreeInsert { word, pos, letter } => write!(f, "freeins {word} {pos} {letter}"),
            Move::FreeRemove { word, pos } => write!(f, "freerem {word} {pos}"),
            Move::RelatorInsert { word, pos, relator, inverted } => {
                write!(f, "relins {word} {pos} {relator}{}", if *inverted { " inv" } else { "" })
            }
            Move::RelatorRemove { word, pos, relator, inverted } => {
                write!(f, "relrem {word} {pos} {relator}{}", if *inverted { " inv" } else { "" })
            }
            Move::CyclicShift { word, offset } => write!(f, "shift {word} {offset}"),
            Move::Fragment { word, split } => write!(f, "frag {word} {split}"),
            Move::DropEmpty { word } => write!(f, "drop {word}"),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("illegal move {mv} at step {step}: {reason}")]
    IllegalMove { step: usize, mv: String, reason: String },
    #[error("the computation does not end at the accept configuration")]
    NotAccepting,
    #[error("rule not applicable to the word")]
    NotApplicable,
    #[error("no relator rotation matches (internal construction error)")]
    NoRotation,
}

pub fn tuple_norm(t: &[GWord]) -> usize {
    t.iter().map(|w| w.len()).sum()
}

/// Applies one move; errors carry the reason the move is illegal.
pub fn apply_move(p: &Presentation, tuple: &[GWord], mv: &Move) -> Result<Vec<GWord>, String> {
    let mut out: Vec<GWord> = tuple.to_vec();
    let word_index = |i: usize| -> Result<usize, String> {
        if i < out.len() {
            Ok(i)
        } else {
            Err(format!("word index {i} out of range"))
        }
    };
    match mv {
        Move::FreeInsert { word, pos, letter } => {
            let i = word_index(*word)?;
            let w = &mut out[i].0;
            if *pos > w.len() {
                return Err(format!("position {pos} out of range"));
            }
            w.insert(*pos, letter.inverse());
            w.insert(*pos, letter.clone());
        }
        Move::FreeRemove { word, pos } => {
            let i = word_index(*word)?;
            let w = &mut out[i].0;
            if pos + 1 >= w.len() {
                return Err(format!("position {pos} out of range"));
            }
            if !w[*pos].is_inverse_of(&w[pos + 1]) {
                return Err("letters are not a mutually inverse pair".into());
            }
            w.drain(*pos..=*pos + 1);
        }
        Move::RelatorInsert { word, pos, relator, inverted } => {
            let i = word_index(*word)?;
            let r = p.relators.get(*relator).ok_or("relator index out of range")?;
            let ins = if *inverted { r.word.inverse() } else { r.word.clone() };
            let w = &mut out[i].0;
            if *pos > w.len() {
                return Err(format!("position {pos} out of range"));
            }
            for (k, l) in ins.0.into_iter().enumerate() {
                w.insert(pos + k, l);
            }
        }
        Move::RelatorRemove { word, pos, relator, inverted } => {
            let i = word_index(*word)?;
            let r = p.relators.get(*relator).ok_or("relator index out of range")?;
            let pat = if *inverted { r.word.inverse() } else { r.word.clone() };
            let w = &mut out[i].0;
            if pos + pat.len() > w.len() {
                return Err("occurrence exceeds the word".into());
            }
            if w[*pos..pos + pat.len()] != pat.0[..] {
                return Err("no literal occurrence of the relator here".into());
            }
            w.drain(*pos..*pos + pat.len());
        }
        Move::CyclicShift { word, offset } => {
            let i = word_index(*word)?;
            if *offset > out[i].len() {
                return Err(format!("offset {offset} out of range"));
            }
            out[i] = out[i].cyclic_shift(*offset);
        }
        Move::Fragment { word, split } => {
            let i = word_index(*word)?;
            if *split > out[i].len() {
                return Err(format!("split {split} out of range"));
            }
            let w = out.remove(i);
            let (a, b) = (GWord(w.0[..*split].to_vec()), GWord(w.0[*split..].to_vec()));
            out.insert(i, b);
            out.insert(i, a);
        }
        Move::DropEmpty { word } => {
            let i = word_index(*word)?;
            if !out[i].is_empty() {
                return Err("word is not empty".into());
            }
            out.remove(i);
        }
    }
    Ok(out)
}

/// Norm change of a single move does not exceed the larger of 2 and the
/// longest relator.
pub fn move_locality_bound(p: &Presentation) -> usize {
    p.max_relator_len().max(2)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RewriteTrace {
    pub start: Vec<GWord>,
    pub moves: Vec<Move>,
    /// Peak total norm over every intermediate tuple.
    pub space: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub ok: bool,
    /// First illegal move, when not ok.
    pub failure: Option<(usize, String)>,
    pub final_tuple: Vec<GWord>,
    pub space: usize,
}

/// Replays every move; reports the first illegal one or confirms the
/// final tuple and the space.
pub fn validate_trace(p: &Presentation, t: &RewriteTrace) -> TraceReport {
    let mut tuple = t.start.clone();
    let mut space = tuple_norm(&tuple);
    let bound = move_locality_bound(p);
    for (step, mv) in t.moves.iter().enumerate() {
        let before = tuple_norm(&tuple);
        match apply_move(p, &tuple, mv) {
            Ok(next) => {
                let after = tuple_norm(&next);
                debug_assert!(after.abs_diff(before) <= bound, "move locality violated");
                tuple = next;
                space = space.max(after);
            }
            Err(reason) => {
                return TraceReport {
                    ok: false,
                    failure: Some((step, reason)),
                    final_tuple: tuple,
                    space,
                };
            }
        }
    }
    let ok = space == t.space;
    TraceReport {
        ok,
        failure: (!ok).then(|| (t.moves.len(), "cached space mismatch".into())),
        final_tuple: tuple,
        space,
    }
}

/// Incremental construction of a validated move sequence.
pub struct MoveBuilder<'p> {
    pub presentation: &'p Presentation,
    pub tuple: Vec<GWord>,
    pub moves: Vec<Move>,
    pub space: usize,
}

impl<'p> MoveBuilder<'p> {
    pub fn new(presentation: &'p Presentation, start: Vec<GWord>) -> Self {
        let space = tuple_norm(&start);
        MoveBuilder { presentation, tuple: start, moves: Vec::new(), space }
    }

    pub fn push(&mut self, mv: Move) -> Result<(), RewriteError> {
        match apply_move(self.presentation, &self.tuple, &mv) {
            Ok(next) => {
                self.space = self.space.max(tuple_norm(&next));
                self.tuple = next;
                self.moves.push(mv);
                Ok(())
            }
            Err(reason) => Err(RewriteError::IllegalMove {
                step: self.moves.len(),
                mv: mv.to_string(),
                reason,
            }),
        }
    }

    pub fn word(&self, i: usize) -> &GWord {
        &self.tuple[i]
    }

    /// Inserts an arbitrary rotation of relator `rel` (or of its inverse)
    /// at `pos`: the rotated prefix is minted as free pairs, the relator
    /// dropped in literally, and the scaffolding cancelled.
    pub fn insert_rotated(
        &mut self,
        word: usize,
        pos: usize,
        rel: usize,
        target: &GWord,
    ) -> Result<(), RewriteError> {
        let r = &self.presentation.relators[rel].word;
        let (inverted, rot) = if let Some(k) = r.rotation_to(target) {
            (false, k)
        } else if let Some(k) = r.inverse().rotation_to(target) {
            (true, k)
        } else {
            return Err(RewriteError::NoRotation);
        };
        let base = if inverted { r.inverse() } else { r.clone() };
        if rot == 0 {
            return self.push(Move::RelatorInsert { word, pos, relator: rel, inverted });
        }
        // target = S . P where base = P . S, |P| = rot. Mint S S^-1, insert
        // base between them, cancel the trailing S S^-1 pairs.
        let s_part = &base.0[rot..];
        let q = s_part.len();
        for (i, l) in s_part.iter().enumerate() {
            self.push(Move::FreeInsert { word, pos: pos + i, letter: l.clone() })?;
        }
        self.push(Move::RelatorInsert { word, pos: pos + q, relator: rel, inverted })?;
        // The boundary sits after [S][base]; q pairs cancel there.
        let mut b = pos + q + base.len();
        for _ in 0..q {
            debug_assert!(self.tuple[word].0[b - 1].is_inverse_of(&self.tuple[word].0[b]));
            self.push(Move::FreeRemove { word, pos: b - 1 })?;
            b -= 1;
        }
        Ok(())
    }

    /// Removes adjacent mutually inverse pairs inside `range` until none
    /// remain, leftmost first. Returns the number of pairs removed.
    pub fn reduce_range(&mut self, word: usize, mut lo: usize, mut hi: usize) -> Result<usize, RewriteError> {
        let mut removed = 0;
        loop {
            let w = &self.tuple[word].0;
            let hi_clamped = hi.min(w.len());
            let mut found = None;
            for i in lo..hi_clamped.saturating_sub(1) {
                if w[i].is_inverse_of(&w[i + 1]) {
                    found = Some(i);
                    break;
                }
            }
            match found {
                Some(i) => {
                    self.push(Move::FreeRemove { word, pos: i })?;
                    removed += 1;
                    hi = hi.saturating_sub(2);
                    lo = lo.min(i.saturating_sub(1));
                }
                None => return Ok(removed),
            }
        }
    }

    pub fn finish(self) -> RewriteTrace {
        RewriteTrace { start: vec![], moves: self.moves, space: self.space }
    }
}

/// Expands one rule application `W -> W . rule` into moves over the
/// single-word tuple `(W)`: relator insertions and removals, free pairs,
/// and one cyclic shift, with every intermediate norm at most
/// `|W| + |W.rule| + c0` for the presentation constant
/// `c0 = 3·(max relator length) + 4`.
pub fn expand_conjugation_step(
    c: &Compiled,
    w: &AdmissibleWord,
    rule_idx: usize,
) -> Result<Vec<Move>, RewriteError> {
    use std::collections::HashSet;
    let machine = &c.mult.machine;
    let target = machine.apply_rule(w, rule_idx).map_err(|_| RewriteError::NotApplicable)?;
    let rule = &machine.rules[rule_idx];
    let positive_name = rule.name.strip_suffix("^-1").unwrap_or(&rule.name).to_string();
    let n = machine.positions();

    // State letters of both machine copies; everything else in a sweep
    // word is a tape or rule letter.
    let mut states: HashSet<crate::letter::Letter> = HashSet::new();
    states.extend(machine.state_sets.iter().flatten().cloned());
    if let Some(h) = &c.hat {
        states.extend(h.machine.state_sets.iter().flatten().cloned());
    }
    let mut tapes: HashSet<crate::letter::Letter> = HashSet::new();
    tapes.extend(machine.sector_alphabets.iter().flatten().cloned());
    if let Some(h) = &c.hat {
        tapes.extend(h.machine.sector_alphabets.iter().flatten().cloned());
    }
    let is_state = |l: &SLetter| states.contains(&l.base);
    let is_theta = |l: &SLetter| !states.contains(&l.base) && !tapes.contains(&l.base);
    // The traveling rule letter is the first rule letter of the word; the
    // anchor inserted at the very start stays at the end.
    let theta_pos = |b: &MoveBuilder| -> usize {
        b.word(0).0.iter().position(is_theta).expect("sweep word has a rule letter")
    };
    // Index just after the j-th state letter from the left.
    let after_state = |b: &MoveBuilder, j: usize| -> usize {
        let mut seen = 0;
        for (i, l) in b.word(0).0.iter().enumerate() {
            if is_state(l) {
                seen += 1;
                if seen == j {
                    return i + 1;
                }
            }
        }
        unreachable!("word has at least {j} state letters")
    };

    let mut b = MoveBuilder::new(&c.presentation, vec![w.flatten()]);
    let t1 = c.theta_letter(&rule.name, 1);
    let start_len = b.word(0).len();
    // (W) -> W t1 t1^-1 -> t1^-1 W t1.
    b.push(Move::FreeInsert { word: 0, pos: start_len, letter: t1.clone() })?;
    b.push(Move::CyclicShift { word: 0, offset: start_len + 1 })?;

    for j in 1..=n {
        let part = &rule.parts[j - 1];
        let tj = c.theta_letter(&rule.name, j);
        let tj1 = c.theta_letter(&rule.name, j + 1);
        let v = &part.lhs_left;
        let u = &part.lhs_right;

        // Stage the left sector: mint v^-1 v before the rule letter, then
        // hop the rule letter left through v with commutator relators.
        let cursor = theta_pos(&b);
        for (i, l) in v.inverse().0.iter().enumerate() {
            b.push(Move::FreeInsert { word: 0, pos: cursor + i, letter: l.clone() })?;
        }
        for _ in 0..v.len() {
            let cur = theta_pos(&b);
            let cpos = cur - 1;
            let letter = b.word(0).0[cpos].clone();
            let comm = *c
                .commutator_index
                .get(&(positive_name.clone(), j, letter.base.clone()))
                .ok_or(RewriteError::NoRotation)?;
            // c t^-1 -> [t^-1 c t c^-1] c t^-1 -> t^-1 c.
            let mut x = GWord::empty();
            x.push(tj.inverse());
            x.push(letter.clone());
            x.push(tj.clone());
            x.push(letter.inverse());
            b.insert_rotated(0, cpos, comm, &x)?;
            b.push(Move::FreeRemove { word: 0, pos: cpos + 3 })?;
            b.push(Move::FreeRemove { word: 0, pos: cpos + 2 })?;
        }

        // Stage the right sector: mint u u^-1 after the state letter.
        let cur = theta_pos(&b);
        let qpos = cur + 1 + v.len();
        debug_assert!(is_state(&b.word(0).0[qpos]));
        for (i, l) in u.0.iter().enumerate() {
            b.push(Move::FreeInsert { word: 0, pos: qpos + 1 + i, letter: l.clone() })?;
        }

        // Insert V_j t_{j+1}^-1 U_j^-1 t_j before the rule letter; the
        // t_j pair and the whole of U_j^-1 cancel against v q_j u.
        let mut ins = part.rhs_word();
        ins.push(tj1.inverse());
        ins.0.extend(part.lhs_word().inverse().0);
        ins.push(tj.clone());
        let rel = *c
            .transition_index
            .get(&(positive_name.clone(), j))
            .ok_or(RewriteError::NoRotation)?;
        let cursor = theta_pos(&b);
        b.insert_rotated(0, cursor, rel, &ins)?;
        let mut boundary = cursor + ins.len();
        for _ in 0..(1 + v.len() + 1 + u.len()) {
            debug_assert!(
                b.word(0).0[boundary - 1].is_inverse_of(&b.word(0).0[boundary]),
                "expansion misaligned at position {j}"
            );
            b.push(Move::FreeRemove { word: 0, pos: boundary - 1 })?;
            boundary -= 1;
        }

        // Normalize the finished left sector (between state letters j-1
        // and j the word now reads y v^-1 v').
        if j >= 2 {
            let lo = after_state(&b, j - 1);
            let hi = theta_pos(&b) - 1 - part.rhs_right.len();
            b.reduce_range(0, lo, hi)?;
        }

        if j < n {
            // Reduce the segment between the rule letter and the next
            // state letter, then hop the rule letter right through it.
            let cur = theta_pos(&b);
            let seg_end = b.word(0).0[cur + 1..]
                .iter()
                .position(is_state)
                .map(|p| cur + 1 + p)
                .expect("a state letter follows");
            b.reduce_range(0, cur + 1, seg_end)?;
            loop {
                let cur = theta_pos(&b);
                let next = &b.word(0).0[cur + 1];
                if is_state(next) {
                    break;
                }
                let letter = next.clone();
                let comm = *c
                    .commutator_index
                    .get(&(positive_name.clone(), j + 1, letter.base.clone()))
                    .ok_or(RewriteError::NoRotation)?;
                // t^-1 a -> [a t^-1 a^-1 t] t^-1 a -> a t^-1.
                let mut x = GWord::empty();
                x.push(letter.clone());
                x.push(tj1.inverse());
                x.push(letter.inverse());
                x.push(tj1.clone());
                b.insert_rotated(0, cur, comm, &x)?;
                b.push(Move::FreeRemove { word: 0, pos: cur + 3 })?;
                b.push(Move::FreeRemove { word: 0, pos: cur + 2 })?;
            }
            // Merge the hopped-over letters with the sector's new prefix.
            let lo = after_state(&b, j);
            let hi = theta_pos(&b);
            b.reduce_range(0, lo, hi)?;
        }
    }
    // Trailing t_1^-1 t_1 disappears.
    let cur = theta_pos(&b);
    debug_assert_eq!(cur + 2, b.word(0).len());
    b.push(Move::FreeRemove { word: 0, pos: cur })?;

    debug_assert_eq!(b.word(0), &target.flatten(), "expansion must land on the applied word");
    let c0 = 3 * c.presentation.max_relator_len() + 4;
    debug_assert!(
        b.space <= w.norm() + target.norm() + c0,
        "norm bound violated: {} > {} + {} + {}",
        b.space,
        w.norm(),
        target.norm(),
        c0
    );
    Ok(b.moves)
}

/// The presentation constant reported alongside witness bounds.
pub fn witness_constant(p: &Presentation) -> usize {
    3 * p.max_relator_len() + 4
}

/// Builds the vanishing witness for an accepting computation from an
/// input configuration: one conjugation expansion per step, removal of
/// the hub, and the final drop. The trace's space is at most
/// `2·max_i |W_i| + c1` with `c1 = witness_constant(presentation)`.
pub fn witness_from_computation(c: &Compiled, t: &STrace) -> Result<RewriteTrace, RewriteError> {
    if t.last() != &c.mult.sigma0_word() {
        return Err(RewriteError::NotAccepting);
    }
    let mut b = MoveBuilder::new(&c.presentation, vec![t.start.flatten()]);
    for (step, &ridx) in t.rules.iter().enumerate() {
        let moves = expand_conjugation_step(c, &t.words[step], ridx)?;
        for mv in moves {
            b.push(mv)?;
        }
        debug_assert_eq!(b.word(0), &t.words[step + 1].flatten());
    }
    b.push(Move::RelatorRemove { word: 0, pos: 0, relator: c.hub_index, inverted: false })?;
    b.push(Move::DropEmpty { word: 0 })?;
    debug_assert!(b.tuple.is_empty());
    let mut trace = b.finish();
    trace.start = vec![t.start.flatten()];
    Ok(trace)
}

/// Line-based trace files: the start tuple as `word` lines, then one
/// line per move, closed by `end`.
pub fn emit_trace(t: &RewriteTrace) -> String {
    use std::fmt::Write as _;
    let mut out = String::from("trace\n");
    let _ = writeln!(out, "space {}", t.space);
    for w in &t.start {
        let _ = writeln!(out, "word {w}");
    }
    out.push_str("moves\n");
    for mv in &t.moves {
        let _ = writeln!(out, "{mv}");
    }
    let _ = writeln!(out, "end");
    out
}

pub fn parse_trace(file: &str, text: &str) -> Result<RewriteTrace, crate::machine_io::ParseError> {
    use crate::machine_io::Lines;
    let mut lines = Lines::new(file, text);
    let (n0, head) = lines.next_tokens().ok_or_else(|| crate::machine_io::ParseError {
        file: file.into(),
        line: 1,
        msg: "empty file".into(),
    })?;
    if head != ["trace"] {
        return Err(lines.err(n0, "expected 'trace' header"));
    }
    let mut start: Vec<GWord> = Vec::new();
    let mut moves: Vec<Move> = Vec::new();
    let mut space = 0usize;
    let mut in_moves = false;
    while let Some((n, toks)) = lines.next_tokens() {
        if toks == ["end"] {
            return Ok(RewriteTrace { start, moves, space });
        }
        if toks[0] == "space" {
            space = toks.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| lines.err(n, "bad space"))?;
            continue;
        }
        if toks == ["moves"] {
            in_moves = true;
            continue;
        }
        if !in_moves {
            if toks[0] != "word" {
                return Err(lines.err(n, "expected 'word' or 'moves'"));
            }
            let body: Vec<&str> = toks[1..].iter().copied().filter(|t| *t != "()").collect();
            let w = GWord::parse(&body).ok_or_else(|| lines.err(n, "bad word"))?;
            start.push(w);
            continue;
        }
        let num = |i: usize| -> Result<usize, crate::machine_io::ParseError> {
            toks.get(i)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| lines.err(n, "expected a number"))
        };
        let inv = |i: usize| toks.get(i) == Some(&"inv");
        let mv = match toks[0] {
            "freeins" => Move::FreeInsert {
                word: num(1)?,
                pos: num(2)?,
                letter: toks
                    .get(3)
                    .and_then(|t| SLetter::parse(t))
                    .ok_or_else(|| lines.err(n, "bad letter"))?,
            },
            "freerem" => Move::FreeRemove { word: num(1)?, pos: num(2)? },
            "relins" => Move::RelatorInsert { word: num(1)?, pos: num(2)?, relator: num(3)?, inverted: inv(4) },
            "relrem" => Move::RelatorRemove { word: num(1)?, pos: num(2)?, relator: num(3)?, inverted: inv(4) },
            "shift" => Move::CyclicShift { word: num(1)?, offset: num(2)? },
            "frag" => Move::Fragment { word: num(1)?, split: num(2)? },
            "drop" => Move::DropEmpty { word: num(1)? },
            other => return Err(lines.err(n, format!("unknown move {other:?}"))),
        };
        moves.push(mv);
    }
    Err(lines.err(n0, "unterminated trace"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::small_presentation;

    fn w(s: &str) -> GWord {
        if s.is_empty() {
            GWord::empty()
        } else {
            GWord::parse(&s.split_whitespace().collect::<Vec<_>>()).unwrap()
        }
    }

    #[test]
    fn free_reduce_then_drop() {
        let p = small_presentation(&["a"], &[]);
        let t0 = vec![w("a a^-1")];
        let t1 = apply_move(&p, &t0, &Move::FreeRemove { word: 0, pos: 0 }).unwrap();
        assert_eq!(t1, vec![GWord::empty()]);
        let t2 = apply_move(&p, &t1, &Move::DropEmpty { word: 0 }).unwrap();
        assert!(t2.is_empty());
    }

    #[test]
    fn fragment_splits_in_two() {
        let p = small_presentation(&["u", "v"], &[]);
        let t = apply_move(&p, &[w("u v")], &Move::Fragment { word: 0, split: 1 }).unwrap();
        assert_eq!(t, vec![w("u"), w("v")]);
    }

    #[test]
    fn cyclic_shift_rotates() {
        let p = small_presentation(&["a", "b", "c"], &[]);
        let t = apply_move(&p, &[w("a b c")], &Move::CyclicShift { word: 0, offset: 1 }).unwrap();
        assert_eq!(t, vec![w("b c a")]);
    }

    #[test]
    fn illegal_moves_are_reported() {
        let p = small_presentation(&["a"], &["a a a"]);
        assert!(apply_move(&p, &[w("a")], &Move::DropEmpty { word: 0 }).is_err());
        assert!(apply_move(&p, &[w("a")], &Move::FreeRemove { word: 0, pos: 0 }).is_err());
        assert!(
            apply_move(&p, &[w("a a")], &Move::RelatorRemove { word: 0, pos: 0, relator: 0, inverted: false })
                .is_err()
        );
        let trace = RewriteTrace {
            start: vec![w("a")],
            moves: vec![Move::CyclicShift { word: 3, offset: 0 }],
            space: 1,
        };
        let report = validate_trace(&p, &trace);
        assert!(!report.ok);
        assert_eq!(report.failure.as_ref().unwrap().0, 0);
    }

    #[test]
    fn empty_trace_is_valid_with_start_norm() {
        let p = small_presentation(&["a"], &[]);
        let t = RewriteTrace { start: vec![w("a a")], moves: vec![], space: 2 };
        let report = validate_trace(&p, &t);
        assert!(report.ok);
        assert_eq!(report.space, 2);
    }

    #[test]
    fn single_step_expansion_lands_on_the_applied_word() {
        let comp = crate::compose::compose_with_adder(&crate::fixtures::m_toy()).unwrap();
        let compiled = crate::compile::compile_simple(&comp.machine, 4).unwrap();
        let u = [crate::letter::Letter::new("a.0")];
        let sigma = compiled.mult.sigma_word(&u).unwrap();
        let applicable = compiled.mult.machine.applicable(&sigma);
        assert!(!applicable.is_empty());
        for &ridx in &applicable {
            let moves = expand_conjugation_step(&compiled, &sigma, ridx).unwrap();
            let trace = RewriteTrace {
                start: vec![sigma.flatten()],
                moves,
                space: 0,
            };
            // Replay and check the landing word.
            let mut tuple = trace.start.clone();
            for mv in &trace.moves {
                tuple = apply_move(&compiled.presentation, &tuple, mv).unwrap();
            }
            let target = compiled.mult.machine.apply_rule(&sigma, ridx).unwrap();
            assert_eq!(tuple, vec![target.flatten()]);
        }
    }

    #[test]
    fn witness_for_accepted_inputs_validates_with_bounded_space() {
        let comp = crate::compose::compose_with_adder(&crate::fixtures::m_toy()).unwrap();
        let compiled = crate::compile::compile_simple(&comp.machine, 4).unwrap();
        for u in [vec![], vec![crate::letter::Letter::new("a")]] {
            // A positive reduced accepting run of the base reading...
            let from = crate::convert::input_word(&comp.base, &u).unwrap();
            let c_sm = crate::oracle::find_trace(
                &comp.sm,
                &from,
                &comp.sm.accept_word,
                from.norm() + 2,
                20,
                true,
            )
            .expect("base reading accepts");
            // ...lifted through the composition and widened blockwise.
            let lifted = comp.canonical_lift(&c_sm).unwrap();
            assert_eq!(lifted.start, comp.input_word(&u).unwrap());
            let widened = crate::multiply::widen_trace(&compiled.mult, &lifted);
            assert_eq!(widened.last(), &compiled.mult.sigma0_word());

            let witness = witness_from_computation(&compiled, &widened).unwrap();
            let report = validate_trace(&compiled.presentation, &witness);
            assert!(report.ok, "{:?}", report.failure);
            assert!(report.final_tuple.is_empty());
            let bound = 2 * widened.peak_norm + witness_constant(&compiled.presentation);
            assert!(
                witness.space <= bound,
                "witness space {} exceeds 2*{} + {}",
                witness.space,
                widened.peak_norm,
                witness_constant(&compiled.presentation)
            );
        }
    }

    #[test]
    fn witness_rejects_non_accepting_runs() {
        let comp = crate::compose::compose_with_adder(&crate::fixtures::m_toy()).unwrap();
        let compiled = crate::compile::compile_simple(&comp.machine, 4).unwrap();
        let sigma = compiled.mult.sigma_word(&[crate::letter::Letter::new("a.0")]).unwrap();
        let t = crate::smachine::STrace::initial(sigma);
        assert!(matches!(
            witness_from_computation(&compiled, &t),
            Err(RewriteError::NotAccepting)
        ));
    }

    #[test]
    fn rotated_relator_insertion() {
        let p = small_presentation(&["a", "b"], &["a b a b"]);
        let mut b = MoveBuilder::new(&p, vec![w("b")]);
        // Insert the rotation b a b a at position 1.
        b.insert_rotated(0, 1, 0, &w("b a b a")).unwrap();
        assert_eq!(b.word(0), &w("b b a b a"));
        // And an inverse rotation.
        let mut b2 = MoveBuilder::new(&p, vec![w("b")]);
        b2.insert_rotated(0, 0, 0, &w("a^-1 b^-1 a^-1 b^-1")).unwrap();
        assert_eq!(b2.word(0), &w("a^-1 b^-1 a^-1 b^-1 b"));
    }
}
