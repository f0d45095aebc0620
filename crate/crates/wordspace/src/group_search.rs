//! Exhaustive search for the minimal rewriting space of a word over a
//! presentation.
//!
//! The value computed is the least `s` such that some move sequence takes
//! `(w)` to the empty tuple with every intermediate tuple of total norm
//! at most `s`. The search deepens on `s` and explores each tier
//! breadth-first. Because cyclic shifts and tuple order are free for
//! space purposes, states are canonicalized by default to sorted
//! multisets of least rotations; a no-canonicalization mode exists for
//! differential testing. Exploration order is deterministic, so repeated
//! runs yield identical statistics.

use crate::gword::GWord;
use crate::letter::SLetter;
use crate::oracle::{SearchOutcome, SearchResult, SearchStats};
use crate::presentation::Presentation;
use crate::rewriting::{apply_move, tuple_norm, Move, RewriteTrace};
use std::collections::HashMap;

type Tuple = Vec<GWord>;

fn canonical(t: &[GWord]) -> Tuple {
    let mut c: Tuple = t.iter().map(|w| w.least_rotation()).collect();
    c.sort();
    c
}

/// All single-move successors of a concrete tuple, each with the concrete
/// moves (at most a shift plus one) realizing it. With `canon`, moves
/// whose effect is only a rotation are skipped and seam-crossing variants
/// are generated instead.
fn successors(p: &Presentation, t: &Tuple, canon: bool) -> Vec<(Vec<Move>, Tuple)> {
    let mut out: Vec<(Vec<Move>, Tuple)> = Vec::new();
    let mut push = |moves: Vec<Move>, t: &Tuple| {
        let mut cur = t.clone();
        let mut ok = true;
        for mv in &moves {
            match apply_move(p, &cur, mv) {
                Ok(next) => cur = next,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push((moves, cur));
        }
    };
    let letters: Vec<SLetter> = p
        .generators
        .iter()
        .flat_map(|g| [SLetter::pos(g.clone()), SLetter::neg(g.clone())])
        .collect();
    // Dropping an empty word commutes with every other move and changes
    // no norm, so it is taken eagerly; this keeps the tiers finite.
    if let Some(i) = t.iter().position(|w| w.is_empty()) {
        push(vec![Move::DropEmpty { word: i }], t);
        return out;
    }
    for i in 0..t.len() {
        let len = t[i].len();
        // Free pair insertions at every position.
        for pos in 0..=len {
            if canon && pos == len && len > 0 {
                // The slot before position 0 is the same necklace gap.
                continue;
            }
            for l in &letters {
                push(vec![Move::FreeInsert { word: i, pos, letter: l.clone() }], t);
            }
        }
        // Free pair removals, including the seam pair in canonical mode.
        for pos in 0..len.saturating_sub(1) {
            if t[i].0[pos].is_inverse_of(&t[i].0[pos + 1]) {
                push(vec![Move::FreeRemove { word: i, pos }], t);
            }
        }
        if canon && len >= 2 && t[i].0[len - 1].is_inverse_of(&t[i].0[0]) {
            push(
                vec![Move::CyclicShift { word: i, offset: len - 1 }, Move::FreeRemove { word: i, pos: 0 }],
                t,
            );
        }
        // Relator insertions and removals (occurrences may cross the seam
        // in canonical mode).
        for (r, rel) in p.relators.iter().enumerate() {
            for inverted in [false, true] {
                for pos in 0..=len {
                    if canon && pos == len && len > 0 {
                        continue;
                    }
                    push(vec![Move::RelatorInsert { word: i, pos, relator: r, inverted }], t);
                }
                let pat = if inverted { rel.word.inverse() } else { rel.word.clone() };
                if pat.len() > len || pat.is_empty() {
                    continue;
                }
                let scan = if canon { len } else { len - pat.len() + 1 };
                for s in 0..scan {
                    let matches = (0..pat.len()).all(|k| t[i].0[(s + k) % len] == pat.0[k]);
                    if !matches {
                        continue;
                    }
                    if s + pat.len() <= len {
                        push(vec![Move::RelatorRemove { word: i, pos: s, relator: r, inverted }], t);
                    } else if canon {
                        push(
                            vec![
                                Move::CyclicShift { word: i, offset: s },
                                Move::RelatorRemove { word: i, pos: 0, relator: r, inverted },
                            ],
                            t,
                        );
                    }
                }
            }
        }
        // Fragmentation at every pair of nontrivial cut points. Trivial
        // cuts mint an empty word; a branch that starts empty only ever
        // adds norm (words never interact), so skipping those keeps the
        // tiers finite without affecting the minimum.
        if len >= 2 {
            let shifts: Vec<usize> = if canon { (0..len).collect() } else { vec![0] };
            for s in shifts {
                for split in 1..len {
                    if s == 0 {
                        push(vec![Move::Fragment { word: i, split }], t);
                    } else {
                        push(
                            vec![Move::CyclicShift { word: i, offset: s }, Move::Fragment { word: i, split }],
                            t,
                        );
                    }
                }
            }
        }
        if !canon && len > 0 {
            for offset in 1..len {
                push(vec![Move::CyclicShift { word: i, offset }], t);
            }
        }
    }
    out
}

struct Tier {
    result: SearchResult<()>,
    /// Concrete path to the empty tuple, when found.
    path: Option<Vec<Move>>,
}

fn explore_tier(
    p: &Presentation,
    start: &Tuple,
    space: usize,
    step_cap: usize,
    canon: bool,
    want_path: bool,
    stats: &mut SearchStats,
) -> Tier {
    if tuple_norm(start) > space {
        return Tier { result: SearchResult::Rejected, path: None };
    }
    if start.is_empty() {
        return Tier { result: SearchResult::Found(()), path: Some(vec![]) };
    }
    let key = |t: &Tuple| if canon { canonical(t) } else { t.clone() };
    // Visited states map to (parent key, concrete moves from the parent's
    // representative); representatives are the first concrete tuple seen.
    let mut seen: HashMap<Tuple, Option<(Tuple, Vec<Move>)>> = HashMap::new();
    let mut reps: HashMap<Tuple, Tuple> = HashMap::new();
    let start_key = key(start);
    seen.insert(start_key.clone(), None);
    reps.insert(start_key.clone(), start.clone());
    let mut frontier: Vec<Tuple> = vec![start_key.clone()];
    let mut truncated = false;
    let reconstruct = |k: &Tuple, seen: &HashMap<Tuple, Option<(Tuple, Vec<Move>)>>| -> Vec<Move> {
        let mut moves: Vec<Vec<Move>> = Vec::new();
        let mut cur = k.clone();
        while let Some(Some((parent, mv))) = seen.get(&cur) {
            moves.push(mv.clone());
            cur = parent.clone();
        }
        moves.reverse();
        moves.into_iter().flatten().collect()
    };
    for _depth in 0..step_cap {
        let mut next: Vec<Tuple> = Vec::new();
        for k in &frontier {
            stats.expanded += 1;
            let rep = reps.get(k).expect("frontier state has a representative").clone();
            for (moves, child) in successors(p, &rep, canon) {
                if tuple_norm(&child) > space {
                    continue;
                }
                let ck = key(&child);
                if seen.contains_key(&ck) {
                    continue;
                }
                seen.insert(ck.clone(), Some((k.clone(), moves)));
                reps.insert(ck.clone(), child.clone());
                if child.is_empty() {
                    let path = want_path.then(|| reconstruct(&ck, &seen));
                    return Tier { result: SearchResult::Found(()), path };
                }
                next.push(ck);
            }
        }
        stats.peak_frontier = stats.peak_frontier.max(next.len());
        if next.is_empty() {
            return Tier { result: SearchResult::Rejected, path: None };
        }
        frontier = next;
        truncated = true;
    }
    let _ = truncated;
    Tier { result: SearchResult::CapExhausted, path: None }
}

/// Minimal rewriting space of `w` (norm of every intermediate tuple at
/// most the returned value), by iterative deepening on the space cap.
pub fn bfs_group_space(
    p: &Presentation,
    w: &GWord,
    space_cap: usize,
    step_cap: usize,
    canonicalize: bool,
) -> SearchOutcome<usize> {
    bfs_group_space_witness(p, w, space_cap, step_cap, canonicalize, false).0
}

/// Same search, optionally returning a validated witness trace for the
/// found value.
pub fn bfs_group_space_witness(
    p: &Presentation,
    w: &GWord,
    space_cap: usize,
    step_cap: usize,
    canonicalize: bool,
    want_path: bool,
) -> (SearchOutcome<usize>, Option<RewriteTrace>) {
    let start: Tuple = vec![w.clone()];
    let mut stats = SearchStats { expanded: 0, peak_frontier: 0 };
    let mut saw_cap = false;
    for s in tuple_norm(&start)..=space_cap {
        let tier = explore_tier(p, &start, s, step_cap, canonicalize, want_path, &mut stats);
        match tier.result {
            SearchResult::Found(()) => {
                let trace = tier.path.map(|moves| {
                    let mut space = tuple_norm(&start);
                    let mut cur = start.clone();
                    for mv in &moves {
                        cur = apply_move(p, &cur, mv).expect("reconstructed path replays");
                        space = space.max(tuple_norm(&cur));
                    }
                    debug_assert!(cur.is_empty());
                    RewriteTrace { start: start.clone(), moves, space }
                });
                return (SearchOutcome { result: SearchResult::Found(s), stats }, trace);
            }
            SearchResult::CapExhausted => saw_cap = true,
            SearchResult::Rejected => {}
        }
    }
    let result = if saw_cap { SearchResult::CapExhausted } else { SearchResult::Rejected };
    (SearchOutcome { result, stats }, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::small_presentation;
    use crate::rewriting::validate_trace;

    fn w(s: &str) -> GWord {
        if s.is_empty() {
            GWord::empty()
        } else {
            GWord::parse(&s.split_whitespace().collect::<Vec<_>>()).unwrap()
        }
    }

    #[test]
    fn single_relator_vanishes_at_its_norm() {
        let p = small_presentation(&["a"], &["a"]);
        let out = bfs_group_space(&p, &w("a"), 4, 50, true);
        assert_eq!(out.result, SearchResult::Found(1));
    }

    #[test]
    fn free_pair_needs_norm_two() {
        let p = small_presentation(&["a", "b"], &["b"]);
        let out = bfs_group_space(&p, &w("a a^-1"), 4, 50, true);
        assert_eq!(out.result, SearchResult::Found(2));
    }

    #[test]
    fn nonvanishing_word_is_rejected() {
        let p = small_presentation(&["a"], &["a a a"]);
        let out = bfs_group_space(&p, &w("a"), 4, 200, true);
        assert_eq!(out.result, SearchResult::Rejected);
    }

    #[test]
    fn canonical_and_raw_agree_on_small_instances() {
        let cases = [
            (small_presentation(&["a"], &["a a a"]), "a a a"),
            (small_presentation(&["a", "b"], &["a b a^-1 b^-1"]), "a b a^-1 b^-1"),
            (small_presentation(&["a", "b"], &["a a", "b b a"]), "b a"),
        ];
        for (p, word) in cases {
            let fast = bfs_group_space(&p, &w(word), 6, 60, true);
            let slow = bfs_group_space(&p, &w(word), 6, 60, false);
            assert_eq!(fast.result, slow.result, "on {word}");
        }
    }

    #[test]
    fn value_invariant_under_cyclic_shift_and_reduction() {
        let p = small_presentation(&["a", "b"], &["a b a b"]);
        let base = bfs_group_space(&p, &w("a b a b"), 6, 80, true);
        let shifted = bfs_group_space(&p, &w("b a b a"), 6, 80, true);
        assert_eq!(base.result, shifted.result);
        // Unreduced variant differs at most by the norm difference.
        let padded = w("a b b^-1 b a b");
        let out = bfs_group_space(&p, &padded, 8, 80, true);
        let (SearchResult::Found(x), SearchResult::Found(y)) = (&base.result, &out.result) else {
            panic!("both should vanish");
        };
        assert!(y.abs_diff(*x) <= padded.len() - w("a b a b").len());
    }

    #[test]
    fn witness_path_replays() {
        let p = small_presentation(&["a", "b"], &["a b"]);
        let (out, trace) = bfs_group_space_witness(&p, &w("a b a b"), 6, 80, true, true);
        let SearchResult::Found(s) = out.result else { panic!() };
        let t = trace.unwrap();
        assert_eq!(t.space, s);
        let report = validate_trace(&p, &t);
        assert!(report.ok, "{:?}", report.failure);
        assert!(report.final_tuple.is_empty());
    }

    #[test]
    fn deterministic_statistics() {
        let p = small_presentation(&["a", "b"], &["a b a b"]);
        let a = bfs_group_space(&p, &w("a b a b"), 6, 80, true);
        let b = bfs_group_space(&p, &w("a b a b"), 6, 80, true);
        assert_eq!(a.stats, b.stats);
        assert_eq!(a.result, b.result);
    }
}
