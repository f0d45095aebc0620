//! Brute-force search engines for machines and S-machines.
//!
//! Everything here is exhaustive and capped: results distinguish a found
//! value, a search space exhausted under the caps, and a cap hit before
//! the space was exhausted. Searches are deterministic — identical inputs
//! and caps give identical results and identical exploration counts.

use crate::letter::Letter;
use crate::machine::{Configuration, Machine, MachineError, Word};
use crate::smachine::{AdmissibleWord, SMachine, STrace};
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SearchStats {
    pub expanded: u64,
    pub peak_frontier: usize,
}

impl SearchStats {
    fn new() -> Self {
        SearchStats { expanded: 0, peak_frontier: 0 }
    }
}

/// Three-valued search result: never a bare boolean.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SearchResult<T> {
    Found(T),
    /// The whole space within the caps was explored and contains no
    /// solution.
    Rejected,
    /// A cap stopped the search before the space was exhausted.
    CapExhausted,
}

impl<T> SearchResult<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            SearchResult::Found(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome<T> {
    pub result: SearchResult<T>,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Accept,
    Config(&'a Configuration),
}

/// Breadth-first reachability within one space tier: all configurations of
/// a-length at most `space`, computation length at most `step_cap`.
/// Returns Found(()) / Rejected / CapExhausted per tier semantics.
fn reach_within(
    m: &Machine,
    from: &Configuration,
    target: Target,
    space: usize,
    step_cap: usize,
    stats: &mut SearchStats,
) -> SearchResult<()> {
    let hit = |c: &Configuration| match target {
        Target::Accept => m.is_accept_config(c),
        Target::Config(t) => c == t,
    };
    if m.a_length(from) > space {
        return SearchResult::Rejected;
    }
    if hit(from) {
        return SearchResult::Found(());
    }
    let mut seen: HashSet<Configuration> = HashSet::new();
    seen.insert(from.clone());
    let mut frontier = vec![from.clone()];
    let mut truncated = false;
    for _depth in 0..step_cap {
        let mut next = Vec::new();
        for c in &frontier {
            stats.expanded += 1;
            for cmd in m.applicable_all(c) {
                let c2 = m.apply(c, cmd).expect("applicable command applies");
                if m.a_length(&c2) > space || seen.contains(&c2) {
                    continue;
                }
                if hit(&c2) {
                    return SearchResult::Found(());
                }
                seen.insert(c2.clone());
                next.push(c2);
            }
        }
        stats.peak_frontier = stats.peak_frontier.max(next.len());
        if next.is_empty() {
            return SearchResult::Rejected;
        }
        frontier = next;
        truncated = true;
    }
    if truncated && !frontier.is_empty() {
        SearchResult::CapExhausted
    } else {
        SearchResult::Rejected
    }
}

/// Exact machine space by iterative deepening on the space tier: the least
/// `s` such that an accepting computation of space at most `s` exists
/// within `step_cap` steps.
pub fn bfs_machine_space(
    m: &Machine,
    from: &Configuration,
    space_cap: usize,
    step_cap: usize,
) -> SearchOutcome<usize> {
    bfs_machine_space_to(m, from, Target::Accept, space_cap, step_cap)
}

/// Same deepening, but toward an arbitrary target configuration.
pub fn bfs_machine_space_to(
    m: &Machine,
    from: &Configuration,
    target: Target,
    space_cap: usize,
    step_cap: usize,
) -> SearchOutcome<usize> {
    let mut stats = SearchStats::new();
    let floor = m.a_length(from);
    let mut saw_cap = false;
    for s in floor..=space_cap {
        match reach_within(m, from, target, s, step_cap, &mut stats) {
            SearchResult::Found(()) => {
                return SearchOutcome { result: SearchResult::Found(s), stats }
            }
            SearchResult::CapExhausted => saw_cap = true,
            SearchResult::Rejected => {}
        }
    }
    let result = if saw_cap { SearchResult::CapExhausted } else { SearchResult::Rejected };
    SearchOutcome { result, stats }
}

/// Is the configuration accepted at all under the caps?
pub fn accepts(m: &Machine, from: &Configuration, space_cap: usize, step_cap: usize) -> SearchResult<usize> {
    bfs_machine_space(m, from, space_cap, step_cap).result
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageSample {
    pub words: Vec<Word>,
    /// False when some membership test ended cap-exhausted; the sample may
    /// then be missing words.
    pub complete: bool,
    pub stats: SearchStats,
}

/// All accepted input words of length at most `max_len`, in sorted order.
/// Membership is a single reachability search per word at the full space
/// cap (no deepening — only acceptance matters here).
pub fn enumerate_language(
    m: &Machine,
    max_len: usize,
    space_cap: usize,
    step_cap: usize,
) -> LanguageSample {
    let letters: Vec<Letter> = m.input_alphabet.iter().cloned().collect();
    let mut words = Vec::new();
    let mut complete = true;
    let mut stats = SearchStats::new();
    let mut queue: Vec<Word> = vec![vec![]];
    while let Some(u) = queue.pop() {
        let c = m.input_config(&u).expect("enumerated word is over the input alphabet");
        match reach_within(m, &c, Target::Accept, space_cap, step_cap, &mut stats) {
            SearchResult::Found(()) => words.push(u.clone()),
            SearchResult::Rejected => {}
            SearchResult::CapExhausted => complete = false,
        }
        if u.len() < max_len {
            for l in letters.iter().rev() {
                let mut v = u.clone();
                v.push(l.clone());
                queue.push(v);
            }
        }
    }
    words.sort();
    LanguageSample { words, complete, stats }
}

/// All configurations of `m` with a-length at most `bound`, in
/// deterministic order. Used as the midpoint pool of the bisection search
/// and by the all-pairs comparisons.
pub fn all_configurations(m: &Machine, bound: usize) -> Vec<Configuration> {
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
    let k = m.tape_count();
    // Distribute up to `bound` letters over tapes; enumerate contents and
    // head splits per tape, then state choices.
    let mut per_tape: Vec<Vec<crate::machine::TapeConfig>> = Vec::new();
    for i in 0..k {
        let alpha: Vec<Letter> = m.tape_alphabets[i].iter().cloned().collect();
        let states: Vec<Letter> = m.state_sets[i].iter().cloned().collect();
        let mut tapes = Vec::new();
        for total in 0..=bound {
            for w in words_of(&alpha, total) {
                for split in 0..=w.len() {
                    for q in &states {
                        tapes.push(crate::machine::TapeConfig {
                            left: w[..split].to_vec(),
                            state: q.clone(),
                            right: w[split..].to_vec(),
                        });
                    }
                }
            }
        }
        per_tape.push(tapes);
    }
    let mut configs: Vec<Configuration> = vec![Configuration { tapes: vec![] }];
    for tapes in per_tape {
        let mut next = Vec::new();
        for c in &configs {
            for t in &tapes {
                let mut c2 = c.clone();
                c2.tapes.push(t.clone());
                next.push(c2);
            }
        }
        configs = next;
    }
    configs.retain(|c| m.a_length(c) <= bound);
    configs.sort();
    configs.dedup();
    configs
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("configuration exceeds the space bound")]
    SpaceBoundExceeded,
    #[error("space bound too small: word {0:?} is accepted but not reached under the bound")]
    BoundTooSmall(String),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Result of the divide-and-conquer reachability predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reach {
    pub reachable: bool,
    /// Minimal space over connecting computations within the effective
    /// time bound, when reachable.
    pub minspace: Option<usize>,
}

/// The effective time bound covered by `savitch_reach` at parameter `k`:
/// halving rounds up, so the recursion covers slightly more than `k` steps.
pub fn savitch_time_cover(k: u64) -> u64 {
    if k <= 1 {
        1
    } else {
        2 * savitch_time_cover(k.div_ceil(2))
    }
}

/// Shared state for the bisection search: the pool of all configurations
/// within the space bound, their one-step successor sets, and a memo of
/// subcalls. The memo caches results of a deterministic pure function, so
/// it changes running time only, never values.
pub struct SavitchContext<'m> {
    pub machine: &'m Machine,
    pub space_bound: usize,
    pool: Vec<Configuration>,
    index: HashMap<Configuration, u32>,
    succ: Vec<Vec<u32>>,
    memo: HashMap<(u32, u32, u64), Reach>,
    pub stats: SearchStats,
}

impl<'m> SavitchContext<'m> {
    pub fn new(machine: &'m Machine, space_bound: usize) -> Self {
        let pool = all_configurations(machine, space_bound);
        let index: HashMap<Configuration, u32> =
            pool.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect();
        let succ = pool
            .iter()
            .map(|c| {
                let mut out: Vec<u32> = m_successors(machine, c)
                    .into_iter()
                    .filter_map(|c2| index.get(&c2).copied())
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect();
        SavitchContext {
            machine,
            space_bound,
            pool,
            index,
            succ,
            memo: HashMap::new(),
            stats: SearchStats::new(),
        }
    }

    pub fn pool_size(&self) -> usize {
        self.pool.len()
    }

    /// `reach(w, w', k)`: a computation `w -> ... -> w'` of length within
    /// the effective cover of `k` exists with every configuration of
    /// a-length at most the bound; the minimal space of such computations
    /// is the minimum over midpoints of the maximum of the two halves.
    pub fn reach(&mut self, w: &Configuration, w2: &Configuration, k: u64) -> Result<Reach, OracleError> {
        let (a, b) = match (self.index.get(w), self.index.get(w2)) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err(OracleError::SpaceBoundExceeded),
        };
        Ok(self.reach_idx(a, b, k.max(1)))
    }

    fn reach_idx(&mut self, a: u32, b: u32, k: u64) -> Reach {
        if let Some(r) = self.memo.get(&(a, b, k)) {
            return *r;
        }
        self.stats.expanded += 1;
        let result = if k == 1 {
            let one_step = a == b || self.succ[a as usize].binary_search(&b).is_ok();
            let space = self.machine.a_length(&self.pool[a as usize])
                .max(self.machine.a_length(&self.pool[b as usize]));
            Reach { reachable: one_step, minspace: one_step.then_some(space) }
        } else {
            let half = k.div_ceil(2);
            let mut best: Option<usize> = None;
            for mid in 0..self.pool.len() as u32 {
                let first = self.reach_idx(a, mid, half);
                if !first.reachable {
                    continue;
                }
                let second = self.reach_idx(mid, b, half);
                if !second.reachable {
                    continue;
                }
                let s = first.minspace.unwrap().max(second.minspace.unwrap());
                best = Some(best.map_or(s, |cur| cur.min(s)));
            }
            Reach { reachable: best.is_some(), minspace: best }
        };
        self.memo.insert((a, b, k), result);
        result
    }
}

fn m_successors(m: &Machine, c: &Configuration) -> Vec<Configuration> {
    m.applicable_all(c)
        .into_iter()
        .map(|cmd| m.apply(c, cmd).expect("applicable command applies"))
        .collect()
}

/// One-shot form of [`SavitchContext::reach`].
pub fn savitch_reach(
    m: &Machine,
    w: &Configuration,
    w2: &Configuration,
    k: u64,
    space_bound: usize,
) -> Result<(Reach, SearchStats), OracleError> {
    let mut ctx = SavitchContext::new(m, space_bound);
    let r = ctx.reach(w, w2, k)?;
    Ok((r, ctx.stats))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceFunctionReport {
    pub value: usize,
    /// Accepted words up to the length bound with their minimal spaces, in
    /// lexicographic order.
    pub per_word: Vec<(Word, usize)>,
}

/// Evaluates the machine's space function at `n`: the maximum over
/// accepted inputs of length at most `n` of the minimal accepting space,
/// each computed by the bisection search under `f_bound`. With
/// `crosscheck` set, membership is compared against the breadth-first
/// language enumeration and a discrepancy reports the bound as too small.
pub fn compute_space_function(
    m: &Machine,
    n: usize,
    f_bound: usize,
    time_cap: u64,
    crosscheck: bool,
) -> Result<SpaceFunctionReport, OracleError> {
    let letters: Vec<Letter> = m.input_alphabet.iter().cloned().collect();
    let accept = m.accept_config();
    let mut ctx = SavitchContext::new(m, f_bound);
    let mut per_word = Vec::new();
    let mut value = 0usize;
    // Lexicographic enumeration, keeping the running maximum.
    let mut stack: Vec<Word> = vec![vec![]];
    let mut all: Vec<Word> = Vec::new();
    while let Some(u) = stack.pop() {
        all.push(u.clone());
        if u.len() < n {
            for l in letters.iter().rev() {
                let mut v = u.clone();
                v.push(l.clone());
                stack.push(v);
            }
        }
    }
    all.sort();
    for u in all {
        let w0 = m.input_config(&u)?;
        if m.a_length(&w0) > f_bound {
            if crosscheck {
                let direct = bfs_machine_space(m, &w0, f_bound, time_cap as usize);
                if direct.result.found().is_some() {
                    return Err(OracleError::BoundTooSmall(crate::machine::word_to_string(&u)));
                }
            }
            continue;
        }
        let reach = ctx.reach(&w0, &accept, time_cap)?;
        if crosscheck {
            let direct = bfs_machine_space(m, &w0, f_bound, savitch_time_cover(time_cap) as usize);
            match (&reach.reachable, direct.result.found()) {
                (false, Some(_)) => {
                    return Err(OracleError::BoundTooSmall(crate::machine::word_to_string(&u)))
                }
                (true, None) => {
                    return Err(OracleError::BoundTooSmall(crate::machine::word_to_string(&u)))
                }
                _ => {}
            }
        }
        if let Some(s) = reach.minspace {
            value = value.max(s);
            per_word.push((u, s));
        }
    }
    Ok(SpaceFunctionReport { value, per_word })
}

// ---------------------------------------------------------------------------
// S-machine enumeration.

#[derive(Clone, Debug)]
pub struct EnumOptions {
    pub max_len: usize,
    /// Upper bound on the full norm of intermediate words; branches that
    /// would exceed it are cut. `None` leaves growth unbounded.
    pub norm_window: Option<usize>,
    /// Keep only computations all of whose words are positive.
    pub positive_only: bool,
    /// Require reduced histories (no adjacent mutually inverse rules).
    pub reduced: bool,
}

impl EnumOptions {
    pub fn reduced(max_len: usize) -> Self {
        EnumOptions { max_len, norm_window: None, positive_only: false, reduced: true }
    }

    pub fn with_window(mut self, w: usize) -> Self {
        self.norm_window = Some(w);
        self
    }

    pub fn positive(mut self) -> Self {
        self.positive_only = true;
        self
    }

    pub fn all_histories(mut self) -> Self {
        self.reduced = false;
        self
    }
}

/// Depth-first enumeration of computations from `w` with canonical rule
/// order. Every prefix of an enumerated computation is enumerated, so the
/// result contains the empty trace and trace counts are monotone in
/// `max_len`.
pub fn enumerate_computations(s: &SMachine, w: &AdmissibleWord, opts: &EnumOptions) -> Vec<STrace> {
    let mut out = Vec::new();
    let mut trace = STrace::initial(w.clone());
    if opts.positive_only && !w.is_positive() {
        return out;
    }
    let cap = opts.norm_window.map(|win| w.norm() + win);
    dfs(s, &mut trace, opts, cap, &mut out);
    out
}

/// Spec name for the reduced variant.
pub fn enumerate_reduced_computations(s: &SMachine, w: &AdmissibleWord, max_len: usize) -> Vec<STrace> {
    enumerate_computations(s, w, &EnumOptions::reduced(max_len))
}

fn dfs(s: &SMachine, trace: &mut STrace, opts: &EnumOptions, cap: Option<usize>, out: &mut Vec<STrace>) {
    out.push(trace.clone());
    if trace.len() >= opts.max_len {
        return;
    }
    for idx in 0..s.rules.len() {
        if opts.reduced {
            if let Some(last) = trace.rules.last() {
                if s.are_mutually_inverse(*last, idx) {
                    continue;
                }
            }
        }
        let cur = trace.last().clone();
        if let Ok(next) = s.apply_rule(&cur, idx) {
            if cap.is_some_and(|c| next.norm() > c) {
                continue;
            }
            if opts.positive_only && !next.is_positive() {
                continue;
            }
            trace.push(s, idx, next);
            dfs(s, trace, opts, cap, out);
            trace.pop();
        }
    }
}

/// Breadth-first reachability over admissible words with reduced
/// histories: state = (word, last rule), so immediate backtracking is
/// excluded. Returns, for every reachable word, the minimal reduced
/// history length, exploring intermediate words of norm at most
/// `norm_cap` and histories of length at most `len_cap`.
pub fn reduced_reachability(
    s: &SMachine,
    w: &AdmissibleWord,
    norm_cap: usize,
    len_cap: usize,
) -> BTreeMap<AdmissibleWord, usize> {
    let mut dist: BTreeMap<AdmissibleWord, usize> = BTreeMap::new();
    dist.insert(w.clone(), 0);
    let mut seen: HashSet<(AdmissibleWord, Option<usize>)> = HashSet::new();
    seen.insert((w.clone(), None));
    let mut queue: VecDeque<(AdmissibleWord, Option<usize>, usize)> = VecDeque::new();
    queue.push_back((w.clone(), None, 0));
    while let Some((cur, last, d)) = queue.pop_front() {
        if d >= len_cap {
            continue;
        }
        for idx in 0..s.rules.len() {
            if last.is_some_and(|l| s.are_mutually_inverse(l, idx)) {
                continue;
            }
            if let Ok(next) = s.apply_rule(&cur, idx) {
                if next.norm() > norm_cap {
                    continue;
                }
                dist.entry(next.clone()).or_insert(d + 1);
                if seen.insert((next.clone(), Some(idx))) {
                    queue.push_back((next, Some(idx), d + 1));
                }
            }
        }
    }
    dist
}

/// Every (word, last-rule) state reachable from `w` by reduced
/// computations within the caps. Unlike a plain reachable-word set, this
/// exposes nontrivial returns to the start word.
pub fn reduced_reachable_states(
    s: &SMachine,
    w: &AdmissibleWord,
    norm_cap: usize,
    len_cap: usize,
) -> Vec<(AdmissibleWord, Option<usize>, usize)> {
    let mut seen: HashSet<(AdmissibleWord, Option<usize>)> = HashSet::new();
    seen.insert((w.clone(), None));
    let mut out = vec![(w.clone(), None, 0)];
    let mut queue: VecDeque<(AdmissibleWord, Option<usize>, usize)> = VecDeque::new();
    queue.push_back((w.clone(), None, 0));
    while let Some((cur, last, d)) = queue.pop_front() {
        if d >= len_cap {
            continue;
        }
        for idx in 0..s.rules.len() {
            if last.is_some_and(|l| s.are_mutually_inverse(l, idx)) {
                continue;
            }
            if let Ok(next) = s.apply_rule(&cur, idx) {
                if next.norm() > norm_cap {
                    continue;
                }
                if seen.insert((next.clone(), Some(idx))) {
                    out.push((next.clone(), Some(idx), d + 1));
                    queue.push_back((next, Some(idx), d + 1));
                }
            }
        }
    }
    out
}

/// Breadth-first search for a computation from `w` to `target` with
/// reduced history, exploring words of norm at most `norm_cap` and
/// histories of length at most `len_cap`. With `positive_only`, only
/// positive words are traversed (and only computations through positive
/// words found). Returns the first (shortest) trace found.
pub fn find_trace(
    s: &SMachine,
    w: &AdmissibleWord,
    target: &AdmissibleWord,
    norm_cap: usize,
    len_cap: usize,
    positive_only: bool,
) -> Option<STrace> {
    type Key = (AdmissibleWord, Option<usize>);
    if w == target {
        return Some(STrace::initial(w.clone()));
    }
    let mut parents: HashMap<Key, (Key, usize)> = HashMap::new();
    let mut queue: VecDeque<(Key, usize)> = VecDeque::new();
    let start: Key = (w.clone(), None);
    queue.push_back((start.clone(), 0));
    let mut found: Option<Key> = None;
    'bfs: while let Some((key, d)) = queue.pop_front() {
        if d >= len_cap {
            continue;
        }
        for idx in 0..s.rules.len() {
            if key.1.is_some_and(|l| s.are_mutually_inverse(l, idx)) {
                continue;
            }
            if let Ok(next) = s.apply_rule(&key.0, idx) {
                if next.norm() > norm_cap || (positive_only && !next.is_positive()) {
                    continue;
                }
                let nkey: Key = (next, Some(idx));
                if parents.contains_key(&nkey) || nkey == start {
                    continue;
                }
                parents.insert(nkey.clone(), (key.clone(), idx));
                if nkey.0 == *target {
                    found = Some(nkey);
                    break 'bfs;
                }
                queue.push_back((nkey, d + 1));
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = found?;
    while let Some((prev, idx)) = parents.get(&cur) {
        path.push(*idx);
        cur = prev.clone();
    }
    path.reverse();
    let mut trace = STrace::initial(w.clone());
    for idx in path {
        let next = s.apply_rule(trace.last(), idx).expect("replay of found path");
        trace.push(s, idx, next);
    }
    Some(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::letter::Letter;

    fn word(s: &str) -> Word {
        s.split_whitespace().map(Letter::new).collect()
    }

    #[test]
    fn accept_config_has_space_zero() {
        let m = fixtures::f_bal();
        let out = bfs_machine_space(&m, &m.accept_config(), 5, 50);
        assert_eq!(out.result, SearchResult::Found(0));
    }

    #[test]
    fn fbal_space_matches_deterministic_run() {
        let m = fixtures::f_bal();
        let c = m.input_config(&word("a a'")).unwrap();
        let trace = m.run_deterministic(c.clone(), 100).unwrap();
        assert!(m.is_accept_config(trace.last()));
        let out = bfs_machine_space(&m, &c, 10, 100);
        assert_eq!(out.result, SearchResult::Found(trace.space));
    }

    #[test]
    fn unaccepted_word_is_rejected_under_generous_caps() {
        let m = fixtures::f_bal();
        let c = m.input_config(&word("a a")).unwrap();
        let out = bfs_machine_space(&m, &c, 8, 200);
        assert_eq!(out.result, SearchResult::Rejected);
    }

    #[test]
    fn fbal_language_matches_hand_listed_expectation() {
        let m = fixtures::f_bal();
        let sample = enumerate_language(&m, 4, 8, 100);
        assert!(sample.complete);
        assert_eq!(sample.words, fixtures::f_bal_expected_language());
    }

    #[test]
    fn empty_word_language_boundary() {
        let m = fixtures::f_bal();
        let sample = enumerate_language(&m, 0, 4, 50);
        assert!(sample.complete);
        // F-BAL accepts the empty word.
        assert_eq!(sample.words, vec![Word::new()]);
    }

    #[test]
    fn tiny_caps_flag_incomplete() {
        let m = fixtures::f_ev();
        let sample = enumerate_language(&m, 4, 6, 1);
        assert!(!sample.complete);
    }

    #[test]
    fn savitch_reflexive() {
        let m = fixtures::f_ev();
        let c = m.input_config(&word("a a")).unwrap();
        let (r, _) = savitch_reach(&m, &c, &c, 4, 4).unwrap();
        assert!(r.reachable);
        assert_eq!(r.minspace, Some(m.a_length(&c)));
    }

    #[test]
    fn savitch_monotone_in_k() {
        let m = fixtures::f_ev();
        let from = m.input_config(&word("a a")).unwrap();
        let to = m.accept_config();
        let mut ctx = SavitchContext::new(&m, 4);
        let mut last: Option<usize> = None;
        for k in 1..=8u64 {
            let r = ctx.reach(&from, &to, k).unwrap();
            if let Some(prev) = last {
                if let Some(cur) = r.minspace {
                    assert!(cur <= prev, "minspace grew from {prev} to {cur} at k={k}");
                }
            }
            if r.reachable {
                last = r.minspace;
            } else {
                assert!(last.is_none());
            }
        }
        assert!(last.is_some());
    }

    #[test]
    fn savitch_agrees_with_bfs_on_fev_small() {
        let m = fixtures::f_ev();
        let configs = all_configurations(&m, 2);
        let mut ctx = SavitchContext::new(&m, 2);
        for a in &configs {
            for b in &configs {
                let r = ctx.reach(a, b, 8).unwrap();
                let bfs = bfs_machine_space_to(
                    &m,
                    a,
                    Target::Config(b),
                    2,
                    savitch_time_cover(8) as usize,
                );
                match bfs.result {
                    SearchResult::Found(s) => {
                        assert!(r.reachable, "savitch missed {a:?} -> {b:?}");
                        assert_eq!(r.minspace, Some(s), "{a:?} -> {b:?}");
                    }
                    SearchResult::Rejected => assert!(!r.reachable, "{a:?} -> {b:?}"),
                    SearchResult::CapExhausted => panic!("bfs cap too small for comparison"),
                }
            }
        }
    }

    #[test]
    fn space_function_monotone_and_matches_direct_max() {
        let m = fixtures::f_bal();
        let mut prev = 0;
        for n in 0..=4 {
            let report = compute_space_function(&m, n, 4, 16, true).unwrap();
            assert!(report.value >= prev);
            prev = report.value;
            let sample = enumerate_language(&m, n, 6, 200);
            let direct = sample
                .words
                .iter()
                .map(|u| {
                    let c = m.input_config(u).unwrap();
                    *bfs_machine_space(&m, &c, 6, 200).result.found().unwrap()
                })
                .max()
                .unwrap_or(0);
            assert_eq!(report.value, direct, "n = {n}");
        }
    }
}
