//! Multi-tape Turing machines with exact space accounting.
//!
//! A machine has `k` tapes holding exactly the written squares (no blank
//! padding). Each tape carries one head; a configuration of a tape is the
//! pair of words to the left and right of the head plus the head state.
//! Commands replace fixed fragments around each head simultaneously, or
//! test a head against its tape end (anchored forms). Space of a
//! configuration is its total tape-letter count; the input tape can be
//! excluded from the count via the `count_input_tape` flag.

use crate::letter::Letter;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// A plain (positive) word over a tape alphabet.
pub type Word = Vec<Letter>;

pub fn word_to_string(w: &[Letter]) -> String {
    if w.is_empty() {
        return "()".into();
    }
    w.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ")
}

/// One tape's slice of a command: what to match and what to write.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CommandPart {
    /// Match `lhs.1` at the head with `lhs.0` to the left and `lhs.2` to the
    /// right; replace by `rhs`.
    Interior { lhs: (Word, Letter, Word), rhs: (Word, Letter, Word) },
    /// Head at the left end of the tape (nothing to the left).
    LeftEnd { from: Letter, to: Letter },
    /// Head at the right end of the tape (nothing to the right).
    RightEnd { from: Letter, to: Letter },
}

impl CommandPart {
    pub fn state_only(from: Letter, to: Letter) -> Self {
        CommandPart::Interior { lhs: (vec![], from, vec![]), rhs: (vec![], to, vec![]) }
    }

    pub fn lhs_state(&self) -> &Letter {
        match self {
            CommandPart::Interior { lhs, .. } => &lhs.1,
            CommandPart::LeftEnd { from, .. } | CommandPart::RightEnd { from, .. } => from,
        }
    }

    pub fn rhs_state(&self) -> &Letter {
        match self {
            CommandPart::Interior { rhs, .. } => &rhs.1,
            CommandPart::LeftEnd { to, .. } | CommandPart::RightEnd { to, .. } => to,
        }
    }

    /// Letters consumed / written: (lhs count, rhs count).
    pub fn letter_counts(&self) -> (usize, usize) {
        match self {
            CommandPart::Interior { lhs, rhs } => {
                (lhs.0.len() + lhs.2.len(), rhs.0.len() + rhs.2.len())
            }
            _ => (0, 0),
        }
    }

    /// The same part with match and replacement swapped.
    pub fn inverted(&self) -> CommandPart {
        match self {
            CommandPart::Interior { lhs, rhs } => {
                CommandPart::Interior { lhs: rhs.clone(), rhs: lhs.clone() }
            }
            CommandPart::LeftEnd { from, to } => {
                CommandPart::LeftEnd { from: to.clone(), to: from.clone() }
            }
            CommandPart::RightEnd { from, to } => {
                CommandPart::RightEnd { from: to.clone(), to: from.clone() }
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Command {
    pub name: String,
    pub positive: bool,
    /// One part per tape.
    pub parts: Vec<CommandPart>,
}

impl Command {
    pub fn inverted(&self, name: String, positive: bool) -> Command {
        Command { name, positive, parts: self.parts.iter().map(|p| p.inverted()).collect() }
    }

    /// Total tape letters mentioned on both sides, the quantity bounded by
    /// the one-letter normal form.
    pub fn letters_involved(&self) -> usize {
        self.parts.iter().map(|p| { let (a, b) = p.letter_counts(); a + b }).sum()
    }

    /// Net change in tape-letter count when the command fires.
    pub fn net_delta(&self) -> isize {
        self.parts
            .iter()
            .map(|p| { let (a, b) = p.letter_counts(); b as isize - a as isize })
            .sum()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Machine {
    pub input_alphabet: BTreeSet<Letter>,
    pub tape_alphabets: Vec<BTreeSet<Letter>>,
    pub state_sets: Vec<BTreeSet<Letter>>,
    pub start: Vec<Letter>,
    pub accept: Vec<Letter>,
    pub deterministic: bool,
    pub count_input_tape: bool,
    pub commands: Vec<Command>,
}

/// One tape of a configuration: `left * state * right`, the head sitting
/// between `left` and `right`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TapeConfig {
    pub left: Word,
    pub state: Letter,
    pub right: Word,
}

impl TapeConfig {
    pub fn empty(state: Letter) -> Self {
        TapeConfig { left: vec![], state, right: vec![] }
    }

    pub fn letters(&self) -> usize {
        self.left.len() + self.right.len()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Configuration {
    pub tapes: Vec<TapeConfig>,
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tapes.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            for l in &t.left {
                write!(f, "{l} ")?;
            }
            write!(f, "[{}]", t.state)?;
            for l in &t.right {
                write!(f, " {l}")?;
            }
        }
        Ok(())
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("letter {0} is not in the input alphabet")]
    LetterOutsideInput(Letter),
    #[error("command {0} is not applicable")]
    NotApplicable(String),
    #[error("unknown command name {0}")]
    UnknownCommand(String),
    #[error("step cap exceeded after {0} steps")]
    StepCapExceeded(usize),
    #[error("machine is flagged deterministic but commands {0} and {1} both apply")]
    NondeterministicChoice(String, String),
    #[error("machine must satisfy the start/accept normal form first")]
    S10Missing,
    #[error("machine is not symmetric")]
    NotSymmetric,
    #[error("command {0} involves more than one tape letter")]
    NotOneLetter(String),
    #[error("command {0} is not in head-at-right-end form")]
    NotStackForm(String),
    #[error("invalid machine: {0}")]
    Invalid(String),
}

/// A command name with an application direction. Inverse applications are
/// written `name^-1`; for symmetric machines the inverse is itself a
/// materialized command, otherwise it is synthesized on the fly.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct HistoryLetter {
    pub name: String,
    pub inverted: bool,
}

impl HistoryLetter {
    pub fn parse(tok: &str) -> HistoryLetter {
        match tok.strip_suffix("^-1") {
            Some(base) => HistoryLetter { name: base.to_string(), inverted: true },
            None => HistoryLetter { name: tok.to_string(), inverted: false },
        }
    }

    pub fn inverse(&self) -> HistoryLetter {
        HistoryLetter { name: self.name.clone(), inverted: !self.inverted }
    }
}

impl fmt::Display for HistoryLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "{}^-1", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

/// A machine computation: start configuration, history, every intermediate
/// configuration, and the cached space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComputationTrace {
    pub start: Configuration,
    pub history: Vec<HistoryLetter>,
    /// `configs[i]` is the configuration after `history[..i]`; `configs[0]`
    /// is the start.
    pub configs: Vec<Configuration>,
    pub space: usize,
}

impl ComputationTrace {
    pub fn initial(m: &Machine, c: Configuration) -> Self {
        let space = m.a_length(&c);
        ComputationTrace { start: c.clone(), history: vec![], configs: vec![c], space }
    }

    pub fn last(&self) -> &Configuration {
        self.configs.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.history.len()
    }

    pub fn is_empty(&self) -> bool {
        self.history.is_empty()
    }

    pub fn push(&mut self, m: &Machine, step: HistoryLetter, c: Configuration) {
        self.space = self.space.max(m.a_length(&c));
        self.history.push(step);
        self.configs.push(c);
    }

    /// Recomputes the space from scratch and checks it against the cache.
    pub fn space_consistent(&self, m: &Machine) -> bool {
        self.configs.iter().map(|c| m.a_length(c)).max().unwrap_or(0) == self.space
    }

    /// The reverse computation with inverted history.
    pub fn reversed(&self) -> ComputationTrace {
        let mut history: Vec<HistoryLetter> = self.history.iter().map(|h| h.inverse()).collect();
        history.reverse();
        let mut configs = self.configs.clone();
        configs.reverse();
        ComputationTrace {
            start: configs[0].clone(),
            history,
            configs,
            space: self.space,
        }
    }

    /// Replays the history from the start and checks every stored
    /// configuration.
    pub fn validate(&self, m: &Machine) -> Result<(), MachineError> {
        let mut c = self.start.clone();
        if self.configs.first() != Some(&self.start) {
            return Err(MachineError::Invalid("trace start mismatch".into()));
        }
        for (i, h) in self.history.iter().enumerate() {
            c = m.apply_named(&c, h)?;
            if self.configs.get(i + 1) != Some(&c) {
                return Err(MachineError::Invalid(format!("trace mismatch at step {}", i + 1)));
            }
        }
        if !self.space_consistent(m) {
            return Err(MachineError::Invalid("cached space mismatch".into()));
        }
        Ok(())
    }
}

fn match_interior(tape: &TapeConfig, lhs: &(Word, Letter, Word)) -> bool {
    tape.state == lhs.1 && tape.left.ends_with(&lhs.0) && tape.right.starts_with(&lhs.2)
}

impl Machine {
    pub fn tape_count(&self) -> usize {
        self.tape_alphabets.len()
    }

    /// Report-valued validation; an empty report means the machine is
    /// well-formed.
    pub fn validate(&self) -> Vec<String> {
        let mut report = Vec::new();
        let k = self.tape_count();
        if k == 0 {
            report.push("machine has zero tapes".to_string());
            return report;
        }
        if self.state_sets.len() != k {
            report.push("state set count differs from tape count".to_string());
        }
        if !self.input_alphabet.is_subset(&self.tape_alphabets[0]) {
            report.push("input alphabet not contained in first tape alphabet".to_string());
        }
        // Pairwise disjointness across all tape alphabets and state sets.
        let mut seen: BTreeSet<Letter> = BTreeSet::new();
        for (i, set) in self.tape_alphabets.iter().chain(self.state_sets.iter()).enumerate() {
            for l in set {
                if !seen.insert(l.clone()) {
                    report.push(format!("letter {l} appears in more than one alphabet (set {i})"));
                }
            }
        }
        for (label, vector) in [("start", &self.start), ("accept", &self.accept)] {
            if vector.len() != self.state_sets.len() {
                report.push(format!("{label} vector length differs from tape count"));
            } else {
                for (i, q) in vector.iter().enumerate() {
                    if !self.state_sets[i].contains(q) {
                        report.push(format!("{label} state {q} not in state set of tape {}", i + 1));
                    }
                }
            }
        }
        let mut names: BTreeSet<&str> = BTreeSet::new();
        for cmd in &self.commands {
            if !names.insert(&cmd.name) {
                report.push(format!("duplicate command name {}", cmd.name));
            }
            if cmd.parts.len() != k {
                report.push(format!("command {} does not cover every tape", cmd.name));
                continue;
            }
            for (i, part) in cmd.parts.iter().enumerate() {
                let states = &self.state_sets[i];
                if !states.contains(part.lhs_state()) || !states.contains(part.rhs_state()) {
                    report.push(format!(
                        "command {} tape {}: state letter outside the tape's state set",
                        cmd.name,
                        i + 1
                    ));
                }
                if let CommandPart::Interior { lhs, rhs } = part {
                    for l in lhs.0.iter().chain(&lhs.2).chain(&rhs.0).chain(&rhs.2) {
                        if !self.tape_alphabets[i].contains(l) {
                            report.push(format!(
                                "command {} tape {}: letter {} outside the tape alphabet",
                                cmd.name,
                                i + 1,
                                l
                            ));
                        }
                    }
                }
            }
        }
        if self.deterministic {
            let positives: Vec<&Command> = self.commands.iter().filter(|c| c.positive).collect();
            for a in 0..positives.len() {
                for b in a + 1..positives.len() {
                    if commands_overlap(positives[a], positives[b]) {
                        report.push(format!(
                            "determinism violated: commands {} and {} share applicable configurations",
                            positives[a].name, positives[b].name
                        ));
                    }
                }
            }
        }
        report
    }

    /// The input configuration for `u`: the word sits on tape 1 with the
    /// head at its right end; every other tape is empty; states form the
    /// start vector.
    pub fn input_config(&self, u: &[Letter]) -> Result<Configuration, MachineError> {
        for l in u {
            if !self.input_alphabet.contains(l) {
                return Err(MachineError::LetterOutsideInput(l.clone()));
            }
        }
        let mut tapes = Vec::with_capacity(self.tape_count());
        tapes.push(TapeConfig { left: u.to_vec(), state: self.start[0].clone(), right: vec![] });
        for q in &self.start[1..] {
            tapes.push(TapeConfig::empty(q.clone()));
        }
        Ok(Configuration { tapes })
    }

    pub fn accept_config(&self) -> Configuration {
        Configuration { tapes: self.accept.iter().cloned().map(TapeConfig::empty).collect() }
    }

    pub fn is_accept_config(&self, c: &Configuration) -> bool {
        c.tapes.len() == self.accept.len()
            && c.tapes
                .iter()
                .zip(&self.accept)
                .all(|(t, q)| t.state == *q && t.left.is_empty() && t.right.is_empty())
    }

    /// Tape-letter count of a configuration. Tape 1 is excluded when
    /// `count_input_tape` is unset.
    pub fn a_length(&self, c: &Configuration) -> usize {
        c.tapes
            .iter()
            .enumerate()
            .filter(|(i, _)| self.count_input_tape || *i != 0)
            .map(|(_, t)| t.letters())
            .sum()
    }

    pub fn command(&self, name: &str) -> Option<&Command> {
        self.commands.iter().find(|c| c.name == name)
    }

    pub fn command_applicable(&self, c: &Configuration, cmd: &Command) -> bool {
        cmd.parts.iter().zip(&c.tapes).all(|(part, tape)| match part {
            CommandPart::Interior { lhs, .. } => match_interior(tape, lhs),
            CommandPart::LeftEnd { from, .. } => tape.state == *from && tape.left.is_empty(),
            CommandPart::RightEnd { from, .. } => tape.state == *from && tape.right.is_empty(),
        })
    }

    pub fn apply(&self, c: &Configuration, cmd: &Command) -> Result<Configuration, MachineError> {
        if !self.command_applicable(c, cmd) {
            return Err(MachineError::NotApplicable(cmd.name.clone()));
        }
        let mut tapes = Vec::with_capacity(c.tapes.len());
        for (part, tape) in cmd.parts.iter().zip(&c.tapes) {
            tapes.push(match part {
                CommandPart::Interior { lhs, rhs } => {
                    let mut left = tape.left[..tape.left.len() - lhs.0.len()].to_vec();
                    left.extend(rhs.0.iter().cloned());
                    let mut right = rhs.2.clone();
                    right.extend(tape.right[lhs.2.len()..].iter().cloned());
                    TapeConfig { left, state: rhs.1.clone(), right }
                }
                CommandPart::LeftEnd { to, .. } | CommandPart::RightEnd { to, .. } => {
                    TapeConfig { left: tape.left.clone(), state: to.clone(), right: tape.right.clone() }
                }
            });
        }
        Ok(Configuration { tapes })
    }

    /// Applies a command by name, `name^-1` applying the swapped pair.
    /// For symmetric machines the `^-1` name is usually materialized; when
    /// it is not, the inverse is synthesized from the base command.
    pub fn apply_named(&self, c: &Configuration, h: &HistoryLetter) -> Result<Configuration, MachineError> {
        let key = h.to_string();
        if let Some(cmd) = self.command(&key) {
            return self.apply(c, cmd);
        }
        if let Some(cmd) = self.command(&h.name) {
            if h.inverted {
                let inv = cmd.inverted(key, !cmd.positive);
                return self.apply(c, &inv);
            }
            return self.apply(c, cmd);
        }
        // `name` itself may end in ^-1 with only the base stored.
        if !h.inverted {
            if let Some(base) = h.name.strip_suffix("^-1") {
                if let Some(cmd) = self.command(base) {
                    let inv = cmd.inverted(h.name.clone(), !cmd.positive);
                    return self.apply(c, &inv);
                }
            }
        }
        Err(MachineError::UnknownCommand(key))
    }

    pub fn applicable_positive<'a>(&'a self, c: &Configuration) -> Vec<&'a Command> {
        self.commands
            .iter()
            .filter(|cmd| cmd.positive && self.command_applicable(c, cmd))
            .collect()
    }

    /// All applicable commands (positive and negative) in declaration order.
    pub fn applicable_all<'a>(&'a self, c: &Configuration) -> Vec<&'a Command> {
        self.commands.iter().filter(|cmd| self.command_applicable(c, cmd)).collect()
    }

    /// Runs the machine deterministically: each step applies the unique
    /// applicable positive command, stopping at the accept configuration,
    /// at a stuck configuration, or at the step cap.
    pub fn run_deterministic(
        &self,
        c: Configuration,
        step_cap: usize,
    ) -> Result<ComputationTrace, MachineError> {
        if !self.deterministic {
            return Err(MachineError::Invalid("machine is not flagged deterministic".into()));
        }
        let mut trace = ComputationTrace::initial(self, c);
        loop {
            if self.is_accept_config(trace.last()) {
                return Ok(trace);
            }
            let applicable = self.applicable_positive(trace.last());
            match applicable.len() {
                0 => return Ok(trace),
                1 => {
                    if trace.len() >= step_cap {
                        return Err(MachineError::StepCapExceeded(trace.len()));
                    }
                    let cmd = applicable[0];
                    let next = self.apply(trace.last(), cmd)?;
                    trace.push(self, HistoryLetter { name: cmd.name.clone(), inverted: false }, next);
                }
                _ => {
                    return Err(MachineError::NondeterministicChoice(
                        applicable[0].name.clone(),
                        applicable[1].name.clone(),
                    ))
                }
            }
        }
    }

    /// True when the command set is closed under inversion.
    pub fn is_symmetric(&self) -> bool {
        self.commands.iter().all(|cmd| {
            self.commands
                .iter()
                .any(|other| other.positive != cmd.positive && other.parts == cmd.inverted(String::new(), false).parts)
        })
    }

    /// Structural start/accept normal form: start states are produced by no
    /// command and consumed by exactly one, and exactly one command reaches
    /// the accept vector (which no command leaves unchecked).
    pub fn is_s10(&self) -> bool {
        let start_set: BTreeSet<&Letter> = self.start.iter().collect();
        let produces_start = self.commands.iter().any(|cmd| {
            cmd.positive && cmd.parts.iter().any(|p| start_set.contains(p.rhs_state()))
        });
        if produces_start {
            return false;
        }
        let consuming: Vec<&Command> = self
            .commands
            .iter()
            .filter(|cmd| cmd.positive && cmd.parts.iter().any(|p| start_set.contains(p.lhs_state())))
            .collect();
        if consuming.len() != 1 {
            return false;
        }
        // The unique start command must apply to every input configuration:
        // tape 1 unchecked, other tapes at most emptiness-checked.
        let ok_shape = consuming[0].parts.iter().enumerate().all(|(i, p)| match p {
            CommandPart::Interior { lhs, rhs } => lhs.0.is_empty() && lhs.2.is_empty() && rhs.0.is_empty() && rhs.2.is_empty(),
            CommandPart::LeftEnd { .. } => i > 0,
            CommandPart::RightEnd { .. } => true,
        });
        if !ok_shape || !consuming[0].parts.iter().zip(&self.start).all(|(p, q)| p.lhs_state() == q) {
            return false;
        }
        let accepting: Vec<&Command> = self
            .commands
            .iter()
            .filter(|cmd| cmd.positive && cmd.parts.iter().zip(&self.accept).all(|(p, q)| p.rhs_state() == q))
            .collect();
        accepting.len() == 1
    }
}

/// Conservative overlap test used by the determinism validator: two
/// commands overlap when some configuration satisfies both left sides.
fn commands_overlap(a: &Command, b: &Command) -> bool {
    a.parts.iter().zip(&b.parts).all(|(pa, pb)| {
        if pa.lhs_state() != pb.lhs_state() {
            return false;
        }
        match (pa, pb) {
            (CommandPart::Interior { lhs: la, .. }, CommandPart::Interior { lhs: lb, .. }) => {
                // Suffix patterns are compatible when one is a suffix of the
                // other; same for prefixes on the right side.
                let suffix_ok = la.0.ends_with(&lb.0) || lb.0.ends_with(&la.0);
                let prefix_ok = la.2.starts_with(&lb.2) || lb.2.starts_with(&la.2);
                suffix_ok && prefix_ok
            }
            (CommandPart::Interior { lhs, .. }, CommandPart::LeftEnd { .. })
            | (CommandPart::LeftEnd { .. }, CommandPart::Interior { lhs, .. }) => lhs.0.is_empty(),
            (CommandPart::Interior { lhs, .. }, CommandPart::RightEnd { .. })
            | (CommandPart::RightEnd { .. }, CommandPart::Interior { lhs, .. }) => lhs.2.is_empty(),
            _ => true,
        }
    })
}
