//! The space-controlled transformation pipeline: start/accept
//! normalization, the padding construction that equalizes space and
//! generalized space, symmetrization, and the one-letter normal form.

use crate::letter::Letter;
use crate::machine::{Command, CommandPart, Machine, MachineError, Word};
use std::collections::BTreeSet;

/// The reserved padding letter. Never allowed in user alphabets.
pub const PAD: &str = "*";

/// Adds fresh start and accept states plus one entry and one exit command,
/// so that start states occur only in input configurations, exactly one
/// command applies there, and a unique command reaches the accept vector.
/// Applied unconditionally; language and space are unchanged. On symmetric
/// machines the two fresh commands are added together with their inverses,
/// keeping the machine symmetric.
pub fn enforce_s10(m: &Machine) -> Machine {
    let mut out = m.clone();
    let symmetric = m.is_symmetric() && m.commands.iter().any(|c| !c.positive);
    let fresh_start: Vec<Letter> = m.start.iter().map(|q| q.dot("in")).collect();
    let fresh_accept: Vec<Letter> = m.accept.iter().map(|q| q.dot("fin")).collect();
    for (i, (s, a)) in fresh_start.iter().zip(&fresh_accept).enumerate() {
        out.state_sets[i].insert(s.clone());
        out.state_sets[i].insert(a.clone());
    }
    // Fresh command names, stable under repeated application.
    let pick = |base: &str| {
        let mut name = base.to_string();
        let mut i = 2;
        while m.commands.iter().any(|c| c.name == name || c.name == format!("{name}^-1")) {
            name = format!("{base}{i}");
            i += 1;
        }
        name
    };
    let begin_name = pick("begin");
    let accept_name = pick("accept");
    // Entry: tape 1 is left unchecked (it holds the input word), every
    // other tape is checked empty.
    let entry = Command {
        name: begin_name,
        positive: true,
        parts: fresh_start
            .iter()
            .zip(&m.start)
            .enumerate()
            .map(|(i, (from, to))| {
                if i == 0 {
                    CommandPart::state_only(from.clone(), to.clone())
                } else {
                    CommandPart::LeftEnd { from: from.clone(), to: to.clone() }
                }
            })
            .collect(),
    };
    // Exit: all tapes checked empty.
    let exit = Command {
        name: accept_name,
        positive: true,
        parts: m
            .accept
            .iter()
            .zip(&fresh_accept)
            .map(|(from, to)| CommandPart::LeftEnd { from: from.clone(), to: to.clone() })
            .collect(),
    };
    let mut new_cmds = vec![entry, exit];
    if symmetric {
        let invs: Vec<Command> =
            new_cmds.iter().map(|c| c.inverted(format!("{}^-1", c.name), false)).collect();
        new_cmds.extend(invs);
    }
    out.commands.extend(new_cmds);
    out.start = fresh_start;
    out.accept = fresh_accept;
    out
}


fn retag(part: &CommandPart, suffix: &str) -> CommandPart {
    match part {
        CommandPart::Interior { lhs, rhs } => CommandPart::Interior {
            lhs: (lhs.0.clone(), lhs.1.dot(suffix), lhs.2.clone()),
            rhs: (rhs.0.clone(), rhs.1.dot(suffix), rhs.2.clone()),
        },
        CommandPart::LeftEnd { from, to } => {
            CommandPart::LeftEnd { from: from.dot(suffix), to: to.dot(suffix) }
        }
        CommandPart::RightEnd { from, to } => {
            CommandPart::RightEnd { from: from.dot(suffix), to: to.dot(suffix) }
        }
    }
}

/// The three-stage padding construction. The output machine has one more
/// tape carrying `*` squares: a fill stage pumps squares while the first
/// `k` tapes still hold an input configuration, a work stage copies every
/// command of the input machine while keeping the total square count
/// constant, and a wipe stage erases the padding before accepting. The
/// connecting commands are not invertible within the output.
pub fn pad_space(m: &Machine) -> Result<Machine, MachineError> {
    if !m.is_s10() {
        return Err(MachineError::S10Missing);
    }
    for set in &m.tape_alphabets {
        if set.contains(&Letter::new(PAD)) {
            return Err(MachineError::Invalid("padding letter is reserved".into()));
        }
    }
    let k = m.tape_count();
    let pad = Letter::new(PAD);
    let z_fill = Letter::new("pad.fill");
    let z_run = Letter::new("pad.run");
    let z_wipe = Letter::new("pad.wipe");
    let z_done = Letter::new("pad.done");

    let mut tape_alphabets = m.tape_alphabets.clone();
    tape_alphabets.push([pad.clone()].into_iter().collect());

    // Tapes 1..k keep the original states for the fill stage, and get
    // `.run` copies for the work stage and `.wipe`/`.done` copies around
    // the exit; the new tape has one state per stage.
    let mut state_sets = Vec::with_capacity(k + 1);
    for (i, set) in m.state_sets.iter().enumerate() {
        let mut s: BTreeSet<Letter> = set.clone();
        s.extend(set.iter().map(|q| q.dot("run")));
        s.insert(m.accept[i].dot("wipe"));
        s.insert(m.accept[i].dot("done"));
        state_sets.push(s);
    }
    state_sets.push([z_fill.clone(), z_run.clone(), z_wipe.clone(), z_done.clone()].into_iter().collect());

    let mut commands: Vec<Command> = Vec::new();

    // Fill stage: one command pushing a padding square; states unchanged.
    let mut put_parts: Vec<CommandPart> =
        m.start.iter().map(|q| CommandPart::state_only(q.clone(), q.clone())).collect();
    // Tapes 2..k of an input configuration are empty; checking them keeps
    // the fill stage confined to copies of input configurations.
    for (i, part) in put_parts.iter_mut().enumerate() {
        if i > 0 {
            let q = m.start[i].clone();
            *part = CommandPart::LeftEnd { from: q.clone(), to: q };
        }
    }
    put_parts.push(CommandPart::Interior {
        lhs: (vec![], z_fill.clone(), vec![]),
        rhs: (vec![pad.clone()], z_fill.clone(), vec![]),
    });
    commands.push(Command { name: "pad.put".into(), positive: true, parts: put_parts });

    // Connector into the work stage: retags every state.
    let mut go_parts: Vec<CommandPart> = m
        .start
        .iter()
        .enumerate()
        .map(|(i, q)| {
            if i == 0 {
                CommandPart::state_only(q.clone(), q.dot("run"))
            } else {
                CommandPart::LeftEnd { from: q.clone(), to: q.dot("run") }
            }
        })
        .collect();
    go_parts.push(CommandPart::state_only(z_fill.clone(), z_run.clone()));
    commands.push(Command { name: "pad.go".into(), positive: true, parts: go_parts });

    // Work stage: every command of the input machine, extended to the new
    // tape so that the application leaves the total square count fixed.
    for cmd in &m.commands {
        let mut parts: Vec<CommandPart> = cmd.parts.iter().map(|p| retag(p, "run")).collect();
        let delta = cmd.net_delta();
        let pad_part = match delta.cmp(&0) {
            std::cmp::Ordering::Less => CommandPart::Interior {
                // The command erases squares: mint as many padding squares.
                lhs: (vec![], z_run.clone(), vec![]),
                rhs: (vec![pad.clone(); (-delta) as usize], z_run.clone(), vec![]),
            },
            std::cmp::Ordering::Greater => CommandPart::Interior {
                // The command writes squares: consume padding squares, which
                // also disables it when not enough are present.
                lhs: (vec![pad.clone(); delta as usize], z_run.clone(), vec![]),
                rhs: (vec![], z_run.clone(), vec![]),
            },
            std::cmp::Ordering::Equal => CommandPart::state_only(z_run.clone(), z_run.clone()),
        };
        parts.push(pad_part);
        commands.push(Command { name: format!("run.{}", cmd.name), positive: cmd.positive, parts });
    }

    // Connector into the wipe stage, applicable at the simulated accept.
    let mut wrap_parts: Vec<CommandPart> = m
        .accept
        .iter()
        .map(|q| CommandPart::LeftEnd { from: q.dot("run"), to: q.dot("wipe") })
        .collect();
    wrap_parts.push(CommandPart::state_only(z_run.clone(), z_wipe.clone()));
    commands.push(Command { name: "pad.wrap".into(), positive: true, parts: wrap_parts });

    // Wipe stage: erase padding squares one by one, then accept.
    let mut del_parts: Vec<CommandPart> = m
        .accept
        .iter()
        .map(|q| CommandPart::state_only(q.dot("wipe"), q.dot("wipe")))
        .collect();
    del_parts.push(CommandPart::Interior {
        lhs: (vec![pad.clone()], z_wipe.clone(), vec![]),
        rhs: (vec![], z_wipe.clone(), vec![]),
    });
    commands.push(Command { name: "pad.del".into(), positive: true, parts: del_parts });

    let mut fin_parts: Vec<CommandPart> = m
        .accept
        .iter()
        .map(|q| CommandPart::LeftEnd { from: q.dot("wipe"), to: q.dot("done") })
        .collect();
    fin_parts.push(CommandPart::LeftEnd { from: z_wipe.clone(), to: z_done.clone() });
    commands.push(Command { name: "pad.fin".into(), positive: true, parts: fin_parts });

    let mut start = m.start.clone();
    start.push(z_fill);
    let mut accept: Vec<Letter> = m.accept.iter().map(|q| q.dot("done")).collect();
    accept.push(z_done);

    Ok(Machine {
        input_alphabet: m.input_alphabet.clone(),
        tape_alphabets,
        state_sets,
        start,
        accept,
        deterministic: false,
        count_input_tape: m.count_input_tape,
        commands,
    })
}

/// The input word written on tape 1 of a configuration in which the fill
/// command applies (or which the fill connector just left).
pub fn input_word_of(c: &crate::machine::Configuration) -> Word {
    let mut u = c.tapes[0].left.clone();
    u.extend(c.tapes[0].right.iter().cloned());
    u
}

/// Closes the command set under inversion: the minimal symmetric set
/// containing the commands. Present commands are kept; each command whose
/// structural inverse is missing gets it materialized with the `^-1` name
/// and opposite sign. Idempotent up to command naming.
pub fn symmetrize(m: &Machine) -> Machine {
    let mut out = m.clone();
    let mut added: Vec<Command> = Vec::new();
    for cmd in &m.commands {
        let inv_parts: Vec<CommandPart> = cmd.parts.iter().map(|p| p.inverted()).collect();
        let present = m
            .commands
            .iter()
            .chain(added.iter())
            .any(|o| o.positive != cmd.positive && o.parts == inv_parts);
        if !present {
            added.push(Command {
                name: format!("{}^-1", cmd.name),
                positive: !cmd.positive,
                parts: inv_parts,
            });
        }
    }
    out.commands.extend(added);
    out.deterministic = false;
    out
}

/// Splits every command touching two or more tape letters into a chain of
/// commands touching at most one, threaded through fresh intermediate
/// states derived from the command's name. Negative commands are rebuilt
/// as the exact inverses of their positive partners' chains, so symmetric
/// machines stay symmetric.
pub fn normalize_one_letter(m: &Machine) -> Machine {
    let mut out = m.clone();
    out.commands.clear();

    // A single letter-edit per micro-command: tape, pop word, push word,
    // acting left or right of the head.
    struct Edit {
        tape: usize,
        pop: Word,
        push: Word,
        right: bool,
    }

    let split_positive = |cmd: &Command, out_states: &mut Vec<BTreeSet<Letter>>| -> Vec<Command> {
        if cmd.letters_involved() <= 1 {
            return vec![cmd.clone()];
        }
        // Decompose into single-letter edits, keeping pops before pushes
        // tape by tape so intermediate contents stay inside the tape.
        let mut edits: Vec<Edit> = Vec::new();
        for (i, part) in cmd.parts.iter().enumerate() {
            if let CommandPart::Interior { lhs, rhs } = part {
                // Left of the head: pop the matched suffix from its right
                // end, then push the replacement left to right.
                for l in lhs.0.iter().rev() {
                    edits.push(Edit { tape: i, pop: vec![l.clone()], push: vec![], right: false });
                }
                for l in &rhs.0 {
                    edits.push(Edit { tape: i, pop: vec![], push: vec![l.clone()], right: false });
                }
                // Right of the head: pop the matched prefix front first,
                // push the replacement back to front.
                for l in &lhs.2 {
                    edits.push(Edit { tape: i, pop: vec![l.clone()], push: vec![], right: true });
                }
                for l in rhs.2.iter().rev() {
                    edits.push(Edit { tape: i, pop: vec![], push: vec![l.clone()], right: true });
                }
            }
        }
        debug_assert!(edits.len() >= 2);
        // Chain: stage 0 applies all state changes and anchoring checks and
        // the first edit; stages 1.. apply one edit each through fresh
        // mid-state vectors.
        let stages = edits.len();
        let mid = |stage: usize, tape: usize| -> Letter {
            Letter::new(&format!("{}.w{}.t{}", cmd.name, stage, tape + 1))
        };
        let mut cmds = Vec::new();
        for (s, edit) in edits.iter().enumerate() {
            let first = s == 0;
            let last = s == stages - 1;
            let parts: Vec<CommandPart> = cmd
                .parts
                .iter()
                .enumerate()
                .map(|(i, part)| {
                    let from = if first { part.lhs_state().clone() } else { mid(s, i) };
                    let to = if last { part.rhs_state().clone() } else { mid(s + 1, i) };
                    if !first {
                        out_states[i].insert(from.clone());
                    }
                    if !last {
                        out_states[i].insert(to.clone());
                    }
                    if i == edit.tape {
                        if edit.right {
                            CommandPart::Interior {
                                lhs: (vec![], from, edit.pop.clone()),
                                rhs: (vec![], to, edit.push.clone()),
                            }
                        } else {
                            CommandPart::Interior {
                                lhs: (edit.pop.clone(), from, vec![]),
                                rhs: (edit.push.clone(), to, vec![]),
                            }
                        }
                    } else if first {
                        match part {
                            CommandPart::LeftEnd { .. } => CommandPart::LeftEnd { from, to },
                            CommandPart::RightEnd { .. } => CommandPart::RightEnd { from, to },
                            CommandPart::Interior { .. } => CommandPart::state_only(from, to),
                        }
                    } else {
                        CommandPart::state_only(from, to)
                    }
                })
                .collect();
            let name = if first { cmd.name.clone() } else { format!("{}.s{}", cmd.name, s) };
            cmds.push(Command { name, positive: cmd.positive, parts });
        }
        cmds
    };

    let mut state_sets = m.state_sets.clone();
    let mut handled_negative: BTreeSet<String> = BTreeSet::new();
    for cmd in &m.commands {
        if !cmd.positive {
            continue;
        }
        let chain = split_positive(cmd, &mut state_sets);
        // A symmetric partner, when present, becomes the inverted chain in
        // reverse order.
        let inv_parts: Vec<CommandPart> = cmd.parts.iter().map(|p| p.inverted()).collect();
        let partner = m.commands.iter().find(|o| !o.positive && o.parts == inv_parts);
        for c in &chain {
            out.commands.push(c.clone());
        }
        if let Some(neg) = partner {
            handled_negative.insert(neg.name.clone());
            for c in chain.iter().rev() {
                out.commands.push(c.inverted(format!("{}^-1", c.name), false));
            }
        }
    }
    // Negative commands without a positive partner (possible in hand-made
    // machines) are split on their own.
    for cmd in &m.commands {
        if cmd.positive || handled_negative.contains(&cmd.name) {
            continue;
        }
        for c in split_positive(cmd, &mut state_sets) {
            out.commands.push(c);
        }
    }
    out.state_sets = state_sets;
    out
}

/// The full pipeline: normalization, padding, symmetrization, one-letter
/// splitting.
pub fn build_pipeline(m: &Machine) -> Result<Machine, MachineError> {
    if !m.deterministic {
        return Err(MachineError::Invalid("pipeline input must be deterministic".into()));
    }
    Ok(normalize_one_letter(&symmetrize(&pad_space(&enforce_s10(m))?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::{enumerate_language, SearchResult};

    #[test]
    fn s10_adds_two_commands_and_fresh_vectors() {
        let m = fixtures::f_bal();
        let s = enforce_s10(&m);
        assert!(s.validate().is_empty(), "{:?}", s.validate());
        assert_eq!(s.commands.len(), m.commands.len() + 2);
        assert!(s.is_s10());
        assert_ne!(s.start, m.start);
        assert_ne!(s.accept, m.accept);
    }

    #[test]
    fn s10_unique_command_on_inputs() {
        let m = enforce_s10(&fixtures::f_bal());
        // Exactly one positive command applies to every input configuration
        // of length <= 4.
        let letters: Vec<_> = m.input_alphabet.iter().cloned().collect();
        let mut stack = vec![vec![]];
        while let Some(u) = stack.pop() {
            let c = m.input_config(&u).unwrap();
            assert_eq!(m.applicable_positive(&c).len(), 1, "input {u:?}");
            if u.len() < 4 {
                for l in &letters {
                    let mut v = u.clone();
                    v.push(l.clone());
                    stack.push(v);
                }
            }
        }
    }

    #[test]
    fn s10_preserves_language() {
        let m = fixtures::f_bal();
        let s = enforce_s10(&m);
        let a = enumerate_language(&m, 5, 8, 300);
        let b = enumerate_language(&s, 5, 8, 300);
        assert!(a.complete && b.complete);
        assert_eq!(a.words, b.words);
    }

    #[test]
    fn pad_requires_normal_form() {
        assert_eq!(pad_space(&fixtures::f_bal()).unwrap_err(), MachineError::S10Missing);
    }

    #[test]
    fn pad_adds_one_tape_and_preserves_language() {
        let m1 = enforce_s10(&fixtures::f_bal());
        let m2 = pad_space(&m1).unwrap();
        assert!(m2.validate().is_empty(), "{:?}", m2.validate());
        assert_eq!(m2.tape_count(), m1.tape_count() + 1);
        let a = enumerate_language(&m1, 5, 8, 300);
        let b = enumerate_language(&m2, 5, 8, 4000);
        assert!(a.complete && b.complete);
        assert_eq!(a.words, b.words);
    }

    #[test]
    fn work_stage_commands_keep_square_count() {
        let m1 = enforce_s10(&fixtures::f_bal());
        let m2 = pad_space(&m1).unwrap();
        for cmd in m2.commands.iter().filter(|c| c.name.starts_with("run.")) {
            assert_eq!(cmd.net_delta(), 0, "{}", cmd.name);
        }
    }

    #[test]
    fn symmetrize_doubles_and_is_idempotent() {
        let m1 = enforce_s10(&fixtures::f_ev());
        let m2 = pad_space(&m1).unwrap();
        let m3 = symmetrize(&m2);
        assert!(m3.validate().is_empty(), "{:?}", m3.validate());
        assert_eq!(m3.commands.len(), 2 * m2.commands.len());
        assert!(m3.is_symmetric());
        let m4 = symmetrize(&m3);
        assert_eq!(m4.commands.len(), m3.commands.len());
    }

    #[test]
    fn symmetrized_machine_keeps_language_small_words() {
        let m1 = enforce_s10(&fixtures::f_bal());
        let m3 = symmetrize(&pad_space(&m1).unwrap());
        let a = enumerate_language(&fixtures::f_bal(), 3, 8, 300);
        let b = enumerate_language(&m3, 3, 5, 6000);
        assert!(a.complete && b.complete);
        assert_eq!(a.words, b.words);
    }

    #[test]
    fn one_letter_splits_two_letter_command() {
        let m = fixtures::f_bal();
        let n = normalize_one_letter(&m);
        assert!(n.validate().is_empty(), "{:?}", n.validate());
        assert!(n.commands.iter().all(|c| c.letters_involved() <= 1));
        // `open` popped one letter and pushed one: it splits in two.
        assert!(n.command("open").is_some());
        assert!(n.command("open.s1").is_some());
    }

    #[test]
    fn pipeline_output_is_symmetric_one_letter() {
        for m in [fixtures::f_ev(), fixtures::f_bal()] {
            let p = build_pipeline(&m).unwrap();
            assert!(p.validate().is_empty(), "{:?}", p.validate());
            assert!(p.is_symmetric());
            assert!(p.commands.iter().all(|c| c.letters_involved() <= 1));
        }
    }

    #[test]
    fn pipeline_preserves_language() {
        let m = fixtures::f_bal();
        let p = build_pipeline(&m).unwrap();
        let a = enumerate_language(&m, 3, 8, 300);
        let b = enumerate_language(&p, 3, 5, 20000);
        assert!(a.complete && b.complete);
        assert_eq!(a.words, b.words);
    }

    #[test]
    fn accepted_padded_config_space_is_max_formula_spot_check() {
        // One representative instance of the padding space identity; the
        // checking suite sweeps all small configurations.
        let m1 = enforce_s10(&fixtures::f_ev());
        let m2 = pad_space(&m1).unwrap();
        let u: Word = vec![Letter::new("a"), Letter::new("a")];
        // w: input copy plus two padding squares.
        let mut w = m2.input_config(&u).unwrap();
        w.tapes.last_mut().unwrap().left = vec![Letter::new(PAD), Letter::new(PAD)];
        let inner = crate::oracle::bfs_machine_space(&m1, &m1.input_config(&u).unwrap(), 6, 300);
        let outer = crate::oracle::bfs_machine_space(&m2, &w, 8, 4000);
        let SearchResult::Found(s1) = inner.result else { panic!() };
        let SearchResult::Found(s2) = outer.result else { panic!() };
        assert_eq!(s2, s1.max(m2.a_length(&w)));
    }
}
