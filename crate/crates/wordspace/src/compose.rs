//! Composition of a symmetric machine with counter machines.
//!
//! Between any two consecutive state letters of the machine's S-machine
//! reading, a mobile counter state `p_i` is inserted, and each tape gets a
//! second zone: admissible words read `B u1 p1 v1 q1 u2 p2 v2 q2 ...`.
//! Every command `t` of the base machine is simulated by a sandwich: a
//! transition rule retargets all `p`-letters, the counter copies run one
//! by one over each tape's content (thereby certifying it is a positive
//! word), the basic rule fires, and a second battery of counter runs and a
//! closing transition restore the `p`-letters. Rule names:
//!
//!   * `t`          — the basic rule, the copy of the command;
//!   * `t.pre`      — retargets `p_j` to `p_j.t.1-` (absent for the start
//!                    command);
//!   * `t.z<i>-.<r>` — the rule `r` of the counter over tape `i`'s
//!                    alphabet, run before `t`;
//!   * `t.z<i>+.<r>` — the same after `t`;
//!   * `t.post`     — turns `p_j.t.3+` back into `p_j` (absent for the
//!                    accept command).

use crate::adder::{self, make_adder};
use crate::convert::{self, from_turing};
use crate::gword::GWord;
use crate::letter::{Letter, SLetter};
use crate::machine::{Machine, MachineError};
use crate::smachine::{AdmissibleWord, Domain, SMachine, SMachineError, SRule, SRulePart, STrace};
use std::collections::BTreeSet;

/// The composed machine together with the pieces it was built from.
pub struct Composition {
    /// The composed S-machine.
    pub machine: SMachine,
    /// The base machine.
    pub base: Machine,
    /// The base machine's S-machine reading (the projection target).
    pub sm: SMachine,
    /// One counter machine per tape, over that tape's alphabet.
    pub adders: Vec<SMachine>,
    /// Name of the unique start command of the base machine.
    pub start_cmd: String,
    /// Name of the unique accept command.
    pub accept_cmd: String,
}

fn plain_p(i: usize) -> Letter {
    Letter::new(&format!("p{i}"))
}

fn phase_p(i: usize, cmd: &str, stage: u8, plus: bool) -> Letter {
    Letter::new(&format!("p{i}.{cmd}.{stage}{}", if plus { "+" } else { "-" }))
}

fn map_zero(w: &GWord) -> GWord {
    GWord(w.0.iter().map(|l| SLetter { base: adder::zero_copy(&l.base), inv: l.inv }).collect())
}

fn zero_set(set: &BTreeSet<Letter>) -> BTreeSet<Letter> {
    set.iter().map(adder::zero_copy).collect()
}

impl Composition {
    pub fn tape_count(&self) -> usize {
        self.base.tape_count()
    }

    /// Embeds an admissible word of the base reading, with the given
    /// per-tape `p`-letters and empty right zones.
    pub fn embed(&self, w: &AdmissibleWord, p: &[Letter]) -> AdmissibleWord {
        let l = self.tape_count();
        debug_assert_eq!(p.len(), l);
        let mut states = vec![w.states[0].clone()];
        let mut sectors = Vec::new();
        for i in 0..l {
            states.push(p[i].clone());
            states.push(w.states[i + 1].clone());
            sectors.push(map_zero(&w.sectors[i]));
            sectors.push(GWord::empty());
        }
        AdmissibleWord::new(states, sectors)
    }

    /// The input word for `u`: content on tape 1 in the 0-copy, plain
    /// `p`-letters parked next to the state letters.
    pub fn input_word(&self, u: &[Letter]) -> Result<AdmissibleWord, MachineError> {
        let base = convert::input_word(&self.base, u)?;
        let p: Vec<Letter> = (1..=self.tape_count()).map(plain_p).collect();
        Ok(self.embed(&base, &p))
    }

    /// Sector contents of the left zone of tape `i` (0-based), as plain
    /// letters, for a word whose zone holds only 0-copies.
    fn zone_content(&self, w: &AdmissibleWord, i: usize) -> Option<Vec<Letter>> {
        let mut out = Vec::new();
        for l in &w.sectors[2 * i].0 {
            if l.inv {
                return None;
            }
            let name = l.base.as_str();
            let stripped = name.strip_suffix(".0")?;
            out.push(Letter::new(stripped));
        }
        Some(out)
    }

    /// Projection of one composed word to the base reading: counter states
    /// dropped, both zones of a tape concatenated with subscripts erased,
    /// freely reduced.
    pub fn project_word(&self, w: &AdmissibleWord) -> AdmissibleWord {
        let l = self.tape_count();
        let mut states = vec![w.states[0].clone()];
        let mut sectors = Vec::new();
        for i in 0..l {
            states.push(w.states[2 * i + 2].clone());
            let mut sec = GWord::empty();
            for part in [&w.sectors[2 * i], &w.sectors[2 * i + 1]] {
                for sl in &part.0 {
                    let name = sl.base.as_str();
                    let base = name
                        .strip_suffix(".0")
                        .or_else(|| name.strip_suffix(".1"))
                        .unwrap_or(name);
                    sec.push_reduce(SLetter { base: Letter::new(base), inv: sl.inv });
                }
            }
            sectors.push(sec);
        }
        AdmissibleWord { states, sectors }
    }

    /// Drops the counter rules from a computation: the result is the base
    /// reading's computation through the basic rules only, well-defined
    /// because non-basic rules leave the projection fixed.
    pub fn project_computation(&self, t: &STrace) -> Result<STrace, SMachineError> {
        t.validate(&self.machine)?;
        let mut out = STrace::initial(self.project_word(&t.start));
        for (step, &ridx) in t.rules.iter().enumerate() {
            let rule = &self.machine.rules[ridx];
            let pre = self.project_word(&t.words[step]);
            let post = self.project_word(&t.words[step + 1]);
            if rule.basic {
                let (sidx, _) = self
                    .sm
                    .rule(&rule.name)
                    .ok_or_else(|| SMachineError::MalformedTrace(format!("no base rule {}", rule.name)))?;
                if out.last() != &pre {
                    return Err(SMachineError::MalformedTrace(format!(
                        "projection broke before basic step {step}"
                    )));
                }
                let applied = self.sm.apply_rule(&pre, sidx)?;
                if applied != post {
                    return Err(SMachineError::MalformedTrace(format!(
                        "basic step {step} does not project onto {}",
                        rule.name
                    )));
                }
                out.push(&self.sm, sidx, post);
            } else if pre != post {
                return Err(SMachineError::MalformedTrace(format!(
                    "non-basic step {step} changed the projection"
                )));
            }
        }
        Ok(out)
    }

    fn apply_push(&self, t: &mut STrace, name: &str) -> Result<(), SMachineError> {
        let (idx, _) = self
            .machine
            .rule(name)
            .ok_or_else(|| SMachineError::UnknownRule(name.to_string()))?;
        let next = self.machine.apply_rule(t.last(), idx)?;
        t.push(&self.machine, idx, next);
        Ok(())
    }

    /// Emits the counter run of tape `i` for command `cmd` (sign `plus`),
    /// inverted when `backward` is set.
    fn emit_counter_run(
        &self,
        t: &mut STrace,
        i: usize,
        cmd: &str,
        plus: bool,
        backward: bool,
    ) -> Result<(), SMachineError> {
        let content = self
            .zone_content(t.last(), i)
            .ok_or_else(|| SMachineError::MalformedTrace("zone not over the 0-copy".into()))?;
        let run = adder::canonical_run(&self.adders[i], &content);
        let sign = if plus { "+" } else { "-" };
        let names: Vec<String> = run
            .rules
            .iter()
            .map(|&zr| format!("{cmd}.z{}{sign}.{}", i + 1, self.adders[i].rules[zr].name))
            .collect();
        if backward {
            for name in names.iter().rev() {
                self.apply_push(t, &format!("{name}^-1"))?;
            }
        } else {
            for name in &names {
                self.apply_push(t, name)?;
            }
        }
        Ok(())
    }

    /// The battery of counter runs and the transition that follow a basic
    /// step (the part of the sandwich after the command).
    fn emit_post(&self, t: &mut STrace, ridx_sm: usize) -> Result<(), SMachineError> {
        let rule = &self.sm.rules[ridx_sm];
        let l = self.tape_count();
        if rule.positive {
            let base = base_name(&rule.name);
            if base == self.accept_cmd {
                return Ok(());
            }
            for i in 0..l {
                self.emit_counter_run(t, i, &base, true, false)?;
            }
            self.apply_push(t, &format!("{base}.post"))
        } else {
            let base = base_name(&rule.name);
            if base == self.start_cmd {
                return Ok(());
            }
            for i in (0..l).rev() {
                self.emit_counter_run(t, i, &base, false, true)?;
            }
            self.apply_push(t, &format!("{base}.pre^-1"))
        }
    }

    /// The battery before a basic step.
    fn emit_pre(&self, t: &mut STrace, ridx_sm: usize) -> Result<(), SMachineError> {
        let rule = &self.sm.rules[ridx_sm];
        let l = self.tape_count();
        if rule.positive {
            let base = base_name(&rule.name);
            if base == self.start_cmd {
                return Ok(());
            }
            self.apply_push(t, &format!("{base}.pre"))?;
            for i in 0..l {
                self.emit_counter_run(t, i, &base, false, false)?;
            }
            Ok(())
        } else {
            let base = base_name(&rule.name);
            if base == self.accept_cmd {
                return Ok(());
            }
            self.apply_push(t, &format!("{base}.post^-1"))?;
            for i in (0..l).rev() {
                self.emit_counter_run(t, i, &base, true, true)?;
            }
            Ok(())
        }
    }

    /// The `p`-letters on the left side of the composed copy of base rule
    /// `ridx_sm`.
    fn basic_lhs_p(&self, ridx_sm: usize) -> Vec<Letter> {
        let rule = &self.sm.rules[ridx_sm];
        let base = base_name(&rule.name);
        (1..=self.tape_count())
            .map(|i| {
                if rule.positive {
                    if base == self.start_cmd {
                        plain_p(i)
                    } else {
                        phase_p(i, &base, 3, false)
                    }
                } else if base == self.accept_cmd {
                    plain_p(i)
                } else {
                    phase_p(i, &base, 1, true)
                }
            })
            .collect()
    }

    /// Lifts a positive reduced computation of the base reading to a
    /// computation of the composed machine whose history starts and ends
    /// with basic rules, projecting back onto the original, with the same
    /// space.
    pub fn canonical_lift(&self, c: &STrace) -> Result<STrace, SMachineError> {
        if !c.is_positive() {
            return Err(SMachineError::NotPositive);
        }
        if !c.is_reduced(&self.sm) {
            return Err(SMachineError::MalformedTrace("history is not reduced".into()));
        }
        if c.is_empty() {
            let p: Vec<Letter> = (1..=self.tape_count()).map(plain_p).collect();
            return Ok(STrace::initial(self.embed(&c.start, &p)));
        }
        let start = self.embed(&c.start, &self.basic_lhs_p(c.rules[0]));
        let mut t = STrace::initial(start);
        for (step, &ridx_sm) in c.rules.iter().enumerate() {
            if step > 0 {
                self.emit_pre(&mut t, ridx_sm)?;
            }
            let name = self.sm.rules[ridx_sm].name.clone();
            self.apply_push(&mut t, &name)?;
            if t.last().norm() != self.embed(&c.words[step + 1], &self.basic_lhs_p(ridx_sm)).norm() {
                return Err(SMachineError::MalformedTrace("lift diverged".into()));
            }
            if step + 1 < c.rules.len() {
                self.emit_post(&mut t, ridx_sm)?;
            }
        }
        debug_assert!(t.is_reduced(&self.machine));
        Ok(t)
    }
}

fn base_name(rule_name: &str) -> String {
    rule_name.strip_suffix("^-1").unwrap_or(rule_name).to_string()
}

/// Builds the composition. The machine must be symmetric, one-letter, in
/// start/accept normal form, with heads at the right tape ends.
pub fn compose_with_adder(m: &Machine) -> Result<Composition, MachineError> {
    if !m.is_s10() {
        return Err(MachineError::S10Missing);
    }
    let sm = from_turing(m)?;
    let l = m.tape_count();
    let start_cmd = m
        .commands
        .iter()
        .find(|c| c.positive && c.parts.iter().zip(&m.start).all(|(p, q)| p.lhs_state() == q))
        .expect("normal form has a start command")
        .name
        .clone();
    let accept_cmd = m
        .commands
        .iter()
        .find(|c| c.positive && c.parts.iter().zip(&m.accept).all(|(p, q)| p.rhs_state() == q))
        .expect("normal form has an accept command")
        .name
        .clone();

    let adders: Vec<SMachine> = m.tape_alphabets.iter().map(make_adder).collect();

    // State sets: B, P1, Q1, P2, Q2, ...
    let mut state_sets: Vec<BTreeSet<Letter>> = Vec::with_capacity(2 * l + 1);
    state_sets.push(sm.state_sets[0].clone());
    for i in 1..=l {
        let mut p_set: BTreeSet<Letter> = [plain_p(i)].into_iter().collect();
        for cmd in m.commands.iter().filter(|c| c.positive) {
            for stage in 1..=3u8 {
                if cmd.name != start_cmd {
                    p_set.insert(phase_p(i, &cmd.name, stage, false));
                }
                if cmd.name != accept_cmd {
                    p_set.insert(phase_p(i, &cmd.name, stage, true));
                }
            }
        }
        state_sets.push(p_set);
        state_sets.push(sm.state_sets[i].clone());
    }

    // Sector alphabets: per tape, the two working copies then the plain one.
    let mut sector_alphabets: Vec<BTreeSet<Letter>> = Vec::with_capacity(2 * l);
    for i in 0..l {
        sector_alphabets.push(adders[i].sector_alphabets[0].clone());
        sector_alphabets.push(adders[i].sector_alphabets[1].clone());
    }

    let mut rules: Vec<SRule> = Vec::new();

    for cmd in m.commands.iter().filter(|c| c.positive) {
        let (_, srule) = sm.rule(&cmd.name).expect("reading has every command");
        let is_start = cmd.name == start_cmd;
        let is_accept = cmd.name == accept_cmd;

        // The basic rule: state letters move as in the base rule, the
        // tape edit lands in the left zone (0-copy), every right zone is
        // checked empty, and the p-letters switch phase.
        let mut parts = vec![srule.parts[0].clone()];
        let mut domains = Vec::with_capacity(2 * l);
        for i in 1..=l {
            let lhs_p =
                if is_start { plain_p(i) } else { phase_p(i, &cmd.name, 3, false) };
            let rhs_p =
                if is_accept { plain_p(i) } else { phase_p(i, &cmd.name, 1, true) };
            let bp = &srule.parts[i];
            parts.push(SRulePart {
                lhs_left: map_zero(&bp.lhs_left),
                lhs_state: lhs_p,
                lhs_right: GWord::empty(),
                rhs_left: map_zero(&bp.rhs_left),
                rhs_state: rhs_p,
                rhs_right: GWord::empty(),
            });
            parts.push(SRulePart::state_only(bp.lhs_state.clone(), bp.rhs_state.clone()));
            domains.push(match &srule.domains[i - 1] {
                Domain::Full => Domain::Set(zero_set(&sm.sector_alphabets[i - 1])),
                Domain::Empty => Domain::Empty,
                Domain::Set(s) => Domain::Set(zero_set(s)),
            });
            domains.push(Domain::Empty);
        }
        rules.push(SRule { name: cmd.name.clone(), positive: true, basic: true, parts, domains });

        // Transition rules.
        let rest_domains = |_sign: bool| -> Vec<Domain> {
            let mut d = Vec::with_capacity(2 * l);
            for i in 0..l {
                d.push(Domain::Set(zero_set(&sm.sector_alphabets[i])));
                d.push(Domain::Empty);
            }
            d
        };
        if !is_start {
            let mut parts = vec![srule.parts[0].clone()];
            for i in 1..=l {
                parts.push(SRulePart {
                    lhs_left: GWord::empty(),
                    lhs_state: plain_p(i),
                    lhs_right: GWord::empty(),
                    rhs_left: GWord::empty(),
                    rhs_state: phase_p(i, &cmd.name, 1, false),
                    rhs_right: GWord::empty(),
                });
                let q = srule.parts[i].lhs_state.clone();
                parts.push(SRulePart::state_only(q.clone(), q));
            }
            rules.push(SRule {
                name: format!("{}.pre", cmd.name),
                positive: true,
                basic: false,
                parts,
                domains: rest_domains(false),
            });
        }
        if !is_accept {
            let mut parts = vec![srule.parts[0].clone()];
            for i in 1..=l {
                parts.push(SRulePart {
                    lhs_left: GWord::empty(),
                    lhs_state: phase_p(i, &cmd.name, 3, true),
                    lhs_right: GWord::empty(),
                    rhs_left: GWord::empty(),
                    rhs_state: plain_p(i),
                    rhs_right: GWord::empty(),
                });
                let q = srule.parts[i].rhs_state.clone();
                parts.push(SRulePart::state_only(q.clone(), q));
            }
            rules.push(SRule {
                name: format!("{}.post", cmd.name),
                positive: true,
                basic: false,
                parts,
                domains: rest_domains(true),
            });
        }

        // Counter copies: one battery per tape and sign. While the copy
        // over tape i works, every other counter is parked: finished ones
        // at stage 3, waiting ones at stage 1.
        for (sign_plus, present) in [(false, !is_start), (true, !is_accept)] {
            if !present {
                continue;
            }
            for i in 1..=l {
                let z = &adders[i - 1];
                for zr in z.rules.iter().filter(|r| r.positive) {
                    let mut parts = Vec::with_capacity(2 * l + 1);
                    let mut domains = Vec::with_capacity(2 * l);
                    // Position K1 is the counter's left anchor for i == 1.
                    let k_state = |pos: usize| -> Letter {
                        // K-position `pos` in 1..=l+1; identity on the
                        // command's lhs (minus phase) or rhs (plus phase).
                        if pos == 1 {
                            srule.parts[0].lhs_state.clone()
                        } else if sign_plus {
                            srule.parts[pos - 1].rhs_state.clone()
                        } else {
                            srule.parts[pos - 1].lhs_state.clone()
                        }
                    };
                    parts.push(SRulePart::state_only(k_state(1), k_state(1)));
                    for j in 1..=l {
                        if j == i {
                            // The working counter: its own part with L, R
                            // replaced by the neighbouring state letters and
                            // p-stages retargeted.
                            let zp = &zr.parts[1];
                            let stage_of = |q: &Letter| -> u8 {
                                match q.as_str() {
                                    "p1" => 1,
                                    "p2" => 2,
                                    "p3" => 3,
                                    other => panic!("unexpected counter state {other}"),
                                }
                            };
                            parts.push(SRulePart {
                                lhs_left: zp.lhs_left.clone(),
                                lhs_state: phase_p(j, &cmd.name, stage_of(&zp.lhs_state), sign_plus),
                                lhs_right: zp.lhs_right.clone(),
                                rhs_left: zp.rhs_left.clone(),
                                rhs_state: phase_p(j, &cmd.name, stage_of(&zp.rhs_state), sign_plus),
                                rhs_right: zp.rhs_right.clone(),
                            });
                            domains.push(zr.domains[0].clone());
                            domains.push(zr.domains[1].clone());
                        } else {
                            // Parked: finished counters sit at stage 3,
                            // waiting ones at stage 1, right zones empty.
                            let stage = if j < i { 3 } else { 1 };
                            let p = phase_p(j, &cmd.name, stage, sign_plus);
                            parts.push(SRulePart::state_only(p.clone(), p));
                            domains.push(Domain::Set(zero_set(&sm.sector_alphabets[j - 1])));
                            domains.push(Domain::Empty);
                        }
                        parts.push(SRulePart::state_only(k_state(j + 1), k_state(j + 1)));
                    }
                    rules.push(SRule {
                        name: format!("{}.z{}{}.{}", cmd.name, i, if sign_plus { "+" } else { "-" }, zr.name),
                        positive: true,
                        basic: false,
                        parts,
                        domains,
                    });
                }
            }
        }
    }

    let negatives: Vec<SRule> =
        rules.iter().map(|r| r.inverted(format!("{}^-1", r.name))).collect();
    rules.extend(negatives);

    let plain: Vec<Letter> = (1..=l).map(plain_p).collect();
    let composition_word = |w: &AdmissibleWord| -> AdmissibleWord {
        let mut states = vec![w.states[0].clone()];
        let mut sectors = Vec::new();
        for i in 0..l {
            states.push(plain[i].clone());
            states.push(w.states[i + 1].clone());
            sectors.push(map_zero(&w.sectors[i]));
            sectors.push(GWord::empty());
        }
        AdmissibleWord::new(states, sectors)
    };
    let start_word = composition_word(&sm.start_word);
    let accept_word = composition_word(&sm.accept_word);

    let machine = SMachine {
        input_alphabet: zero_set(&m.input_alphabet),
        state_sets,
        sector_alphabets,
        rules,
        start_word,
        accept_word,
    };
    Ok(Composition { machine, base: m.clone(), sm, adders, start_cmd, accept_cmd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::{enumerate_computations, EnumOptions};

    fn toy() -> Composition {
        compose_with_adder(&fixtures::m_toy()).unwrap()
    }

    #[test]
    fn composed_machine_is_well_formed() {
        let c = toy();
        assert!(c.machine.validate().is_empty(), "{:?}", c.machine.validate());
        // 2l + 1 state positions for an l-tape base machine.
        assert_eq!(c.machine.positions(), 2 * c.base.tape_count() + 1);
    }

    #[test]
    fn start_rule_is_basic_and_unique_on_inputs() {
        let c = toy();
        let w = c.input_word(&[Letter::new("a")]).unwrap();
        let applicable = c.machine.applicable(&w);
        // Exactly one applicable rule, the basic copy of the start command.
        assert_eq!(applicable.len(), 1, "{:?}", applicable.iter().map(|&i| &c.machine.rules[i].name).collect::<Vec<_>>());
        let r = &c.machine.rules[applicable[0]];
        assert!(r.basic && r.positive);
        assert_eq!(r.name, c.start_cmd);
    }

    #[test]
    fn lift_then_project_is_identity_with_equal_space() {
        let c = toy();
        for w in crate::convert::small_positive_words(&c.base, 2) {
            for t in enumerate_computations(&c.sm, &w, &EnumOptions::reduced(3).positive()) {
                let lift = c.canonical_lift(&t).unwrap();
                lift.validate(&c.machine).unwrap();
                assert_eq!(lift.space, t.space, "space preserved");
                let back = c.project_computation(&lift).unwrap();
                assert_eq!(back.words, t.words);
                assert_eq!(back.rules, t.rules);
                if !t.is_empty() {
                    assert!(c.machine.rules[*lift.rules.first().unwrap()].basic);
                    assert!(c.machine.rules[*lift.rules.last().unwrap()].basic);
                }
            }
        }
    }

    #[test]
    fn projection_of_reduced_traces_is_reduced() {
        let c = toy();
        let w = c.input_word(&[Letter::new("a")]).unwrap();
        for t in enumerate_computations(&c.machine, &w, &EnumOptions::reduced(6).with_window(2)) {
            let p = c.project_computation(&t).unwrap();
            assert!(p.is_reduced(&c.sm), "history {:?}", t.history(&c.machine));
        }
    }

    #[test]
    fn empty_history_projects_to_empty() {
        let c = toy();
        let w = c.input_word(&[]).unwrap();
        let t = STrace::initial(w);
        let p = c.project_computation(&t).unwrap();
        assert_eq!(p.len(), 0);
    }
}
