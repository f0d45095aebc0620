//! The acceptance gate: one test per quantitative criterion, each at its
//! stated scale and tolerance (everything here is exact). Every test
//! prints a single pass line; run with `--nocapture` to see them.

use std::time::Instant;
use wordspace::checks::{self, Scale};

fn gate(criterion: usize, name: &str, report: checks::CheckReport) {
    let ok = report.passed;
    println!(
        "acceptance criterion {criterion} ({name}): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} ({name}) failed:\n{}", report.lines.join("\n"));
}

/// Exact space identity for the padding construction, on every accepted
/// fill-stage configuration with at most 5 tape letters.
#[test]
fn criterion_1_padding_space_identity() {
    let t = Instant::now();
    let scale = Scale { max_len: 5, space_cap: 8, step_cap: 6000, ..Scale::default() };
    gate(1, "padding space identity", checks::padding_suite(scale));
    println!("criterion 1 elapsed: {:?} (target < 60s)", t.elapsed());
}

/// The counter-machine contract for one- and two-letter alphabets and
/// inputs up to length 3: canonical equal-length accepting runs, the
/// 2^|u| lower bound on rest-to-rest crossings, the norm envelope, and
/// no nontrivial rest-to-rest loops.
#[test]
fn criterion_2_counter_contract() {
    let t = Instant::now();
    let scale = Scale { umax: 3, comp_len: 12, ..Scale::default() };
    gate(2, "counter contract", checks::counter_contract_suite(scale));
    println!("criterion 2 elapsed: {:?} (target < 5min)", t.elapsed());
}

/// Machine computations and S-machine readings coincide exhaustively for
/// histories of length up to 6 from positive starts with at most 3 tape
/// letters.
#[test]
fn criterion_3_reading_equivalence() {
    let scale = Scale { comp_len: 6, ..Scale::default() };
    gate(3, "reading equivalence", checks::reading_equivalence_suite(scale));
}

/// Lift then project is the identity with exact space preservation for
/// all positive reduced computations of length up to 3.
#[test]
fn criterion_4_lift_projection_round_trip() {
    let scale = Scale { comp_len: 8, ..Scale::default() };
    gate(4, "lift/projection round trip", checks::lift_projection_suite(scale));
}

/// Vanishing witnesses validate with space at most 2·max|W_i| + c1 at
/// block counts 4 and 40, and the reported constant is stable across
/// runs.
#[test]
fn criterion_5_witness_bound() {
    let scale = Scale { umax: 2, ..Scale::default() };
    let first = checks::witness_bound_suite(scale);
    let second = checks::witness_bound_suite(scale);
    assert_eq!(first.data, second.data, "reported constants must be stable across runs");
    println!("witness constants: {}", first.data);
    gate(5, "witness bound", first);
}

/// Generator and relator counts match the closed-form formulas in both
/// compilation modes.
#[test]
fn criterion_6_compiler_counting() {
    use wordspace::compile::{compile, expected_counts, CompileMode};
    use wordspace::compose::compose_with_adder;
    use wordspace::presentation::RelatorKind;

    let comp = compose_with_adder(&wordspace::fixtures::m_toy()).unwrap();
    let mut ok = true;
    let mut lines = Vec::new();
    for mode in [CompileMode::Simple, CompileMode::Embedding] {
        for l in [4usize, 6] {
            let c = compile(&comp.machine, l, mode).unwrap();
            let n = c.state_letters();
            assert_eq!(n, (comp.machine.positions() + 1) * l);
            let counts = expected_counts(&c);
            let by_kind =
                |k: RelatorKind| c.presentation.relators.iter().filter(|r| r.kind == k).count();
            let good = c.presentation.generators.len() == counts.generators
                && by_kind(RelatorKind::Transition) == counts.transition
                && by_kind(RelatorKind::Commutator) == counts.commutator
                && by_kind(RelatorKind::Hub) == 1
                && c.presentation.relators[c.hub_index].word.len() == n;
            ok &= good;
            lines.push(format!(
                "mode {mode:?} L={l}: {} generators, {} relators",
                c.presentation.generators.len(),
                c.presentation.relators.len()
            ));
        }
    }
    println!("acceptance criterion 6 (compiler counting): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{}", lines.join("\n"));
}

/// The bisection reachability search computes exactly the breadth-first
/// minimal space on all configuration pairs with at most 3 tape letters
/// for k up to 8, and the space-function evaluator the direct maximum
/// for inputs up to length 4.
#[test]
fn criterion_7_bisection_agreement() {
    let t = Instant::now();
    let scale = Scale { max_len: 4, ..Scale::default() };
    gate(7, "bisection agreement", checks::bisection_agreement_suite(scale));
    println!("criterion 7 elapsed: {:?} (target < 2min)", t.elapsed());
}

/// Group-space sanity: the canonicalized search matches the raw one
/// exactly on small presentations, and on compiled fixtures the minimal
/// space never exceeds a constructed witness's space.
#[test]
fn criterion_8_group_space_sanity() {
    gate(8, "group space sanity", checks::group_space_sanity(Scale::default()));
}
