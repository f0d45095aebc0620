//! Batch command-line surface: validate and transform machines, compile
//! to presentations, run the space searches, and execute the property
//! suites.
//!
//! Exit codes: 0 on success, 1 when a property or search check fails,
//! 2 on usage or parse errors. Every command is deterministic given its
//! flags; all searches are capped. The last line of each command is a
//! machine-readable JSON object.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use wordspace::checks::{self, Scale};
use wordspace::compile::{compile, CompileMode};
use wordspace::compose::compose_with_adder;
use wordspace::convert::from_turing;
use wordspace::group_search::bfs_group_space_witness;
use wordspace::gword::GWord;
use wordspace::letter::Letter;
use wordspace::machine_io::{emit_machine, parse_machine};
use wordspace::oracle::{bfs_machine_space, SearchResult};
use wordspace::presentation::{emit_presentation, parse_presentation};
use wordspace::rewriting::{emit_trace, parse_trace, validate_trace};
use wordspace::smachine_io::{emit_smachine, parse_smachine};
use wordspace::transforms;

#[derive(Parser)]
#[command(name = "wordspace", version, about = "machines, S-machines, group presentations, and space searches")]
struct Cli {
    /// Accepted for interface stability; nothing in the core paths is
    /// randomized, so this flag changes nothing.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    /// Start/accept normalization.
    S10,
    /// The padding construction (input must be normalized).
    Pad,
    /// Close the command set under inversion.
    Sym,
    /// One-letter normal form.
    OneLetter,
    /// The full chain: s10, pad, sym, one-letter.
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Simple,
    Embedding,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a machine file and print its report.
    Validate { file: PathBuf },
    /// Apply a transformation stage to a machine file.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        stage: Stage,
        /// Output path; defaults to stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Read a symmetric one-letter machine as an S-machine file.
    SOfM {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compose a normalized machine with the counter machines.
    ComposeAdder {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compile an S-machine file into a group presentation.
    Compile {
        file: PathBuf,
        /// Block count (even, at least 4; the constructions downstream
        /// assume at least 40).
        #[arg(long, default_value_t = 40)]
        l: usize,
        #[arg(long, value_enum, default_value_t = Mode::Simple)]
        mode: Mode,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Minimal rewriting space of a word over a presentation file.
    Space {
        presentation: PathBuf,
        /// The word, whitespace-separated letters with x^-1 for inverses.
        word: String,
        #[arg(long, default_value_t = 8)]
        space_cap: usize,
        #[arg(long, default_value_t = 2000)]
        step_cap: usize,
        /// Disable state canonicalization (differential mode).
        #[arg(long)]
        raw: bool,
        /// Dump a witness trace to this path when the word vanishes.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Minimal accepting space of an input word on a machine file.
    MachineSpace {
        machine: PathBuf,
        /// Input word, whitespace-separated letters ('' for the empty word).
        input: String,
        #[arg(long, default_value_t = 8)]
        space_cap: usize,
        #[arg(long, default_value_t = 4000)]
        step_cap: usize,
    },
    /// Re-validate a dumped rewriting trace against a presentation.
    ValidateTrace { presentation: PathBuf, trace: PathBuf },
    /// Run a named property suite.
    Check {
        /// One of: lemma2.1 lemma2.2 lemma2.3 lemma2.5 lemma2.6 lemma2.7
        /// lemma2.8 prop1.1 savitch, or 'all'.
        suite: String,
        #[arg(long, default_value_t = 2)]
        umax: usize,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 6)]
        comp_len: usize,
        #[arg(long, default_value_t = 8)]
        space_cap: usize,
        #[arg(long, default_value_t = 4000)]
        step_cap: usize,
    },
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes to the path, to `WORDSPACE_OUT/<name>` when only the override
/// directory is configured, or to stdout.
fn write_out(out: Option<&Path>, default_name: &str, text: &str) -> Result<Option<PathBuf>, String> {
    let target: Option<PathBuf> = match out {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os("WORDSPACE_OUT").map(|d| Path::new(&d).join(default_name)),
    };
    match target {
        Some(p) => {
            std::fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display()))?;
            Ok(Some(p))
        }
        None => {
            print!("{text}");
            Ok(None)
        }
    }
}

fn parse_input_word(s: &str) -> Result<Vec<Letter>, String> {
    s.split_whitespace()
        .map(|t| {
            if Letter::valid_token(t) {
                Ok(Letter::new(t))
            } else {
                Err(format!("invalid letter token {t:?}"))
            }
        })
        .collect()
}

fn outcome_name<T>(r: &SearchResult<T>) -> &'static str {
    match r {
        SearchResult::Found(_) => "found",
        SearchResult::Rejected => "rejected",
        SearchResult::CapExhausted => "cap-exhausted",
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.cmd {
        Cmd::Validate { file } => {
            let m = parse_machine(&file.display().to_string(), &read(&file)?)
                .map_err(|e| e.to_string())?;
            let report = m.validate();
            for line in &report {
                println!("violation: {line}");
            }
            let ok = report.is_empty();
            println!("{}", json!({ "cmd": "validate", "ok": ok, "violations": report }));
            Ok(ok)
        }
        Cmd::Transform { file, stage, out } => {
            let m = parse_machine(&file.display().to_string(), &read(&file)?)
                .map_err(|e| e.to_string())?;
            let violations = m.validate();
            if !violations.is_empty() {
                return Err(format!("input machine invalid: {}", violations.join("; ")));
            }
            let result = match stage {
                Stage::S10 => transforms::enforce_s10(&m),
                Stage::Pad => transforms::pad_space(&m).map_err(|e| e.to_string())?,
                Stage::Sym => transforms::symmetrize(&m),
                Stage::OneLetter => transforms::normalize_one_letter(&m),
                Stage::Full => transforms::build_pipeline(&m).map_err(|e| e.to_string())?,
            };
            let text = emit_machine(&result);
            let path = write_out(out.as_deref(), "out.mach", &text)?;
            println!(
                "{}",
                json!({
                    "cmd": "transform",
                    "ok": true,
                    "tapes": result.tape_count(),
                    "commands": result.commands.len(),
                    "out": path.map(|p| p.display().to_string()),
                })
            );
            Ok(true)
        }
        Cmd::SOfM { file, out } => {
            let m = parse_machine(&file.display().to_string(), &read(&file)?)
                .map_err(|e| e.to_string())?;
            let s = from_turing(&m).map_err(|e| e.to_string())?;
            let text = emit_smachine(&s);
            let path = write_out(out.as_deref(), "out.smach", &text)?;
            println!(
                "{}",
                json!({
                    "cmd": "s-of-m",
                    "ok": true,
                    "positions": s.positions(),
                    "rules": s.rules.len(),
                    "out": path.map(|p| p.display().to_string()),
                })
            );
            Ok(true)
        }
        Cmd::ComposeAdder { file, out } => {
            let m = parse_machine(&file.display().to_string(), &read(&file)?)
                .map_err(|e| e.to_string())?;
            let comp = compose_with_adder(&m).map_err(|e| e.to_string())?;
            let text = emit_smachine(&comp.machine);
            let path = write_out(out.as_deref(), "out.smach", &text)?;
            println!(
                "{}",
                json!({
                    "cmd": "compose-adder",
                    "ok": true,
                    "positions": comp.machine.positions(),
                    "rules": comp.machine.rules.len(),
                    "out": path.map(|p| p.display().to_string()),
                })
            );
            Ok(true)
        }
        Cmd::Compile { file, l, mode, out } => {
            let s = parse_smachine(&file.display().to_string(), &read(&file)?)
                .map_err(|e| e.to_string())?;
            let violations = s.validate();
            if !violations.is_empty() {
                return Err(format!("input S-machine invalid: {}", violations.join("; ")));
            }
            let mode = match mode {
                Mode::Simple => CompileMode::Simple,
                Mode::Embedding => CompileMode::Embedding,
            };
            let compiled = compile(&s, l, mode).map_err(|e| e.to_string())?;
            let text = emit_presentation(&compiled.presentation);
            let path = write_out(out.as_deref(), "out.pres", &text)?;
            let gens = compiled.presentation.generators.len();
            let rels = compiled.presentation.relators.len();
            println!("generators: {gens}");
            println!("relators: {rels}");
            println!(
                "{}",
                json!({
                    "cmd": "compile",
                    "ok": true,
                    "generators": gens,
                    "relators": rels,
                    "state_letters": compiled.state_letters(),
                    "out": path.map(|p| p.display().to_string()),
                })
            );
            Ok(true)
        }
        Cmd::Space { presentation, word, space_cap, step_cap, raw, witness } => {
            let p = parse_presentation(&presentation.display().to_string(), &read(&presentation)?)
                .map_err(|e| e.to_string())?;
            let toks: Vec<&str> = word.split_whitespace().collect();
            let w = GWord::parse(&toks).ok_or("invalid word")?;
            let (out, trace) =
                bfs_group_space_witness(&p, &w, space_cap, step_cap, !raw, witness.is_some());
            let mut dumped = None;
            if let (Some(path), Some(t)) = (&witness, &trace) {
                std::fs::write(path, emit_trace(t)).map_err(|e| e.to_string())?;
                dumped = Some(path.display().to_string());
            }
            match &out.result {
                SearchResult::Found(s) => println!("space: {s}"),
                other => println!("outcome: {}", outcome_name(other)),
            }
            println!("states expanded: {}", out.stats.expanded);
            println!(
                "{}",
                json!({
                    "cmd": "space",
                    "outcome": outcome_name(&out.result),
                    "value": out.result.found(),
                    "expanded": out.stats.expanded,
                    "witness": dumped,
                })
            );
            Ok(true)
        }
        Cmd::MachineSpace { machine, input, space_cap, step_cap } => {
            let m = parse_machine(&machine.display().to_string(), &read(&machine)?)
                .map_err(|e| e.to_string())?;
            let u = parse_input_word(&input)?;
            let c = m.input_config(&u).map_err(|e| e.to_string())?;
            let out = bfs_machine_space(&m, &c, space_cap, step_cap);
            match &out.result {
                SearchResult::Found(s) => println!("space: {s}"),
                other => println!("outcome: {}", outcome_name(other)),
            }
            println!("states expanded: {}", out.stats.expanded);
            println!(
                "{}",
                json!({
                    "cmd": "machine-space",
                    "outcome": outcome_name(&out.result),
                    "value": out.result.found(),
                    "expanded": out.stats.expanded,
                })
            );
            Ok(true)
        }
        Cmd::ValidateTrace { presentation, trace } => {
            let p = parse_presentation(&presentation.display().to_string(), &read(&presentation)?)
                .map_err(|e| e.to_string())?;
            let t = parse_trace(&trace.display().to_string(), &read(&trace)?)
                .map_err(|e| e.to_string())?;
            let report = validate_trace(&p, &t);
            if let Some((step, reason)) = &report.failure {
                println!("illegal at step {step}: {reason}");
            } else {
                println!("valid; space {}", report.space);
            }
            println!(
                "{}",
                json!({
                    "cmd": "validate-trace",
                    "ok": report.ok,
                    "space": report.space,
                    "final_words": report.final_tuple.len(),
                })
            );
            Ok(report.ok)
        }
        Cmd::Check { suite, umax, max_len, comp_len, space_cap, step_cap } => {
            let scale = Scale { umax, max_len, comp_len, space_cap, step_cap };
            let names: Vec<&str> =
                if suite == "all" { checks::SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut all_ok = true;
            let mut summary = Vec::new();
            for name in names {
                let report = checks::run_suite(name, scale).ok_or_else(|| {
                    format!("unknown suite {name:?} (expected one of {:?})", checks::SUITES)
                })?;
                for line in &report.lines {
                    println!("[{}] {line}", report.suite);
                }
                all_ok &= report.passed;
                summary.push(json!({"suite": report.suite, "passed": report.passed, "data": report.data}));
            }
            println!("{}", json!({ "cmd": "check", "ok": all_ok, "suites": summary }));
            Ok(all_ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
