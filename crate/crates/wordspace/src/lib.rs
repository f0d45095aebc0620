//! Machines, S-machines, group presentations, and the searches that tie
//! them together.
//!
//! The crate builds a pipeline from multi-tape Turing machines with exact
//! space accounting through a space-preserving transformation chain, on to
//! S-machines (including a binary-counter machine and its composition with
//! an arbitrary symmetric machine), and finally to finite group
//! presentations with a hub relation. A rewriting engine constructs
//! bounded-space vanishing witnesses over those presentations, and a set
//! of brute-force oracles cross-checks everything at small scale.

pub mod letter;
pub mod gword;
pub mod machine;
pub mod machine_io;
pub mod fixtures;
pub mod oracle;
pub mod transforms;
pub mod smachine;
pub mod smachine_io;
pub mod convert;
pub mod adder;
pub mod compose;
pub mod multiply;
pub mod presentation;
pub mod compile;
pub mod rewriting;
pub mod group_search;
pub mod checks;

pub use letter::{Letter, SLetter};
pub use gword::GWord;
pub use machine::{Command, CommandPart, Configuration, Machine, MachineError};
