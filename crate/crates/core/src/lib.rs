//! Single-pass instruction sequences acting on Boolean registers.
//!
//! The crate covers the instruction syntax, thread extraction, register
//! services, split/reply semantics, compilers from CNFs, formulas and
//! circuits, sequence rewrites, the 3SATC encoding, and brute-force
//! tabulation and search.

pub mod compilers;
pub mod error;
pub mod instr;
pub mod lab;
pub mod satc;
pub mod services;
pub mod splitting;
pub mod threads;
pub mod transforms;

pub use error::{Error, Result};
pub use instr::{classify, parse, BasicInstruction, ClassProfile, Focus, Instruction, InstructionSequence, Method};
pub use lab::{truth_table, TruthTable};
pub use services::{run, RunOutcome, ServiceValue};
pub use splitting::run_splitting;
pub use threads::{extract, extract_compact, Thread, XThread};
