//! Structural complexity of short numeric sequences, and the unexpectedness
//! and subjective probability that follow from it.
//!
//! A sequence is described by a program of generative operations
//! (instantiate, copy, increment, digit split, mirror) priced in bits, with a
//! small short-term memory that makes recently used numbers and operators
//! free. The cheapest program's cost is the observed complexity; comparing it
//! with the complexity expected for the object's class gives unexpectedness
//! `U = C_exp - C_obs` and subjective probability `2^-U`.

pub mod analyzer;
pub mod config;
pub mod cost;
pub mod error;
pub mod lottery;
pub mod machine;
pub mod oracle;
pub mod program;
pub mod rng;
pub mod stm;
pub mod surprise;

pub use analyzer::{analyze, analyze_with, derive_10_to_70, AnalyzeOptions};
pub use cost::{aggregate_cost, digit_complexity, number_complexity, Bits, CostModel};
pub use error::{Error, Result};
pub use machine::{evaluate, Lexicon};
pub use oracle::{oracle_min_cost, OperatorKind, SearchBudget};
pub use program::{replay, DescriptionProgram, OpKind, Operation, ProgramForm, Role};
pub use stm::{OpTag, StmItem, StmState};
