//! Core engine for contradiction analysis of structured requirements.
//!
//! The pipeline implemented here is pure text-in/data-out and keeps no
//! global state, so the crate is `no_std` (with `alloc`):
//!
//! 1. [`dict`] loads the data dictionary that fixes each data item's
//!    value domain.
//! 2. [`parser`] turns requirement blocks written in the Gherkin-style
//!    format (`Given` conditions, `Then` operations) into ASTs.
//! 3. [`encode`] translates each AST into an implication over
//!    propositional atoms keyed by `(data, value)`.
//! 4. [`analysis`] pairs requirements that share operations, conjoins
//!    their condition clauses and asks the SAT solver in [`logic`]
//!    whether the conjunction is satisfiable; UNSAT means the pair
//!    contradicts. Hypothetical-syllogism chaining derives indirect
//!    requirements before pairing.
//!
//! File IO, report rendering and the HTTP front end live in the
//! companion `reqsat` crate.

#![no_std]

#[cfg(test)]
#[macro_use]
extern crate std;
extern crate alloc;

pub mod analysis;
pub mod ast;
pub mod dict;
pub mod encode;
pub mod logic;
pub mod parser;

pub use analysis::{analyze_corpus, AnalysisOptions, CorpusAnalysis};
pub use dict::{parse_dictionary, DataDictionary};
pub use encode::{encode, EncodedRequirement, SymbolTable};
pub use logic::{Atom, BoolExpr, Model};
pub use parser::{parse_requirements, render_requirement};
