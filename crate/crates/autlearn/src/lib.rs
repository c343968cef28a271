//! Construction of provably correct minimal automata for predicates over
//! automatic sequences (factor equality and reversal, periods, addition in
//! exotic numeration systems, partial sums of synchronized sequences).
//!
//! Compiling a quantified formula directly can blow up on intermediate
//! automata. This crate instead runs Angluin's L* algorithm against
//! teachers whose hypothesis checks exploit the self-verifying structure of
//! each predicate: a candidate automaton is proved correct by a finite set
//! of automaton-expressible conditions forming an induction, so no external
//! ground truth is needed.

pub mod alphabet;
pub mod dfa;
mod error;
pub mod format;
pub mod lstar;
pub mod nfa;
pub mod numeration;
pub mod predicate;
pub mod sequence;
pub mod teachers;

pub use alphabet::{shortlex, Letter, TupleAlphabet, Word};
pub use dfa::{CompleteDfa, ProductMode, TrimmedDfa};
pub use error::{Error, Result};
pub use nfa::Nfa;
