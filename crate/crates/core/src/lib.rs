//! A rewriting calculus for integer spectra realizability.
//!
//! States are ordered partitions of integers into tuples; six move types
//! transform them. The crate provides:
//!
//! - [`state`]: states, moves, three-way move classification, application;
//! - [`laws`]: traces and the permanence, dominance, and
//!   increasing-decreasing sequence laws;
//! - [`swap`]: adjacent-move swaps and the reorderings built on them,
//!   including canonical normalization;
//! - [`eliminate`]: the constructive rewrite of valid type-1-6 sequences
//!   into type-1-3 sequences with the same final state;
//! - [`oracle`]: independent brute-force decision and enumeration, plus
//!   sequence generators for property testing;
//! - [`io`]: the line-oriented certificate DSL and a JSON rendering.

pub mod eliminate;
pub mod io;
pub mod laws;
pub mod oracle;
pub mod state;
pub mod swap;

pub use eliminate::{
    eliminate_all, eliminate_last, verify_equivalence, CaseLabel, EliminateError, EliminationReport,
};
pub use io::{parse_sequence, serialize_sequence, IoError, SequenceDocument};
pub use laws::{
    check_dominance, check_incdec, check_permanence, move_counts, run, LawError, MoveCounts,
    MoveSequence, RunError, Trace,
};
pub use oracle::{
    decide_multiset, decide_state, enumerate, gen_valid_sequences, DecisionResult, OracleError,
    SearchOptions,
};
pub use state::{apply, classify, ApplyError, Move, MoveError, MoveStatus, State, StateError};
pub use swap::{
    normalize, pull_t2_front, retreat_invalid_t2, swap_adjacent, RetreatOutcome, RetreatResult,
    SwapClassification, SwapError, SwapOutcome,
};
