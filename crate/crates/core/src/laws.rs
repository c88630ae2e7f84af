//! Running move sequences into traces, and the three sequence laws.
//!
//! The laws are post-hoc trace checkers rather than conditions enforced
//! during `apply`, so that rewrites can inspect mixed valid/invalid
//! sequences.

use thiserror::Error;

use crate::state::{apply, classify, ApplyError, Move, MoveStatus, State};

/// An initial state plus an ordered move list: the certificate form of
/// realizability. Prefix admissibility is checked by [`run`], not here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveSequence {
    pub init: State,
    pub moves: Vec<Move>,
}

impl MoveSequence {
    pub fn new(init: State, moves: Vec<Move>) -> Self {
        MoveSequence { init, moves }
    }
}

/// The full run of a sequence: every intermediate state plus each move's
/// status. `states.len() == moves.len() + 1` and no status is
/// `NotAdmissible`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub states: Vec<State>,
    pub moves: Vec<Move>,
    pub statuses: Vec<MoveStatus>,
}

impl Trace {
    pub fn final_state(&self) -> &State {
        self.states
            .last()
            .expect("a trace holds at least one state")
    }

    /// True iff every status is Valid.
    pub fn all_valid(&self) -> bool {
        self.statuses.iter().all(|&s| s == MoveStatus::Valid)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    /// Carries the 1-based index of the first non-admissible move.
    #[error("move {0} is not admissible")]
    NotAdmissibleAt(usize),
    #[error("integer overflow at move {0}")]
    OverflowAt(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LawError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Apply the whole sequence, recording every state and status. Stops with
/// an error at the first non-admissible move.
pub fn run(seq: &MoveSequence) -> Result<Trace, RunError> {
    let mut states = Vec::with_capacity(seq.moves.len() + 1);
    let mut statuses = Vec::with_capacity(seq.moves.len());
    states.push(seq.init.clone());
    for (idx, &mv) in seq.moves.iter().enumerate() {
        let cur = states.last().unwrap();
        let status = classify(cur, mv);
        let next = apply(cur, mv).map_err(|e| match e {
            ApplyError::NotAdmissible => RunError::NotAdmissibleAt(idx + 1),
            ApplyError::Overflow => RunError::OverflowAt(idx + 1),
        })?;
        statuses.push(status);
        states.push(next);
    }
    Ok(Trace {
        states,
        moves: seq.moves.to_vec(),
        statuses,
    })
}

/// True iff every status in the trace is Valid.
pub fn all_valid(trace: &Trace) -> bool {
    trace.all_valid()
}

fn boundaries(state: &State) -> Vec<usize> {
    let mut out = Vec::with_capacity(state.tuple_count());
    let mut acc = 0;
    for t in state.tuples() {
        acc += t.len();
        out.push(acc);
    }
    out
}

/// Permanence law: once two positions share a tuple they share a tuple in
/// every later state. Holds for any admissible trace; this checker also
/// accepts hand-built traces and reports violations.
pub fn check_permanence(trace: &Trace) -> bool {
    let n = trace.states[0].len();
    if trace.states.iter().any(|s| s.len() != n) {
        return false;
    }
    // Sharing a tuple is equivalent to no tuple boundary between the two
    // positions, so the partition may only coarsen step to step.
    for pair in trace.states.windows(2) {
        let before = boundaries(&pair[0]);
        let after = boundaries(&pair[1]);
        if !after.iter().all(|b| before.contains(b)) {
            return false;
        }
    }
    true
}

/// Dominance law: in an all-valid trace, once a position stops being
/// dominant it never becomes dominant again.
///
/// The law is only stated for all-valid traces; mixed traces are rejected
/// rather than given an unverified answer.
pub fn check_dominance(trace: &Trace) -> Result<bool, LawError> {
    if !trace.all_valid() {
        return Err(LawError::PreconditionViolated(
            "dominance law applies to all-valid traces only".into(),
        ));
    }
    let n = trace.states[0].len();
    for pos in 1..=n {
        let mut lost = false;
        for state in &trace.states {
            let dom = state.is_dominant(pos).expect("position in range");
            if dom && lost {
                return Ok(false);
            }
            if !dom {
                lost = true;
            }
        }
    }
    Ok(true)
}

/// Increasing-decreasing law: in an all-valid trace of type-{1,2,3,6}
/// moves, positive values only increase and negative values only
/// decrease.
pub fn check_incdec(trace: &Trace) -> Result<bool, LawError> {
    if !trace.all_valid() {
        return Err(LawError::PreconditionViolated(
            "increasing-decreasing law applies to all-valid traces only".into(),
        ));
    }
    if let Some(mv) = trace.moves.iter().find(|m| matches!(m.kind(), 4 | 5)) {
        return Err(LawError::PreconditionViolated(format!(
            "increasing-decreasing law excludes type {} moves",
            mv.kind()
        )));
    }
    let n = trace.states[0].len();
    for pos in 1..=n {
        for pair in trace.states.windows(2) {
            let v = pair[0].value(pos).expect("position in range");
            let w = pair[1].value(pos).expect("position in range");
            if (v > 0 && w < v) || (v < 0 && w > v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Per-type move counts of a trace or move list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MoveCounts {
    pub t1: usize,
    pub t2: usize,
    pub t3: usize,
    pub t4: usize,
    pub t5: usize,
    pub t6: usize,
}

impl MoveCounts {
    pub fn of(moves: &[Move]) -> MoveCounts {
        let mut c = MoveCounts::default();
        for mv in moves {
            match mv.kind() {
                1 => c.t1 += 1,
                2 => c.t2 += 1,
                3 => c.t3 += 1,
                4 => c.t4 += 1,
                5 => c.t5 += 1,
                _ => c.t6 += 1,
            }
        }
        c
    }
}

pub fn move_counts(trace: &Trace) -> MoveCounts {
    MoveCounts::of(&trace.moves)
}
