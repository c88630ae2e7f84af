//! Swapping adjacent moves, and the reorderings built on top of it:
//! pulling valid T2 moves to the front, retreating an invalid T2, and the
//! canonical T2/T1/T3 block normalization.
//!
//! Swapping two adjacent moves that are not both of type 1 commutes: the
//! state after the pair is unchanged, and so is everything downstream.
//! Only the validity of the two swapped moves can change.

use thiserror::Error;

use crate::laws::{run, MoveSequence, RunError, Trace};
use crate::state::{apply, classify, Move, MoveStatus};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SwapError {
    /// Two type-1 moves do not commute in general; the operation refuses
    /// them outright.
    #[error("swapping two type-1 moves is undefined")]
    SwapUndefined,
    #[error("move index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("move {0} is not admissible")]
    NotAdmissibleAt(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    /// A guarantee of the swap lemmas failed to hold. This must never
    /// fire; it is a correctness tripwire.
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),
}

impl From<RunError> for SwapError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::NotAdmissibleAt(k) => SwapError::NotAdmissibleAt(k),
            RunError::OverflowAt(k) => {
                SwapError::PreconditionViolated(format!("integer overflow at move {k}"))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapClassification {
    BothValid,
    FirstValidSecondInvalid,
    FirstInvalidSecondValid,
    BothInvalid,
}

/// Result of one adjacent swap: the reordered sequence, the statuses of
/// the swapped pair in the new order, and their joint classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapOutcome {
    pub sequence: MoveSequence,
    pub statuses_at_swap: (MoveStatus, MoveStatus),
    pub classification: SwapClassification,
}

/// Exchange moves `k` and `k+1` (1-based). Both must be admissible in the
/// original order and not both of type 1. The final state of the sequence
/// is preserved; only the two swapped statuses are re-classified.
pub fn swap_adjacent(seq: &MoveSequence, k: usize) -> Result<SwapOutcome, SwapError> {
    if k == 0 || k + 1 > seq.moves.len() {
        return Err(SwapError::IndexOutOfRange(k));
    }
    let trace = run(seq)?;
    let first = seq.moves[k - 1];
    let second = seq.moves[k];
    if first.kind() == 1 && second.kind() == 1 {
        return Err(SwapError::SwapUndefined);
    }

    let mut moves = seq.moves.clone();
    moves.swap(k - 1, k);

    let before = &trace.states[k - 1];
    let status_second = classify(before, second);
    let mid = apply(before, second).map_err(|_| {
        SwapError::InternalInvariantBroken("swapped move lost admissibility".into())
    })?;
    let status_first = classify(&mid, first);
    let after = apply(&mid, first).map_err(|_| {
        SwapError::InternalInvariantBroken("swapped move lost admissibility".into())
    })?;
    if after != trace.states[k + 1] {
        return Err(SwapError::InternalInvariantBroken(
            "adjacent swap failed to commute".into(),
        ));
    }

    let classification = match (status_second, status_first) {
        (MoveStatus::Valid, MoveStatus::Valid) => SwapClassification::BothValid,
        (MoveStatus::Valid, MoveStatus::Invalid) => SwapClassification::FirstValidSecondInvalid,
        (MoveStatus::Invalid, MoveStatus::Valid) => SwapClassification::FirstInvalidSecondValid,
        (MoveStatus::Invalid, MoveStatus::Invalid) => SwapClassification::BothInvalid,
        _ => {
            return Err(SwapError::InternalInvariantBroken(
                "swapped move classified NotAdmissible".into(),
            ))
        }
    };
    Ok(SwapOutcome {
        sequence: MoveSequence::new(seq.init.clone(), moves),
        statuses_at_swap: (status_second, status_first),
        classification,
    })
}

fn require_valid_t123_from_zero(seq: &MoveSequence, what: &str) -> Result<Trace, SwapError> {
    if !seq.init.is_all_zero() {
        return Err(SwapError::PreconditionViolated(format!(
            "{what} requires the all-zero initial state"
        )));
    }
    if let Some(mv) = seq.moves.iter().find(|m| m.kind() > 3) {
        return Err(SwapError::PreconditionViolated(format!(
            "{what} accepts moves of types 1-3 only, found type {}",
            mv.kind()
        )));
    }
    let trace = run(seq)?;
    if !trace.all_valid() {
        return Err(SwapError::PreconditionViolated(format!(
            "{what} requires an all-valid sequence"
        )));
    }
    Ok(trace)
}

/// Reorder an all-valid type-1-3 sequence so that every T2 precedes every
/// T1/T3, preserving validity and the final state. Stable: the relative
/// order of the T2 moves, and of the T1/T3 moves, is kept.
pub fn pull_t2_front(seq: &MoveSequence) -> Result<MoveSequence, SwapError> {
    require_valid_t123_from_zero(seq, "pull_t2_front")?;
    let mut cur = seq.clone();
    // Insertion sort by adjacent swaps; each swap of (valid T1/T3, valid
    // T2) keeps both moves valid.
    for idx in 1..cur.moves.len() {
        if cur.moves[idx].kind() != 2 {
            continue;
        }
        let mut pos = idx; // 0-based position of this T2
        while pos > 0 && cur.moves[pos - 1].kind() != 2 {
            let outcome = swap_adjacent(&cur, pos)?;
            if outcome.classification != SwapClassification::BothValid {
                return Err(SwapError::InternalInvariantBroken(
                    "pulling a valid T2 forward invalidated a move".into(),
                ));
            }
            cur = outcome.sequence;
            pos -= 1;
        }
    }
    Ok(cur)
}

/// What one retreat step did to an invalid T2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetreatOutcome {
    /// The T2 is valid one slot earlier; the displaced move stayed valid.
    BecameValid,
    /// The T2 is valid one slot earlier but the displaced move turned
    /// invalid.
    StoppedInvalidatedSuccessor,
    /// The T2 is still invalid one slot earlier; the displaced move
    /// stayed valid.
    MovedBack,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetreatResult {
    pub sequence: MoveSequence,
    pub outcome: RetreatOutcome,
    /// New 1-based index of the T2 move.
    pub position: usize,
}

/// Swap an invalid T2 at move index `k` (1-based) with the valid type-1-3
/// move before it. The preceding move must not be a T3 that decrements
/// the T2's position; under that exclusion the swap never leaves both
/// moves invalid.
pub fn retreat_invalid_t2(seq: &MoveSequence, k: usize) -> Result<RetreatResult, SwapError> {
    if k < 2 || k > seq.moves.len() {
        return Err(SwapError::PreconditionViolated(format!(
            "retreat needs a predecessor for move {k}"
        )));
    }
    let trace = run(seq)?;
    let t2_pos = match seq.moves[k - 1] {
        Move::T2 { i } => i,
        other => {
            return Err(SwapError::PreconditionViolated(format!(
                "move {k} is {other}, not a T2"
            )))
        }
    };
    if trace.statuses[k - 1] != MoveStatus::Invalid {
        return Err(SwapError::PreconditionViolated(format!(
            "move {k} is not invalid"
        )));
    }
    let prev = seq.moves[k - 2];
    if trace.statuses[k - 2] != MoveStatus::Valid || prev.kind() > 3 {
        return Err(SwapError::PreconditionViolated(format!(
            "move {} must be a valid move of type 1-3",
            k - 1
        )));
    }
    if let Move::T3 { j, .. } = prev {
        if j == t2_pos {
            return Err(SwapError::PreconditionViolated(
                "cannot retreat a T2 past a T3 that decrements its position".into(),
            ));
        }
    }

    let swapped = swap_adjacent(seq, k - 1)?;
    let outcome = match swapped.classification {
        SwapClassification::BothValid => RetreatOutcome::BecameValid,
        SwapClassification::FirstValidSecondInvalid => RetreatOutcome::StoppedInvalidatedSuccessor,
        SwapClassification::FirstInvalidSecondValid => RetreatOutcome::MovedBack,
        SwapClassification::BothInvalid => {
            return Err(SwapError::InternalInvariantBroken(
                "retreat produced two invalid moves".into(),
            ))
        }
    };
    Ok(RetreatResult {
        sequence: swapped.sequence,
        outcome,
        position: k - 1,
    })
}

/// Canonicalize an all-valid type-1-3 sequence from the all-zero state:
/// the T2 block first, then the T1 joins in order, each immediately
/// followed by the T3 moves whose positions that join united. Ties keep
/// the original relative order. Final state and per-type move counts are
/// preserved; the result is idempotent under re-normalization.
pub fn normalize(seq: &MoveSequence) -> Result<MoveSequence, SwapError> {
    let trace = require_valid_t123_from_zero(seq, "normalize")?;

    // Each T3 depends on exactly one T1: the join that first put its two
    // positions in the same tuple (they start out in singleton tuples).
    let mut t2_block = Vec::new();
    let mut join_indices = Vec::new(); // 0-based move indices of T1 moves
    for (idx, mv) in seq.moves.iter().enumerate() {
        match mv.kind() {
            1 => join_indices.push(idx),
            2 => t2_block.push(*mv),
            _ => {}
        }
    }
    let mut per_join: Vec<Vec<Move>> = vec![Vec::new(); join_indices.len()];
    for (idx, mv) in seq.moves.iter().enumerate() {
        if let Move::T3 { i, j } = *mv {
            let united = trace.states[..=idx]
                .iter()
                .position(|s| s.tuple_of(i) == s.tuple_of(j))
                .ok_or_else(|| {
                    SwapError::InternalInvariantBroken(
                        "valid T3 whose positions never shared a tuple".into(),
                    )
                })?;
            // states[united] is the first state where i and j share a
            // tuple, so moves[united - 1] is the uniting join.
            let join_slot = join_indices
                .iter()
                .position(|&ji| ji == united - 1)
                .ok_or_else(|| {
                    SwapError::InternalInvariantBroken(
                        "positions were united by a non-T1 move".into(),
                    )
                })?;
            per_join[join_slot].push(*mv);
        }
    }

    let mut moves = t2_block;
    for (slot, &ji) in join_indices.iter().enumerate() {
        moves.push(seq.moves[ji]);
        moves.extend(per_join[slot].iter().copied());
    }
    let normalized = MoveSequence::new(seq.init.clone(), moves);

    let out = run(&normalized).map_err(|e| {
        SwapError::InternalInvariantBroken(format!("normalized sequence does not run: {e}"))
    })?;
    if !out.all_valid() {
        return Err(SwapError::InternalInvariantBroken(
            "normalized sequence contains an invalid move".into(),
        ));
    }
    if out.final_state() != trace.final_state() {
        return Err(SwapError::InternalInvariantBroken(
            "normalization changed the final state".into(),
        ));
    }
    Ok(normalized)
}
