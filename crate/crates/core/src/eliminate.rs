//! Constructive elimination of type-4/5/6 moves: any all-valid sequence
//! from the all-zero state rewrites to an all-valid type-1-3 sequence
//! with the same final state.

use std::fmt;

use thiserror::Error;

use crate::laws::{run, MoveSequence, Trace};
use crate::state::{Move, State};
use crate::swap::{retreat_invalid_t2, RetreatOutcome, SwapError};

/// Which rewrite handled (part of) a type-4/5/6 elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    FourA,
    FourB,
    Five,
    SixA,
    SixBOne,
    SixBTwo,
    RetreatStep,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseLabel::FourA => "4A",
            CaseLabel::FourB => "4B",
            CaseLabel::Five => "5",
            CaseLabel::SixA => "6A",
            CaseLabel::SixBOne => "6B-I",
            CaseLabel::SixBTwo => "6B-II",
            CaseLabel::RetreatStep => "retreat-step",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationReport {
    pub input: MoveSequence,
    pub output: MoveSequence,
    pub cases_taken: Vec<CaseLabel>,
    pub recursion_depth: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EliminateError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    /// A guarantee of the elimination proof failed to hold at run time.
    /// This must never fire; it is the correctness tripwire.
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),
    #[error("recursion depth {depth} exceeded ceiling {ceiling}")]
    DepthCeilingExceeded { depth: usize, ceiling: usize },
}

// Every swap performed inside elimination is covered by a proof guarantee,
// so a failing swap is an invariant breach, not a caller error.
impl From<SwapError> for EliminateError {
    fn from(e: SwapError) -> Self {
        EliminateError::InternalInvariantBroken(format!("swap failed during elimination: {e}"))
    }
}

struct Rewriter {
    cases: Vec<CaseLabel>,
    depth: usize,
    max_depth: usize,
    ceiling: usize,
}

/// 0-based index of the last move that changed the value at `pos`, or
/// None if the position kept its initial value.
fn last_change(trace: &Trace, pos: usize, upto: usize) -> Option<usize> {
    let target = trace.states[upto].value(pos).expect("position in range");
    (0..upto)
        .rev()
        .find(|&idx| trace.states[idx].value(pos).expect("position in range") != target)
}

impl Rewriter {
    /// Rewrite `prefix + [last]`, where prefix is all-valid types 1-3 and
    /// `last` is a valid type-4/5/6 move, into an all-valid type-1-3 move
    /// list with the same final state.
    fn step(
        &mut self,
        init: &State,
        moves: &[Move],
        t6_bound: Option<usize>,
    ) -> Result<Vec<Move>, EliminateError> {
        self.depth += 1;
        self.max_depth = self.max_depth.max(self.depth);
        if self.depth > self.ceiling {
            return Err(EliminateError::DepthCeilingExceeded {
                depth: self.depth,
                ceiling: self.ceiling,
            });
        }
        let result = self.step_inner(init, moves, t6_bound);
        self.depth -= 1;
        result
    }

    fn step_inner(
        &mut self,
        init: &State,
        moves: &[Move],
        t6_bound: Option<usize>,
    ) -> Result<Vec<Move>, EliminateError> {
        let seq = MoveSequence::new(init.clone(), moves.to_vec());
        let trace = run(&seq).map_err(|e| {
            EliminateError::InternalInvariantBroken(format!("rewritten prefix does not run: {e}"))
        })?;
        if !trace.all_valid() {
            return Err(EliminateError::InternalInvariantBroken(
                "rewritten prefix contains an invalid move".into(),
            ));
        }
        let k = moves.len();
        let broken = |msg: &str| Err(EliminateError::InternalInvariantBroken(msg.to_string()));

        match moves[k - 1] {
            Move::T4 { i, j } => {
                // The final move decrements j, so some earlier move pushed
                // j up to its positive pre-final value; the last move that
                // changed j did exactly that.
                let h = match last_change(&trace, j, k - 1) {
                    Some(h) => h,
                    None => return broken("type 4 with position j never incremented"),
                };
                let before = trace.states[h].value(j).expect("position in range");
                let at_k = trace.states[k - 1].value(j).expect("position in range");
                if before + 1 != at_k {
                    return broken("last change of position j was not a unit increment");
                }
                let mut out = moves.to_vec();
                match moves[h] {
                    Move::T2 { i: hj } if hj == j => {
                        self.cases.push(CaseLabel::FourA);
                        out[k - 1] = Move::T2 { i };
                        out.remove(h);
                    }
                    Move::T3 { i: hj, j: g } if hj == j => {
                        self.cases.push(CaseLabel::FourB);
                        if g == i {
                            return broken("case 4B with g = i");
                        }
                        out[k - 1] = Move::T3 { i, j: g };
                        out.remove(h);
                    }
                    _ => return broken("increment of position j is neither T2 nor T3"),
                }
                Ok(out)
            }
            Move::T5 { i, j } => {
                let h = match last_change(&trace, j, k - 1) {
                    Some(h) => h,
                    None => return broken("type 5 with position j never decremented"),
                };
                let before = trace.states[h].value(j).expect("position in range");
                let at_k = trace.states[k - 1].value(j).expect("position in range");
                if before - 1 != at_k {
                    return broken("last change of position j was not a unit decrement");
                }
                let g = match moves[h] {
                    Move::T3 { i: g, j: hj } if hj == j => g,
                    _ => return broken("decrement of position j is not a T3"),
                };
                self.cases.push(CaseLabel::Five);
                let mut out = moves.to_vec();
                out[h] = Move::T2 { i: g };
                out[k - 1] = Move::T2 { i };
                Ok(out)
            }
            Move::T6 { i, j } => {
                let phi_k = &trace.states[k - 1];
                let vi = phi_k.value(i).expect("position in range");
                let vj = phi_k.value(j).expect("position in range");
                if vi == vj {
                    self.case_6a(&trace, moves, i, j)
                } else if vi > vj && vj >= 0 {
                    self.case_6b(init, moves, i, j, t6_bound)
                } else {
                    broken("valid T6 with i not weakly above j")
                }
            }
            other => Err(EliminateError::PreconditionViolated(format!(
                "final move must be of type 4-6, found {other}"
            ))),
        }
    }

    /// The two incremented positions hold equal values, so both were
    /// dominant since they first met: insert T2(i), T2(j) just before the
    /// join that united them and drop the T6.
    fn case_6a(
        &mut self,
        trace: &Trace,
        moves: &[Move],
        i: usize,
        j: usize,
    ) -> Result<Vec<Move>, EliminateError> {
        self.cases.push(CaseLabel::SixA);
        let k = moves.len();
        let united = trace.states[..k]
            .iter()
            .position(|s| s.tuple_of(i) == s.tuple_of(j));
        let united = match united {
            // From all-zero singletons two positions can only meet via a join.
            Some(s) if s >= 1 => s,
            _ => {
                return Err(EliminateError::InternalInvariantBroken(
                    "T6 positions never united by a move".into(),
                ))
            }
        };
        if moves[united - 1].kind() != 1 {
            return Err(EliminateError::InternalInvariantBroken(
                "T6 positions united by a non-T1 move".into(),
            ));
        }
        let mut out = Vec::with_capacity(k + 1);
        out.extend_from_slice(&moves[..united - 1]);
        out.push(Move::T2 { i });
        out.push(Move::T2 { i: j });
        out.extend_from_slice(&moves[united - 1..k - 1]);
        Ok(out)
    }

    /// Strictly unequal values: split the T6 into an invalid T2(j) plus a
    /// valid T2(i) and retreat the invalid T2(j) leftward until it turns
    /// valid or collides into a move it invalidates (then merge back into
    /// an earlier T6 and recurse).
    fn case_6b(
        &mut self,
        init: &State,
        moves: &[Move],
        i: usize,
        j: usize,
        t6_bound: Option<usize>,
    ) -> Result<Vec<Move>, EliminateError> {
        let k = moves.len();
        if let Some(bound) = t6_bound {
            if k > bound {
                return Err(EliminateError::InternalInvariantBroken(
                    "T6 index failed to decrease across 6B recursion".into(),
                ));
            }
        }
        let mut ms = moves.to_vec();
        ms[k - 1] = Move::T2 { i: j };
        ms.push(Move::T2 { i });

        // 0-based index of the (invalid) T2(j) under retreat.
        let mut t = k - 1;
        loop {
            if t == 0 {
                return Err(EliminateError::InternalInvariantBroken(
                    "invalid T2 reached the front of the sequence".into(),
                ));
            }
            let seq = MoveSequence::new(init.clone(), ms.clone());
            let res = retreat_invalid_t2(&seq, t + 1)?;
            self.cases.push(CaseLabel::RetreatStep);
            ms = res.sequence.moves;
            t -= 1;
            match res.outcome {
                RetreatOutcome::MovedBack => continue,
                RetreatOutcome::BecameValid => return Ok(ms),
                RetreatOutcome::StoppedInvalidatedSuccessor => break,
            }
        }

        // ms[t] is now a valid T2(j); ms[t+1] is the displaced, newly
        // invalid move. Both rewrites end with a valid T6(j,g) at index t
        // whose incremented positions hold equal values, so the recursion
        // resolves through case 6A.
        let displaced = ms[t + 1];
        let g = match displaced {
            Move::T2 { i: g } => {
                self.cases.push(CaseLabel::SixBOne);
                g
            }
            Move::T3 { i: g, j: h } => {
                self.cases.push(CaseLabel::SixBTwo);
                if h == j {
                    return Err(EliminateError::InternalInvariantBroken(
                        "case 6B.II with h = j".into(),
                    ));
                }
                ms[t + 1] = Move::T2 { i: g };
                let last = ms.len() - 1;
                match ms[last] {
                    Move::T2 { i: li } if li == i => ms[last] = Move::T3 { i, j: h },
                    _ => {
                        return Err(EliminateError::InternalInvariantBroken(
                            "case 6B.II without the trailing T2(i)".into(),
                        ))
                    }
                }
                g
            }
            other => {
                return Err(EliminateError::InternalInvariantBroken(format!(
                    "retreat stopped against {other}"
                )))
            }
        };
        if g == j {
            return Err(EliminateError::InternalInvariantBroken(
                "6B merge with g = j".into(),
            ));
        }
        let suffix: Vec<Move> = ms[t + 2..].to_vec();
        let mut prefix: Vec<Move> = ms[..t].to_vec();
        prefix.push(Move::T6 { i: j, j: g });
        let mut out = self.step(init, &prefix, Some(k - 1))?;
        out.extend(suffix);
        Ok(out)
    }
}

fn check_preconditions(
    seq: &MoveSequence,
    require_last_456: bool,
) -> Result<Trace, EliminateError> {
    if !seq.init.is_all_zero() {
        return Err(EliminateError::PreconditionViolated(
            "elimination requires the all-zero initial state".into(),
        ));
    }
    let trace = run(seq).map_err(|e| EliminateError::PreconditionViolated(e.to_string()))?;
    if !trace.all_valid() {
        return Err(EliminateError::PreconditionViolated(
            "elimination requires an all-valid sequence".into(),
        ));
    }
    if require_last_456 {
        let k = seq.moves.len();
        if k == 0 || seq.moves[k - 1].kind() < 4 {
            return Err(EliminateError::PreconditionViolated(
                "final move must be of type 4, 5 or 6".into(),
            ));
        }
        if let Some(mv) = seq.moves[..k - 1].iter().find(|m| m.kind() > 3) {
            return Err(EliminateError::PreconditionViolated(format!(
                "moves before the last must be of types 1-3, found type {}",
                mv.kind()
            )));
        }
    }
    Ok(trace)
}

fn verify_output(
    input_trace: &Trace,
    init: &State,
    moves: Vec<Move>,
) -> Result<MoveSequence, EliminateError> {
    let output = MoveSequence::new(init.clone(), moves);
    if let Some(mv) = output.moves.iter().find(|m| m.kind() > 3) {
        return Err(EliminateError::InternalInvariantBroken(format!(
            "output still contains a type {} move",
            mv.kind()
        )));
    }
    let out_trace = run(&output).map_err(|e| {
        EliminateError::InternalInvariantBroken(format!("output does not run: {e}"))
    })?;
    if !out_trace.all_valid() {
        return Err(EliminateError::InternalInvariantBroken(
            "output contains an invalid move".into(),
        ));
    }
    if out_trace.final_state() != input_trace.final_state() {
        return Err(EliminateError::InternalInvariantBroken(
            "output final state differs from input".into(),
        ));
    }
    Ok(output)
}

/// Eliminate the final move of `seq`, which must be a valid type-4/5/6
/// move after an all-valid type-1-3 prefix from the all-zero state. The
/// output is an all-valid type-1-3 sequence with the same final state.
pub fn eliminate_last(seq: &MoveSequence) -> Result<EliminationReport, EliminateError> {
    let trace = check_preconditions(seq, true)?;
    let mut rw = Rewriter {
        cases: Vec::new(),
        depth: 0,
        max_depth: 0,
        ceiling: 10 * seq.moves.len() + 10,
    };
    let moves = rw.step(&seq.init, &seq.moves, None)?;
    let output = verify_output(&trace, &seq.init, moves)?;
    Ok(EliminationReport {
        input: seq.clone(),
        output,
        cases_taken: rw.cases,
        recursion_depth: rw.max_depth,
    })
}

/// Eliminate every type-4/5/6 move of an all-valid sequence from the
/// all-zero state, leftmost first, so each round meets the
/// [`eliminate_last`] shape by construction.
pub fn eliminate_all(seq: &MoveSequence) -> Result<EliminationReport, EliminateError> {
    let trace = check_preconditions(seq, false)?;
    let mut moves = seq.moves.clone();
    let mut cases = Vec::new();
    let mut recursion_depth = 0;
    while let Some(split) = moves.iter().position(|m| m.kind() > 3) {
        let prefix = MoveSequence::new(seq.init.clone(), moves[..=split].to_vec());
        let report = eliminate_last(&prefix).map_err(|e| match e {
            // The precondition held at entry, so a failing round is a bug.
            EliminateError::PreconditionViolated(msg) => {
                EliminateError::InternalInvariantBroken(msg)
            }
            other => other,
        })?;
        cases.extend(report.cases_taken);
        recursion_depth = recursion_depth.max(report.recursion_depth);
        let mut next = report.output.moves;
        next.extend_from_slice(&moves[split + 1..]);
        moves = next;
    }
    let output = verify_output(&trace, &seq.init, moves)?;
    Ok(EliminationReport {
        input: seq.clone(),
        output,
        cases_taken: cases,
        recursion_depth,
    })
}

/// True iff both sequences run without a non-admissible move, are
/// all-valid, and share the same initial and final states.
pub fn verify_equivalence(a: &MoveSequence, b: &MoveSequence) -> bool {
    if a.init != b.init {
        return false;
    }
    let (ta, tb) = match (run(a), run(b)) {
        (Ok(ta), Ok(tb)) => (ta, tb),
        _ => return false,
    };
    ta.all_valid() && tb.all_valid() && ta.final_state() == tb.final_state()
}
