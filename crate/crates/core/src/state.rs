//! States and the six move types.
//!
//! A state is an ordered partition of `n` integers into `p` nonempty
//! tuples. Six moves act on states: `T1` joins two consecutive tuples,
//! `T2` increments one position, `T3`/`T4` increment one position and
//! decrement another, `T5`/`T6` increment two positions. `T3`/`T4` (and
//! `T5`/`T6`) are the same transformation; they differ only in when they
//! count as *valid*. All positions and tuple indices are 1-based.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateError {
    #[error("a state needs at least one tuple")]
    NoTuples,
    #[error("tuple {0} is empty")]
    EmptyTuple(usize),
    #[error("position {position} out of range 1..={len}")]
    OutOfRange { position: usize, len: usize },
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum MoveError {
    #[error("move indices must be 1-based (got 0)")]
    ZeroIndex,
    #[error("i and j must differ")]
    EqualIndices,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ApplyError {
    #[error("move is not admissible for this state")]
    NotAdmissible,
    #[error("integer overflow while applying move")]
    Overflow,
}

/// An ordered partition of `n` integers into nonempty tuples.
///
/// Equality is structural: two states with the same flattened values but
/// different tuple boundaries are distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    tuples: Vec<Vec<i64>>,
}

impl State {
    pub fn new(tuples: Vec<Vec<i64>>) -> Result<Self, StateError> {
        if tuples.is_empty() {
            return Err(StateError::NoTuples);
        }
        for (idx, t) in tuples.iter().enumerate() {
            if t.is_empty() {
                return Err(StateError::EmptyTuple(idx + 1));
            }
        }
        Ok(State { tuples })
    }

    /// The state `((0),...,(0))` with `n` singleton tuples, the starting
    /// point of every realizing sequence.
    pub fn all_zero(n: usize) -> Self {
        assert!(n >= 1, "a state needs at least one entry");
        State {
            tuples: vec![vec![0]; n],
        }
    }

    /// Single-tuple state over the given entries.
    pub fn single(entries: Vec<i64>) -> Result<Self, StateError> {
        State::new(vec![entries])
    }

    pub fn tuples(&self) -> &[Vec<i64>] {
        &self.tuples
    }

    /// Total number of entries, `n`. Never zero: a state holds at least
    /// one nonempty tuple, so there is no `is_empty`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.tuples.iter().map(Vec::len).sum()
    }

    /// Number of tuples, `p`.
    pub fn tuple_count(&self) -> usize {
        self.tuples.len()
    }

    /// True iff this is `((0),...,(0))`.
    pub fn is_all_zero(&self) -> bool {
        self.tuples.iter().all(|t| t.len() == 1 && t[0] == 0)
    }

    /// Concatenation of the tuples in order.
    pub fn flatten(&self) -> Vec<i64> {
        self.tuples.iter().flatten().copied().collect()
    }

    fn locate(&self, k: usize) -> Result<(usize, usize), StateError> {
        if k >= 1 {
            let mut seen = 0;
            for (ti, t) in self.tuples.iter().enumerate() {
                if k <= seen + t.len() {
                    return Ok((ti, k - seen - 1));
                }
                seen += t.len();
            }
        }
        Err(StateError::OutOfRange {
            position: k,
            len: self.len(),
        })
    }

    /// Value at the k-th position (1-based, into the flattened state).
    pub fn value(&self, k: usize) -> Result<i64, StateError> {
        let (ti, off) = self.locate(k)?;
        Ok(self.tuples[ti][off])
    }

    /// 1-based index of the tuple containing position k.
    pub fn tuple_of(&self, k: usize) -> Result<usize, StateError> {
        let (ti, _) = self.locate(k)?;
        Ok(ti + 1)
    }

    /// True iff the value at position i is >= the absolute value of every
    /// entry of its own tuple. A dominant value is always nonnegative
    /// (take j = i in the comparison).
    pub fn is_dominant(&self, i: usize) -> Result<bool, StateError> {
        let (ti, off) = self.locate(i)?;
        let v = self.tuples[ti][off];
        Ok(self.tuples[ti].iter().all(|&w| v >= w.abs()))
    }

    fn same_tuple(&self, i: usize, j: usize) -> Result<bool, StateError> {
        Ok(self.locate(i)?.0 == self.locate(j)?.0)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (ti, t) in self.tuples.iter().enumerate() {
            if ti > 0 {
                write!(f, ",")?;
            }
            write!(f, "(")?;
            for (vi, v) in t.iter().enumerate() {
                if vi > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, ")")?;
        }
        write!(f, ")")
    }
}

/// One of the six move types, with 1-based position/tuple indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    /// Join tuples `d` and `d+1` without reordering.
    T1 { d: usize },
    /// Add 1 at position `i`. Valid iff `i` is dominant.
    T2 { i: usize },
    /// Add 1 at `i`, subtract 1 at `j`. Valid iff same tuple, `i`
    /// dominant, and the value at `j` is <= 0.
    T3 { i: usize, j: usize },
    /// Same transformation as `T3`; valid iff the value at `j` is > 0.
    T4 { i: usize, j: usize },
    /// Add 1 at both `i` and `j`. Valid iff same tuple, `i` dominant, and
    /// the value at `j` is < 0.
    T5 { i: usize, j: usize },
    /// Same transformation as `T5`; valid iff the value at `j` is >= 0.
    T6 { i: usize, j: usize },
}

impl Move {
    pub fn t1(d: usize) -> Result<Move, MoveError> {
        if d == 0 {
            return Err(MoveError::ZeroIndex);
        }
        Ok(Move::T1 { d })
    }

    pub fn t2(i: usize) -> Result<Move, MoveError> {
        if i == 0 {
            return Err(MoveError::ZeroIndex);
        }
        Ok(Move::T2 { i })
    }

    fn pair(kind: u8, i: usize, j: usize) -> Result<Move, MoveError> {
        if i == 0 || j == 0 {
            return Err(MoveError::ZeroIndex);
        }
        if i == j {
            return Err(MoveError::EqualIndices);
        }
        Ok(match kind {
            3 => Move::T3 { i, j },
            4 => Move::T4 { i, j },
            5 => Move::T5 { i, j },
            6 => Move::T6 { i, j },
            _ => unreachable!(),
        })
    }

    pub fn t3(i: usize, j: usize) -> Result<Move, MoveError> {
        Move::pair(3, i, j)
    }

    pub fn t4(i: usize, j: usize) -> Result<Move, MoveError> {
        Move::pair(4, i, j)
    }

    pub fn t5(i: usize, j: usize) -> Result<Move, MoveError> {
        Move::pair(5, i, j)
    }

    pub fn t6(i: usize, j: usize) -> Result<Move, MoveError> {
        Move::pair(6, i, j)
    }

    /// Move type as a number 1..=6.
    pub fn kind(&self) -> u8 {
        match self {
            Move::T1 { .. } => 1,
            Move::T2 { .. } => 2,
            Move::T3 { .. } => 3,
            Move::T4 { .. } => 4,
            Move::T5 { .. } => 5,
            Move::T6 { .. } => 6,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::T1 { d } => write!(f, "T1 {d}"),
            Move::T2 { i } => write!(f, "T2 {i}"),
            Move::T3 { i, j } => write!(f, "T3 {i} {j}"),
            Move::T4 { i, j } => write!(f, "T4 {i} {j}"),
            Move::T5 { i, j } => write!(f, "T5 {i} {j}"),
            Move::T6 { i, j } => write!(f, "T6 {i} {j}"),
        }
    }
}

/// Three-way classification of a move against a state.
///
/// `Invalid` and `Valid` both mean the move can be applied; validity is a
/// side condition, not an applicability condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveStatus {
    NotAdmissible,
    Invalid,
    Valid,
}

impl fmt::Display for MoveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MoveStatus::NotAdmissible => "NotAdmissible",
            MoveStatus::Invalid => "Invalid",
            MoveStatus::Valid => "Valid",
        };
        f.write_str(s)
    }
}

/// Classify a move against a state. Pure: repeated calls agree.
pub fn classify(state: &State, mv: Move) -> MoveStatus {
    let n = state.len();
    let in_range = |k: usize| k >= 1 && k <= n;
    match mv {
        Move::T1 { d } => {
            if d >= 1 && d < state.tuple_count() {
                // An admissible join is always valid.
                MoveStatus::Valid
            } else {
                MoveStatus::NotAdmissible
            }
        }
        Move::T2 { i } => {
            if !in_range(i) {
                return MoveStatus::NotAdmissible;
            }
            if state.is_dominant(i).unwrap() {
                MoveStatus::Valid
            } else {
                MoveStatus::Invalid
            }
        }
        Move::T3 { i, j } | Move::T4 { i, j } | Move::T5 { i, j } | Move::T6 { i, j } => {
            if !in_range(i) || !in_range(j) || i == j {
                return MoveStatus::NotAdmissible;
            }
            let vj = state.value(j).unwrap();
            let side = match mv {
                Move::T3 { .. } => vj <= 0,
                Move::T4 { .. } => vj > 0,
                Move::T5 { .. } => vj < 0,
                Move::T6 { .. } => vj >= 0,
                _ => unreachable!(),
            };
            if state.same_tuple(i, j).unwrap() && state.is_dominant(i).unwrap() && side {
                MoveStatus::Valid
            } else {
                MoveStatus::Invalid
            }
        }
    }
}

/// Apply an admissible move, valid or invalid.
///
/// `T1` merges tuples `d` and `d+1`; `T2`-`T6` adjust one or two values
/// and leave the tuple boundaries unchanged. Overflow is an error, never
/// a wrap.
pub fn apply(state: &State, mv: Move) -> Result<State, ApplyError> {
    if classify(state, mv) == MoveStatus::NotAdmissible {
        return Err(ApplyError::NotAdmissible);
    }
    let mut tuples = state.tuples.clone();
    let mut bump = |k: usize, delta: i64| -> Result<(), ApplyError> {
        let (ti, off) = state.locate(k).expect("admissible move index in range");
        let v = tuples[ti][off]
            .checked_add(delta)
            .ok_or(ApplyError::Overflow)?;
        tuples[ti][off] = v;
        Ok(())
    };
    match mv {
        Move::T1 { d } => {
            let right = tuples.remove(d);
            tuples[d - 1].extend(right);
        }
        Move::T2 { i } => bump(i, 1)?,
        Move::T3 { i, j } | Move::T4 { i, j } => {
            bump(i, 1)?;
            bump(j, -1)?;
        }
        Move::T5 { i, j } | Move::T6 { i, j } => {
            bump(i, 1)?;
            bump(j, 1)?;
        }
    }
    Ok(State { tuples })
}
