//! Brute-force decision procedures and sequence generators, independent
//! of the rewrite machinery, for cross-checking it.
//!
//! A single-tuple target fixes the move budget of any realizing type-1-3
//! sequence exactly: n-1 joins, sum-of-values increments, and one
//! increment-decrement per unit of negative value. Positive positions
//! only ever rise and negative positions only ever fall along a valid
//! type-1-3 sequence, so a depth-first search that never moves a value
//! past its target is complete, and exhaustion proves non-realizability.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::laws::{MoveCounts, MoveSequence};
use crate::state::{apply, classify, Move, MoveStatus, State};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum OracleError {
    #[error("search stopped after exploring {explored} nodes (cap {cap})")]
    NodeBudgetExceeded { explored: u64, cap: u64 },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Upper bound on explored search nodes; `None` means unbounded.
    pub max_nodes: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionResult {
    pub realizable: bool,
    /// All-valid type-1-3 sequence from the all-zero state to the target.
    pub witness: Option<MoveSequence>,
    /// The successful ordering, for multiset queries.
    pub permutation: Option<Vec<i64>>,
    pub nodes_explored: u64,
}

struct Search<'a> {
    target: &'a [i64],
    target_sum: i64,
    goal: State,
    path: Vec<Move>,
    failed: HashSet<State>,
    nodes: u64,
    max_nodes: Option<u64>,
}

impl Search<'_> {
    fn dfs(&mut self, cur: &State) -> Result<bool, OracleError> {
        self.nodes += 1;
        if let Some(cap) = self.max_nodes {
            if self.nodes > cap {
                return Err(OracleError::NodeBudgetExceeded {
                    explored: self.nodes,
                    cap,
                });
            }
        }
        if *cur == self.goal {
            return Ok(true);
        }
        if self.failed.contains(cur) {
            return Ok(false);
        }
        for mv in self.candidates(cur) {
            let next = apply(cur, mv).expect("candidate moves are admissible");
            self.path.push(mv);
            if self.dfs(&next)? {
                return Ok(true);
            }
            self.path.pop();
        }
        self.failed.insert(cur.clone());
        Ok(false)
    }

    /// Valid moves that keep every position between zero and its target,
    /// in deterministic order: type ascending, then indices lexicographic.
    fn candidates(&self, cur: &State) -> Vec<Move> {
        let n = self.target.len();
        let flat = cur.flatten();
        let sum: i64 = flat.iter().sum();
        let mut out = Vec::new();
        for d in 1..cur.tuple_count() {
            out.push(Move::T1 { d });
        }
        // The final sum counts the type-2 moves, so increments past the
        // target sum can never be repaid.
        if sum < self.target_sum {
            for i in 1..=n {
                if flat[i - 1] < self.target[i - 1]
                    && classify(cur, Move::T2 { i }) == MoveStatus::Valid
                {
                    out.push(Move::T2 { i });
                }
            }
        }
        for i in 1..=n {
            if flat[i - 1] >= self.target[i - 1] {
                continue;
            }
            for j in 1..=n {
                if j == i || flat[j - 1] <= self.target[j - 1] {
                    continue;
                }
                if classify(cur, Move::T3 { i, j }) == MoveStatus::Valid {
                    out.push(Move::T3 { i, j });
                }
            }
        }
        out
    }
}

fn accounting_holds(target: &[i64], witness: &MoveSequence) -> bool {
    let counts = MoveCounts::of(&witness.moves);
    let sum: i64 = target.iter().sum();
    let negatives: i64 = target.iter().map(|&v| (-v).max(0)).sum();
    counts.t1 as i64 == target.len() as i64 - 1
        && counts.t2 as i64 == sum
        && counts.t3 as i64 == negatives
        && counts.t4 + counts.t5 + counts.t6 == 0
}

/// Decide whether the single-tuple state over `target` is reachable from
/// the all-zero state by valid type-1-3 moves. Exact and terminating.
pub fn decide_state(target: &[i64]) -> DecisionResult {
    decide_state_with(target, &SearchOptions::default()).expect("unbounded search cannot be cut")
}

pub fn decide_state_with(
    target: &[i64],
    opts: &SearchOptions,
) -> Result<DecisionResult, OracleError> {
    assert!(!target.is_empty(), "a target needs at least one entry");
    let sum: i64 = target.iter().sum();
    let max = *target.iter().max().unwrap();
    let min = *target.iter().min().unwrap();
    // Both conditions are forced on any reachable single tuple: the sum
    // counts the type-2 moves, and the last decrement to the minimum
    // needs a dominant partner that can never shrink afterwards.
    if sum < 0 || max < min.abs() {
        return Ok(DecisionResult {
            realizable: false,
            witness: None,
            permutation: None,
            nodes_explored: 0,
        });
    }
    let mut search = Search {
        target,
        target_sum: sum,
        goal: State::single(target.to_vec()).expect("nonempty target"),
        path: Vec::new(),
        failed: HashSet::new(),
        nodes: 0,
        max_nodes: opts.max_nodes,
    };
    let found = search.dfs(&State::all_zero(target.len()))?;
    let witness = found.then(|| MoveSequence::new(State::all_zero(target.len()), search.path));
    if let Some(w) = &witness {
        assert!(
            accounting_holds(target, w),
            "witness violates the move accounting identities"
        );
    }
    Ok(DecisionResult {
        realizable: found,
        witness,
        permutation: None,
        nodes_explored: search.nodes,
    })
}

/// Order values for permutation search: larger magnitudes first, and the
/// positive value before the negative one at equal magnitude.
fn rank_key(v: i64) -> (i64, bool) {
    (-v.abs(), v < 0)
}

fn next_permutation(ranks: &mut [usize]) -> bool {
    if ranks.len() < 2 {
        return false;
    }
    let mut i = ranks.len() - 1;
    while i > 0 && ranks[i - 1] >= ranks[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = ranks.len() - 1;
    while ranks[j] <= ranks[i - 1] {
        j -= 1;
    }
    ranks.swap(i - 1, j);
    ranks[i..].reverse();
    true
}

/// Decide whether any ordering of the multiset is realizable, trying each
/// distinct permutation in a fixed deterministic order.
pub fn decide_multiset(values: &[i64]) -> DecisionResult {
    decide_multiset_with(values, &SearchOptions::default()).expect("unbounded search cannot be cut")
}

pub fn decide_multiset_with(
    values: &[i64],
    opts: &SearchOptions,
) -> Result<DecisionResult, OracleError> {
    assert!(!values.is_empty(), "a multiset needs at least one entry");
    let mut ordered = values.to_vec();
    ordered.sort_by_key(|&v| rank_key(v));
    // Permutations of equal values coincide; working on ranks makes the
    // generator skip the duplicates.
    let mut distinct = ordered.clone();
    distinct.dedup();
    let mut ranks: Vec<usize> = ordered
        .iter()
        .map(|v| distinct.iter().position(|w| w == v).unwrap())
        .collect();

    let mut nodes_total = 0u64;
    loop {
        let candidate: Vec<i64> = ranks.iter().map(|&r| distinct[r]).collect();
        let sub_opts = SearchOptions {
            max_nodes: opts.max_nodes.map(|cap| cap.saturating_sub(nodes_total)),
        };
        let res = decide_state_with(&candidate, &sub_opts).map_err(|e| match e {
            OracleError::NodeBudgetExceeded { explored, .. } => OracleError::NodeBudgetExceeded {
                explored: nodes_total + explored,
                cap: opts.max_nodes.unwrap_or(0),
            },
        })?;
        nodes_total += res.nodes_explored;
        if res.realizable {
            return Ok(DecisionResult {
                realizable: true,
                witness: res.witness,
                permutation: Some(candidate),
                nodes_explored: nodes_total,
            });
        }
        if !next_permutation(&mut ranks) {
            return Ok(DecisionResult {
                realizable: false,
                witness: None,
                permutation: None,
                nodes_explored: nodes_total,
            });
        }
    }
}

/// All realizable multisets of `n` values with magnitudes up to `bound`,
/// each sorted descending, in a fixed deterministic order (smaller
/// magnitudes first, positive before negative at equal magnitude).
pub fn enumerate(n: usize, bound: i64) -> Vec<Vec<i64>> {
    assert!(n >= 1, "a multiset needs at least one entry");
    assert!(bound >= 0, "the bound is a magnitude");
    let mut values = vec![0i64];
    for m in 1..=bound {
        values.push(m);
        values.push(-m);
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; 0];
    gen_multisets(&values, n, 0, &mut pick, &mut out);
    out
}

fn gen_multisets(
    values: &[i64],
    n: usize,
    from: usize,
    pick: &mut Vec<usize>,
    out: &mut Vec<Vec<i64>>,
) {
    if pick.len() == n {
        let mut multiset: Vec<i64> = pick.iter().map(|&idx| values[idx]).collect();
        if decide_multiset(&multiset).realizable {
            multiset.sort_unstable_by(|a, b| b.cmp(a));
            out.push(multiset);
        }
        return;
    }
    for idx in from..values.len() {
        pick.push(idx);
        gen_multisets(values, n, idx, pick, out);
        pick.pop();
    }
}

/// Valid moves of the allowed types, in deterministic order: type
/// ascending, then indices lexicographic.
pub fn valid_moves(state: &State, types: &[u8]) -> Vec<Move> {
    let n = state.len();
    let mut out = Vec::new();
    if types.contains(&1) {
        for d in 1..state.tuple_count() {
            out.push(Move::T1 { d });
        }
    }
    if types.contains(&2) {
        for i in 1..=n {
            let mv = Move::T2 { i };
            if classify(state, mv) == MoveStatus::Valid {
                out.push(mv);
            }
        }
    }
    for kind in [3u8, 4, 5, 6] {
        if !types.contains(&kind) {
            continue;
        }
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                let mv = match kind {
                    3 => Move::T3 { i, j },
                    4 => Move::T4 { i, j },
                    5 => Move::T5 { i, j },
                    _ => Move::T6 { i, j },
                };
                if classify(state, mv) == MoveStatus::Valid {
                    out.push(mv);
                }
            }
        }
    }
    out
}

/// Reproducible stream of random all-valid sequences from the all-zero
/// state. The same seed yields the identical stream.
pub fn gen_valid_sequences(
    n: usize,
    max_moves: usize,
    types: &[u8],
    seed: u64,
) -> impl Iterator<Item = MoveSequence> {
    assert!(n >= 1, "a state needs at least one entry");
    let types = types.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::from_fn(move || {
        let len = rng.gen_range(0..=max_moves);
        let mut state = State::all_zero(n);
        let mut moves = Vec::with_capacity(len);
        for _ in 0..len {
            let options = valid_moves(&state, &types);
            if options.is_empty() {
                break;
            }
            let mv = options[rng.gen_range(0..options.len())];
            state = apply(&state, mv).expect("valid moves are admissible");
            moves.push(mv);
        }
        Some(MoveSequence::new(State::all_zero(n), moves))
    })
}

/// Visit every all-valid sequence (including the empty one) of at most
/// `max_moves` moves of the allowed types, in deterministic order.
pub fn for_each_valid_sequence<F: FnMut(&[Move], &State)>(
    n: usize,
    max_moves: usize,
    types: &[u8],
    f: &mut F,
) {
    assert!(n >= 1, "a state needs at least one entry");
    let mut path = Vec::with_capacity(max_moves);
    let state = State::all_zero(n);
    visit(&state, max_moves, types, &mut path, f);
}

fn visit<F: FnMut(&[Move], &State)>(
    state: &State,
    budget: usize,
    types: &[u8],
    path: &mut Vec<Move>,
    f: &mut F,
) {
    f(path, state);
    if budget == 0 {
        return;
    }
    for mv in valid_moves(state, types) {
        let next = apply(state, mv).expect("valid moves are admissible");
        path.push(mv);
        visit(&next, budget - 1, types, path, f);
        path.pop();
    }
}
