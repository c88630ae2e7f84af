//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! The exhaustive sweeps are exact at their stated scale; the randomized
//! sweep uses fixed seeds and is reproducible bit for bit.

use crealize::eliminate::{eliminate_all, eliminate_last, verify_equivalence};
use crealize::laws::{
    check_dominance, check_incdec, check_permanence, run, MoveCounts, MoveSequence,
};
use crealize::oracle::{
    decide_multiset, decide_state, for_each_valid_sequence, gen_valid_sequences, valid_moves,
};
use crealize::state::{apply, classify, Move, MoveStatus, State};
use crealize::swap::{normalize, pull_t2_front, swap_adjacent, SwapClassification, SwapError};

const ALL_TYPES: [u8; 6] = [1, 2, 3, 4, 5, 6];

fn state(tuples: &[&[i64]]) -> State {
    State::new(tuples.iter().map(|t| t.to_vec()).collect()).unwrap()
}

/// All states with `n` entries in `[-bound, bound]` split into at most
/// `max_tuples` tuples.
fn all_states(n: usize, bound: i64, max_tuples: usize) -> Vec<State> {
    let mut value_rows = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for row in &value_rows {
            for v in -bound..=bound {
                let mut r: Vec<i64> = row.clone();
                r.push(v);
                next.push(r);
            }
        }
        value_rows = next;
    }
    let mut splits: Vec<Vec<usize>> = Vec::new();
    // Tuple shapes are compositions of n with a bounded number of parts.
    fn compositions(n: usize, max_parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() == max_parts {
            return;
        }
        for first in 1..=n {
            cur.push(first);
            compositions(n - first, max_parts, cur, out);
            cur.pop();
        }
    }
    compositions(n, max_tuples, &mut Vec::new(), &mut splits);
    let mut out = Vec::new();
    for row in &value_rows {
        for shape in &splits {
            let mut tuples = Vec::new();
            let mut at = 0;
            for &len in shape {
                tuples.push(row[at..at + len].to_vec());
                at += len;
            }
            out.push(State::new(tuples).unwrap());
        }
    }
    out
}

/// Every admissible move for a state, syntactic indices up to n.
fn admissible_moves(s: &State) -> Vec<Move> {
    let n = s.len();
    let mut out = Vec::new();
    for d in 1..s.tuple_count() {
        out.push(Move::T1 { d });
    }
    for i in 1..=n {
        out.push(Move::T2 { i });
    }
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            out.push(Move::T3 { i, j });
            out.push(Move::T4 { i, j });
            out.push(Move::T5 { i, j });
            out.push(Move::T6 { i, j });
        }
    }
    out.retain(|&mv| classify(s, mv) != MoveStatus::NotAdmissible);
    out
}

#[test]
fn c01_validity_table_reference_state() {
    let phi = state(&[&[8, -2, -3, 1, -4], &[5, -1, -2]]);
    let admissible = [
        (Move::T1 { d: 1 }, MoveStatus::Valid),
        (Move::T2 { i: 6 }, MoveStatus::Valid),
        (Move::T2 { i: 8 }, MoveStatus::Invalid),
        (Move::T3 { i: 6, j: 8 }, MoveStatus::Valid),
        (Move::T4 { i: 6, j: 8 }, MoveStatus::Invalid),
        (Move::T3 { i: 1, j: 4 }, MoveStatus::Invalid),
        (Move::T4 { i: 1, j: 4 }, MoveStatus::Valid),
        (Move::T3 { i: 1, j: 8 }, MoveStatus::Invalid),
        (Move::T4 { i: 1, j: 8 }, MoveStatus::Invalid),
        (Move::T5 { i: 6, j: 8 }, MoveStatus::Valid),
        (Move::T6 { i: 6, j: 8 }, MoveStatus::Invalid),
        (Move::T5 { i: 1, j: 4 }, MoveStatus::Invalid),
        (Move::T6 { i: 1, j: 4 }, MoveStatus::Valid),
        (Move::T5 { i: 1, j: 8 }, MoveStatus::Invalid),
        (Move::T6 { i: 1, j: 8 }, MoveStatus::Invalid),
    ];
    for (mv, want) in admissible {
        assert_eq!(classify(&phi, mv), want, "move {mv}");
    }
    let not_admissible = [
        Move::T1 { d: 2 },
        Move::T2 { i: 10 },
        Move::T3 { i: 1, j: 9 },
        Move::T4 { i: 11, j: 12 },
        Move::T5 { i: 12, j: 1 },
        Move::T6 { i: 1, j: 13 },
    ];
    for mv in not_admissible {
        assert_eq!(classify(&phi, mv), MoveStatus::NotAdmissible, "move {mv}");
    }
    println!("criterion 1: pass (15 verdicts on the reference state)");
}

#[test]
fn c02_dominant_position_sets() {
    let s = state(&[&[8, -2, 8, 1, -4], &[-1, 5, -6], &[2, -3, 5, -5]]);
    let mut by_tuple = vec![Vec::new(); s.tuple_count()];
    for pos in 1..=s.len() {
        if s.is_dominant(pos).unwrap() {
            by_tuple[s.tuple_of(pos).unwrap() - 1].push(pos);
        }
    }
    assert_eq!(by_tuple, vec![vec![1, 3], vec![], vec![11]]);
    println!("criterion 2: pass (dominant sets {{1,3}}, {{}}, {{11}})");
}

#[test]
fn c03_swap_suite_exhaustive() {
    let mut pairs = 0u64;
    let mut corollary_pairs = 0u64;
    for n in 1..=3 {
        for phi in all_states(n, 2, 2) {
            for m1 in admissible_moves(&phi) {
                let mid = apply(&phi, m1).unwrap();
                for m2 in admissible_moves(&mid) {
                    let seq = MoveSequence::new(phi.clone(), vec![m1, m2]);
                    if m1.kind() == 1 && m2.kind() == 1 {
                        assert_eq!(swap_adjacent(&seq, 1), Err(SwapError::SwapUndefined));
                        continue;
                    }
                    pairs += 1;
                    // swap_adjacent re-checks commutation internally; a
                    // SwapError here falsifies the swap lemma.
                    let outcome = swap_adjacent(&seq, 1).unwrap();
                    assert_eq!(
                        run(&outcome.sequence).unwrap().final_state(),
                        run(&seq).unwrap().final_state()
                    );
                    // Valid type-1-3 move followed by an invalid T2(k),
                    // with the first move not decrementing k: the swap
                    // never leaves both moves invalid.
                    if let Move::T2 { i: k } = m2 {
                        let first_ok = classify(&phi, m1) == MoveStatus::Valid && m1.kind() <= 3;
                        let second_invalid = classify(&mid, m2) == MoveStatus::Invalid;
                        let excluded = matches!(m1, Move::T3 { j, .. } if j == k);
                        if first_ok && second_invalid && !excluded {
                            corollary_pairs += 1;
                            assert_ne!(
                                outcome.classification,
                                SwapClassification::BothInvalid,
                                "state {phi}, moves {m1}; {m2}"
                            );
                        }
                    }
                }
            }
        }
    }
    assert!(pairs > 100_000, "sweep too small: {pairs}");
    assert!(
        corollary_pairs > 1_000,
        "corollary sweep too small: {corollary_pairs}"
    );
    println!("criterion 3: pass ({pairs} swaps, {corollary_pairs} never-both-invalid pairs)");
}

#[test]
fn c04_laws_suite_exhaustive() {
    let mut traces = 0u64;
    for n in 1..=3 {
        for_each_valid_sequence(n, 6, &ALL_TYPES, &mut |moves, _| {
            let seq = MoveSequence::new(State::all_zero(n), moves.to_vec());
            let trace = run(&seq).unwrap();
            assert!(trace.all_valid());
            assert!(check_permanence(&trace));
            assert!(check_dominance(&trace).unwrap());
            traces += 1;
        });
    }
    let mut incdec_traces = 0u64;
    for n in 1..=3 {
        for_each_valid_sequence(n, 6, &[1, 2, 3, 6], &mut |moves, _| {
            let seq = MoveSequence::new(State::all_zero(n), moves.to_vec());
            assert!(check_incdec(&run(&seq).unwrap()).unwrap());
            incdec_traces += 1;
        });
    }
    assert!(traces > 40_000, "sweep too small: {traces}");
    println!("criterion 4: pass ({traces} traces, {incdec_traces} increasing-decreasing traces)");
}

#[test]
fn c05_elimination_exhaustive() {
    let mut eliminations = 0u64;
    for n in 1..=3 {
        for_each_valid_sequence(n, 5, &[1, 2, 3], &mut |prefix, last_state| {
            for mv in valid_moves(last_state, &[4, 5, 6]) {
                let mut moves = prefix.to_vec();
                moves.push(mv);
                let seq = MoveSequence::new(State::all_zero(n), moves);
                let report = eliminate_last(&seq)
                    .unwrap_or_else(|e| panic!("eliminate_last failed on {seq:?}: {e}"));
                assert!(report.output.moves.iter().all(|m| m.kind() <= 3));
                assert!(verify_equivalence(&seq, &report.output));
                eliminations += 1;
            }
        });
    }
    assert!(eliminations > 4_000, "sweep too small: {eliminations}");
    println!("criterion 5: pass ({eliminations} exhaustive eliminations)");
}

fn seeded_sequences() -> impl Iterator<Item = MoveSequence> {
    (1..=5usize).flat_map(|n| gen_valid_sequences(n, 12, &ALL_TYPES, 1000 + n as u64).take(2000))
}

#[test]
fn c06_elimination_randomized() {
    let mut count = 0u64;
    for seq in seeded_sequences() {
        let report =
            eliminate_all(&seq).unwrap_or_else(|e| panic!("eliminate_all failed on {seq:?}: {e}"));
        assert!(report.output.moves.iter().all(|m| m.kind() <= 3));
        assert!(verify_equivalence(&seq, &report.output));
        count += 1;
    }
    assert_eq!(count, 10_000);
    println!("criterion 6: pass (10000 randomized eliminations)");
}

#[test]
fn c07_single_tuple_finals_are_decided_realizable() {
    let mut decided = 0u64;
    for seq in seeded_sequences() {
        let final_state = run(&seq).unwrap().final_state().clone();
        if final_state.tuple_count() != 1 {
            continue;
        }
        let target = final_state.flatten();
        let res = decide_state(&target);
        assert!(
            res.realizable,
            "final state {final_state} not decided realizable"
        );
        decided += 1;
    }
    assert!(decided > 1_000, "too few single-tuple finals: {decided}");
    println!("criterion 7: pass ({decided} single-tuple finals decided realizable)");
}

#[test]
fn c08_known_decision_cases() {
    assert!(decide_state(&[1, -1, 1, -1]).realizable);
    assert!(!decide_state(&[1, 1, -1, -1]).realizable);
    assert!(decide_multiset(&[1, 1, -1, -1]).realizable);

    let res = decide_multiset(&[5, 4, 3, 2, 1, -1, -2, -3, -4, -5]);
    assert!(res.realizable);
    let witness = res.witness.unwrap();
    let perm = res.permutation.unwrap();
    let trace = run(&witness).unwrap();
    assert!(trace.all_valid());
    assert_eq!(trace.final_state(), &State::single(perm).unwrap());
    println!("criterion 8: pass (known positive and negative cases, witness replays)");
}

fn accounting_ok(target: &[i64], witness: &MoveSequence) -> bool {
    let counts = MoveCounts::of(&witness.moves);
    counts.t1 == target.len() - 1
        && counts.t2 as i64 == target.iter().sum::<i64>()
        && counts.t3 as i64 == target.iter().map(|&v| (-v).max(0)).sum::<i64>()
        && counts.t4 + counts.t5 + counts.t6 == 0
}

#[test]
fn c09_witness_accounting_identities() {
    let mut checked = 0u64;
    // Witnesses from the known cases.
    for target in [vec![1, -1, 1, -1], vec![0], vec![2, -1, 0, 1]] {
        let res = decide_state(&target);
        assert!(res.realizable);
        assert!(accounting_ok(&target, &res.witness.unwrap()));
        checked += 1;
    }
    let res = decide_multiset(&[5, 4, 3, 2, 1, -1, -2, -3, -4, -5]);
    assert!(accounting_ok(
        &res.permutation.unwrap(),
        &res.witness.unwrap()
    ));
    checked += 1;
    // Witnesses from the randomized single-tuple finals.
    for seq in seeded_sequences() {
        let final_state = run(&seq).unwrap().final_state().clone();
        if final_state.tuple_count() != 1 {
            continue;
        }
        let target = final_state.flatten();
        let res = decide_state(&target);
        assert!(res.realizable);
        assert!(accounting_ok(&target, &res.witness.unwrap()));
        checked += 1;
    }
    assert!(checked > 1_000);
    println!("criterion 9: pass ({checked} witnesses satisfy the accounting identities)");
}

#[test]
fn c10_normalization_suite() {
    let mut sequences = 0u64;
    for n in 1..=3 {
        for_each_valid_sequence(n, 6, &[1, 2, 3], &mut |moves, last_state| {
            let seq = MoveSequence::new(State::all_zero(n), moves.to_vec());

            let pulled = pull_t2_front(&seq).unwrap();
            let pulled_trace = run(&pulled).unwrap();
            assert!(pulled_trace.all_valid());
            assert_eq!(pulled_trace.final_state(), last_state);
            assert_eq!(pull_t2_front(&pulled).unwrap(), pulled);

            let norm = normalize(&seq).unwrap();
            let norm_trace = run(&norm).unwrap();
            assert!(norm_trace.all_valid());
            assert_eq!(norm_trace.final_state(), last_state);
            assert_eq!(normalize(&norm).unwrap(), norm);

            sequences += 1;
        });
    }
    assert!(sequences > 10_000, "sweep too small: {sequences}");
    println!("criterion 10: pass ({sequences} sequences normalized)");
}
