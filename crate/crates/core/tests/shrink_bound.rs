//! The shrinker only deletes clauses and literals, so every formula it can
//! reach from `frequency_padded(10)` keeps the clause order and draws each
//! clause from a non-empty literal subset of a distinct original clause.
//! Enumerating that space settles how small a FalseUnsat witness can get.

use x3sat::corpus::frequency_padded;
use x3sat::formula::{Clause, FormulaState};
use x3sat::harness::{compare, shrink, Comparison, DisagreementKind};
use x3sat::salum::{OrderingPolicy, PolarityOrder};

fn sub_clauses(c: &Clause) -> Vec<Clause> {
    let lits = c.literals();
    (1u32..1 << lits.len())
        .map(|mask| {
            let kept = lits
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &l)| l);
            Clause::new(kept.collect()).unwrap()
        })
        .collect()
}

/// FalseUnsat instances with at most three clauses in the deletion closure.
fn small_false_unsat(f: &FormulaState, p: &OrderingPolicy) -> Vec<FormulaState> {
    let subs: Vec<Vec<Clause>> = f.clauses().iter().map(sub_clauses).collect();
    let n = subs.len();
    let mut picks: Vec<Vec<Clause>> = Vec::new();
    for i in 0..n {
        for a in &subs[i] {
            picks.push(vec![a.clone()]);
            for j in i + 1..n {
                for b in &subs[j] {
                    picks.push(vec![a.clone(), b.clone()]);
                    for later in &subs[j + 1..] {
                        for c in later {
                            picks.push(vec![a.clone(), b.clone(), c.clone()]);
                        }
                    }
                }
            }
        }
    }
    picks
        .into_iter()
        .map(|cs| f.with_clauses(cs).unwrap())
        .filter(|g| {
            matches!(compare(g, p), Comparison::Disagreement(d) if d.kind == DisagreementKind::FalseUnsat)
        })
        .collect()
}

#[test]
fn frequency_witness_needs_four_clauses() {
    let f = frequency_padded(10).unwrap();
    let freq = OrderingPolicy::frequency(PolarityOrder::PositiveFirst);
    assert!(small_false_unsat(&f, &freq).is_empty());

    let d = compare(&f, &freq).disagreement().cloned().unwrap();
    assert_eq!(shrink(&d).unwrap().formula.clauses().len(), 4);
}

// The same search does find small witnesses when the order needs no help.
#[test]
fn search_finds_lexicographic_witnesses() {
    let f = frequency_padded(10).unwrap();
    let lex = OrderingPolicy::lexicographic(PolarityOrder::PositiveFirst);
    let found = small_false_unsat(&f, &lex);
    assert!(found.iter().any(|g| g.clauses() == &f.clauses()[..3]));
}
