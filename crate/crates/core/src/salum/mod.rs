//! The backtracking-free exactly-one propagation procedure.
//!
//! Four mutually dependent steps:
//!
//! * [`reduce`] propagates one literal through the clauses once, with no
//!   cascading of the literals it derives.
//! * [`scope`] runs `reduce` over a literal and everything it implies until
//!   no unprocessed literal remains.
//! * [`remove`] commits the opposite polarity of a literal whose scope failed.
//! * [`scan`] drives the run: it decides on variables one at a time and
//!   never revisits a decision once it has been committed.
//!
//! A successful scope is committed to the running state. A failed scope is
//! answered by flipping that single literal; when the flip also fails the
//! run reports UNSAT even though an earlier decision may be at fault.

mod policy;
mod trace;

pub use policy::{OrderingKind, OrderingPolicy, PolarityOrder, PolicyError};
pub use trace::{ConflictSite, EventKind, ReplayError, Trace, TraceEvent};

use crate::formula::{Conflict, FormulaState, Literal, PartialAssignment};

/// What the procedure claims about its input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SalumOutcome {
    /// The final minterm and the formula as the run left it. Clauses may
    /// remain and variables may be unbound.
    ClaimedSat {
        minterm: PartialAssignment,
        formula: FormulaState,
    },
    ClaimedUnsat,
}

impl SalumOutcome {
    pub fn is_claimed_sat(&self) -> bool {
        matches!(self, SalumOutcome::ClaimedSat { .. })
    }
}

#[derive(Debug, Clone)]
pub struct SalumVerdict {
    pub outcome: SalumOutcome,
    pub trace: Trace,
    /// Number of remove steps taken; never exceeds the variable count.
    pub removes: usize,
}

/// One pass of propagation of `r` over `f`.
///
/// Every clause containing `r` is consumed and its literals forced; then
/// `¬r` is deleted from the clauses containing it and any clause left with
/// one literal is migrated into the minterm. Literals derived here are not
/// themselves propagated. Returns the literals this call bound, in order,
/// and the rewritten formula.
pub fn reduce(f: &FormulaState, r: Literal) -> Result<(PartialAssignment, FormulaState), Conflict> {
    reduce_traced(f, r, &mut Trace::new())
}

/// Propagates `r` and all literals it implies, one reduce call each.
pub fn scope(r: Literal, f: &FormulaState) -> Result<(PartialAssignment, FormulaState), Conflict> {
    scope_traced(r, f, &mut Trace::new())
}

/// Commits `¬r` after one reduce call over `¬r`.
///
/// An `Err` is the procedure's UNSAT answer.
pub fn remove(r: Literal, f: &FormulaState) -> Result<FormulaState, Conflict> {
    remove_traced(r, f, &mut Trace::new())
}

/// Runs the whole procedure on `f` under `policy`.
pub fn scan(f: &FormulaState, policy: &OrderingPolicy) -> SalumVerdict {
    let mut trace = Trace::new();
    let mut state = f.clone();
    let mut removes = 0usize;
    let num_vars = f.num_vars() as usize;

    let outcome = 'run: loop {
        trace.push(EventKind::ScanEnter, None, None, Some(&state));

        // Literals still in the clauses whose negation is already bound.
        let stale = state
            .clauses()
            .iter()
            .flat_map(|c| c.literals().iter().copied())
            .find(|l| state.minterm().contains(l.negate()));
        if let Some(r) = stale {
            let before = state.clone();
            match remove_traced(r, &state, &mut trace) {
                Ok(next) => {
                    removes += 1;
                    assert!(removes <= num_vars, "remove steps exceed variable count");
                    state = next;
                    continue 'run;
                }
                Err(_) => break 'run (SalumOutcome::ClaimedUnsat, before),
            }
        }

        let Some(&var) = policy.variable_order(&state).first() else {
            let minterm = state.minterm().clone();
            break 'run (
                SalumOutcome::ClaimedSat {
                    minterm,
                    formula: state.clone(),
                },
                state,
            );
        };

        for r in policy.polarities(var) {
            trace.push(EventKind::Decision, Some(r), None, Some(&state));
            match scope_traced(r, &state, &mut trace) {
                Ok((_, next)) => state = next,
                Err(_) => {
                    let before = state.clone();
                    match remove_traced(r, &state, &mut trace) {
                        Ok(next) => {
                            removes += 1;
                            assert!(removes <= num_vars, "remove steps exceed variable count");
                            state = next;
                            break;
                        }
                        Err(_) => break 'run (SalumOutcome::ClaimedUnsat, before),
                    }
                }
            }
        }
        assert!(
            !state.clauses().iter().any(|c| c.mentions(var)),
            "variable {var} still occurs after its decision"
        );
    };

    let (outcome, last) = outcome;
    trace.push(
        EventKind::Verdict {
            claimed_sat: outcome.is_claimed_sat(),
        },
        None,
        None,
        Some(&last),
    );
    SalumVerdict {
        outcome,
        trace,
        removes,
    }
}

pub(crate) fn reduce_traced(
    f: &FormulaState,
    r: Literal,
    trace: &mut Trace,
) -> Result<(PartialAssignment, FormulaState), Conflict> {
    let mut state = f.clone();
    let mut added = PartialAssignment::new();

    let mut k = 0;
    while k < state.clauses().len() {
        if !state.clauses()[k].contains(r) {
            k += 1;
            continue;
        }
        let clause = state.clauses_mut().remove(k);
        for lit in clause.propagation_of(r) {
            if let Err(conflict) = state.minterm_mut().bind(lit) {
                trace.push(
                    EventKind::Conflict(ConflictSite::Propagation),
                    Some(lit),
                    Some(k),
                    Some(&state),
                );
                return Err(conflict);
            }
            added
                .bind(lit)
                .expect("reduce bindings are a subset of the minterm");
        }
        trace.push(EventKind::Propagation, Some(r), Some(k), None);
    }

    let falsified = r.negate();
    let mut k = 0;
    while k < state.clauses().len() {
        if !state.clauses()[k].contains(falsified) {
            k += 1;
            continue;
        }
        let Some(shorter) = state.clauses()[k].without(falsified) else {
            trace.push(
                EventKind::Conflict(ConflictSite::EmptyClause),
                Some(falsified),
                Some(k),
                Some(&state),
            );
            return Err(Conflict { literal: falsified });
        };
        state.clauses_mut()[k] = shorter;
        trace.push(EventKind::ClauseDeletion, Some(falsified), Some(k), None);
        if let Some(unit) = state.clauses()[k].unit() {
            state.clauses_mut().remove(k);
            if let Err(conflict) = state.minterm_mut().bind(unit) {
                trace.push(
                    EventKind::Conflict(ConflictSite::UnitMigration),
                    Some(unit),
                    Some(k),
                    Some(&state),
                );
                return Err(conflict);
            }
            added
                .bind(unit)
                .expect("reduce bindings are a subset of the minterm");
            trace.push(EventKind::UnitMigration, Some(unit), Some(k), None);
            continue;
        }
        k += 1;
    }

    trace.push(EventKind::Reduced, Some(r), None, Some(&state));
    Ok((added, state))
}

pub(crate) fn scope_traced(
    r: Literal,
    f: &FormulaState,
    trace: &mut Trace,
) -> Result<(PartialAssignment, FormulaState), Conflict> {
    let mut state = f.clone();
    if let Err(conflict) = state.minterm_mut().bind(r) {
        trace.push(
            EventKind::Conflict(ConflictSite::Assignment),
            Some(r),
            None,
            Some(&state),
        );
        return Err(conflict);
    }
    trace.push(EventKind::Propagation, Some(r), None, None);

    let mut closure = PartialAssignment::new();
    closure.bind(r).expect("fresh assignment");
    // FIFO over insertion order
    let mut next = 0;
    while let Some(pending) = closure.literal_at(next) {
        next += 1;
        let (added, reduced) = reduce_traced(&state, pending, trace)?;
        for lit in added.literals() {
            if let Err(conflict) = closure.bind(lit) {
                trace.push(
                    EventKind::Conflict(ConflictSite::Assignment),
                    Some(lit),
                    None,
                    Some(&reduced),
                );
                return Err(conflict);
            }
        }
        state = reduced;
    }
    Ok((closure, state))
}

pub(crate) fn remove_traced(
    r: Literal,
    f: &FormulaState,
    trace: &mut Trace,
) -> Result<FormulaState, Conflict> {
    trace.push(EventKind::RemoveInvoked, Some(r), None, Some(f));
    let flipped = r.negate();
    let (_, mut state) = reduce_traced(f, flipped, trace)?;
    if let Err(conflict) = state.minterm_mut().bind(flipped) {
        trace.push(
            EventKind::Conflict(ConflictSite::Assignment),
            Some(flipped),
            None,
            Some(&state),
        );
        return Err(conflict);
    }
    trace.push(EventKind::Propagation, Some(flipped), None, None);
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Clause;

    fn lits(signed: &[i64]) -> PartialAssignment {
        PartialAssignment::from_literals(signed.iter().map(|&s| Literal::from_signed(s).unwrap())).unwrap()
    }

    fn clauses(signed: &[&[i64]]) -> Vec<Clause> {
        signed.iter().map(|c| Clause::from_signed(c).unwrap()).collect()
    }

    fn phi() -> FormulaState {
        FormulaState::from_signed(5, &[&[1, 2, 3], &[2, 4, 5], &[3, 4, -5]]).unwrap()
    }

    fn lex_pos() -> OrderingPolicy {
        OrderingPolicy::lexicographic(PolarityOrder::PositiveFirst)
    }

    #[test]
    fn reduce_on_a_consumes_only_the_first_clause() {
        let (bound, f) = reduce(&phi(), Literal::pos(1)).unwrap();
        assert_eq!(bound, lits(&[1, -2, -3]));
        assert_eq!(f.minterm(), &lits(&[1, -2, -3]));
        assert_eq!(f.clauses(), clauses(&[&[2, 4, 5], &[3, 4, -5]]).as_slice());
    }

    #[test]
    fn reduce_on_not_b_shortens_second_clause() {
        let (_, f) = reduce(&phi(), Literal::pos(1)).unwrap();
        let (bound, g) = reduce(&f, Literal::neg(2)).unwrap();
        assert!(bound.is_empty());
        assert_eq!(g.clauses(), clauses(&[&[4, 5], &[3, 4, -5]]).as_slice());
    }

    #[test]
    fn reduce_does_not_cascade() {
        // ¬x turns both clauses into units y and ¬y; the second migration clashes.
        let f = FormulaState::new(5, lits(&[1, -2, -3]), clauses(&[&[4, 5], &[4, -5]])).unwrap();
        let err = reduce(&f, Literal::neg(4)).unwrap_err();
        assert_eq!(err.literal, Literal::neg(5));

        // A migrated unit is bound but not propagated further.
        let g = FormulaState::from_signed(3, &[&[1, 2], &[2, 3]]).unwrap();
        let (bound, h) = reduce(&g, Literal::neg(1)).unwrap();
        assert_eq!(bound, lits(&[2]));
        assert_eq!(h.clauses(), clauses(&[&[2, 3]]).as_slice());
    }

    #[test]
    fn reduce_detects_emptied_clause() {
        let f = FormulaState::from_signed(1, &[&[1]]).unwrap();
        assert_eq!(reduce(&f, Literal::neg(1)).unwrap_err().literal, Literal::pos(1));
    }

    #[test]
    fn scope_of_a_reaches_the_doomed_state() {
        let (closure, f) = scope(Literal::pos(1), &phi()).unwrap();
        assert_eq!(closure, lits(&[1, -2, -3]));
        assert_eq!(f.minterm(), &lits(&[1, -2, -3]));
        assert_eq!(f.clauses(), clauses(&[&[4, 5], &[4, -5]]).as_slice());
    }

    #[test]
    fn scope_of_opposite_polarity_conflicts_with_committed_literal() {
        let (_, committed) = scope(Literal::pos(1), &phi()).unwrap();
        assert_eq!(
            scope(Literal::neg(1), &committed).unwrap_err().literal,
            Literal::neg(1)
        );
    }

    #[test]
    fn scope_with_no_clauses_binds_only_the_seed() {
        let f = FormulaState::from_clauses(3, vec![]).unwrap();
        let (closure, g) = scope(Literal::pos(3), &f).unwrap();
        assert_eq!(closure, lits(&[3]));
        assert_eq!(g.minterm(), &lits(&[3]));
        assert!(g.clauses().is_empty());
    }

    #[test]
    fn remove_leaves_formula_unaffected_when_literal_is_absent() {
        let (_, committed) = scope(Literal::pos(1), &phi()).unwrap();
        let after = remove(Literal::neg(1), &committed).unwrap();
        assert_eq!(after, committed);

        let f = FormulaState::from_signed(3, &[&[1, 2]]).unwrap();
        let g = remove(Literal::pos(3), &f).unwrap();
        assert_eq!(g.minterm(), &lits(&[-3]));
        assert_eq!(g.clauses(), f.clauses());
    }

    #[test]
    fn remove_reports_unsat_on_doomed_state() {
        let (_, committed) = scope(Literal::pos(1), &phi()).unwrap();
        assert!(remove(Literal::pos(4), &committed).is_err());
    }

    #[test]
    fn remove_commit_conflict_is_a_distinct_exit() {
        let f = FormulaState::new(2, lits(&[1]), clauses(&[&[2]])).unwrap();
        let mut trace = Trace::new();
        let err = remove_traced(Literal::pos(1), &f, &mut trace).unwrap_err();
        assert_eq!(err.literal, Literal::neg(1));
        let last = trace.events().last().unwrap();
        assert_eq!(last.kind, EventKind::Conflict(ConflictSite::Assignment));
    }

    #[test]
    fn scan_claims_unsat_on_base_formula() {
        let verdict = scan(&phi(), &lex_pos());
        assert_eq!(verdict.outcome, SalumOutcome::ClaimedUnsat);
        assert_eq!(verdict.removes, 1);
        verdict.trace.replay().unwrap();
    }

    #[test]
    fn scan_on_two_literal_clause() {
        let f = FormulaState::from_signed(2, &[&[1, 2]]).unwrap();
        let verdict = scan(&f, &lex_pos());
        match verdict.outcome {
            SalumOutcome::ClaimedSat { minterm, formula } => {
                assert_eq!(minterm, lits(&[1, -2]));
                assert!(formula.clauses().is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn scan_on_unit_clause_under_every_polarity() {
        let f = FormulaState::from_signed(1, &[&[1]]).unwrap();
        for polarity in [PolarityOrder::PositiveFirst, PolarityOrder::NegativeFirst] {
            let verdict = scan(&f, &OrderingPolicy::lexicographic(polarity));
            match &verdict.outcome {
                SalumOutcome::ClaimedSat { minterm, .. } => assert_eq!(minterm, &lits(&[1])),
                other => panic!("unexpected {other:?}"),
            }
            verdict.trace.replay().unwrap();
        }
    }

    #[test]
    fn scan_first_removes_stale_literals() {
        // minterm binds ¬x1 while x1 still occurs
        let f = FormulaState::new(3, lits(&[-1]), clauses(&[&[1, 2, 3]])).unwrap();
        let verdict = scan(&f, &lex_pos());
        assert!(matches!(verdict.trace.events()[1].kind, EventKind::RemoveInvoked));
        verdict.trace.replay().unwrap();
    }

    #[test]
    fn unsat_runs_end_with_a_conflict_inside_remove() {
        let f = FormulaState::from_signed(2, &[&[1, 2], &[1, -2]]).unwrap();
        for polarity in [PolarityOrder::PositiveFirst, PolarityOrder::NegativeFirst] {
            let verdict = scan(&f, &OrderingPolicy::lexicographic(polarity));
            assert_eq!(verdict.outcome, SalumOutcome::ClaimedUnsat);
            let events = verdict.trace.events();
            let remove_at = events
                .iter()
                .rposition(|e| e.kind == EventKind::RemoveInvoked)
                .unwrap();
            assert!(events[remove_at..]
                .iter()
                .any(|e| matches!(e.kind, EventKind::Conflict(_))));
        }
    }

    #[test]
    fn replay_rejects_tampered_snapshot() {
        let verdict = scan(&phi(), &lex_pos());
        let mut events = verdict.trace.events().to_vec();
        let i = events.iter().position(|e| e.kind == EventKind::Reduced).unwrap();
        events[i].snapshot = Some(phi());
        assert!(Trace::from_events(events).replay().is_err());
    }
}
