//! Execution record of a propagation run and its replay check.

use thiserror::Error;

use crate::formula::{Clause, FormulaState, Literal, PartialAssignment};

/// Where a conflict was detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConflictSite {
    /// A plain binding into the minterm: the seed of a scope, or the commit
    /// of the flipped literal at the end of a remove.
    Assignment,
    /// Forcing the literals of a clause that contains the reduced literal.
    Propagation,
    /// Migrating a clause that shrank to a unit.
    UnitMigration,
    /// Deleting the last literal of a clause.
    EmptyClause,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    ScanEnter,
    Decision,
    /// With a clause index: the clause was consumed by the literal and its
    /// other literals forced false. Without: a plain binding.
    Propagation,
    ClauseDeletion,
    UnitMigration,
    /// End of one reduce call.
    Reduced,
    Conflict(ConflictSite),
    RemoveInvoked,
    Verdict {
        claimed_sat: bool,
    },
}

impl EventKind {
    pub fn carries_snapshot(self) -> bool {
        !matches!(
            self,
            EventKind::Propagation | EventKind::ClauseDeletion | EventKind::UnitMigration
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub kind: EventKind,
    pub literal: Option<Literal>,
    pub clause_index: Option<usize>,
    pub snapshot: Option<FormulaState>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    events: Vec<TraceEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("event {index}: {reason}")]
pub struct ReplayError {
    pub index: usize,
    pub reason: String,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_events(events: Vec<TraceEvent>) -> Self {
        Trace { events }
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub(crate) fn push(
        &mut self,
        kind: EventKind,
        literal: Option<Literal>,
        clause_index: Option<usize>,
        snapshot: Option<&FormulaState>,
    ) {
        self.events.push(TraceEvent {
            kind,
            literal,
            clause_index,
            snapshot: snapshot.cloned(),
        });
    }

    pub fn conflicts(&self) -> impl Iterator<Item = &TraceEvent> {
        self.events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Conflict(_)))
    }

    /// Re-applies every rewriting event to the preceding state and checks
    /// that each snapshot-bearing event agrees with the result.
    ///
    /// A conflict abandons the work in progress: the state reverts to the
    /// snapshot of the last decision or remove.
    pub fn replay(&self) -> Result<(), ReplayError> {
        let mut current: Option<FormulaState> = None;
        let mut anchor: Option<FormulaState> = None;
        for (index, event) in self.events.iter().enumerate() {
            let fail = |reason: String| ReplayError { index, reason };
            if event.kind.carries_snapshot() && event.snapshot.is_none() {
                return Err(fail("missing snapshot".into()));
            }
            if event.kind == EventKind::ScanEnter && current.is_none() {
                current = event.snapshot.clone();
            }
            let state = current
                .as_mut()
                .ok_or_else(|| fail("trace does not start with a scan entry".into()))?;
            let lit = || event.literal.ok_or_else(|| fail("missing literal".into()));
            let clause_at = |state: &FormulaState| -> Result<Clause, ReplayError> {
                let k = event
                    .clause_index
                    .ok_or_else(|| fail("missing clause index".into()))?;
                state
                    .clauses()
                    .get(k)
                    .cloned()
                    .ok_or_else(|| fail(format!("clause index {k} out of range")))
            };
            let same = |state: &FormulaState| -> Result<(), ReplayError> {
                let snap = event.snapshot.as_ref().expect("checked above");
                if snap == state {
                    Ok(())
                } else {
                    Err(fail(format!("snapshot {snap} differs from replayed {state}")))
                }
            };

            match event.kind {
                EventKind::ScanEnter | EventKind::Reduced | EventKind::Verdict { .. } => same(state)?,
                EventKind::Decision | EventKind::RemoveInvoked => {
                    same(state)?;
                    anchor = Some(state.clone());
                }
                EventKind::Propagation => {
                    let l = lit()?;
                    if let Some(k) = event.clause_index {
                        let clause = clause_at(state)?;
                        if !clause.contains(l) {
                            return Err(fail(format!("clause {clause} does not contain {l}")));
                        }
                        state.clauses_mut().remove(k);
                        for forced in clause.propagation_of(l) {
                            state
                                .minterm_mut()
                                .bind(forced)
                                .map_err(|c| fail(format!("unrecorded conflict: {c}")))?;
                        }
                    } else {
                        state
                            .minterm_mut()
                            .bind(l)
                            .map_err(|c| fail(format!("unrecorded conflict: {c}")))?;
                    }
                }
                EventKind::ClauseDeletion => {
                    let l = lit()?;
                    let clause = clause_at(state)?;
                    if !clause.contains(l) {
                        return Err(fail(format!("clause {clause} does not contain {l}")));
                    }
                    let shorter = clause
                        .without(l)
                        .ok_or_else(|| fail("deletion emptied the clause".into()))?;
                    state.clauses_mut()[event.clause_index.unwrap()] = shorter;
                }
                EventKind::UnitMigration => {
                    let l = lit()?;
                    let clause = clause_at(state)?;
                    if clause.unit() != Some(l) {
                        return Err(fail(format!("clause {clause} is not the unit {l}")));
                    }
                    state.clauses_mut().remove(event.clause_index.unwrap());
                    state
                        .minterm_mut()
                        .bind(l)
                        .map_err(|c| fail(format!("unrecorded conflict: {c}")))?;
                }
                EventKind::Conflict(site) => {
                    let l = lit()?;
                    let snap = event.snapshot.as_ref().expect("checked above");
                    check_conflict(site, l, state, snap, event.clause_index).map_err(fail)?;
                    *state = anchor
                        .clone()
                        .ok_or_else(|| fail("conflict outside a decision or remove".into()))?;
                }
            }
        }
        Ok(())
    }
}

fn check_conflict(
    site: ConflictSite,
    lit: Literal,
    before: &FormulaState,
    snap: &FormulaState,
    clause_index: Option<usize>,
) -> Result<(), String> {
    let clause = clause_index.and_then(|k| before.clauses().get(k));
    match site {
        ConflictSite::Assignment => {
            if snap != before {
                return Err("assignment conflict snapshot differs from state".into());
            }
        }
        ConflictSite::EmptyClause => {
            if snap != before {
                return Err("empty-clause snapshot differs from state".into());
            }
            if clause.and_then(Clause::unit) != Some(lit) {
                return Err(format!("clause is not the unit {lit}"));
            }
            return Ok(());
        }
        ConflictSite::UnitMigration => {
            let k = clause_index.ok_or("missing clause index")?;
            if clause.and_then(Clause::unit) != Some(lit) {
                return Err(format!("clause is not the unit {lit}"));
            }
            let mut expected = before.clone();
            expected.clauses_mut().remove(k);
            if &expected != snap {
                return Err("unit-migration snapshot differs from state".into());
            }
        }
        ConflictSite::Propagation => {
            let k = clause_index.ok_or("missing clause index")?;
            let clause = clause.ok_or("clause index out of range")?;
            let mut remaining = before.clauses().to_vec();
            remaining.remove(k);
            if snap.clauses() != remaining.as_slice() {
                return Err("propagation snapshot clauses differ".into());
            }
            // Some literal of the clause must force a prefix that ends
            // right before the clashing literal.
            let explained = clause.literals().iter().any(|&pivot| {
                let forced = clause.propagation_of(pivot);
                let Some(j) = forced.iter().position(|&f| f == lit) else {
                    return false;
                };
                let mut m: PartialAssignment = before.minterm().clone();
                forced[..j].iter().all(|&f| m.bind(f).is_ok()) && &m == snap.minterm()
            });
            if !explained {
                return Err(format!("no literal of {clause} explains a clash on {lit}"));
            }
        }
    }
    if !snap.minterm().contains(lit.negate()) {
        return Err(format!("{lit} does not clash with the snapshot minterm"));
    }
    Ok(())
}
