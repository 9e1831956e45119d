//! The counterexample family and its golden execution checkpoints.
//!
//! Base formula, with `a, b, c, x, y` as ids `1..=5`:
//!
//! ```text
//! (a ⊙ b ⊙ c) ∧ (b ⊙ x ⊙ y) ∧ (c ⊙ x ⊙ ¬y)
//! ```
//!
//! It has two models, yet deciding `a` first and true leaves
//! `(x ⊙ y) ∧ (x ⊙ ¬y)`, which nothing can satisfy.

use thiserror::Error;

use crate::formula::{Clause, FormulaState, Literal, PartialAssignment};
use crate::io::{serialize_document, X3fDocument};
use crate::salum::{EventKind, OrderingPolicy, PolarityOrder, Trace, TraceEvent};

pub const BASE_VARS: u32 = 5;
pub const BASE_NAMES: [&str; 5] = ["a", "b", "c", "x", "y"];

/// Smallest padding that makes `a` strictly the most frequent variable.
pub const DEFAULT_PADDING: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("padding count must be at least 1")]
    NoPadding,
    #[error("relabeling must be a permutation of 1..={0}")]
    NotAPermutation(u32),
}

/// A labelled state the run must pass through. When `conflict_on` is set
/// the state is the moment that literal was refused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub label: &'static str,
    pub state: FormulaState,
    pub conflict_on: Option<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenTrace {
    pub checkpoints: Vec<Checkpoint>,
}

impl Checkpoint {
    /// Whether `event` records this state: a conflict on `conflict_on` when
    /// that is set, any other snapshot-carrying event otherwise.
    pub fn matches(&self, event: &TraceEvent) -> bool {
        if event.snapshot.as_ref() != Some(&self.state) {
            return false;
        }
        let is_conflict = matches!(event.kind, EventKind::Conflict(_));
        match self.conflict_on {
            Some(lit) => is_conflict && event.literal == Some(lit),
            None => !is_conflict,
        }
    }
}

impl GoldenTrace {
    /// Index of the first checkpoint not met, in order, by `trace`.
    pub fn first_missing(&self, trace: &Trace) -> Option<usize> {
        let mut events = trace.events().iter();
        self.checkpoints
            .iter()
            .position(|cp| !events.any(|e| cp.matches(e)))
    }
}

const BASE_CLAUSES: [[i64; 3]; 3] = [[1, 2, 3], [2, 4, 5], [3, 4, -5]];

fn state(num_vars: u32, minterm: &[i64], clauses: &[&[i64]]) -> FormulaState {
    let minterm =
        PartialAssignment::from_literals(minterm.iter().map(|&l| Literal::from_signed(l).expect("nonzero")))
            .expect("consistent minterm");
    let clauses = clauses
        .iter()
        .map(|c| Clause::from_signed(c).expect("valid clause"))
        .collect();
    FormulaState::new(num_vars, minterm, clauses).expect("ids in range")
}

pub fn paper_counterexample() -> FormulaState {
    let clauses: Vec<&[i64]> = BASE_CLAUSES.iter().map(|c| c.as_slice()).collect();
    state(BASE_VARS, &[], &clauses)
}

/// States the lexicographic, positive-first run of the base formula passes
/// through, up to the clash that ends it.
pub fn golden_trace() -> GoldenTrace {
    let checkpoints = vec![
        Checkpoint {
            label: "reduce(phi, a)",
            state: state(5, &[1, -2, -3], &[&[2, 4, 5], &[3, 4, -5]]),
            conflict_on: None,
        },
        Checkpoint {
            label: "reduce(phi, -b)",
            state: state(5, &[1, -2, -3], &[&[4, 5], &[3, 4, -5]]),
            conflict_on: None,
        },
        Checkpoint {
            label: "scope(a, phi)",
            state: state(5, &[1, -2, -3], &[&[4, 5], &[4, -5]]),
            conflict_on: None,
        },
        Checkpoint {
            label: "reduce(phi, x) conflict",
            state: state(5, &[1, -2, -3, 4, -5], &[]),
            conflict_on: Some(Literal::pos(5)),
        },
    ];
    GoldenTrace { checkpoints }
}

/// The base formula plus `k` clauses `(a ⊙ x_i ⊙ y_i)` on fresh variable
/// pairs `6+2(i-1), 7+2(i-1)`.
pub fn frequency_padded(k: u32) -> Result<FormulaState, CorpusError> {
    if k == 0 {
        return Err(CorpusError::NoPadding);
    }
    let mut clauses: Vec<Clause> = paper_counterexample().clauses().to_vec();
    for i in 0..k {
        let x = i64::from(BASE_VARS + 1 + 2 * i);
        clauses.push(Clause::from_signed(&[1, x, x + 1]).expect("distinct ids"));
    }
    Ok(FormulaState::from_clauses(BASE_VARS + 2 * k, clauses).expect("ids in range"))
}

/// The base formula with `¬a` in place of `a`.
pub fn polarity_flipped() -> FormulaState {
    state(BASE_VARS, &[], &[&[-1, 2, 3], &[2, 4, 5], &[3, 4, -5]])
}

/// The base formula with variable `v` renamed to `perm[v - 1]`.
pub fn relabeled(perm: &[u32]) -> Result<FormulaState, CorpusError> {
    check_permutation(perm)?;
    let clauses = paper_counterexample()
        .clauses()
        .iter()
        .map(|c| {
            let lits = c
                .literals()
                .iter()
                .map(|l| Literal::new(perm[l.var() as usize - 1], l.is_positive()).expect("nonzero"))
                .collect();
            Clause::new(lits).expect("renaming keeps ids distinct")
        })
        .collect();
    Ok(FormulaState::from_clauses(BASE_VARS, clauses).expect("ids in range"))
}

fn check_permutation(perm: &[u32]) -> Result<(), CorpusError> {
    let n = BASE_VARS as usize;
    let mut seen = vec![false; n + 1];
    if perm.len() != n {
        return Err(CorpusError::NotAPermutation(BASE_VARS));
    }
    for &p in perm {
        if p == 0 || p as usize > n || seen[p as usize] {
            return Err(CorpusError::NotAPermutation(BASE_VARS));
        }
        seen[p as usize] = true;
    }
    Ok(())
}

/// `a↔y, b↔x`, `c` fixed.
pub const REVERSAL: [u32; 5] = [5, 4, 3, 2, 1];

/// A corpus formula as shipped on disk, with the policy it defeats.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    /// File stem under `corpus/`.
    pub name: &'static str,
    pub formula: FormulaState,
    /// Display names indexed by `id - 1`.
    pub names: Vec<String>,
    pub policy: OrderingPolicy,
}

impl CorpusEntry {
    /// On-disk text: the canonical serialization with the symbol table.
    pub fn render(&self) -> String {
        serialize_document(&X3fDocument::with_names(self.formula.clone(), &self.names))
    }
}

fn padded_names(k: u32) -> Vec<String> {
    let mut names: Vec<String> = BASE_NAMES.iter().map(|s| s.to_string()).collect();
    for i in 1..=k {
        names.push(format!("x{i}"));
        names.push(format!("y{i}"));
    }
    names
}

pub fn entries() -> Vec<CorpusEntry> {
    let base_names = padded_names(0);
    let mut reversed_names = vec![String::new(); BASE_VARS as usize];
    for (old, &new) in REVERSAL.iter().enumerate() {
        reversed_names[new as usize - 1] = base_names[old].clone();
    }
    vec![
        CorpusEntry {
            name: "paper",
            formula: paper_counterexample(),
            names: base_names.clone(),
            policy: OrderingPolicy::lexicographic(PolarityOrder::PositiveFirst),
        },
        CorpusEntry {
            name: "frequency_padded_3",
            formula: frequency_padded(DEFAULT_PADDING).expect("k > 0"),
            names: padded_names(DEFAULT_PADDING),
            policy: OrderingPolicy::frequency(PolarityOrder::PositiveFirst),
        },
        CorpusEntry {
            name: "frequency_padded_10",
            formula: frequency_padded(10).expect("k > 0"),
            names: padded_names(10),
            policy: OrderingPolicy::frequency(PolarityOrder::PositiveFirst),
        },
        CorpusEntry {
            name: "polarity_flipped",
            formula: polarity_flipped(),
            names: base_names,
            policy: OrderingPolicy::lexicographic(PolarityOrder::NegativeFirst),
        },
        CorpusEntry {
            name: "relabeled_reversal",
            formula: relabeled(&REVERSAL).expect("permutation"),
            names: reversed_names,
            policy: OrderingPolicy::reverse_lexicographic(PolarityOrder::PositiveFirst),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force;

    #[test]
    fn base_shape() {
        let f = paper_counterexample();
        assert_eq!(f.clauses().len(), 3);
        assert_eq!(f.num_vars(), 5);
        assert!(f.minterm().is_empty());
    }

    #[test]
    fn padding_makes_a_most_frequent() {
        let f = frequency_padded(3).unwrap();
        assert_eq!(f.clauses().len(), 6);
        assert_eq!(f.num_vars(), 11);
        let counts = f.occurrence_counts();
        assert!(counts[2..].iter().all(|&c| c < counts[1]));
        assert_eq!(frequency_padded(0), Err(CorpusError::NoPadding));
    }

    #[test]
    fn flipped_first_clause() {
        let f = polarity_flipped();
        assert_eq!(f.clauses()[0], Clause::from_signed(&[-1, 2, 3]).unwrap());
    }

    #[test]
    fn relabeling() {
        assert_eq!(relabeled(&[1, 2, 3, 4, 5]).unwrap(), paper_counterexample());
        assert!(relabeled(&[1, 1, 3, 4, 5]).is_err());
        assert!(relabeled(&[1, 2, 3, 4]).is_err());
        assert!(relabeled(&[0, 2, 3, 4, 5]).is_err());
        let r = relabeled(&REVERSAL).unwrap();
        assert_eq!(r.clauses()[0], Clause::from_signed(&[5, 4, 3]).unwrap());
    }

    #[test]
    fn checkpoints_found_in_order() {
        use crate::salum::scan;
        let golden = golden_trace();
        let run = scan(
            &paper_counterexample(),
            &OrderingPolicy::lexicographic(PolarityOrder::PositiveFirst),
        );
        assert_eq!(golden.first_missing(&run.trace), None);
        let mut swapped = golden.clone();
        swapped.checkpoints.swap(0, 1);
        assert_eq!(swapped.first_missing(&run.trace), Some(1));
        let other = scan(
            &paper_counterexample(),
            &OrderingPolicy::lexicographic(PolarityOrder::NegativeFirst),
        );
        assert_eq!(golden.first_missing(&other.trace), Some(0));
    }

    #[test]
    fn every_entry_is_satisfiable() {
        for e in entries() {
            if e.formula.num_vars() <= 12 {
                assert!(!brute_force(&e.formula).unwrap().is_empty(), "{}", e.name);
            }
        }
    }
}
