//! Differential testing of the propagation procedure against the oracles.

mod generate;

pub use generate::{generate, GenConfig, GenConfigError, XorShiftRng, FIXED_ORDER_SALT};

use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{evaluate_formula, FormulaState, TotalAssignment};
use crate::oracle::{brute_force, dpll_solve, OracleVerdict, BRUTE_FORCE_MAX_VARS};
use crate::salum::{scan, OrderingKind, OrderingPolicy, PolarityOrder, SalumOutcome};

/// Why a claimed-SAT answer is wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FalseSatReason {
    /// The formula has no model at all.
    OracleUnsat,
    /// The formula has models, but none extends the claimed minterm.
    InvalidWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DisagreementKind {
    /// UNSAT claimed on a satisfiable formula.
    FalseUnsat,
    FalseSat(FalseSatReason),
}

impl DisagreementKind {
    /// Same kind, ignoring the false-SAT subcase.
    pub fn same_class(self, other: DisagreementKind) -> bool {
        matches!(
            (self, other),
            (DisagreementKind::FalseUnsat, DisagreementKind::FalseUnsat)
                | (DisagreementKind::FalseSat(_), DisagreementKind::FalseSat(_))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub formula: FormulaState,
    pub policy: OrderingPolicy,
    pub salum_outcome: SalumOutcome,
    pub oracle_outcome: OracleVerdict,
    pub kind: DisagreementKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Comparison {
    /// Both sides answered the same and any claimed minterm extends to a model.
    Agreement(OracleVerdict),
    Disagreement(Disagreement),
}

impl Comparison {
    pub fn disagreement(&self) -> Option<&Disagreement> {
        match self {
            Comparison::Disagreement(d) => Some(d),
            Comparison::Agreement(_) => None,
        }
    }
}

/// A model of `original` that agrees with `minterm`, if one exists.
///
/// Conditioning on every claimed literal and then searching is an
/// exhaustive check over all completions of the unbound variables.
pub fn audit_claim(
    original: &FormulaState,
    minterm: &crate::formula::PartialAssignment,
) -> Option<TotalAssignment> {
    let mut f = original.clone();
    for lit in minterm.literals() {
        f = f.condition(lit).ok()?;
    }
    let witness = dpll_solve(&f).witness().cloned()?;
    let ok = evaluate_formula(&witness, original).expect("sized to formula")
        && minterm.literals().all(|l| witness.lit_value(l) == Some(true));
    assert!(ok, "oracle witness fails verification");
    Some(witness)
}

/// Runs both solvers on `f` and classifies the result.
pub fn compare(f: &FormulaState, policy: &OrderingPolicy) -> Comparison {
    compare_run(f, policy).0
}

/// [`compare`], also returning the number of remove steps the run took.
fn compare_run(f: &FormulaState, policy: &OrderingPolicy) -> (Comparison, usize) {
    let run = scan(f, policy);
    let removes = run.removes;
    let salum = run.outcome;
    let oracle = dpll_solve(f);
    if let OracleVerdict::Sat(m) = &oracle {
        assert!(
            evaluate_formula(m, f).expect("sized to formula"),
            "oracle witness fails verification"
        );
    }
    let kind = match (&salum, &oracle) {
        (SalumOutcome::ClaimedUnsat, OracleVerdict::Unsat) => None,
        (SalumOutcome::ClaimedUnsat, OracleVerdict::Sat(_)) => Some(DisagreementKind::FalseUnsat),
        (SalumOutcome::ClaimedSat { .. }, OracleVerdict::Unsat) => {
            if f.num_vars() <= BRUTE_FORCE_MAX_VARS {
                let models = brute_force(f).expect("within capacity");
                assert!(models.is_empty(), "oracle refutation contradicted by enumeration");
            }
            Some(DisagreementKind::FalseSat(FalseSatReason::OracleUnsat))
        }
        (SalumOutcome::ClaimedSat { minterm, .. }, OracleVerdict::Sat(_)) => match audit_claim(f, minterm) {
            Some(_) => None,
            None => Some(DisagreementKind::FalseSat(FalseSatReason::InvalidWitness)),
        },
    };
    let comparison = match kind {
        None => Comparison::Agreement(oracle),
        Some(kind) => Comparison::Disagreement(Disagreement {
            formula: f.clone(),
            policy: policy.clone(),
            salum_outcome: salum,
            oracle_outcome: oracle,
            kind,
        }),
    };
    (comparison, removes)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShrinkError {
    #[error("input does not reproduce a {expected:?} disagreement")]
    NotReproducible { expected: DisagreementKind },
}

fn reproduces(f: &FormulaState, policy: &OrderingPolicy, kind: DisagreementKind) -> Option<Disagreement> {
    match compare(f, policy) {
        Comparison::Disagreement(d) if d.kind.same_class(kind) => Some(d),
        _ => None,
    }
}

/// Greedy minimization to a locally minimal disagreement of the same kind.
///
/// Clause deletions are tried first, first to last; when none applies,
/// single-literal deletions are tried in the same order. Any accepted edit
/// restarts the clause pass. The result admits no single clause deletion
/// and no single literal deletion that keeps the disagreement.
pub fn shrink(d: &Disagreement) -> Result<Disagreement, ShrinkError> {
    let mut best =
        reproduces(&d.formula, &d.policy, d.kind).ok_or(ShrinkError::NotReproducible { expected: d.kind })?;
    'edits: loop {
        let clauses = best.formula.clauses().to_vec();
        for i in 0..clauses.len() {
            let mut fewer = clauses.clone();
            fewer.remove(i);
            let candidate = best.formula.with_clauses(fewer).expect("subset of valid clauses");
            if let Some(found) = reproduces(&candidate, &best.policy, best.kind) {
                best = found;
                continue 'edits;
            }
        }
        for i in 0..clauses.len() {
            if clauses[i].len() < 2 {
                continue;
            }
            for &lit in clauses[i].literals() {
                let mut edited = clauses.clone();
                edited[i] = clauses[i].without(lit).expect("width at least 2");
                let candidate = best
                    .formula
                    .with_clauses(edited)
                    .expect("subset of valid clauses");
                if let Some(found) = reproduces(&candidate, &best.policy, best.kind) {
                    best = found;
                    continue 'edits;
                }
            }
        }
        return Ok(best);
    }
}

/// The eight policies every campaign formula is run under: the four
/// ordering kinds, each with both polarity orders. The fixed sequence is a
/// shuffle of all variables drawn from `seed ^ FIXED_ORDER_SALT`.
pub fn policy_matrix(num_vars: u32, seed: u64) -> Vec<OrderingPolicy> {
    let mut shuffled: Vec<u32> = (1..=num_vars).collect();
    XorShiftRng::new(seed ^ FIXED_ORDER_SALT).shuffle(&mut shuffled);
    let kinds = [
        OrderingKind::Lexicographic,
        OrderingKind::ReverseLexicographic,
        OrderingKind::FrequencyDescending,
        OrderingKind::FixedSequence(shuffled),
    ];
    kinds
        .into_iter()
        .flat_map(|kind| {
            [PolarityOrder::PositiveFirst, PolarityOrder::NegativeFirst]
                .map(|p| OrderingPolicy::new(kind.clone(), p).expect("shuffle is a permutation"))
        })
        .collect()
}

/// One (formula, policy) run of a campaign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub seed: u64,
    pub policy: OrderingPolicy,
    pub num_vars: u32,
    pub removes: usize,
    pub comparison: Comparison,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CampaignReport {
    /// Ordered by config position, then matrix position.
    pub runs: Vec<RunRecord>,
}

impl CampaignReport {
    pub fn disagreements(&self) -> impl Iterator<Item = (&RunRecord, &Disagreement)> {
        self.runs
            .iter()
            .filter_map(|r| r.comparison.disagreement().map(|d| (r, d)))
    }
}

/// Runs every config under the full policy matrix.
///
/// Runs are spread over the rayon pool; the report is ordered by key, so
/// the thread count changes only completion order.
pub fn campaign(configs: &[GenConfig]) -> Result<CampaignReport, GenConfigError> {
    let formulas = configs.iter().map(generate).collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(usize, usize, &GenConfig, &FormulaState, OrderingPolicy)> = configs
        .iter()
        .zip(&formulas)
        .enumerate()
        .flat_map(|(ci, (cfg, f))| {
            policy_matrix(cfg.num_vars, cfg.seed)
                .into_iter()
                .enumerate()
                .map(move |(pi, p)| (ci, pi, cfg, f, p))
        })
        .collect();
    let mut keyed: Vec<((usize, usize), RunRecord)> = jobs
        .into_par_iter()
        .map(|(ci, pi, cfg, f, policy)| {
            let (comparison, removes) = compare_run(f, &policy);
            let record = RunRecord {
                seed: cfg.seed,
                num_vars: f.num_vars(),
                policy,
                removes,
                comparison,
            };
            ((ci, pi), record)
        })
        .collect();
    keyed.sort_by_key(|(k, _)| *k);
    Ok(CampaignReport {
        runs: keyed.into_iter().map(|(_, r)| r).collect(),
    })
}
