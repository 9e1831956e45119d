//! Reference solvers: exhaustive enumeration and backtracking search.

use thiserror::Error;

use crate::formula::{evaluate_formula, FormulaState, Literal, TotalAssignment};

/// Largest variable count [`brute_force`] will enumerate.
pub const BRUTE_FORCE_MAX_VARS: u32 = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{num_vars} variables exceeds the enumeration bound of {max}")]
pub struct CapacityError {
    pub num_vars: u32,
    pub max: u32,
}

/// Every model of a formula, in lexicographic order (variable 1 most
/// significant, false before true).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelSet {
    models: Vec<TotalAssignment>,
}

impl ModelSet {
    pub fn models(&self) -> &[TotalAssignment] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn contains(&self, m: &TotalAssignment) -> bool {
        self.models.binary_search(m).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Sat(TotalAssignment),
    Unsat,
}

impl OracleVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, OracleVerdict::Sat(_))
    }

    pub fn witness(&self) -> Option<&TotalAssignment> {
        match self {
            OracleVerdict::Sat(m) => Some(m),
            OracleVerdict::Unsat => None,
        }
    }
}

/// Enumerates all `2^num_vars` assignments and keeps the satisfying ones.
pub fn brute_force(f: &FormulaState) -> Result<ModelSet, CapacityError> {
    let n = f.num_vars();
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(CapacityError {
            num_vars: n,
            max: BRUTE_FORCE_MAX_VARS,
        });
    }
    let mut models = Vec::new();
    let mut values = vec![false; n as usize];
    for mask in 0u64..(1u64 << n) {
        for (i, v) in values.iter_mut().enumerate() {
            *v = mask >> (n as usize - 1 - i) & 1 == 1;
        }
        let m = TotalAssignment::new(values.clone());
        if evaluate_formula(&m, f).expect("assignment sized to formula") {
            models.push(m);
        }
    }
    Ok(ModelSet { models })
}

/// Chronological backtracking search over full conditioning.
///
/// Branches on the lowest unbound variable still occurring in a clause,
/// true first. Variables left unconstrained default to false.
pub fn dpll_solve(f: &FormulaState) -> OracleVerdict {
    let Ok(root) = f.propagate() else {
        return OracleVerdict::Unsat;
    };
    match search(root) {
        Some(done) => {
            let values = (1..=f.num_vars())
                .map(|v| done.minterm().value(v).unwrap_or(false))
                .collect();
            OracleVerdict::Sat(TotalAssignment::new(values))
        }
        None => OracleVerdict::Unsat,
    }
}

fn search(f: FormulaState) -> Option<FormulaState> {
    let Some(var) = f
        .clause_vars()
        .into_iter()
        .find(|&v| f.minterm().value(v).is_none())
    else {
        // Propagation leaves no clause over a bound variable, so an empty
        // clause list is the only way to get here.
        debug_assert!(f.clauses().is_empty());
        return Some(f);
    };
    [Literal::pos(var), Literal::neg(var)]
        .into_iter()
        .find_map(|lit| f.condition(lit).ok().and_then(search))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> FormulaState {
        FormulaState::from_signed(5, &[&[1, 2, 3], &[2, 4, 5], &[3, 4, -5]]).unwrap()
    }

    #[test]
    fn base_formula_has_two_models() {
        let models = brute_force(&phi()).unwrap();
        assert_eq!(
            models.models(),
            &[
                TotalAssignment::from_bits(&[0, 0, 1, 0, 1]),
                TotalAssignment::from_bits(&[0, 1, 0, 0, 0]),
            ]
        );
    }

    #[test]
    fn empty_formula_has_one_model() {
        let f = FormulaState::from_clauses(0, vec![]).unwrap();
        let models = brute_force(&f).unwrap();
        assert_eq!(models.len(), 1);
        assert_eq!(models.models()[0].num_vars(), 0);
        assert!(dpll_solve(&f).is_sat());
    }

    #[test]
    fn doomed_remainder_has_no_models() {
        let f = FormulaState::from_signed(2, &[&[1, 2], &[1, -2]]).unwrap();
        assert!(brute_force(&f).unwrap().is_empty());
        assert_eq!(dpll_solve(&f), OracleVerdict::Unsat);
    }

    #[test]
    fn capacity_is_enforced() {
        let f = FormulaState::from_clauses(26, vec![]).unwrap();
        assert_eq!(
            brute_force(&f),
            Err(CapacityError {
                num_vars: 26,
                max: 25
            })
        );
    }

    #[test]
    fn dpll_finds_known_witness() {
        let verdict = dpll_solve(&phi());
        let m = verdict.witness().unwrap();
        assert!(brute_force(&phi()).unwrap().contains(m));
    }

    #[test]
    fn dpll_unit_clause() {
        let f = FormulaState::from_signed(1, &[&[1]]).unwrap();
        assert_eq!(
            dpll_solve(&f),
            OracleVerdict::Sat(TotalAssignment::from_bits(&[1]))
        );
    }

    #[test]
    fn dpll_respects_minterm() {
        let f = FormulaState::new(
            3,
            crate::formula::PartialAssignment::from_literals([Literal::neg(1)]).unwrap(),
            vec![crate::formula::Clause::from_signed(&[1, 2, 3]).unwrap()],
        )
        .unwrap();
        let m = dpll_solve(&f).witness().cloned().unwrap();
        assert!(evaluate_formula(&m, &f).unwrap());
        assert_eq!(m.get(1), Some(false));
    }
}
