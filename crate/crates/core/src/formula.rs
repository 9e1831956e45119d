//! Exactly-one clause formulas.
//!
//! A formula is a minterm (a conflict-checked partial assignment) conjoined
//! with a list of exactly-one clauses over one to three literals. Variables
//! are dense ids `1..=num_vars`; names only exist in the I/O layer.

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

/// Errors raised when building formula values from untrusted data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("variable id 0 is not a valid variable")]
    ZeroVariable,
    #[error("clause must have 1 to 3 literals, got {0}")]
    ClauseWidth(usize),
    #[error("variable {0} occurs more than once in a clause")]
    RepeatedVariable(u32),
    #[error("variable {var} is out of range 1..={num_vars}")]
    OutOfRange { var: u32, num_vars: u32 },
    #[error("assignment has {got} values, formula has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("minterm is contradictory on variable {0}")]
    Contradiction(u32),
}

/// A variable id together with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    var: u32,
    positive: bool,
}

impl Literal {
    pub fn new(var: u32, positive: bool) -> Result<Self, FormulaError> {
        if var == 0 {
            return Err(FormulaError::ZeroVariable);
        }
        Ok(Literal { var, positive })
    }

    pub fn pos(var: u32) -> Self {
        Self::new(var, true).expect("variable ids start at 1")
    }

    pub fn neg(var: u32) -> Self {
        Self::new(var, false).expect("variable ids start at 1")
    }

    /// Signed integer form: `3` is `x3`, `-3` is its negation.
    pub fn from_signed(value: i64) -> Result<Self, FormulaError> {
        if value == 0 {
            return Err(FormulaError::ZeroVariable);
        }
        let var = u32::try_from(value.unsigned_abs()).map_err(|_| FormulaError::OutOfRange {
            var: u32::MAX,
            num_vars: u32::MAX,
        })?;
        Self::new(var, value > 0)
    }

    pub fn to_signed(self) -> i64 {
        if self.positive {
            i64::from(self.var)
        } else {
            -i64::from(self.var)
        }
    }

    #[inline]
    pub fn var(self) -> u32 {
        self.var
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.positive
    }

    #[inline]
    pub fn negate(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Value of the literal when its variable takes `value`.
    #[inline]
    pub fn eval_with(self, value: bool) -> bool {
        value == self.positive
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        self.negate()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_signed())
    }
}

/// An exactly-one constraint: satisfied iff precisely one literal is true.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Builds a clause, rejecting empty, oversized and repeated-variable clauses.
    pub fn new(literals: Vec<Literal>) -> Result<Self, FormulaError> {
        if literals.is_empty() || literals.len() > 3 {
            return Err(FormulaError::ClauseWidth(literals.len()));
        }
        for (i, a) in literals.iter().enumerate() {
            if literals[..i].iter().any(|b| b.var() == a.var()) {
                return Err(FormulaError::RepeatedVariable(a.var()));
            }
        }
        Ok(Clause { literals })
    }

    pub fn from_signed(values: &[i64]) -> Result<Self, FormulaError> {
        let literals = values
            .iter()
            .map(|&v| Literal::from_signed(v))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(literals)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.literals.contains(&lit)
    }

    pub fn mentions(&self, var: u32) -> bool {
        self.literals.iter().any(|l| l.var() == var)
    }

    /// The clause with `lit` deleted, or `None` when nothing would remain.
    pub fn without(&self, lit: Literal) -> Option<Clause> {
        let literals: Vec<Literal> = self.literals.iter().copied().filter(|&l| l != lit).collect();
        if literals.is_empty() {
            None
        } else {
            Some(Clause { literals })
        }
    }

    /// The single literal of a unit clause.
    pub fn unit(&self) -> Option<Literal> {
        match self.literals.as_slice() {
            [l] => Some(*l),
            _ => None,
        }
    }

    /// Literals forced by making `lit` true: `lit` itself followed by the
    /// negation of every other literal, in clause order.
    pub fn propagation_of(&self, lit: Literal) -> Vec<Literal> {
        std::iter::once(lit)
            .chain(self.literals.iter().filter(|&&l| l != lit).map(|l| l.negate()))
            .collect()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊙ ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Raised when a variable would be bound both true and false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("conflict on literal {literal}")]
pub struct Conflict {
    /// The literal whose binding was refused.
    pub literal: Literal,
}

/// The minterm: a conjunction of literals, kept in insertion order.
///
/// Equality ignores insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialAssignment {
    bindings: IndexMap<u32, bool>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_literals<I: IntoIterator<Item = Literal>>(lits: I) -> Result<Self, Conflict> {
        let mut p = Self::new();
        for l in lits {
            p.bind(l)?;
        }
        Ok(p)
    }

    /// Adds `lit`. Binding an already-present literal is a no-op; binding
    /// the negation of a present literal is refused and leaves `self` as is.
    /// Returns whether the binding was new.
    pub fn bind(&mut self, lit: Literal) -> Result<bool, Conflict> {
        match self.bindings.get(&lit.var()) {
            Some(&v) if v == lit.is_positive() => Ok(false),
            Some(_) => Err(Conflict { literal: lit }),
            None => {
                self.bindings.insert(lit.var(), lit.is_positive());
                Ok(true)
            }
        }
    }

    /// Non-mutating form of [`PartialAssignment::bind`].
    pub fn with(&self, lit: Literal) -> Result<Self, Conflict> {
        let mut next = self.clone();
        next.bind(lit)?;
        Ok(next)
    }

    pub fn value(&self, var: u32) -> Option<bool> {
        self.bindings.get(&var).copied()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.value(lit.var()) == Some(lit.is_positive())
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// The `index`-th literal in insertion order.
    pub fn literal_at(&self, index: usize) -> Option<Literal> {
        self.bindings
            .get_index(index)
            .map(|(&var, &positive)| Literal { var, positive })
    }

    /// Literals in insertion order.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.bindings
            .iter()
            .map(|(&var, &positive)| Literal { var, positive })
    }

    /// Literals by ascending variable id.
    pub fn sorted_literals(&self) -> Vec<Literal> {
        let mut lits: Vec<Literal> = self.literals().collect();
        lits.sort_by_key(|l| l.var());
        lits
    }
}

/// A value for every variable `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TotalAssignment {
    values: Vec<bool>,
}

impl TotalAssignment {
    pub fn new(values: Vec<bool>) -> Self {
        TotalAssignment { values }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        TotalAssignment {
            values: bits.iter().map(|&b| b != 0).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        (var as usize)
            .checked_sub(1)
            .and_then(|i| self.values.get(i).copied())
    }

    pub fn lit_value(&self, lit: Literal) -> Option<bool> {
        self.get(lit.var()).map(|v| lit.eval_with(v))
    }

    /// `0,0,1,0,1` style rendering.
    pub fn to_csv(&self) -> String {
        self.values
            .iter()
            .map(|&v| if v { "1" } else { "0" })
            .collect::<Vec<_>>()
            .join(",")
    }

    /// `00101` style rendering.
    pub fn to_bit_string(&self) -> String {
        self.values.iter().map(|&v| if v { '1' } else { '0' }).collect()
    }
}

/// Minterm ∧ clauses over variables `1..=num_vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaState {
    minterm: PartialAssignment,
    clauses: Vec<Clause>,
    num_vars: u32,
}

impl FormulaState {
    pub fn new(
        num_vars: u32,
        minterm: PartialAssignment,
        clauses: Vec<Clause>,
    ) -> Result<Self, FormulaError> {
        let in_range = |var: u32| {
            if var >= 1 && var <= num_vars {
                Ok(())
            } else {
                Err(FormulaError::OutOfRange { var, num_vars })
            }
        };
        for l in minterm.literals() {
            in_range(l.var())?;
        }
        for c in &clauses {
            for l in c.literals() {
                in_range(l.var())?;
            }
        }
        Ok(FormulaState {
            minterm,
            clauses,
            num_vars,
        })
    }

    /// A formula with an empty minterm.
    pub fn from_clauses(num_vars: u32, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        Self::new(num_vars, PartialAssignment::new(), clauses)
    }

    /// Convenience constructor from signed clause lists.
    pub fn from_signed(num_vars: u32, clauses: &[&[i64]]) -> Result<Self, FormulaError> {
        let clauses = clauses
            .iter()
            .map(|c| Clause::from_signed(c))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_clauses(num_vars, clauses)
    }

    pub fn minterm(&self) -> &PartialAssignment {
        &self.minterm
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub(crate) fn minterm_mut(&mut self) -> &mut PartialAssignment {
        &mut self.minterm
    }

    pub(crate) fn clauses_mut(&mut self) -> &mut Vec<Clause> {
        &mut self.clauses
    }

    /// Same minterm and variables, different clause list.
    pub fn with_clauses(&self, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        Self::new(self.num_vars, self.minterm.clone(), clauses)
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }

    /// Number of clauses in which each variable occurs, indexed by id.
    pub fn occurrence_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_vars as usize + 1];
        for c in &self.clauses {
            for l in c.literals() {
                counts[l.var() as usize] += 1;
            }
        }
        counts
    }

    /// Distinct variables occurring in the clauses, ascending.
    pub fn clause_vars(&self) -> Vec<u32> {
        let counts = self.occurrence_counts();
        (1..=self.num_vars).filter(|&v| counts[v as usize] > 0).collect()
    }

    /// Equivalent formula for `self ∧ lit`, simplified to a fixpoint.
    ///
    /// Every clause containing a bound literal is consumed (its other
    /// literals are forced false), every falsified literal is deleted, and
    /// unit clauses are migrated into the minterm until nothing changes.
    pub fn condition(&self, lit: Literal) -> Result<FormulaState, Conflict> {
        let mut next = self.clone();
        next.minterm.bind(lit)?;
        let mut queue: Vec<Literal> = vec![lit];
        queue.extend(self.minterm.literals());
        next.simplify(queue)?;
        Ok(next)
    }

    /// Simplifies existing minterm literals and unit clauses to a fixpoint.
    pub fn propagate(&self) -> Result<FormulaState, Conflict> {
        let mut next = self.clone();
        next.simplify(self.minterm.literals().collect())?;
        Ok(next)
    }

    fn simplify(&mut self, mut queue: Vec<Literal>) -> Result<(), Conflict> {
        let mut head = 0;
        loop {
            while head < queue.len() {
                let lit = queue[head];
                head += 1;
                let mut kept = Vec::with_capacity(self.clauses.len());
                for clause in std::mem::take(&mut self.clauses) {
                    if clause.contains(lit) {
                        for forced in clause.propagation_of(lit) {
                            if self.minterm.bind(forced)? {
                                queue.push(forced);
                            }
                        }
                    } else if clause.contains(lit.negate()) {
                        match clause.without(lit.negate()) {
                            None => {
                                return Err(Conflict {
                                    literal: lit.negate(),
                                })
                            }
                            Some(shorter) => kept.push(shorter),
                        }
                    } else {
                        kept.push(clause);
                    }
                }
                self.clauses = kept;
            }
            // Units left behind, including ones present in the input.
            let Some(pos) = self.clauses.iter().position(|c| c.unit().is_some()) else {
                return Ok(());
            };
            let unit = self.clauses.remove(pos).unit().expect("unit clause");
            self.minterm.bind(unit)?;
            queue.push(unit);
        }
    }
}

impl fmt::Display for FormulaState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.minterm.is_empty() {
            let lits: Vec<String> = self
                .minterm
                .sorted_literals()
                .iter()
                .map(|l| l.to_string())
                .collect();
            parts.push(format!("[{}]", lits.join(" ∧ ")));
        }
        parts.extend(self.clauses.iter().map(|c| c.to_string()));
        if parts.is_empty() {
            write!(f, "⊤")
        } else {
            write!(f, "{}", parts.join(" ∧ "))
        }
    }
}

/// True iff exactly one literal of `clause` is true under `m`.
pub fn evaluate_clause(m: &TotalAssignment, clause: &Clause) -> Result<bool, FormulaError> {
    let mut true_count = 0;
    for &l in clause.literals() {
        let value = m.lit_value(l).ok_or(FormulaError::OutOfRange {
            var: l.var(),
            num_vars: m.num_vars() as u32,
        })?;
        true_count += usize::from(value);
    }
    Ok(true_count == 1)
}

/// True iff `m` agrees with the minterm and satisfies every clause.
pub fn evaluate_formula(m: &TotalAssignment, f: &FormulaState) -> Result<bool, FormulaError> {
    if m.num_vars() != f.num_vars() as usize {
        return Err(FormulaError::AssignmentLength {
            expected: f.num_vars() as usize,
            got: m.num_vars(),
        });
    }
    for l in f.minterm().literals() {
        if m.lit_value(l) != Some(true) {
            return Ok(false);
        }
    }
    for c in f.clauses() {
        if !evaluate_clause(m, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}
