//! Exactly-one-in-three satisfiability.
//!
//! * [`formula`]: literals, exactly-one clauses, minterms and conditioning.
//! * [`salum`]: the backtracking-free propagation procedure with a full
//!   execution trace.
//! * [`oracle`]: exhaustive enumeration and a backtracking search.
//! * [`harness`]: seeded generation, differential comparison, shrinking.
//! * [`corpus`]: a satisfiable formula the procedure calls UNSAT, and
//!   variants that defeat the obvious ordering fixes.
//! * [`io`]: the `p x3f` format, trace files and reports.

pub mod corpus;
pub mod formula;
pub mod harness;
pub mod io;
pub mod oracle;
pub mod salum;

pub use formula::{
    evaluate_clause, evaluate_formula, Clause, Conflict, FormulaError, FormulaState, Literal,
    PartialAssignment, TotalAssignment,
};
