//! The `p x3f` text format.
//!
//! ```text
//! c comment
//! p x3f <num_vars> <num_clauses>
//! s <id> <name>          (optional, any number)
//! m <lit> ... 0          (optional, at most one)
//! <lit> <lit> [<lit>] 0  (exactly num_clauses lines)
//! ```
//!
//! Literals are signed decimal ids. Tokens are separated by single spaces
//! and every line ends with `\n`. The header is deliberately not DIMACS
//! `p cnf`: exactly-one semantics must never be read as plain CNF.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{Clause, FormulaState, Literal, PartialAssignment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("input is not valid UTF-8")]
    InvalidUtf8,
    #[error("missing `p x3f` header")]
    MissingHeader,
    #[error("malformed header")]
    MalformedHeader,
    #[error("second header")]
    DuplicateHeader,
    #[error("unexpected token `{0}`")]
    InvalidToken(String),
    #[error("literal 0 before the end of the line")]
    ZeroLiteral,
    #[error("line does not end with the 0 sentinel")]
    MissingSentinel,
    #[error("literal {0} exceeds the declared variable count")]
    LiteralOutOfRange(String),
    #[error("clause has {0} literals, expected 1 to 3")]
    ClauseWidth(usize),
    #[error("variable {0} repeated in clause")]
    DuplicateVariable(u32),
    #[error("expected {expected} clauses, found {found}")]
    ClauseCountMismatch { expected: u32, found: u32 },
    #[error("minterm binds variable {0} both ways")]
    MintermConflict(u32),
    #[error("second minterm line")]
    DuplicateMinterm,
    #[error("{0} line out of place")]
    Misplaced(&'static str),
    #[error("symbol line malformed or repeated")]
    BadSymbol,
    #[error("last line has no trailing newline")]
    MissingTrailingNewline,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based; 0 when the error is not tied to a line.
    pub line: usize,
    pub kind: ParseErrorKind,
}

/// Optional display names for variable ids.
pub type SymbolTable = BTreeMap<u32, String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3fDocument {
    pub formula: FormulaState,
    pub symbols: SymbolTable,
}

impl X3fDocument {
    pub fn new(formula: FormulaState) -> Self {
        X3fDocument {
            formula,
            symbols: SymbolTable::new(),
        }
    }

    pub fn with_names(formula: FormulaState, names: &[String]) -> Self {
        let symbols = names
            .iter()
            .enumerate()
            .map(|(i, n)| (i as u32 + 1, n.clone()))
            .collect();
        X3fDocument { formula, symbols }
    }
}

/// Parses a document and drops its symbol table.
pub fn parse(bytes: &[u8]) -> Result<FormulaState, ParseError> {
    parse_document(bytes).map(|d| d.formula)
}

pub fn parse_document(bytes: &[u8]) -> Result<X3fDocument, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| ParseError {
        line: 0,
        kind: ParseErrorKind::InvalidUtf8,
    })?;
    let mut lines: Vec<&str> = text.split('\n').collect();
    // A well-formed text ends with "\n", leaving one empty tail element.
    if lines.last() == Some(&"") {
        lines.pop();
    } else {
        return Err(ParseError {
            line: lines.len(),
            kind: if text.is_empty() {
                ParseErrorKind::MissingHeader
            } else {
                ParseErrorKind::MissingTrailingNewline
            },
        });
    }

    #[derive(PartialEq, PartialOrd)]
    enum Stage {
        Start,
        Header,
        Minterm,
        Clauses,
    }

    let mut stage = Stage::Start;
    let mut num_vars = 0u32;
    let mut expected = 0u32;
    let mut symbols = SymbolTable::new();
    let mut minterm = PartialAssignment::new();
    let mut clauses: Vec<Clause> = Vec::new();

    for (i, line) in lines.iter().enumerate() {
        let lineno = i + 1;
        let err = |kind| ParseError { line: lineno, kind };
        if *line == "c" || line.starts_with("c ") {
            continue;
        }
        let tokens: Vec<&str> = line.split(' ').collect();
        match tokens[0] {
            "p" => {
                if stage != Stage::Start {
                    return Err(err(ParseErrorKind::DuplicateHeader));
                }
                let [_, "x3f", v, c] = tokens.as_slice() else {
                    return Err(err(ParseErrorKind::MalformedHeader));
                };
                num_vars = parse_count(v).ok_or_else(|| err(ParseErrorKind::MalformedHeader))?;
                expected = parse_count(c).ok_or_else(|| err(ParseErrorKind::MalformedHeader))?;
                stage = Stage::Header;
            }
            _ if stage == Stage::Start => return Err(err(ParseErrorKind::MissingHeader)),
            "s" => {
                if stage != Stage::Header {
                    return Err(err(ParseErrorKind::Misplaced("symbol")));
                }
                let [_, id, name] = tokens.as_slice() else {
                    return Err(err(ParseErrorKind::BadSymbol));
                };
                let id = parse_count(id)
                    .filter(|&id| id >= 1 && id <= num_vars)
                    .ok_or_else(|| err(ParseErrorKind::BadSymbol))?;
                if name.is_empty() || symbols.contains_key(&id) || symbols.values().any(|n| n == name) {
                    return Err(err(ParseErrorKind::BadSymbol));
                }
                symbols.insert(id, name.to_string());
            }
            "m" => {
                if stage == Stage::Minterm {
                    return Err(err(ParseErrorKind::DuplicateMinterm));
                }
                if stage == Stage::Clauses {
                    return Err(err(ParseErrorKind::Misplaced("minterm")));
                }
                for lit in parse_literals(&tokens[1..], num_vars).map_err(err)? {
                    minterm
                        .bind(lit)
                        .map_err(|_| err(ParseErrorKind::MintermConflict(lit.var())))?;
                }
                stage = Stage::Minterm;
            }
            _ => {
                stage = Stage::Clauses;
                let lits = parse_literals(&tokens, num_vars).map_err(err)?;
                if lits.is_empty() || lits.len() > 3 {
                    return Err(err(ParseErrorKind::ClauseWidth(lits.len())));
                }
                for (j, l) in lits.iter().enumerate() {
                    if lits[..j].iter().any(|o| o.var() == l.var()) {
                        return Err(err(ParseErrorKind::DuplicateVariable(l.var())));
                    }
                }
                if clauses.len() as u32 == expected {
                    return Err(err(ParseErrorKind::ClauseCountMismatch {
                        expected,
                        found: expected + 1,
                    }));
                }
                clauses.push(Clause::new(lits).expect("checked width and distinctness"));
            }
        }
    }

    if stage == Stage::Start {
        return Err(ParseError {
            line: lines.len(),
            kind: ParseErrorKind::MissingHeader,
        });
    }
    if clauses.len() as u32 != expected {
        return Err(ParseError {
            line: lines.len(),
            kind: ParseErrorKind::ClauseCountMismatch {
                expected,
                found: clauses.len() as u32,
            },
        });
    }
    let formula = FormulaState::new(num_vars, minterm, clauses).expect("ranges checked while parsing");
    Ok(X3fDocument { formula, symbols })
}

fn parse_count(token: &str) -> Option<u32> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    token.parse().ok()
}

/// Parses `<lit>... 0`, checking the sentinel and variable range.
fn parse_literals(tokens: &[&str], num_vars: u32) -> Result<Vec<Literal>, ParseErrorKind> {
    let Some((&last, body)) = tokens.split_last() else {
        return Err(ParseErrorKind::MissingSentinel);
    };
    let mut lits = Vec::with_capacity(body.len());
    for &t in body.iter().chain(std::iter::once(&last)) {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseErrorKind::InvalidToken(t.to_string()));
        }
    }
    if last != "0" {
        return Err(ParseErrorKind::MissingSentinel);
    }
    for &t in body {
        let value: i64 = t
            .parse()
            .map_err(|_| ParseErrorKind::LiteralOutOfRange(t.to_string()))?;
        if value == 0 {
            return Err(ParseErrorKind::ZeroLiteral);
        }
        if value.unsigned_abs() > u64::from(num_vars) {
            return Err(ParseErrorKind::LiteralOutOfRange(t.to_string()));
        }
        lits.push(Literal::from_signed(value).expect("nonzero and in range"));
    }
    Ok(lits)
}

fn push_literals(out: &mut String, lits: impl IntoIterator<Item = Literal>) {
    for l in lits {
        write!(out, "{l} ").expect("writing to a String");
    }
    out.push_str("0\n");
}

/// Canonical form of a formula with no symbol lines.
pub fn serialize(f: &FormulaState) -> String {
    serialize_document(&X3fDocument::new(f.clone()))
}

/// Canonical form: header, symbols by id, minterm by id, clauses as stored.
pub fn serialize_document(doc: &X3fDocument) -> String {
    let f = &doc.formula;
    let mut out = format!("p x3f {} {}\n", f.num_vars(), f.clauses().len());
    for (id, name) in &doc.symbols {
        writeln!(out, "s {id} {name}").expect("writing to a String");
    }
    if !f.minterm().is_empty() {
        out.push_str("m ");
        push_literals(&mut out, f.minterm().sorted_literals());
    }
    for c in f.clauses() {
        push_literals(&mut out, c.literals().iter().copied());
    }
    out
}
