//! Line-oriented trace files.
//!
//! One event per line:
//!
//! ```text
//! <kind> <literal|-> <clause-index|->[ | <x3f line> | <x3f line> ...]
//! ```
//!
//! The optional tail is the snapshot as canonical X3F lines (header,
//! minterm, clauses in stored order) joined by ` | ` without their
//! newlines. Lines starting with `c` are comments.

use thiserror::Error;

use super::x3f::{parse, serialize, ParseError};
use crate::formula::Literal;
use crate::salum::{ConflictSite, EventKind, Trace, TraceEvent};

const SEPARATOR: &str = " | ";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceParseError {
    #[error("line {line}: malformed event")]
    Malformed { line: usize },
    #[error("line {line}: unknown event kind `{kind}`")]
    UnknownKind { line: usize, kind: String },
    #[error("line {line}: snapshot: {source}")]
    Snapshot { line: usize, source: ParseError },
}

fn kind_token(kind: EventKind) -> &'static str {
    match kind {
        EventKind::ScanEnter => "scan",
        EventKind::Decision => "decision",
        EventKind::Propagation => "propagate",
        EventKind::ClauseDeletion => "delete",
        EventKind::UnitMigration => "unit",
        EventKind::Reduced => "reduced",
        EventKind::Conflict(ConflictSite::Assignment) => "conflict:assign",
        EventKind::Conflict(ConflictSite::Propagation) => "conflict:propagate",
        EventKind::Conflict(ConflictSite::UnitMigration) => "conflict:unit",
        EventKind::Conflict(ConflictSite::EmptyClause) => "conflict:empty",
        EventKind::RemoveInvoked => "remove",
        EventKind::Verdict { claimed_sat: true } => "verdict:sat",
        EventKind::Verdict { claimed_sat: false } => "verdict:unsat",
    }
}

fn parse_kind(token: &str) -> Option<EventKind> {
    Some(match token {
        "scan" => EventKind::ScanEnter,
        "decision" => EventKind::Decision,
        "propagate" => EventKind::Propagation,
        "delete" => EventKind::ClauseDeletion,
        "unit" => EventKind::UnitMigration,
        "reduced" => EventKind::Reduced,
        "conflict:assign" => EventKind::Conflict(ConflictSite::Assignment),
        "conflict:propagate" => EventKind::Conflict(ConflictSite::Propagation),
        "conflict:unit" => EventKind::Conflict(ConflictSite::UnitMigration),
        "conflict:empty" => EventKind::Conflict(ConflictSite::EmptyClause),
        "remove" => EventKind::RemoveInvoked,
        "verdict:sat" => EventKind::Verdict { claimed_sat: true },
        "verdict:unsat" => EventKind::Verdict { claimed_sat: false },
        _ => return None,
    })
}

pub fn format_event(event: &TraceEvent) -> String {
    let lit = event.literal.map_or_else(|| "-".to_string(), |l| l.to_string());
    let idx = event
        .clause_index
        .map_or_else(|| "-".to_string(), |k| k.to_string());
    let mut line = format!("{} {lit} {idx}", kind_token(event.kind));
    if let Some(snapshot) = &event.snapshot {
        for x3f_line in serialize(snapshot).lines() {
            line.push_str(SEPARATOR);
            line.push_str(x3f_line);
        }
    }
    line
}

/// Writes a trace, preceded by `header` comment lines.
pub fn write_trace(trace: &Trace, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        out.push_str("c ");
        out.push_str(h);
        out.push('\n');
    }
    for e in trace.events() {
        out.push_str(&format_event(e));
        out.push('\n');
    }
    out
}

pub fn parse_trace(text: &str) -> Result<Trace, TraceParseError> {
    let mut events = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw == "c" || raw.starts_with("c ") || raw.is_empty() {
            continue;
        }
        let mut segments = raw.split(SEPARATOR);
        let head = segments.next().unwrap_or_default();
        let [kind, lit, idx] = head.split(' ').collect::<Vec<_>>()[..] else {
            return Err(TraceParseError::Malformed { line });
        };
        let kind = parse_kind(kind).ok_or_else(|| TraceParseError::UnknownKind {
            line,
            kind: kind.to_string(),
        })?;
        let literal = match lit {
            "-" => None,
            _ => Some(
                lit.parse::<i64>()
                    .ok()
                    .and_then(|v| Literal::from_signed(v).ok())
                    .ok_or(TraceParseError::Malformed { line })?,
            ),
        };
        let clause_index = match idx {
            "-" => None,
            _ => Some(
                idx.parse::<usize>()
                    .map_err(|_| TraceParseError::Malformed { line })?,
            ),
        };
        let rest: Vec<&str> = segments.collect();
        let snapshot = if rest.is_empty() {
            None
        } else {
            let doc: String = rest.iter().map(|s| format!("{s}\n")).collect();
            Some(parse(doc.as_bytes()).map_err(|source| TraceParseError::Snapshot { line, source })?)
        };
        events.push(TraceEvent {
            kind,
            literal,
            clause_index,
            snapshot,
        });
    }
    Ok(Trace::from_events(events))
}
