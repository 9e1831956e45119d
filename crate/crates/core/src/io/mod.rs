//! Text formats: formulas, traces and disagreement reports.

pub mod report;
pub mod trace;
pub mod x3f;

pub use report::{parse_report, write_report, Report, ReportError};
pub use trace::{format_event, parse_trace, write_trace, TraceParseError};
pub use x3f::{
    parse, parse_document, serialize, serialize_document, ParseError, ParseErrorKind, SymbolTable,
    X3fDocument,
};
