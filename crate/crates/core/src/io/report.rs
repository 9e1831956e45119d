//! Disagreement reports: an X3F document followed by
//!
//! ```text
//! v <policy> <salum-verdict> <oracle-verdict>
//! w <bits>                      (when the oracle found a model)
//! ```
//!
//! Verdicts are `sat` or `unsat`. `<bits>` lists the oracle model as `0`/`1`
//! by ascending variable id.

use thiserror::Error;

use super::x3f::{parse_document, serialize_document, ParseError, X3fDocument};
use crate::formula::TotalAssignment;
use crate::harness::Disagreement;
use crate::oracle::OracleVerdict;
use crate::salum::OrderingPolicy;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("formula block: {0}")]
    Formula(#[from] ParseError),
    #[error("missing `v` verdict line")]
    MissingVerdict,
    #[error("malformed verdict line")]
    MalformedVerdict,
    #[error("malformed witness line")]
    MalformedWitness,
    #[error("unexpected content after the report")]
    TrailingContent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub document: X3fDocument,
    pub policy: OrderingPolicy,
    pub salum_sat: bool,
    pub oracle_sat: bool,
    pub witness: Option<TotalAssignment>,
}

fn verdict_token(sat: bool) -> &'static str {
    if sat {
        "sat"
    } else {
        "unsat"
    }
}

impl Report {
    pub fn from_disagreement(d: &Disagreement) -> Self {
        Report {
            document: X3fDocument::new(d.formula.clone()),
            policy: d.policy.clone(),
            salum_sat: d.salum_outcome.is_claimed_sat(),
            oracle_sat: d.oracle_outcome.is_sat(),
            witness: match &d.oracle_outcome {
                OracleVerdict::Sat(m) => Some(m.clone()),
                OracleVerdict::Unsat => None,
            },
        }
    }
}

pub fn write_report(report: &Report) -> String {
    let mut out = serialize_document(&report.document);
    out.push_str(&format!(
        "v {} {} {}\n",
        report.policy,
        verdict_token(report.salum_sat),
        verdict_token(report.oracle_sat)
    ));
    if let Some(w) = &report.witness {
        out.push_str(&format!("w {}\n", w.to_bit_string()));
    }
    out
}

pub fn parse_report(text: &str) -> Result<Report, ReportError> {
    let at = if text.starts_with("v ") {
        Some(0)
    } else {
        text.find("\nv ").map(|i| i + 1)
    };
    let at = at.ok_or(ReportError::MissingVerdict)?;
    let document = parse_document(&text.as_bytes()[..at])?;
    let mut tail = text[at..].lines();

    let verdict: Vec<&str> = tail.next().unwrap_or_default().split(' ').collect();
    let [_, policy, salum, oracle] = verdict[..] else {
        return Err(ReportError::MalformedVerdict);
    };
    let policy: OrderingPolicy = policy.parse().map_err(|_| ReportError::MalformedVerdict)?;
    let sat = |t: &str| match t {
        "sat" => Ok(true),
        "unsat" => Ok(false),
        _ => Err(ReportError::MalformedVerdict),
    };
    let (salum_sat, oracle_sat) = (sat(salum)?, sat(oracle)?);

    let witness = match tail.next() {
        None => None,
        Some(line) => {
            let bits = line.strip_prefix("w ").ok_or(ReportError::MalformedWitness)?;
            if bits.len() != document.formula.num_vars() as usize
                || !bits.bytes().all(|b| b == b'0' || b == b'1')
            {
                return Err(ReportError::MalformedWitness);
            }
            Some(TotalAssignment::new(bits.bytes().map(|b| b == b'1').collect()))
        }
    };
    if tail.next().is_some() {
        return Err(ReportError::TrailingContent);
    }
    Ok(Report {
        document,
        policy,
        salum_sat,
        oracle_sat,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::paper_counterexample;
    use crate::harness::compare;
    use crate::salum::PolarityOrder;

    #[test]
    fn base_report_text() {
        let policy = OrderingPolicy::lexicographic(PolarityOrder::PositiveFirst);
        let d = compare(&paper_counterexample(), &policy)
            .disagreement()
            .cloned()
            .unwrap();
        let text = write_report(&Report::from_disagreement(&d));
        let w = d.oracle_outcome.witness().unwrap().to_bit_string();
        assert_eq!(
            text,
            format!("p x3f 5 3\n1 2 3 0\n2 4 5 0\n3 4 -5 0\nv lex/pos unsat sat\nw {w}\n")
        );
        let back = parse_report(&text).unwrap();
        assert_eq!(back, Report::from_disagreement(&d));
    }

    #[test]
    fn malformed_reports() {
        assert_eq!(parse_report("p x3f 1 0\n"), Err(ReportError::MissingVerdict));
        assert_eq!(
            parse_report("p x3f 1 0\nv lex/pos maybe sat\n"),
            Err(ReportError::MalformedVerdict)
        );
        assert_eq!(
            parse_report("p x3f 1 0\nv lex/pos unsat sat\nw 01\n"),
            Err(ReportError::MalformedWitness)
        );
        assert_eq!(
            parse_report("p x3f 1 0\nv lex/pos unsat sat\nw 1\nextra\n"),
            Err(ReportError::TrailingContent)
        );
    }
}
