use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{FormulaState, Literal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("variable {0} listed more than once in fixed sequence")]
    RepeatedVariable(u32),
    #[error("variable id 0 in fixed sequence")]
    ZeroVariable,
    #[error("unrecognized policy `{0}`")]
    Unrecognized(String),
}

/// Which variable the procedure decides on next.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrderingKind {
    Lexicographic,
    ReverseLexicographic,
    /// Most clause occurrences first; ties by ascending id.
    FrequencyDescending,
    /// Listed variables first, the rest by ascending id.
    FixedSequence(Vec<u32>),
}

/// Which polarity of the chosen variable is tried first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolarityOrder {
    PositiveFirst,
    NegativeFirst,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderingPolicy {
    kind: OrderingKind,
    polarity: PolarityOrder,
}

impl OrderingPolicy {
    pub fn new(kind: OrderingKind, polarity: PolarityOrder) -> Result<Self, PolicyError> {
        if let OrderingKind::FixedSequence(seq) = &kind {
            for (i, &v) in seq.iter().enumerate() {
                if v == 0 {
                    return Err(PolicyError::ZeroVariable);
                }
                if seq[..i].contains(&v) {
                    return Err(PolicyError::RepeatedVariable(v));
                }
            }
        }
        Ok(OrderingPolicy { kind, polarity })
    }

    pub fn lexicographic(polarity: PolarityOrder) -> Self {
        OrderingPolicy {
            kind: OrderingKind::Lexicographic,
            polarity,
        }
    }

    pub fn reverse_lexicographic(polarity: PolarityOrder) -> Self {
        OrderingPolicy {
            kind: OrderingKind::ReverseLexicographic,
            polarity,
        }
    }

    pub fn frequency(polarity: PolarityOrder) -> Self {
        OrderingPolicy {
            kind: OrderingKind::FrequencyDescending,
            polarity,
        }
    }

    pub fn kind(&self) -> &OrderingKind {
        &self.kind
    }

    pub fn polarity(&self) -> PolarityOrder {
        self.polarity
    }

    /// Variables still occurring in `f`'s clauses, in decision order.
    pub fn variable_order(&self, f: &FormulaState) -> Vec<u32> {
        let counts = f.occurrence_counts();
        let mut vars = f.clause_vars();
        match &self.kind {
            OrderingKind::Lexicographic => {}
            OrderingKind::ReverseLexicographic => vars.reverse(),
            OrderingKind::FrequencyDescending => {
                // stable sort keeps ascending ids among equal counts
                vars.sort_by(|a, b| counts[*b as usize].cmp(&counts[*a as usize]));
            }
            OrderingKind::FixedSequence(seq) => {
                let rank = |v: u32| seq.iter().position(|&s| s == v).unwrap_or(usize::MAX);
                vars.sort_by_key(|&v| rank(v));
            }
        }
        vars
    }

    /// The two literals of `var` in trial order.
    pub fn polarities(&self, var: u32) -> [Literal; 2] {
        match self.polarity {
            PolarityOrder::PositiveFirst => [Literal::pos(var), Literal::neg(var)],
            PolarityOrder::NegativeFirst => [Literal::neg(var), Literal::pos(var)],
        }
    }
}

impl fmt::Display for OrderingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OrderingKind::Lexicographic => write!(f, "lex")?,
            OrderingKind::ReverseLexicographic => write!(f, "revlex")?,
            OrderingKind::FrequencyDescending => write!(f, "freq")?,
            OrderingKind::FixedSequence(seq) => {
                let ids: Vec<String> = seq.iter().map(u32::to_string).collect();
                write!(f, "fixed:{}", ids.join(","))?
            }
        }
        match self.polarity {
            PolarityOrder::PositiveFirst => write!(f, "/pos"),
            PolarityOrder::NegativeFirst => write!(f, "/neg"),
        }
    }
}

impl FromStr for OrderingKind {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(OrderingKind::Lexicographic),
            "revlex" => Ok(OrderingKind::ReverseLexicographic),
            "freq" => Ok(OrderingKind::FrequencyDescending),
            _ => {
                let csv = s
                    .strip_prefix("fixed:")
                    .ok_or_else(|| PolicyError::Unrecognized(s.to_string()))?;
                let seq = if csv.is_empty() {
                    Vec::new()
                } else {
                    csv.split(',')
                        .map(|t| {
                            t.parse::<u32>()
                                .map_err(|_| PolicyError::Unrecognized(s.to_string()))
                        })
                        .collect::<Result<Vec<_>, _>>()?
                };
                Ok(OrderingKind::FixedSequence(seq))
            }
        }
    }
}

impl FromStr for PolarityOrder {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pos" => Ok(PolarityOrder::PositiveFirst),
            "neg" => Ok(PolarityOrder::NegativeFirst),
            _ => Err(PolicyError::Unrecognized(s.to_string())),
        }
    }
}

/// Parses the `<order>/<polarity>` token used in reports.
impl FromStr for OrderingPolicy {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (order, polarity) = s
            .rsplit_once('/')
            .ok_or_else(|| PolicyError::Unrecognized(s.to_string()))?;
        OrderingPolicy::new(order.parse()?, polarity.parse()?)
    }
}
