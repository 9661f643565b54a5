use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("degree mismatch: declared degree {declared}, but point {point} used")]
    DegreeMismatch { declared: usize, point: usize },

    #[error("element is not a member of the group: {0}")]
    Membership(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("group of order {order} exceeds the feasibility bound {bound}; import a table instead")]
    FeasibilityExceeded { order: String, bound: u64 },

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("class fusion budget exceeded: subgroup order {order} > {bound}")]
    FusionBudgetExceeded { order: String, bound: u64 },

    #[error("character {character} has non-integral or out-of-range indicator {value}")]
    NonIntegralIndicator { character: usize, value: String },

    #[error("class functions live on different class tables")]
    TableMismatch,

    #[error("format error: {0}")]
    Format(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("ambiguous class match: {0}")]
    AmbiguousClassMatch(String),

    #[error("generator {index} is not an involution")]
    NotInvolution { index: usize },

    #[error("string condition violated: (s{j} s{i})^2 != 1")]
    StringConditionViolated { i: usize, j: usize },

    #[error("intersection check exceeded its budget: {0}")]
    IntersectionBudgetExceeded(String),

    #[error("ambiguous class selection: {0}")]
    AmbiguousSelection(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded(_)
                | Error::FeasibilityExceeded { .. }
                | Error::FusionBudgetExceeded { .. }
                | Error::IntersectionBudgetExceeded(_)
        )
    }

    pub fn is_consistency(&self) -> bool {
        matches!(
            self,
            Error::Consistency(_) | Error::AmbiguousClassMatch(_) | Error::NonIntegralIndicator { .. }
        )
    }
}
