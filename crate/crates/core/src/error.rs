use thiserror::Error;

/// Every failure mode surfaced by the library.
///
/// Variants are grouped by the exit-code class the CLI maps them to; see
/// [`Error::class`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: String, limit: usize },
    #[error("ideal is the unit ideal; the variety is empty")]
    EmptyVariety,
    #[error("series has no known nonzero term")]
    ZeroLeadingTerm,
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("negative valuation {0}; residue undefined")]
    NegativeValuation(String),
    #[error("substitution into an irrational exponent {0}")]
    IrrationalExponentInSubstitution(String),
    #[error("wild ramification in characteristic {p}: {detail}")]
    WildRamification { p: u64, detail: String },
    #[error("coefficient field too small: {0}")]
    CoefficientFieldTooSmall(String),
    #[error("element is not integral")]
    NotIntegral,
    #[error("matrix is singular at the tracked precision")]
    SingularAtPrecision,
    #[error("not on group: equation {equation} leaves residual {residual}")]
    NotOnGroup { equation: String, residual: String },
    #[error("branch is not centered at infinity")]
    NotCenteredAtInfinity,
    #[error("branch is not mu-reduced: {0}")]
    NotReduced(String),
    #[error("decomposition incomplete: {0}")]
    DecompositionIncomplete(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    InvalidInput,
    Unsupported,
    Budget,
    Verification,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            CoefficientFieldTooSmall(_)
            | WildRamification { .. }
            | IrrationalExponentInSubstitution(_) => ErrorClass::Unsupported,
            BudgetExceeded { .. } => ErrorClass::Budget,
            Parse(_) | InvalidInput(_) | InvalidField(_) | FieldMismatch(..) | NotOnGroup { .. } => {
                ErrorClass::InvalidInput
            }
            _ => ErrorClass::Verification,
        }
    }

    /// Short stable name of the variant, used in structured reports.
    pub fn kind(&self) -> &'static str {
        use Error::*;
        match self {
            DivisionByZero => "DivisionByZero",
            FieldMismatch(..) => "FieldMismatch",
            InvalidField(_) => "InvalidField",
            Parse(_) => "Parse",
            InvalidInput(_) => "InvalidInput",
            BudgetExceeded { .. } => "BudgetExceeded",
            EmptyVariety => "EmptyVariety",
            ZeroLeadingTerm => "ZeroLeadingTerm",
            PrecisionInsufficient(_) => "PrecisionInsufficient",
            NegativeValuation(_) => "NegativeValuation",
            IrrationalExponentInSubstitution(_) => "IrrationalExponentInSubstitution",
            WildRamification { .. } => "WildRamification",
            CoefficientFieldTooSmall(_) => "CoefficientFieldTooSmall",
            NotIntegral => "NotIntegral",
            SingularAtPrecision => "SingularAtPrecision",
            NotOnGroup { .. } => "NotOnGroup",
            NotCenteredAtInfinity => "NotCenteredAtInfinity",
            NotReduced(_) => "NotReduced",
            DecompositionIncomplete(_) => "DecompositionIncomplete",
            Inconclusive(_) => "Inconclusive",
        }
    }

    pub(crate) fn budget(what: impl Into<String>, limit: usize) -> Self {
        Error::BudgetExceeded { what: what.into(), limit }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
