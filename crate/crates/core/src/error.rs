use thiserror::Error;

/// Every failure the toolkit reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("symbol {symbol} out of range for length {n}")]
    OutOfRange { symbol: usize, n: usize },
    #[error("symbol {0} appears more than once")]
    DuplicateSymbol(usize),
    #[error("position {pos} out of range for length {n}")]
    IndexOutOfRange { pos: usize, n: usize },
    #[error("member length {found} does not match set length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("duplicate member {0}")]
    DuplicateMember(String),
    #[error("{what} exceeds configured cap {cap}")]
    CapExceeded { what: String, cap: u128 },
    #[error("search budget of {0} exceeded")]
    SearchBudgetExceeded(u64),
    #[error("{0}")]
    InvalidParameter(String),
    #[error("d+1 = {d1} does not divide n = {n}")]
    DivisibilityViolation { n: usize, d1: usize },
    #[error("positions {0} and {1} are erased in the same block")]
    SameBlockDoubleErasure(usize, usize),
    #[error("more than one erased position")]
    MultipleErasure,
    #[error("position {0} is not erased")]
    NotErased(usize),
    #[error("helper position {0} is erased")]
    HelperErased(usize),
    #[error("no unique recovery at position {0}")]
    Ambiguous(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0:#x} is not irreducible of the requested degree")]
    ReducibleModulus(u32),
    #[error("evaluation point {0} repeated")]
    DuplicateEvalPoint(usize),
    #[error("word is not in the code")]
    NotInCode,
    #[error("symbol {0} repeated in the suffix codeword")]
    DuplicateSymbolInE(usize),
    #[error("symbol map sends two symbols to {0}")]
    NonInjectiveMap(usize),
    #[error("not a member of the registered construction")]
    NotAMember,
    #[error("cell {0} is erased")]
    CellErased(usize),
    #[error("malformed permutation set file: {0}")]
    Format(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier used in CLI `error=` records.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyInput => "EmptyInput",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::DuplicateSymbol(_) => "DuplicateSymbol",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::DuplicateMember(_) => "DuplicateMember",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::SearchBudgetExceeded(_) => "SearchBudgetExceeded",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::DivisibilityViolation { .. } => "DivisibilityViolation",
            Error::SameBlockDoubleErasure(..) => "SameBlockDoubleErasure",
            Error::MultipleErasure => "MultipleErasure",
            Error::NotErased(_) => "NotErased",
            Error::HelperErased(_) => "HelperErased",
            Error::Ambiguous(_) => "Ambiguous",
            Error::DivisionByZero => "DivisionByZero",
            Error::ReducibleModulus(_) => "ReducibleModulus",
            Error::DuplicateEvalPoint(_) => "DuplicateEvalPoint",
            Error::NotInCode => "NotInCode",
            Error::DuplicateSymbolInE(_) => "DuplicateSymbolInE",
            Error::NonInjectiveMap(_) => "NonInjectiveMap",
            Error::NotAMember => "NotAMember",
            Error::CellErased(_) => "CellErased",
            Error::Format(_) => "FormatError",
            Error::Io(_) => "IoError",
        }
    }

    pub(crate) fn cap(what: impl Into<String>, cap: impl Into<u128>) -> Self {
        Error::CapExceeded {
            what: what.into(),
            cap: cap.into(),
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
