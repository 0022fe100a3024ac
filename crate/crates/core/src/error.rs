use thiserror::Error;

/// Errors raised by the library. Domain errors (a valid input that violates a
/// mathematical precondition) and input errors (unparseable text) share one
/// type; [`Error::is_input_error`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("not a number: '{0}'")]
    BadNumber(String),

    #[error("negative number not allowed: '{0}'")]
    NegativeNumber(String),

    #[error("duplicate point '{0}'")]
    DuplicatePoint(String),

    #[error("unknown point '{0}'")]
    UnknownPoint(String),

    #[error("unbound variable '{0}'")]
    UnboundVariable(String),

    #[error("not T0: {0} <= {1} <= {0}")]
    NotT0(String, String),

    #[error("too many points: {0} (at most 64 supported)")]
    TooManyPoints(usize),

    #[error("no join for ({0},{1})")]
    NoJoin(String, String),

    #[error("no meet for ({0},{1})")]
    NoMeet(String, String),

    #[error("no bottom")]
    NoBottom,

    #[error("no top")]
    NoTop,

    #[error("set {{{0}}} is not open")]
    NotOpen(String),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("{what} is not monotone: {lo} <= {hi} but image of {lo} is not below image of {hi}")]
    NonMonotone {
        what: String,
        lo: String,
        hi: String,
    },

    #[error("non-continuous kernel at bind: {lo} <= {hi} but the kernel is not monotone there")]
    NonContinuousKernel { lo: String, hi: String },

    #[error("invalid valuation table: {0}")]
    InvalidTable(String),

    #[error("table has infinite value on {{{0}}}")]
    InfiniteTable(String),

    #[error("non-representable: {0}")]
    NonRepresentable(String),

    #[error("not linear: {0}")]
    NotLinear(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("incomplete definition: {0}")]
    Incomplete(String),
}

impl Error {
    /// True for syntax-level failures (bad text, unknown names), false for
    /// failures of a well-formed input to meet a mathematical requirement.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::BadNumber(_)
                | Error::NegativeNumber(_)
                | Error::DuplicatePoint(_)
                | Error::UnknownPoint(_)
                | Error::UnboundVariable(_)
                | Error::TooManyPoints(_)
                | Error::Incomplete(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
