use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("ring context mismatch: {0}")]
    ContextMismatch(String),

    /// `J ⊆ I` fails; carries the first generator of J outside I.
    #[error("J is not contained in I: generator {0} of J does not lie in I")]
    NotContained(String),

    #[error("root {root} of space #{index} does not lie in I \\ J")]
    RootOutside { index: usize, root: String },

    #[error("zero module; sdepth/fdepth undefined")]
    ZeroModule,

    #[error("empty decomposition has no sdepth")]
    EmptyDecomposition,

    #[error("not a Stanley decomposition of I/J: {0}")]
    InvalidDecomposition(String),

    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("box bound {given} is smaller than the required bound {required}")]
    BoxBoundTooSmall { given: i64, required: i64 },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
}

impl Error {
    /// True for errors caused by the mathematical content of a request
    /// rather than by its syntax.
    pub fn is_mathematical(&self) -> bool {
        !matches!(
            self,
            Error::Parse { .. } | Error::BudgetExceeded(_) | Error::Malformed(_)
        )
    }
}
