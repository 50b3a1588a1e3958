//! Error type shared across the crate.

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by triangle ingestion, fitting and reporting.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A field could not be parsed. `row` and `col` are 1-based positions
    /// in the input file, counting the header line.
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    /// Input has the wrong shape (ragged rows, trapezoid, degenerate size).
    #[error("shape error: {0}")]
    Shape(String),

    /// Input values violate a model requirement (e.g. non-positive cells).
    #[error("validation error: {0}")]
    Validation(String),

    /// An argument is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The triangle is valid but too small for the requested computation.
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    /// Simulation configuration is invalid or infeasible.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    ///
    /// 2 is reserved for usage errors (flag parsing), 3 for i/o, 4 for
    /// data errors, 5 for configuration errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            Error::Parse { .. }
            | Error::Shape(_)
            | Error::Validation(_)
            | Error::Domain(_)
            | Error::UnsupportedShape(_) => 4,
            Error::Config(_) => 5,
        }
    }
}
