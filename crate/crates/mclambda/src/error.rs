//! Error type shared by the whole crate.

/// Everything that can go wrong across table construction, measure
/// evaluation, inference and the normal-grid simulation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Contingency table with a grand total of zero.
    #[error("contingency table has a zero grand total")]
    ZeroTotal,

    /// Negative frequency in a contingency table.
    #[error("count at cell ({row}, {col}) is negative ({value})")]
    NegativeCount { row: usize, col: usize, value: f64 },

    /// Negative entry in a probability table.
    #[error("probability at cell ({row}, {col}) is negative ({value})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    /// Probability entries do not sum to one within tolerance.
    #[error("probabilities sum to {sum}, expected 1 within 1e-9")]
    NotNormalized { sum: f64 },

    /// Fewer than two rows or columns.
    #[error("table is {rows}x{cols}, need at least 2x2")]
    TooFewCategories { rows: usize, cols: usize },

    /// Order parameter outside `1..=max`.
    #[error("order t = {t} outside valid range 1..={max}")]
    BadOrder { t: usize, max: usize },

    /// The top-t marginal probabilities sum to 1, so the PRE denominator
    /// vanishes and the measure is undefined.
    #[error("top-{t} marginal probabilities sum to 1; measure undefined")]
    DegenerateMarginal { t: usize },

    /// The root-mean-square term of the K-family measure is zero.
    #[error("root-mean-square error term is zero")]
    DegenerateRms,

    /// A measure was asked for in a direction it does not support.
    #[error("direction {0} is not supported by this operation")]
    BadDirection(&'static str),

    /// Significance level outside (0, 1).
    #[error("alpha = {alpha} outside (0, 1)")]
    BadAlpha { alpha: f64 },

    /// Degenerate integration rectangle.
    #[error("invalid rectangle: ({x1}, {x2}] x ({y1}, {y2}]")]
    BadRectangle { x1: f64, x2: f64, y1: f64, y2: f64 },

    /// Argument outside the mathematical domain of a function.
    #[error("argument {value} outside domain of {what}")]
    DomainError { what: &'static str, value: f64 },

    /// Unparseable cell in a table file (1-based line and column).
    #[error("line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },

    /// Ragged table file (1-based line).
    #[error("line {line} has {got} fields, expected {expected}")]
    NotRectangular {
        line: usize,
        expected: usize,
        got: usize,
    },
}

impl Error {
    /// Stable machine-readable code, used by the CLI error channel.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroTotal => "ZeroTotal",
            Error::NegativeCount { .. } => "NegativeCount",
            Error::NegativeEntry { .. } => "NegativeEntry",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::TooFewCategories { .. } => "TooFewCategories",
            Error::BadOrder { .. } => "BadOrder",
            Error::DegenerateMarginal { .. } => "DegenerateMarginal",
            Error::DegenerateRms => "DegenerateRms",
            Error::BadDirection(_) => "BadDirection",
            Error::BadAlpha { .. } => "BadAlpha",
            Error::BadRectangle { .. } => "BadRectangle",
            Error::DomainError { .. } => "DomainError",
            Error::ParseError { .. } => "ParseError",
            Error::NotRectangular { .. } => "NotRectangular",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
