use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error(
        "tied observations at value {value}: entry ({}, {}) and entry ({}, {}); \
         enable tie perturbation or the shared risk-set policy to proceed",
        .first.0 + 1, .first.1 + 1, .second.0 + 1, .second.1 + 1
    )]
    Tie {
        value: f64,
        first: (usize, usize),
        second: (usize, usize),
    },

    #[error("observation {value} at ({}, {}) lies outside the support of the baseline", .row + 1, .col + 1)]
    OutsideSupport { row: usize, col: usize, value: f64 },

    #[error("degenerate estimate: {0}")]
    Degenerate(String),

    #[error("{0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
