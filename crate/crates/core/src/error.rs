use thiserror::Error;

use crate::oracle::ReachabilityBound;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A function was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "target p_f = {p_f} is unreachable in the given time (p_f_max = {}, lambda_f_max = {})",
        bound.p_f_max,
        bound.lambda_f_max
    )]
    Unreachable { p_f: f64, bound: ReachabilityBound },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("policy parameters became non-finite at episode {episode}: {detail}")]
    Diverged { episode: usize, detail: String },

    #[error("malformed file {path}: {detail}")]
    Format { path: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Domain(_) | Error::Json(_) => 2,
            Error::Unreachable { .. } => 3,
            Error::Numerical(_) | Error::Diverged { .. } => 4,
            Error::Format { .. } | Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}
