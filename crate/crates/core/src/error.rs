use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("state index {0} out of range 1..=6")]
    IndexOutOfRange(usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The two eigenfrequency routes disagree. Signals a bug, not bad input.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("non-equidistance error not applicable: {0}")]
    NotApplicable(String),

    #[error("p = {re} + {im}i is a pole of s2(p)")]
    Pole { re: f64, im: f64 },

    #[error("g = {0} outside the comb domain (0, 1]")]
    Domain(f64),

    #[error("branch {branch} infeasible at g = {g}: {reason}")]
    BranchInfeasible {
        branch: crate::comb::Branch,
        g: f64,
        reason: String,
    },

    #[error("RK4 norm drift {drift:e} exceeds bound {bound:e}; reduce the step")]
    Accuracy { drift: f64, bound: f64 },

    #[error("schedule error: {0}")]
    Schedule(String),

    #[error("unknown sweep parameter `{0}` (expected g, delta, f1 or f2)")]
    UnknownParameter(String),

    #[error("{0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Process exit code: 1 for I/O failures, 2 for usage and validation errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 1,
            _ => 2,
        }
    }
}
