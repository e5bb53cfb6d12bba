use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// EIT needs a non-zero control field.
    #[error("degenerate EIT configuration: control Rabi frequency is zero")]
    DegenerateEit,

    #[error("steady state is not unique: generator null space has dimension {null_space_dim}")]
    DegenerateSteadyState { null_space_dim: usize },

    #[error("probe integration failed: {reason} (n_points = {n_points}, max step change = {max_step_change:.3e})")]
    Integration {
        reason: String,
        n_points: usize,
        max_step_change: f64,
    },

    #[error("optimizer hit the search boundary at s = {s:.6e}, xi = {xi:.6e} (a = {a})")]
    BoundaryHit { a: f64, s: f64, xi: f64 },

    #[error("unknown case study `{0}` (expected `gupta` or `arnold`)")]
    UnknownCase(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad inputs rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::UnknownCase(_)
                | Error::Config(_)
                | Error::Json(_)
                | Error::Io(_)
        )
    }
}
