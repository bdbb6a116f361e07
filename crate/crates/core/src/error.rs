use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a documented invariant.
    #[error("invalid input: {0}")]
    Validation(String),

    /// The closed-form dispersion model has no nulls or recoveries when D = 0.
    #[error("dispersion model undefined: {0}")]
    UndefinedModel(String),

    #[error("power budget {budget_w} W is below the fixed consumption {fixed_w} W")]
    InfeasibleBudget { budget_w: f64, fixed_w: f64 },

    /// A dispersion null made a link loss infinite.
    #[error("dispersion null encountered: {0}")]
    DispersionNull(String),

    /// |(f0/f) sin(theta0)| > 1, so the steered beam leaves visible space.
    #[error("no real beam direction: sine argument {0} is outside [-1, 1]")]
    NoRealBeam(f64),

    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
