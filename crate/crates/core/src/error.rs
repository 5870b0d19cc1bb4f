use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("closed-form engine requires delta_A == delta_B (got {delta_a} and {delta_b})")]
    UnequalDetunings { delta_a: f64, delta_b: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid bath: {0}")]
    InvalidBath(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("unknown figure id `{0}`")]
    UnknownFigure(String),

    #[error("integrator failed at t = {t}: {reason}")]
    Integrator { t: f64, reason: String },

    #[error("norm conservation breached at t = {t}: |norm - 1| = {deviation:e}")]
    NormBreach { t: f64, deviation: f64 },

    #[error("at {point}: {source}")]
    AtPoint {
        point: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Integrator { .. } | Error::NormBreach { .. } => true,
            Error::AtPoint { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
