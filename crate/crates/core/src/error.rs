use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("constant undefined: {0}")]
    Undefined(String),

    #[error("accuracy target not met in {context}: achieved error estimate {estimate:.3e}")]
    Accuracy { context: String, estimate: f64 },

    #[error("Picard iteration diverged in window {window} after {} iterations (last delta {:.3e})", history.len(), history.last().copied().unwrap_or(f64::NAN))]
    Divergence { window: usize, history: Vec<f64> },

    #[error("iterate left the working region |u| <= {radius} in window {window}; try shorter time windows")]
    RegionExit { window: usize, radius: f64 },

    #[error("numerical blow-up at time step {step}")]
    BlowUp { step: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("incompatible grids: {0}")]
    Grid(String),
}

impl Error {
    /// Prefixes the context of an accuracy error with the location being evaluated.
    pub fn at(self, location: impl FnOnce() -> String) -> Self {
        match self {
            Error::Accuracy { context, estimate } => Error::Accuracy {
                context: format!("{} ({context})", location()),
                estimate,
            },
            other => other,
        }
    }

    /// True for failures of a numerical procedure (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Accuracy { .. } | Error::Divergence { .. } | Error::RegionExit { .. } | Error::BlowUp { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
