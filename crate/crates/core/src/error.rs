use thiserror::Error;

use crate::random_space::ElementId;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {point:?} lies outside the root domain [-1, 1]^{dim}")]
    OutOfDomain { point: Vec<f64>, dim: usize },

    #[error("incomplete input: {0}")]
    IncompleteInput(String),

    #[error("element {0} is not live (already split)")]
    StaleId(ElementId),

    #[error("invalid reduced-order policy: {0}")]
    InvalidPolicy(String),

    #[error("numerical blow-up in element {element} at t = {time}: {detail}")]
    NumericalBlowup {
        element: ElementId,
        time: f64,
        detail: String,
    },

    #[error("incomplete inter-element coupling: {0}")]
    IncompleteCoupling(String),

    #[error("unsupported dimension {0} (at most {1} supported)")]
    UnsupportedDimension(usize, usize),

    #[error("configuration errors:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("validation failure: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
