use thiserror::Error;

/// Errors raised by the signal, method, spectrum, metrics, motion, and
/// synthesis layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty or invalid region of interest: {0}")]
    Region(String),
    #[error("format mismatch: {0}")]
    Format(String),
    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),
    #[error("window error: {0}")]
    Window(String),
    #[error("resample error: {0}")]
    Resample(String),
    #[error("band error: {0}")]
    Band(String),
    #[error("no convergence after {iterations} iterations (last delta {last_delta:e})")]
    Convergence { iterations: usize, last_delta: f64 },
    #[error("label error: {0}")]
    Label(String),
    #[error("sample error: {0}")]
    Sample(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("driving pool empty after filtering")]
    EmptyPool,
    #[error("insufficient pool: {qualifying} qualifying drivers, need {needed} per source")]
    InsufficientPool { qualifying: usize, needed: usize },
    #[error("parameter error: {0}")]
    Param(String),
    #[error("saturation: {0}")]
    Saturation(String),
    #[error("motion error: {0}")]
    Motion(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
