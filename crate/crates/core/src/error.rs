use thiserror::Error;

/// Errors produced by the analysis, coding and experiment routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {n} exceeds the cap of {max} for {what}")]
    DimensionTooLarge { n: usize, max: usize, what: &'static str },

    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("mask or word {bits:#b} does not fit in {n} bits")]
    MaskOutOfRange { bits: u32, n: usize },

    #[error("assignment {assignment:#b} sets coordinates outside mask {mask:#b}")]
    AssignmentMismatch { mask: u32, assignment: u32 },

    #[error("probability {name} = {value} is outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("correlation parameter eps = {0} is outside [0, 1/2]")]
    EpsOutOfRange(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("negative variance {value} at mask {mask:#b} beyond rounding tolerance")]
    NegativeVariance { mask: u32, value: f64 },

    #[error("the typical set is empty")]
    EmptyTypicalSet,

    #[error("the codebook is empty")]
    EmptyCodebook,

    #[error("the conditional typical set is empty")]
    EmptyConditionalTypicalSet,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}
