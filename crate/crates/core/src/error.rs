use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("no sign change over [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    NoSignChange { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("root search did not converge within {iterations} iterations, bracket [{lo}, {hi}]")]
    NoConvergence { iterations: usize, lo: f64, hi: f64 },

    #[error("integration step {step} too large; must not exceed {max_step}")]
    StepTooLarge { step: f64, max_step: f64 },

    #[error("transmission requires E > 0, got E = {energy}")]
    NonPositiveEnergy { energy: f64 },

    #[error("transfer matrix is not unimodular: relative determinant defect {defect}")]
    NotUnimodular { defect: f64 },

    #[error("pole of {factor}")]
    Pole { factor: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coupling gamma = {gamma} is excluded (diagonal element would be 0 or infinite)")]
    ExcludedCoupling { gamma: f64 },

    #[error("no limit interaction is defined on region {region}")]
    UnsupportedRegion { region: String },

    #[error("no bound state for alpha = {alpha} (requires alpha < 0)")]
    NoBoundState { alpha: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
