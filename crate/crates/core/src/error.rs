use thiserror::Error;

use crate::bft::BftCoefficients;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The oscillator is critically damped or overdamped (|γ| ≥ 2mω).
    #[error("not underdamped: |gamma| = {gamma} must be < 2*m*omega = {bound}")]
    Regime { gamma: f64, bound: f64 },

    #[error("non-normalizable state: {0}")]
    NonNormalizable(String),

    #[error("state is not normalized: trace = {trace}")]
    Unnormalized { trace: f64 },

    #[error("Hermite order {0} exceeds the supported maximum of 64")]
    HermiteOrder(usize),

    #[error("coupling too strong: m^2 w1^2 w2^2 - lambda^2 = {0} must be > 0")]
    CouplingTooStrong(f64),

    #[error("step size underflow at t = {t} (dt = {dt})")]
    StepUnderflow { t: f64, dt: f64 },

    #[error("coefficient blow-up at t = {t}")]
    BlowUp { t: f64, last: Box<BftCoefficients> },

    #[error("kernel is not Hermitian (defect {defect:e})")]
    NonHermitian { defect: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("axis mismatch: {0}")]
    AxisMismatch(String),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("NaN produced for {0}")]
    NotANumber(String),

    #[error("{context}: {source}")]
    AtPoint { context: String, source: Box<Error> },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) | Error::NonFinite(_) | Error::Io(_) => 1,
            Error::AtPoint { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}

pub(crate) fn finite(x: f64, what: &'static str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(what))
    }
}
