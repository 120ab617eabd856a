use thiserror::Error;

/// Errors raised by the symmetry, reduction and residual machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    #[error("basis index {0} out of range (expected 1..=8)")]
    IndexOutOfRange(usize),

    #[error("element is zero within tolerance")]
    ZeroElement,

    #[error("numerical degeneracy in {case}: {detail}")]
    NumericalDegeneracy { case: String, detail: String },

    #[error("constraint violated for {class}: {detail}")]
    ConstraintViolation { class: String, detail: String },

    #[error("case mismatch: expected {expected}, got {actual}")]
    CaseMismatch { expected: String, actual: String },

    #[error("evaluation window [{t0}, {t1}] x [{x0}, {x1}] exceeds the field domain")]
    WindowExceeded { t0: f64, t1: f64, x0: f64, x1: f64 },

    #[error("operation requires a linear constitutive law with zero offset")]
    RequiresLinearChi,

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("singular leading coefficient {coefficient} = {value:e} at zeta = {zeta}")]
    SingularCoefficient {
        coefficient: &'static str,
        value: f64,
        zeta: f64,
    },

    #[error("integration produced a non-finite state at zeta = {zeta}")]
    StepUnstable { zeta: f64 },

    #[error("similarity variable {zeta} outside reduced solution range [{lo}, {hi}]")]
    RangeExceeded { zeta: f64, lo: f64, hi: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParams {
            field,
            reason: reason.into(),
        }
    }

    /// Whether the error stems from floating-point failure rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericalDegeneracy { .. }
                | Error::SingularCoefficient { .. }
                | Error::StepUnstable { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
