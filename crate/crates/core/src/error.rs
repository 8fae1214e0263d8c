use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a sampled curve could not be assigned a depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegenerateReason {
    /// A crossing of the zero set landed inside the pole exclusion cap.
    NearPole,
    /// A contour chain failed to close.
    OpenChain,
    /// A loop has too few points to be trusted at this mesh resolution.
    ShortLoop,
    /// Accumulated azimuth is not close to an integer multiple of 2π.
    NonIntegerWinding,
    /// |winding| > 1, impossible for an embedded loop.
    WindingOutOfRange,
    /// Antipodal pairing disagrees with the parity of the degree.
    AntipodalMismatch,
    /// Depth exceeds floor(d/2).
    BezoutViolation,
    /// More components than 1 + (d-1)(d-2)/2.
    HarnackViolation,
}

impl fmt::Display for DegenerateReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::NearPole => "crossing within pole cap",
            Self::OpenChain => "open contour chain",
            Self::ShortLoop => "loop with fewer than 6 points",
            Self::NonIntegerWinding => "non-integer winding",
            Self::WindingOutOfRange => "winding magnitude above 1",
            Self::AntipodalMismatch => "antipodal pairing inconsistent with degree parity",
            Self::BezoutViolation => "depth above floor(d/2)",
            Self::HarnackViolation => "component count above Harnack bound",
        };
        f.write_str(s)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "quadrature did not converge: error estimate {err_est:.3e} above tolerance {tol:.3e} after {panels} panels"
    )]
    NonConvergence { err_est: f64, tol: f64, panels: usize },

    #[error("kernel evaluation inconsistent at ({x}, {y}): {detail}")]
    SingularEvaluation { x: f64, y: f64, detail: String },

    #[error("degenerate sample: {0}")]
    DegenerateSample(DegenerateReason),

    #[error("{discarded} of {trials} trials discarded, above the 10% limit")]
    ExcessiveDiscards { discarded: usize, trials: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
