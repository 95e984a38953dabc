use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the region where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (best estimate {estimate:e}, error bound {error_bound:e})"
    )]
    QuadratureNotConverged {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    #[error("integrand is not finite at x = {abscissa}")]
    NonFiniteIntegrand { abscissa: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root finder exhausted {iterations} iterations; best bracket [{lo}, {hi}]")]
    RootNotConverged { lo: f64, hi: f64, iterations: usize },

    #[error("peak search failed in lobe {lobe}: {source}")]
    PeakSearch { lobe: usize, source: Box<Error> },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error(
        "interference ring sum not converged at the {radius:.1} m cap \
         (partial sum {partial:e}, last ring share {last_share:e})"
    )]
    RingSumNotConverged {
        partial: f64,
        radius: f64,
        last_share: f64,
    },

    #[error("internal consistency check failed: {what} = {value}")]
    Inconsistent { what: &'static str, value: f64 },

    #[error("invalid value for `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("unknown configuration key `{key}`; valid keys: {}", valid.join(", "))]
    UnknownKey { key: String, valid: Vec<&'static str> },

    #[error("{0}")]
    Io(String),

    /// A failure inside one point of a sweep.
    #[error("at {parameter} = {value}: {source}")]
    SweepPoint {
        parameter: &'static str,
        value: f64,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad input rather than by a numerical failure.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::SweepPoint { source, .. } => source.is_validation(),
            _ => matches!(
                self,
                Error::Domain(_) | Error::Config { .. } | Error::UnknownKey { .. } | Error::Io(_)
            ),
        }
    }

    /// Process exit status: 1 for bad input, 2 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        if self.is_validation() {
            1
        } else {
            2
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
