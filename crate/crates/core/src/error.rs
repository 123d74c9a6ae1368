use thiserror::Error;

/// Errors raised anywhere in the analysis pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// The interference mean `2(πλ)^{η/2}ΩP/(η−2)` has no finite value for η ≤ 2.
    #[error("path-loss exponent eta = {eta} makes the aggregate interference diverge (eta must exceed 2)")]
    Divergence { eta: f64 },

    #[error("config line {line}: {reason}")]
    ConfigSyntax { line: usize, reason: String },

    #[error("{0}")]
    Io(String),

    #[error("quadrature did not converge in {stage}: estimate {value:e} with error {abs_error:e}")]
    Quadrature {
        stage: &'static str,
        value: f64,
        abs_error: f64,
    },

    #[error("{stage}: could not bracket the root after {doublings} doublings (last upper bound {upper:e}, value {value:e})")]
    Bracket {
        stage: &'static str,
        doublings: usize,
        upper: f64,
        value: f64,
    },

    #[error("{stage}: finite differences disagree between step sizes ({coarse:e} vs {fine:e})")]
    IllConditioned {
        stage: &'static str,
        coarse: f64,
        fine: f64,
    },

    #[error("{function}: argument outside the domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("{function}: evaluation unavailable ({reason})")]
    Unavailable {
        function: &'static str,
        reason: String,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for errors caused by user input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::Divergence { .. }
                | Error::ConfigSyntax { .. }
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
