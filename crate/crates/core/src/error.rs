use thiserror::Error;

/// Errors raised by the simulation library.
///
/// Variants map onto the CLI exit-code classes: `Validation` and `Spec` are
/// input problems, the numerical variants are solver failures, `Io` is I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no real root of the population-inversion cubic in [-1, 0]; roots: {roots:?}")]
    NoPhysicalRoot { roots: Vec<(f64, f64)> },

    #[error("singular denominator in {0}")]
    Singularity(&'static str),

    #[error("linear system is singular (smallest singular value {smallest_singular_value:e})")]
    Solvability { smallest_singular_value: f64 },

    #[error("Richardson extrapolation did not converge (error estimate {error_estimate:e})")]
    Differentiation { error_estimate: f64 },

    #[error("integration step size underflow at t = {t}")]
    Stiffness { t: f64 },

    #[error("integration diverged at t = {t}")]
    Divergence { t: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("spectrum feature error: {0}")]
    Feature(String),

    #[error("sweep spec error: {0}")]
    Spec(String),

    #[error("unknown figure id `{0}`")]
    UnknownFigure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used for CLI exit codes and sweep cell status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    Input,
    Solver,
    Io,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Validation(_)
            | Error::Domain(_)
            | Error::Config(_)
            | Error::Spec(_)
            | Error::UnknownFigure(_)
            | Error::Json(_) => ErrorClass::Input,
            Error::NoPhysicalRoot { .. }
            | Error::Singularity(_)
            | Error::Solvability { .. }
            | Error::Differentiation { .. }
            | Error::Stiffness { .. }
            | Error::Divergence { .. }
            | Error::Feature(_) => ErrorClass::Solver,
            Error::Io(_) => ErrorClass::Io,
        }
    }
}
