use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("parameter alpha = {alpha} lies in S_{n} = {{-{n}, ..., -1}}")]
    DegenerateParameter { n: usize, alpha: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("root finder did not converge after {sweeps} sweeps (max residual {max_residual:e})")]
    NonConvergence {
        sweeps: usize,
        max_residual: f64,
        /// Last iterate, rounded to double precision.
        best: Vec<Complex64>,
    },

    #[error("level curve trace failed: {0}")]
    Trace(String),

    #[error("potential evaluated at a support point ({re}, {im})")]
    SingularEvaluation { re: f64, im: f64 },

    #[error("test point ({re}, {im}) is not {expected} to the level curve")]
    InvalidTestPoint { re: f64, im: f64, expected: &'static str },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
