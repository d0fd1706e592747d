use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// One failed density-matrix invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityViolation {
    NotHermitian { deviation: f64 },
    TraceNotOne { trace: f64 },
    NotPsd { min_eigenvalue: f64 },
}

impl fmt::Display for DensityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityViolation::NotHermitian { deviation } => {
                write!(f, "not Hermitian (max |m - m^dagger| = {deviation:e})")
            }
            DensityViolation::TraceNotOne { trace } => write!(f, "trace {trace} != 1"),
            DensityViolation::NotPsd { min_eigenvalue } => {
                write!(f, "not PSD (min eigenvalue {min_eigenvalue:e})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |h - h^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid density matrix: {}", join(.0))]
    InvalidDensity(Vec<DensityViolation>),

    #[error("state vector is zero")]
    ZeroVector,

    #[error("state is not normalized (sum |x|^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("parameter {name} = {value} outside [0, 1]")]
    ParamOutOfRange { name: &'static str, value: f64 },

    #[error("Weyl index ({m}, {n}) outside 0..=3")]
    IndexOutOfRange { m: usize, n: usize },

    #[error("Kraus operators violate completeness (max |sum M^dagger M - I| = {deviation:e})")]
    IncompleteKraus { deviation: f64 },

    #[error("closed form requires real amplitudes; use the numeric path")]
    ComplexStateUnsupported,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("grid has {points} points, need at least {required}")]
    GridTooCoarse { points: usize, required: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn join(v: &[DensityViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
