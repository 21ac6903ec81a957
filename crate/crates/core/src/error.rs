use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("non-finite value on contour sample {index}; pole on or near the contour")]
    PoleOnContour { index: usize },
    #[error("target lies within {distance:e} of the curve")]
    TargetOnCurve { distance: f64 },
    #[error("argument jump {jump:.3} rad between samples {index} and {next}; refine the sampling")]
    InsufficientSampling { index: usize, next: usize, jump: f64 },
    #[error("internal consistency violation: {0}")]
    Consistency(String),
}

impl Error {
    /// Numerical failures as opposed to bad input or broken invariants.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::Degenerate(_)
                | Error::PoleOnContour { .. }
                | Error::TargetOnCurve { .. }
                | Error::InsufficientSampling { .. }
        )
    }
}
