use thiserror::Error;

/// Errors raised by the material model and its solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HysteresisError {
    #[error("polarization magnitude {magnitude} outside the energy domain (saturation {saturation})")]
    DomainViolation { magnitude: f64, saturation: f64 },

    #[error("smoothed norm derivative undefined at the origin when eps = 0")]
    DegenerateNorm,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("newton solver did not converge within {iterations} iterations (gradient {grad_norm:e}, target {target:e})")]
    NotConverged {
        iterations: usize,
        grad_norm: f64,
        target: f64,
    },

    #[error("line search stalled after {backtracks} backtracks at newton iteration {iteration}")]
    LineSearchStall { iteration: usize, backtracks: usize },

    #[error("singular linear system")]
    Singular,

    #[error("cell {cell}: {source}")]
    Cell {
        cell: usize,
        #[source]
        source: Box<HysteresisError>,
    },

    #[error("time step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<HysteresisError>,
    },

    #[error("sequence error: {0}")]
    Sequence(String),

    /// Reading or writing an external file failed.
    #[error("{0}")]
    Format(String),
}

impl HysteresisError {
    pub(crate) fn in_cell(self, cell: usize) -> Self {
        HysteresisError::Cell {
            cell,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Self {
        HysteresisError::Step {
            step,
            source: Box::new(self),
        }
    }

    /// Strips `Cell`/`Step` wrappers.
    pub fn root(&self) -> &HysteresisError {
        match self {
            HysteresisError::Cell { source, .. } | HysteresisError::Step { source, .. } => {
                source.root()
            }
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, HysteresisError>;
