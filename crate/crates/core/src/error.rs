use std::io;

use thiserror::Error;

use crate::transform::TransformKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("malformed PGM: {0}")]
    Pgm(String),

    #[error("malformed side-information stream: {0}")]
    SideInfo(String),

    #[error("dimension mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    DimensionMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("transform kind mismatch: expected {expected}, got {actual}")]
    KindMismatch {
        expected: TransformKind,
        actual: TransformKind,
    },

    #[error("spectrum is not conjugate-symmetric: imaginary residue {residue:e} after inverse FFT")]
    SymmetryViolation { residue: f64 },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("could not place {count} disjoint {size}x{size} blocks after {attempts} attempts")]
    PlacementInfeasible {
        count: usize,
        size: usize,
        attempts: usize,
    },

    #[error("mask support too sparse: smoothed mask still has a value <= {epsilon:e} after {passes} passes")]
    InsufficientSupport { passes: usize, epsilon: f64 },
}

impl Error {
    pub(crate) fn dims(expected: (usize, usize), actual: (usize, usize)) -> Self {
        Error::DimensionMismatch {
            expected_rows: expected.0,
            expected_cols: expected.1,
            rows: actual.0,
            cols: actual.1,
        }
    }
}
