//! Dense linear algebra over `f64` and `Complex64` at desk scale.
//!
//! Rank decisions are relative: a pivot counts when it exceeds
//! `rank_eps` times the leading pivot.

mod eig;
mod matrix;
mod qr;
pub mod scalar;

pub use eig::{sym_eig, SymEig};
pub use matrix::DenseMatrix;
pub use qr::{
    inverse, least_squares, null_space, qr_column_pivot, range_basis, rank, subspace_distance,
    LeastSquares, PivotedQr,
};
pub use scalar::{Field, Scalar};

use crate::error::Error;

pub const DEFAULT_RANK_EPS: f64 = 1e-10;
pub const DEFAULT_RESIDUAL_EPS: f64 = 1e-8;

/// Numerical stand-ins for "nonzero" and "equal".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    rank_eps: f64,
    residual_eps: f64,
}

impl Tolerance {
    pub fn new(rank_eps: f64, residual_eps: f64) -> Result<Self, Error> {
        if !(rank_eps > 0.0 && rank_eps < 1.0) {
            return Err(Error::InvalidTolerance(format!(
                "rank_eps must lie in (0, 1), got {rank_eps}"
            )));
        }
        if !(residual_eps > 0.0 && residual_eps.is_finite()) {
            return Err(Error::InvalidTolerance(format!(
                "residual_eps must be positive, got {residual_eps}"
            )));
        }
        Ok(Self {
            rank_eps,
            residual_eps,
        })
    }

    pub fn rank_eps(&self) -> f64 {
        self.rank_eps
    }

    pub fn residual_eps(&self) -> f64 {
        self.residual_eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_eps: DEFAULT_RANK_EPS,
            residual_eps: DEFAULT_RESIDUAL_EPS,
        }
    }
}
