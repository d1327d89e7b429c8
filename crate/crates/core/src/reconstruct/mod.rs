//! Recovering a ray from magnitude-only measurements.
//!
//! Real frames use an exact sign search over `{±1}^M` modulo the global sign,
//! pruned by range membership of the signed prefix. Complex frames use error
//! reduction (alternating projections) with random restarts; its outcomes
//! are labeled heuristic.

pub(crate) mod complex;
mod real;

use std::cmp::Ordering;

use serde::Serialize;

use crate::frames::{encode_vector, Entry};
use crate::linalg::Scalar;
use crate::magnitude::Ray;

pub use complex::{reconstruct_complex, ComplexOptions};
pub use real::{enumerate_ambiguities, reconstruct_real, reconstruct_real_with, RealSearchOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Unique,
    Ambiguous,
    NoSolution,
    HeuristicSuccess,
    HeuristicFail,
}

impl Status {
    /// CLI exit code.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Unique | Status::HeuristicSuccess => 0,
            Status::Ambiguous => 3,
            Status::NoSolution | Status::HeuristicFail => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult<T> {
    pub status: Status,
    /// Every ray found, sorted by canonical representative.
    pub rays: Vec<Ray<T>>,
    /// `‖magnitude_map(r) − a‖` for each ray.
    pub residuals: Vec<f64>,
    /// Signed prefixes visited by the real search; iterations for the
    /// complex heuristic.
    pub patterns_explored: u64,
    pub restarts_used: usize,
    /// Smallest magnitude residual seen, including failed attempts.
    pub best_residual: f64,
    /// Complex only: `‖|P c| − a‖` after every iteration, per restart.
    pub residual_history: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct ResultJson {
    status: Status,
    rays: Vec<Vec<Entry>>,
    residuals: Vec<f64>,
    patterns_explored: u64,
    best_residual: f64,
}

impl<T: Scalar> ReconstructionResult<T> {
    pub fn to_json(&self) -> String {
        let doc = ResultJson {
            status: self.status,
            rays: self.rays.iter().map(|r| encode_vector(r.representative())).collect(),
            residuals: self.residuals.clone(),
            patterns_explored: self.patterns_explored,
            best_residual: self.best_residual,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("result serializes");
        s.push('\n');
        s
    }
}

fn compare_rays<T: Scalar>(a: &Ray<T>, b: &Ray<T>) -> Ordering {
    a.representative()
        .iter()
        .zip(b.representative())
        .map(|(x, y)| x.re().total_cmp(&y.re()).then(x.im().total_cmp(&y.im())))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Sorts rays (with their residuals) by canonical representative.
pub(crate) fn sort_rays<T: Scalar>(rays: Vec<Ray<T>>, residuals: Vec<f64>) -> (Vec<Ray<T>>, Vec<f64>) {
    let mut pairs: Vec<_> = rays.into_iter().zip(residuals).collect();
    pairs.sort_by(|a, b| compare_rays(&a.0, &b.0));
    pairs.into_iter().unzip()
}
