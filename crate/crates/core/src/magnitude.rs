//! The magnitude map, rays, and coordinate sign flips.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::frames::Frame;
use crate::linalg::scalar::{inner, norm};
use crate::linalg::{Scalar, Tolerance};

/// `(|⟨x, f_i⟩|)_i`: the only observable.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeVector(Vec<f64>);

impl MagnitudeVector {
    pub fn new(values: Vec<f64>) -> Result<Self, Error> {
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidParameters(format!(
                "magnitude {} is {} (must be finite and nonnegative)",
                i + 1,
                values[i]
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    /// Euclidean distance to another magnitude vector of the same length.
    pub fn distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_file(&self) -> MeasurementFile {
        MeasurementFile {
            m: self.len(),
            magnitudes: self.0.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("measurement serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let file: MeasurementFile = serde_json::from_str(text)?;
        if file.m != file.magnitudes.len() {
            return Err(Error::Parse(format!(
                "header says m = {} but {} magnitudes are listed",
                file.m,
                file.magnitudes.len()
            )));
        }
        Self::new(file.magnitudes)
    }

    pub fn read(path: &Path) -> Result<Self, Error> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), Error> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// Measurement file: `{"m": M, "magnitudes": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementFile {
    pub m: usize,
    pub magnitudes: Vec<f64>,
}

pub fn magnitude_map<T: Scalar>(frame: &Frame<T>, x: &[T]) -> Result<MagnitudeVector, Error> {
    let coeffs = frame.analysis(x)?;
    Ok(MagnitudeVector(coeffs.iter().map(|c| c.abs()).collect()))
}

/// A vector modulo multiplication by a unimodular scalar.
///
/// The representative is rotated so that its first entry of modulus above
/// `residual_eps` is a positive real; the zero vector is its own ray.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray<T> {
    representative: Vec<T>,
}

impl<T: Scalar> Ray<T> {
    pub fn new(x: &[T], tol: &Tolerance) -> Self {
        let pivot = x
            .iter()
            .position(|v| v.abs() > tol.residual_eps())
            .or_else(|| {
                // Tiny but nonzero vectors still get a deterministic phase.
                let (i, v) = x
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))?;
                (v.abs() > 0.0).then_some(i)
            });
        let representative = match pivot {
            Some(i) => {
                let phase = x[i].unit_phase().conj();
                let mut r: Vec<T> = x.iter().map(|&v| v * phase).collect();
                r[i] = T::from_real(x[i].abs());
                r
            }
            None => vec![T::zero(); x.len()],
        };
        Self { representative }
    }

    pub fn representative(&self) -> &[T] {
        &self.representative
    }

    pub fn into_representative(self) -> Vec<T> {
        self.representative
    }

    pub fn is_zero(&self) -> bool {
        self.representative.iter().all(|v| *v == T::zero())
    }

    pub fn dim(&self) -> usize {
        self.representative.len()
    }
}

/// `min_{|c|=1} ‖x − c·y‖ ≤ residual_eps · max(‖x‖, 1)`.
pub fn ray_equal<T: Scalar>(x: &[T], y: &[T], tol: &Tolerance) -> bool {
    ray_distance(x, y) <= tol.residual_eps() * norm(x).max(1.0)
}

/// `min_{|c|=1} ‖x − c·y‖`, attained at `c = ⟨x, y⟩ / |⟨x, y⟩|`.
pub fn ray_distance<T: Scalar>(x: &[T], y: &[T]) -> f64 {
    if x.len() != y.len() {
        return f64::INFINITY;
    }
    let c = inner(x, y).unit_phase();
    x.iter()
        .zip(y)
        .map(|(&a, &b)| (a - c * b).abs_sq())
        .sum::<f64>()
        .sqrt()
}

/// An index subset `S ⊆ {0, …, M−1}`, acting on `ℝ^M`/`ℂ^M` by flipping the
/// sign of the coordinates in `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignPattern {
    mask: u64,
    len: usize,
}

impl SignPattern {
    pub const MAX_LEN: usize = 64;

    pub fn from_mask(mask: u64, len: usize) -> Result<Self, Error> {
        if len > Self::MAX_LEN {
            return Err(Error::InvalidParameters(format!(
                "sign patterns support at most {} coordinates, got {len}",
                Self::MAX_LEN
            )));
        }
        if len < 64 && mask >> len != 0 {
            return Err(Error::InvalidParameters(format!(
                "mask {mask:#x} has bits beyond length {len}"
            )));
        }
        Ok(Self { mask, len })
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Result<Self, Error> {
        let mut mask = 0u64;
        for &i in indices {
            if i >= len {
                return Err(Error::InvalidParameters(format!(
                    "index {i} out of range for length {len}"
                )));
            }
            mask |= 1 << i;
        }
        Self::from_mask(mask, len)
    }

    pub fn empty(len: usize) -> Self {
        Self { mask: 0, len }
    }

    pub fn full(len: usize) -> Self {
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Self { mask, len }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn cardinality(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && (self.mask >> i) & 1 == 1
    }

    pub fn complement(&self) -> Self {
        Self {
            mask: !self.mask & Self::full(self.len).mask,
            len: self.len,
        }
    }

    /// Members of `S`, ascending.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.contains(i)).collect()
    }

    fn check_len(&self, n: usize) -> Result<(), Error> {
        if n != self.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                actual: n,
            });
        }
        Ok(())
    }

    /// `σ_S`: negate the coordinates in `S`.
    pub fn apply<T: Scalar>(&self, a: &[T]) -> Result<Vec<T>, Error> {
        self.check_len(a.len())?;
        Ok(a.iter()
            .enumerate()
            .map(|(i, &v)| if self.contains(i) { -v } else { v })
            .collect())
    }

    /// `P_S(u) = (u + σ_S u)/2`: zero out the coordinates in `S`.
    pub fn project_fixed<T: Scalar>(&self, u: &[T]) -> Result<Vec<T>, Error> {
        let flipped = self.apply(u)?;
        Ok(u.iter().zip(flipped).map(|(&a, b)| (a + b).scale(0.5)).collect())
    }

    /// `P_{S^∁}(u) = (u − σ_S u)/2`: keep only the coordinates in `S`.
    pub fn project_negated<T: Scalar>(&self, u: &[T]) -> Result<Vec<T>, Error> {
        let flipped = self.apply(u)?;
        Ok(u.iter().zip(flipped).map(|(&a, b)| (a - b).scale(0.5)).collect())
    }
}

pub fn apply_sign_pattern<T: Scalar>(s: &SignPattern, a: &[T]) -> Result<Vec<T>, Error> {
    s.apply(a)
}
