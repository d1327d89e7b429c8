//! Finite frames and their analysis, synthesis and frame operators.

mod generate;
mod io;

pub use generate::{
    gen_full_spark, gen_random, gen_repeated_tail, gen_windowed_fourier, FULL_SPARK_MIN_DISTANCE,
};
pub use io::{decode_vector, encode_vector, AnyFrame, Entry, FrameFile};

use crate::error::Error;
use crate::linalg::scalar::norm;
use crate::linalg::{self, DenseMatrix, Field, Scalar, Tolerance};

/// An ordered family of `M` vectors spanning an `N`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame<T> {
    dim: usize,
    vectors: Vec<Vec<T>>,
}

/// Optimal lower and upper frame bounds: the extreme eigenvalues of the
/// frame operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub fn is_tight(&self, eps: f64) -> bool {
        (self.upper - self.lower).abs() <= eps * self.upper.max(1.0)
    }

    pub fn is_parseval(&self, eps: f64) -> bool {
        (self.lower - 1.0).abs() <= eps && (self.upper - 1.0).abs() <= eps
    }
}

/// Orthonormal basis (as columns of an `M × N` matrix) of the range of the
/// analysis operator. Injectivity of the magnitude map depends only on this
/// subspace.
#[derive(Debug, Clone)]
pub struct CoefficientRange<T> {
    basis: DenseMatrix<T>,
}

impl<T: Scalar> CoefficientRange<T> {
    pub fn basis(&self) -> &DenseMatrix<T> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Orthogonal projection of a coefficient vector onto the range.
    pub fn project(&self, c: &[T]) -> Result<Vec<T>, Error> {
        let coords = self.basis.adjoint_mul_vec(c)?;
        self.basis.mul_vec(&coords)
    }

    /// Distance from `c` to the range.
    pub fn distance_to(&self, c: &[T]) -> Result<f64, Error> {
        let p = self.project(c)?;
        Ok(norm(&linalg::scalar::sub(c, &p)))
    }

    /// Frobenius distance between the orthogonal projectors of two ranges.
    pub fn distance(&self, other: &Self) -> Result<f64, Error> {
        linalg::subspace_distance(&self.basis, &other.basis)
    }
}

impl<T: Scalar> Frame<T> {
    /// Validates and wraps `vectors` as a frame for the `dim`-dimensional
    /// space: every vector has length `dim`, all entries are finite and the
    /// family spans.
    pub fn new(dim: usize, vectors: Vec<Vec<T>>) -> Result<Self, Error> {
        Self::with_tolerance(dim, vectors, &Tolerance::default())
    }

    pub fn with_tolerance(dim: usize, vectors: Vec<Vec<T>>, tol: &Tolerance) -> Result<Self, Error> {
        if dim == 0 {
            return Err(Error::InvalidParameters("signal dimension must be positive".into()));
        }
        if vectors.len() < dim {
            return Err(Error::NotAFrame(format!(
                "M ≥ N required, got M = {} < N = {dim}",
                vectors.len()
            )));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: v.len(),
                });
            }
            if !v.iter().all(|x| x.is_finite()) {
                return Err(Error::NotAFrame(format!("vector {} has non-finite entries", i + 1)));
            }
        }
        let frame = Self { dim, vectors };
        let r = linalg::rank(&frame.synthesis_matrix(), tol);
        if r < dim {
            return Err(Error::NotAFrame(format!(
                "vectors span a {r}-dimensional subspace of a {dim}-dimensional space"
            )));
        }
        Ok(frame)
    }

    pub fn field(&self) -> Field {
        T::FIELD
    }

    /// Signal dimension `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of frame vectors `M`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<T>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[T] {
        &self.vectors[i]
    }

    /// `M × N` matrix whose `i`-th row is `conj(f_i)`, so that `T·x`
    /// has entries `⟨x, f_i⟩`.
    pub fn analysis_matrix(&self) -> DenseMatrix<T> {
        let rows: Vec<Vec<T>> = self
            .vectors
            .iter()
            .map(|v| v.iter().map(|x| x.conj()).collect())
            .collect();
        DenseMatrix::from_rows(&rows).expect("frame vectors share one length")
    }

    /// `N × M` matrix with the frame vectors as columns.
    pub fn synthesis_matrix(&self) -> DenseMatrix<T> {
        DenseMatrix::from_columns(&self.vectors).expect("frame vectors share one length")
    }

    /// `N × |S|` matrix with the selected frame vectors as columns.
    pub fn subset_matrix(&self, indices: &[usize]) -> DenseMatrix<T> {
        let mut m = DenseMatrix::zeros(self.dim, indices.len());
        for (k, &i) in indices.iter().enumerate() {
            for (r, &v) in self.vectors[i].iter().enumerate() {
                m[(r, k)] = v;
            }
        }
        m
    }

    /// Frame coefficients `(⟨x, f_i⟩)_i`.
    pub fn analysis(&self, x: &[T]) -> Result<Vec<T>, Error> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.len(),
            });
        }
        Ok(self
            .vectors
            .iter()
            .map(|f| linalg::scalar::inner(x, f))
            .collect())
    }

    /// `Σ c_i f_i`.
    pub fn synthesis(&self, c: &[T]) -> Result<Vec<T>, Error> {
        if c.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: c.len(),
            });
        }
        let mut out = vec![T::zero(); self.dim];
        for (&ci, f) in c.iter().zip(&self.vectors) {
            for (o, &fk) in out.iter_mut().zip(f) {
                *o += ci * fk;
            }
        }
        Ok(out)
    }

    /// `S = T*T = Σ f_i f_i*` together with the optimal frame bounds.
    pub fn frame_operator(&self, tol: &Tolerance) -> Result<(DenseMatrix<T>, FrameBounds), Error> {
        let s = self.frame_operator_matrix();
        let eig = linalg::sym_eig(&s, tol)?;
        let upper = eig.values[0];
        let lower = *eig.values.last().expect("dim > 0");
        if lower.partial_cmp(&(tol.rank_eps() * upper)) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::NotAFrame(format!(
                "frame operator is numerically singular (λ_min = {lower:e}, λ_max = {upper:e})"
            )));
        }
        Ok((s, FrameBounds { lower, upper }))
    }

    fn frame_operator_matrix(&self) -> DenseMatrix<T> {
        let n = self.dim;
        let mut s = DenseMatrix::zeros(n, n);
        for f in &self.vectors {
            for j in 0..n {
                for k in 0..n {
                    s[(j, k)] += f[j] * f[k].conj();
                }
            }
        }
        s
    }

    /// Applies `g(S)` to every frame vector, for a spectral function `g`.
    fn spectral_transform(&self, tol: &Tolerance, g: impl Fn(f64) -> f64) -> Result<Self, Error> {
        let (s, _) = self.frame_operator(tol)?;
        let eig = linalg::sym_eig(&s, tol)?;
        let op = eig.apply_spectral(g);
        self.map_vectors(&op)
    }

    fn map_vectors(&self, op: &DenseMatrix<T>) -> Result<Self, Error> {
        let vectors = self
            .vectors
            .iter()
            .map(|f| op.mul_vec(f))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            dim: self.dim,
            vectors,
        })
    }

    /// `{S⁻¹ f_i}`.
    pub fn canonical_dual(&self, tol: &Tolerance) -> Result<Self, Error> {
        self.spectral_transform(tol, |l| 1.0 / l)
    }

    /// `{S^{-1/2} f_i}`, a Parseval frame equivalent to `self`.
    pub fn canonical_parseval(&self, tol: &Tolerance) -> Result<Self, Error> {
        self.spectral_transform(tol, |l| 1.0 / l.sqrt())
    }

    pub fn coefficient_range(&self, tol: &Tolerance) -> CoefficientRange<T> {
        CoefficientRange {
            basis: linalg::range_basis(&self.analysis_matrix(), tol),
        }
    }

    /// The equivalent frame `{R f_i}` for an invertible `R`.
    pub fn apply_invertible(&self, r: &DenseMatrix<T>, tol: &Tolerance) -> Result<Self, Error> {
        if r.rows() != self.dim || r.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: if r.rows() != self.dim { r.rows() } else { r.cols() },
            });
        }
        if linalg::rank(r, tol) < self.dim {
            return Err(Error::Singular);
        }
        self.map_vectors(r)
    }

    /// Appends one vector; a frame stays a frame.
    pub fn extended(&self, v: Vec<T>) -> Result<Self, Error> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: v.len(),
            });
        }
        let mut vectors = self.vectors.clone();
        vectors.push(v);
        Ok(Self {
            dim: self.dim,
            vectors,
        })
    }
}
