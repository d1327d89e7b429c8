//! Seeded frame generators.

use itertools::Itertools;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Frame;
use crate::error::Error;
use crate::linalg::scalar::{norm, scaled, sub};
use crate::linalg::{self, DenseMatrix, Scalar, Tolerance};

/// A full-spark candidate is accepted only if its distance to the span of
/// every `(N−1)`-subset exceeds this.
pub const FULL_SPARK_MIN_DISTANCE: f64 = 1e-6;

const MAX_RESAMPLES: usize = 10_000;

fn check_sizes(n: usize, m: usize) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::InvalidParameters("N ≥ 1 required".into()));
    }
    if m < n {
        return Err(Error::InvalidParameters(format!(
            "M ≥ N required (got N = {n}, M = {m})"
        )));
    }
    Ok(())
}

fn gaussian_vector<T: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Vec<T> {
    (0..n).map(|_| T::sample_gaussian(rng)).collect()
}

/// I.i.d. standard Gaussian entries; deterministic in `seed`.
pub fn gen_random<T: Scalar>(n: usize, m: usize, seed: u64) -> Result<Frame<T>, Error> {
    check_sizes(n, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RESAMPLES {
        let vectors = (0..m).map(|_| gaussian_vector(&mut rng, n)).collect();
        if let Ok(frame) = Frame::new(n, vectors) {
            return Ok(frame);
        }
    }
    Err(Error::NotAFrame("random sampling never produced a spanning family".into()))
}

/// Every `N`-element subset is linearly independent.
///
/// Starts from the standard basis, then appends unit vectors drawn uniformly
/// on the sphere, resampling each until it stays at least
/// [`FULL_SPARK_MIN_DISTANCE`] away from the span of every `(N−1)`-subset of
/// the vectors chosen so far.
pub fn gen_full_spark<T: Scalar>(n: usize, m: usize, seed: u64) -> Result<Frame<T>, Error> {
    check_sizes(n, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = Tolerance::default();
    let mut vectors: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut e = vec![T::zero(); n];
            e[i] = T::one();
            e
        })
        .collect();

    // Orthonormal bases of the spans of all (N−1)-subsets chosen so far.
    let mut spans: Vec<DenseMatrix<T>> = if n > 1 {
        (0..n)
            .combinations(n - 1)
            .map(|idx| span_basis(&vectors, &idx, &tol))
            .collect()
    } else {
        Vec::new()
    };

    while vectors.len() < m {
        let candidate = (0..MAX_RESAMPLES)
            .map(|_| {
                let g = gaussian_vector::<T>(&mut rng, n);
                let len = norm(&g);
                scaled(&g, T::from_real(1.0 / len))
            })
            .find(|c| {
                spans
                    .iter()
                    .all(|q| distance_to_span(q, c) > FULL_SPARK_MIN_DISTANCE)
            })
            .ok_or_else(|| Error::NotAFrame("full-spark candidate search exhausted".into()))?;
        vectors.push(candidate);
        if n > 1 {
            let new = vectors.len() - 1;
            for mut idx in (0..new).combinations(n - 2) {
                idx.push(new);
                spans.push(span_basis(&vectors, &idx, &tol));
            }
        }
    }
    Frame::new(n, vectors)
}

fn span_basis<T: Scalar>(vectors: &[Vec<T>], idx: &[usize], tol: &Tolerance) -> DenseMatrix<T> {
    let cols: Vec<Vec<T>> = idx.iter().map(|&i| vectors[i].clone()).collect();
    let m = DenseMatrix::from_columns(&cols).expect("equal lengths");
    linalg::range_basis(&m, tol)
}

fn distance_to_span<T: Scalar>(q: &DenseMatrix<T>, c: &[T]) -> f64 {
    let coords = q.adjoint_mul_vec(c).expect("matching length");
    let p = q.mul_vec(&coords).expect("matching length");
    norm(&sub(c, &p))
}

/// A full-spark family of `2N−1` vectors whose last vector is repeated up to
/// `M` entries: still injective, no longer full spark.
pub fn gen_repeated_tail<T: Scalar>(n: usize, m: usize, seed: u64) -> Result<Frame<T>, Error> {
    check_sizes(n, m)?;
    if m < 2 * n {
        return Err(Error::InvalidParameters(format!(
            "repeated-tail frames need M ≥ 2N (got N = {n}, M = {m})"
        )));
    }
    let base = gen_full_spark::<T>(n, 2 * n - 1, seed)?;
    let mut vectors = base.vectors().to_vec();
    let last = vectors[2 * n - 2].clone();
    vectors.resize(m, last);
    Frame::new(n, vectors)
}

/// Frame of the windowed Fourier transform of a length-`signal_len` signal
/// with real window `window` (of length `M_w`) and time step `hop`.
///
/// Vector `(k, ω)`, stored at index `k·M_w + ω`, carries
/// `window[t]·exp(2πiωt/M_w)` at position `t + k·hop`, so that its frame
/// coefficient is `X(k, ω) = Σ_t window[t]·x(t + k·hop)·exp(−2πiωt/M_w)`.
pub fn gen_windowed_fourier(
    window: &[f64],
    signal_len: usize,
    hop: usize,
) -> Result<Frame<Complex64>, Error> {
    let mw = window.len();
    if mw == 0 || mw > signal_len {
        return Err(Error::InvalidParameters(format!(
            "window length must lie in 1..={signal_len}, got {mw}"
        )));
    }
    if hop == 0 {
        return Err(Error::InvalidParameters("hop must be at least 1".into()));
    }
    if !window.iter().all(|g| g.is_finite()) {
        return Err(Error::InvalidParameters("window has non-finite entries".into()));
    }
    let shifts = (signal_len - mw) / hop + 1;

    let mut covered = vec![false; signal_len];
    for k in 0..shifts {
        for (t, &g) in window.iter().enumerate() {
            if g != 0.0 {
                covered[t + k * hop] = true;
            }
        }
    }
    if let Some(s) = covered.iter().position(|&c| !c) {
        return Err(Error::NotAFrame(format!(
            "sample {s} is never covered by a nonzero window entry"
        )));
    }

    let mut vectors = Vec::with_capacity(shifts * mw);
    for k in 0..shifts {
        for omega in 0..mw {
            let mut v = vec![Complex64::new(0.0, 0.0); signal_len];
            for (t, &g) in window.iter().enumerate() {
                let phase = std::f64::consts::TAU * ((omega * t) % mw) as f64 / mw as f64;
                v[t + k * hop] = Complex64::from_polar(g, phase);
            }
            vectors.push(v);
        }
    }
    Frame::new(signal_len, vectors)
}
