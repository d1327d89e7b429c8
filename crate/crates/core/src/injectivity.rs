//! Deciding injectivity of the magnitude map for a concrete frame.
//!
//! For real frames the complement property is an exact characterization:
//! the magnitude map is injective iff for every index subset `S`, either
//! `{f_i}_{i∈S}` or `{f_i}_{i∉S}` spans. For complex frames the same
//! condition is only necessary, and at most `2N−1` vectors never suffice
//! (for `N ≥ 2`). Every negative verdict carries an explicit pair of signals
//! with equal magnitudes lying on different rays.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::frames::{encode_vector, Entry, Frame};
use crate::linalg::scalar::{add, norm, sub};
use crate::linalg::{self, DenseMatrix, Field, Scalar, Tolerance};
use crate::magnitude::{magnitude_map, ray_equal, SignPattern};

pub const DEFAULT_MAX_FRAME_SIZE: usize = 24;
pub const DEFAULT_MAX_SUBSETS: u64 = 1 << 24;

/// Below this many subset pairs the enumeration runs on the calling thread.
const PARALLEL_THRESHOLD: u64 = 1 << 12;

/// Limits on the exhaustive subset enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest `M` accepted by the complement-property check, which visits
    /// `2^(M−1)` subset pairs.
    pub max_frame_size: usize,
    /// Largest `C(M, N)` accepted by the full-spark test.
    pub max_subsets: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_frame_size: DEFAULT_MAX_FRAME_SIZE,
            max_subsets: DEFAULT_MAX_SUBSETS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Injective,
    NotInjective,
    /// Complex frames only: every necessary condition holds, but no
    /// per-frame sufficient condition is available.
    NecessaryConditionsPass,
}

/// What a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateBasis {
    ComplementProperty,
    /// Complex frame with `M ≤ 2N−1`.
    ComplexSizeBound,
    /// `ℂ¹`: a single magnitude determines the ray.
    OneDimensional,
}

/// Two signals with equal magnitudes on different rays.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Scalar> Witness<T> {
    /// Re-measures both signals: equal magnitudes (within
    /// `residual_eps·(1 + ‖a‖)`) and distinct rays.
    pub fn verify(&self, frame: &Frame<T>, tol: &Tolerance) -> Result<bool, Error> {
        let a = magnitude_map(frame, &self.x)?;
        let b = magnitude_map(frame, &self.y)?;
        let equal = a.distance(&b) <= tol.residual_eps() * (1.0 + a.norm());
        let scale = norm(&self.x).max(norm(&self.y));
        let loose = Tolerance::new(tol.rank_eps(), tol.residual_eps().max(1e-6))?;
        let distinct = scale > 0.0 && !ray_equal(&self.x, &self.y, &loose);
        Ok(equal && distinct)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InjectivityCertificate<T> {
    pub verdict: Verdict,
    pub failing_subset: Option<SignPattern>,
    pub witness: Option<Witness<T>>,
    /// Subset pairs `{S, S^∁}` examined, in enumeration order.
    pub checked_subsets: u64,
    pub basis: CertificateBasis,
}

#[derive(Debug, Serialize)]
struct WitnessJson {
    x: Vec<Entry>,
    y: Vec<Entry>,
}

#[derive(Debug, Serialize)]
struct CertificateJson {
    verdict: Verdict,
    failing_subset: Option<Vec<usize>>,
    witness: Option<WitnessJson>,
    checked_subsets: u64,
}

impl<T: Scalar> InjectivityCertificate<T> {
    pub fn is_injective(&self) -> bool {
        self.verdict == Verdict::Injective
    }

    /// `{"verdict", "failing_subset" (one-based), "witness", "checked_subsets"}`.
    pub fn to_json(&self) -> String {
        let doc = CertificateJson {
            verdict: self.verdict,
            failing_subset: self
                .failing_subset
                .map(|s| s.indices().into_iter().map(|i| i + 1).collect()),
            witness: self.witness.as_ref().map(|w| WitnessJson {
                x: encode_vector(&w.x),
                y: encode_vector(&w.y),
            }),
            checked_subsets: self.checked_subsets,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("certificate serializes");
        s.push('\n');
        s
    }
}

fn spans<T: Scalar>(frame: &Frame<T>, indices: &[usize], tol: &Tolerance) -> bool {
    indices.len() >= frame.dim() && linalg::rank(&frame.subset_matrix(indices), tol) == frame.dim()
}

/// Pair number `k` is `S = {0} ∪ {i + 1 : bit i of k}`, so every unordered
/// pair `{S, S^∁}` is visited exactly once.
fn pair_pattern(k: u64, m: usize) -> SignPattern {
    SignPattern::from_mask(1 | (k << 1), m).expect("mask fits in m bits")
}

fn pair_fails<T: Scalar>(frame: &Frame<T>, s: &SignPattern, tol: &Tolerance) -> bool {
    !spans(frame, &s.indices(), tol) && !spans(frame, &s.complement().indices(), tol)
}

/// Exhaustive complement-property check.
///
/// A failure yields the lowest failing subset (in enumeration order,
/// independent of thread scheduling) and a verified witness. A pass yields
/// `Injective` for real frames and `NecessaryConditionsPass` for complex
/// ones.
pub fn complement_property<T: Scalar>(
    frame: &Frame<T>,
    tol: &Tolerance,
    budget: &SearchBudget,
) -> Result<InjectivityCertificate<T>, Error> {
    let m = frame.len();
    if m > budget.max_frame_size || m > SignPattern::MAX_LEN {
        return Err(Error::BudgetExceeded(format!(
            "the complement-property check enumerates 2^(M−1) subsets; M = {m} exceeds the limit of {}",
            budget.max_frame_size.min(SignPattern::MAX_LEN)
        )));
    }
    let pairs = 1u64 << (m - 1);
    let failing = if pairs >= PARALLEL_THRESHOLD {
        (0..pairs)
            .into_par_iter()
            .find_first(|&k| pair_fails(frame, &pair_pattern(k, m), tol))
    } else {
        (0..pairs).find(|&k| pair_fails(frame, &pair_pattern(k, m), tol))
    };

    match failing {
        Some(k) => {
            let s = pair_pattern(k, m);
            let witness = witness_pair(frame, &s, tol)?;
            Ok(InjectivityCertificate {
                verdict: Verdict::NotInjective,
                failing_subset: Some(s),
                witness: Some(witness),
                checked_subsets: k + 1,
                basis: CertificateBasis::ComplementProperty,
            })
        }
        None => Ok(InjectivityCertificate {
            verdict: match T::FIELD {
                Field::Real => Verdict::Injective,
                Field::Complex => Verdict::NecessaryConditionsPass,
            },
            failing_subset: None,
            witness: None,
            checked_subsets: pairs,
            basis: CertificateBasis::ComplementProperty,
        }),
    }
}

/// Signals `u ± v` with `u ⊥ span{f_i : i ∈ S}` and `v ⊥ span{f_i : i ∉ S}`.
///
/// Their frame coefficients agree on `S^∁` and are negatives of each other on
/// `S`, so the magnitudes coincide.
pub fn witness_pair<T: Scalar>(
    frame: &Frame<T>,
    s: &SignPattern,
    tol: &Tolerance,
) -> Result<Witness<T>, Error> {
    if s.len() != frame.len() {
        return Err(Error::DimensionMismatch {
            expected: frame.len(),
            actual: s.len(),
        });
    }
    let analysis = frame.analysis_matrix();
    let orthogonal_to = |indices: &[usize], side: &str| -> Result<Vec<T>, Error> {
        let ns = linalg::null_space(&analysis.select_rows(indices), tol);
        if ns.cols() == 0 {
            return Err(Error::InvalidSubset(format!(
                "the vectors indexed by {side} span the whole space"
            )));
        }
        Ok(ns.column(0))
    };
    let u = orthogonal_to(&s.indices(), "S")?;
    let v = orthogonal_to(&s.complement().indices(), "the complement of S")?;
    let witness = Witness {
        x: add(&u, &v),
        y: sub(&u, &v),
    };
    if !witness.verify(frame, tol)? {
        return Err(Error::InvalidSubset("constructed pair failed re-verification".into()));
    }
    Ok(witness)
}

/// Result of the full-spark test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullSpark {
    pub full_spark: bool,
    /// Lexicographically first dependent `N`-subset (zero-based).
    pub dependent_subset: Option<Vec<usize>>,
    pub checked_subsets: u64,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Whether every `N`-element subset of the frame is linearly independent.
pub fn full_spark_test<T: Scalar>(
    frame: &Frame<T>,
    tol: &Tolerance,
    budget: &SearchBudget,
) -> Result<FullSpark, Error> {
    let (n, m) = (frame.dim(), frame.len());
    let total = binomial(m, n);
    if total > budget.max_subsets as u128 {
        return Err(Error::BudgetExceeded(format!(
            "full-spark test needs C({m}, {n}) = {total} rank checks, above the limit of {}",
            budget.max_subsets
        )));
    }
    let mut checked = 0u64;
    for idx in (0..m).combinations(n) {
        checked += 1;
        if linalg::rank(&frame.subset_matrix(&idx), tol) < n {
            return Ok(FullSpark {
                full_spark: false,
                dependent_subset: Some(idx),
                checked_subsets: checked,
            });
        }
    }
    Ok(FullSpark {
        full_spark: true,
        dependent_subset: None,
        checked_subsets: checked,
    })
}

/// A random real frame with `M = 2N−2` vectors together with its
/// `NotInjective` certificate: neither the first `N−1` nor the last `N−1`
/// vectors can span `ℝ^N`.
#[derive(Debug, Clone)]
pub struct SharpnessCase {
    pub frame: Frame<f64>,
    pub certificate: InjectivityCertificate<f64>,
}

pub fn sharpness_check(n: usize, seed: u64, tol: &Tolerance) -> Result<SharpnessCase, Error> {
    if n < 2 {
        return Err(Error::InvalidParameters(format!("N ≥ 2 required, got {n}")));
    }
    let m = 2 * n - 2;
    let frame = crate::frames::gen_random::<f64>(n, m, seed)?;
    let first: Vec<usize> = (0..n - 1).collect();
    let s = SignPattern::from_indices(m, &first)?;
    let witness = witness_pair(&frame, &s, tol)?;
    Ok(SharpnessCase {
        frame,
        certificate: InjectivityCertificate {
            verdict: Verdict::NotInjective,
            failing_subset: Some(s),
            witness: Some(witness),
            checked_subsets: 1,
            basis: CertificateBasis::ComplementProperty,
        },
    })
}

/// Size regime of a complex `M`-element frame for `ℂ^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexRegime {
    /// `M ≤ 2N−1` (with `N ≥ 2`): never injective.
    BelowSizeBound,
    /// `2N ≤ M < 4N−2`: may or may not be injective.
    Unknown,
    /// `M ≥ 4N−2`: injective for a generic frame.
    GenericallyInjective,
}

pub fn complex_regime(n: usize, m: usize) -> ComplexRegime {
    if n >= 2 && m < 2 * n {
        ComplexRegime::BelowSizeBound
    } else if m + 2 < 4 * n {
        ComplexRegime::Unknown
    } else {
        ComplexRegime::GenericallyInjective
    }
}

/// `false` means the frame is certainly not injective (`M ≤ 2N−1`); `true`
/// only means the size requirement is met.
pub fn complex_size_check<T: Scalar>(frame: &Frame<T>) -> bool {
    complex_regime(frame.dim(), frame.len()) != ComplexRegime::BelowSizeBound
}

/// Explicit ambiguous pair for a complex frame with `M = 2N−1`, `N ≥ 2`.
///
/// Takes `x ∈ W` vanishing on the last `N−1` coordinates and `y ∈ W`
/// vanishing on the first `N−1`; they overlap only at coordinate `N`.
/// Normalizing `x_N = 1` and `y_N = i` gives `z ± w` with equal moduli
/// everywhere, and the pair is mapped back to signal space.
pub fn complex_size_witness<T: Scalar>(
    frame: &Frame<T>,
    tol: &Tolerance,
) -> Result<Witness<T>, Error> {
    let (n, m) = (frame.dim(), frame.len());
    if n < 2 || m != 2 * n - 1 {
        return Err(Error::InvalidParameters(format!(
            "size witness needs N ≥ 2 and M = 2N−1 (got N = {n}, M = {m})"
        )));
    }
    let imag = T::from_parts(0.0, 1.0).ok_or(Error::FieldMismatch {
        expected: Field::Complex,
        actual: T::FIELD,
    })?;
    let range = frame.coefficient_range(tol);
    let q = range.basis();
    let head: Vec<usize> = (0..n - 1).collect();
    let tail: Vec<usize> = (n..m).collect();
    let in_range_vanishing_on = |rows: &[usize]| -> Result<Vec<T>, Error> {
        let ns = linalg::null_space(&q.select_rows(rows), tol);
        if ns.cols() == 0 {
            return Err(Error::Singular);
        }
        q.mul_vec(&ns.column(0))
    };
    let x = in_range_vanishing_on(&tail)?;
    let y = in_range_vanishing_on(&head)?;
    let p = n - 1;
    let eps = tol.residual_eps();

    let (c1, c2) = if x[p].abs() <= eps * norm(&x) || y[p].abs() <= eps * norm(&y) {
        // disjoint supports already
        (x, y)
    } else if head.iter().all(|&i| x[i].abs() <= eps * norm(&x)) {
        // x is a multiple of e_p; remove that coordinate from y
        let c = y[p] / x[p];
        let y2: Vec<T> = y.iter().zip(&x).map(|(&a, &b)| a - c * b).collect();
        (x, y2)
    } else {
        let z: Vec<T> = x.iter().map(|&v| v / x[p]).collect();
        let w: Vec<T> = y.iter().map(|&v| imag * v / y[p]).collect();
        (z, w)
    };

    let analysis = frame.analysis_matrix();
    let to_signal = |c: &[T]| -> Result<Vec<T>, Error> {
        Ok(linalg::least_squares(&analysis, c, tol)?.x)
    };
    let s1 = to_signal(&c1)?;
    let s2 = to_signal(&c2)?;
    let scale = norm(&s1).max(norm(&s2));
    let witness = Witness {
        x: add(&s1, &s2).iter().map(|v| v.scale(1.0 / scale)).collect(),
        y: sub(&s1, &s2).iter().map(|v| v.scale(1.0 / scale)).collect(),
    };
    if !witness.verify(frame, tol)? {
        return Err(Error::InvalidSubset("size-bound pair failed re-verification".into()));
    }
    Ok(witness)
}

/// Full certification: the complement property, plus for complex frames the
/// size bound and the one-dimensional case.
pub fn certify<T: Scalar>(
    frame: &Frame<T>,
    tol: &Tolerance,
    budget: &SearchBudget,
) -> Result<InjectivityCertificate<T>, Error> {
    let cert = complement_property(frame, tol, budget)?;
    if T::FIELD == Field::Real || cert.verdict == Verdict::NotInjective {
        return Ok(cert);
    }
    if frame.dim() == 1 {
        return Ok(InjectivityCertificate {
            verdict: Verdict::Injective,
            basis: CertificateBasis::OneDimensional,
            ..cert
        });
    }
    if !complex_size_check(frame) {
        let witness = complex_size_witness(frame, tol)?;
        return Ok(InjectivityCertificate {
            verdict: Verdict::NotInjective,
            failing_subset: None,
            witness: Some(witness),
            checked_subsets: cert.checked_subsets,
            basis: CertificateBasis::ComplexSizeBound,
        });
    }
    Ok(cert)
}

/// Both sides of the `M = 2N−1` equivalence between full spark and
/// injectivity.
#[derive(Debug, Clone)]
pub struct SparkEquivalence {
    pub full_spark: FullSpark,
    pub certificate: InjectivityCertificate<f64>,
}

impl SparkEquivalence {
    pub fn agree(&self) -> bool {
        self.full_spark.full_spark == self.certificate.is_injective()
    }
}

pub fn necessary_condition_2n_minus_1(
    frame: &Frame<f64>,
    tol: &Tolerance,
    budget: &SearchBudget,
) -> Result<SparkEquivalence, Error> {
    let (n, m) = (frame.dim(), frame.len());
    if m != 2 * n - 1 {
        return Err(Error::InvalidParameters(format!(
            "this check applies only to M = 2N−1 (got N = {n}, M = {m})"
        )));
    }
    Ok(SparkEquivalence {
        full_spark: full_spark_test(frame, tol, budget)?,
        certificate: complement_property(frame, tol, budget)?,
    })
}

/// Maps a witness for `F` to a witness for `{R f_i}`: since the magnitudes
/// satisfy `M^{RF}(x) = M^F(R* x)`, the pair transforms by `R^{−*}`.
pub fn transform_witness<T: Scalar>(
    witness: &Witness<T>,
    r: &DenseMatrix<T>,
    tol: &Tolerance,
) -> Result<Witness<T>, Error> {
    let r_adj = r.adjoint();
    Ok(Witness {
        x: linalg::least_squares(&r_adj, &witness.x, tol)?.x,
        y: linalg::least_squares(&r_adj, &witness.y, tol)?.x,
    })
}
