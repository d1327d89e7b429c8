use super::{sort_rays, ReconstructionResult, Status};
use crate::error::Error;
use crate::frames::Frame;
use crate::linalg::{self, DenseMatrix, Tolerance};
use crate::magnitude::{magnitude_map, ray_equal, MagnitudeVector, Ray};

pub const DEFAULT_MAX_PATTERNS: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealSearchOptions {
    /// Abort once this many signed prefixes have been visited.
    pub max_patterns: u64,
}

impl Default for RealSearchOptions {
    fn default() -> Self {
        Self {
            max_patterns: DEFAULT_MAX_PATTERNS,
        }
    }
}

struct Search<'a> {
    analysis: DenseMatrix<f64>,
    a: &'a [f64],
    /// Indices by descending magnitude.
    order: Vec<usize>,
    /// `prefix_bases[d]`: orthonormal basis for the range of the first `d`
    /// reordered analysis rows.
    prefix_bases: Vec<DenseMatrix<f64>>,
    zero_eps: f64,
    threshold: f64,
    tol: Tolerance,
    max_patterns: u64,
    explored: u64,
    aborted: bool,
    rays: Vec<Ray<f64>>,
    residuals: Vec<f64>,
    found: Vec<Vec<f64>>,
}

impl Search<'_> {
    fn prefix_residual(&self, b: &[f64]) -> f64 {
        let q = &self.prefix_bases[b.len()];
        let coeffs = q.adjoint_mul_vec(b).expect("prefix basis has matching rows");
        let proj = q.mul_vec(&coeffs).expect("prefix basis has matching columns");
        b.iter()
            .zip(&proj)
            .map(|(x, p)| (x - p) * (x - p))
            .sum::<f64>()
            .sqrt()
    }

    fn leaf(&mut self, b: &[f64]) -> Result<(), Error> {
        let mut target = vec![0.0; b.len()];
        for (&i, &v) in self.order.iter().zip(b) {
            target[i] = v;
        }
        let x = linalg::least_squares(&self.analysis, &target, &self.tol)?.x;
        let measured = self.analysis.mul_vec(&x)?;
        let residual = measured
            .iter()
            .zip(self.a)
            .map(|(c, a)| (c.abs() - a).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= self.threshold && !self.found.iter().any(|y| ray_equal(y, &x, &self.tol)) {
            self.rays.push(Ray::new(&x, &self.tol));
            self.residuals.push(residual);
            self.found.push(x);
        }
        Ok(())
    }

    fn descend(&mut self, b: &mut Vec<f64>) -> Result<(), Error> {
        if self.aborted {
            return Ok(());
        }
        self.explored += 1;
        if self.explored > self.max_patterns {
            self.aborted = true;
            return Ok(());
        }
        if !b.is_empty() && self.prefix_residual(b) > self.threshold {
            return Ok(());
        }
        let depth = b.len();
        if depth == self.order.len() {
            return self.leaf(b);
        }
        let value = self.a[self.order[depth]];
        let signs: &[f64] = if value <= self.zero_eps {
            &[0.0]
        } else if depth == 0 {
            // global sign quotient: the largest entry is taken positive
            &[1.0]
        } else {
            &[1.0, -1.0]
        };
        for &s in signs {
            b.push(s * value);
            self.descend(b)?;
            b.pop();
        }
        Ok(())
    }
}

pub fn reconstruct_real(
    frame: &Frame<f64>,
    a: &MagnitudeVector,
    tol: &Tolerance,
) -> Result<ReconstructionResult<f64>, Error> {
    reconstruct_real_with(frame, a, tol, &RealSearchOptions::default())
}

/// Depth-first search over sign assignments, returning every ray whose
/// re-measured magnitudes match `a` within `residual_eps·(1 + ‖a‖)`.
///
/// Entries below `residual_eps·‖a‖` are sign-free and their coefficient is
/// constrained to zero. Exceeding `max_patterns` yields
/// [`Error::SearchAborted`] with the rays found so far.
pub fn reconstruct_real_with(
    frame: &Frame<f64>,
    a: &MagnitudeVector,
    tol: &Tolerance,
    opts: &RealSearchOptions,
) -> Result<ReconstructionResult<f64>, Error> {
    let m = frame.len();
    if a.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: a.len(),
        });
    }
    let values = a.values();
    let norm_a = a.norm();
    if norm_a == 0.0 {
        return Ok(ReconstructionResult {
            status: Status::Unique,
            rays: vec![Ray::new(&vec![0.0; frame.dim()], tol)],
            residuals: vec![0.0],
            patterns_explored: 0,
            restarts_used: 0,
            best_residual: 0.0,
            residual_history: Vec::new(),
        });
    }

    let analysis = frame.analysis_matrix();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let reordered = analysis.select_rows(&order);
    let prefix_bases = (0..=m)
        .map(|d| {
            let rows: Vec<usize> = (0..d).collect();
            linalg::range_basis(&reordered.select_rows(&rows), tol)
        })
        .collect();

    let mut search = Search {
        analysis,
        a: values,
        order,
        prefix_bases,
        zero_eps: tol.residual_eps() * norm_a,
        threshold: tol.residual_eps() * (1.0 + norm_a),
        tol: *tol,
        max_patterns: opts.max_patterns,
        explored: 0,
        aborted: false,
        rays: Vec::new(),
        residuals: Vec::new(),
        found: Vec::new(),
    };
    search.descend(&mut Vec::with_capacity(m))?;

    let (rays, residuals) = sort_rays(search.rays, search.residuals);
    if search.aborted {
        return Err(Error::SearchAborted {
            patterns_explored: search.explored - 1,
            partial_rays: rays.into_iter().map(Ray::into_representative).collect(),
        });
    }
    let status = match rays.len() {
        0 => Status::NoSolution,
        1 => Status::Unique,
        _ => Status::Ambiguous,
    };
    let best_residual = residuals.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(ReconstructionResult {
        status,
        rays,
        residuals,
        patterns_explored: search.explored,
        restarts_used: 0,
        best_residual,
        residual_history: Vec::new(),
    })
}

/// All rays sharing the magnitudes of `x`; always contains the ray of `x`.
pub fn enumerate_ambiguities(
    frame: &Frame<f64>,
    x: &[f64],
    tol: &Tolerance,
) -> Result<Vec<Ray<f64>>, Error> {
    let a = magnitude_map(frame, x)?;
    Ok(reconstruct_real(frame, &a, tol)?.rays)
}
