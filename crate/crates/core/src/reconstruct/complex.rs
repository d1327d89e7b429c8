use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ReconstructionResult, Status};
use crate::error::Error;
use crate::frames::Frame;
use crate::linalg::{self, Scalar, Tolerance};
use crate::magnitude::{magnitude_map, MagnitudeVector, Ray};

pub const DEFAULT_RESTARTS: usize = 20;
pub const DEFAULT_MAX_ITERS: usize = 10_000;

/// A restart is abandoned when its residual shrank by less than this factor
/// over the last `STALL_WINDOW` iterations.
const STALL_FACTOR: f64 = 0.999;
const STALL_WINDOW: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for ComplexOptions {
    fn default() -> Self {
        Self {
            restarts: DEFAULT_RESTARTS,
            max_iters: DEFAULT_MAX_ITERS,
            seed: 0,
        }
    }
}

fn magnitude_residual<T: Scalar>(p: &[T], a: &[f64]) -> f64 {
    p.iter()
        .zip(a)
        .map(|(c, a)| (c.abs() - a).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Error reduction: alternately project the coefficient vector onto the
/// range `W` of the analysis operator and restore the measured magnitudes.
///
/// Restart `r` draws its random phases from `seed ^ r`. Restarts run in
/// order and the first success is returned, so the result is deterministic.
pub fn reconstruct_complex<T: Scalar>(
    frame: &Frame<T>,
    a: &MagnitudeVector,
    opts: &ComplexOptions,
    tol: &Tolerance,
) -> Result<ReconstructionResult<T>, Error> {
    let m = frame.len();
    if a.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: a.len(),
        });
    }
    if opts.restarts == 0 || opts.max_iters == 0 {
        return Err(Error::InvalidParameters("restarts and max_iters must be positive".into()));
    }
    let values = a.values();
    let norm_a = a.norm();
    let threshold = tol.residual_eps() * (1.0 + norm_a);
    if norm_a == 0.0 {
        return Ok(ReconstructionResult {
            status: Status::HeuristicSuccess,
            rays: vec![Ray::new(&vec![T::zero(); frame.dim()], tol)],
            residuals: vec![0.0],
            patterns_explored: 0,
            restarts_used: 0,
            best_residual: 0.0,
            residual_history: Vec::new(),
        });
    }

    let range = frame.coefficient_range(tol);
    let analysis = frame.analysis_matrix();
    let mut histories = Vec::with_capacity(opts.restarts);
    let mut best = f64::INFINITY;
    let mut iterations = 0u64;

    for restart in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ restart as u64);
        let mut c: Vec<T> = values
            .iter()
            .map(|&ai| T::sample_unimodular(&mut rng).scale(ai))
            .collect();
        let mut history = Vec::new();
        for _ in 0..opts.max_iters {
            iterations += 1;
            let p = range.project(&c)?;
            let residual = magnitude_residual(&p, values);
            history.push(residual);
            best = best.min(residual);
            if residual <= threshold {
                let x = linalg::least_squares(&analysis, &p, tol)?.x;
                let verified = magnitude_map(frame, &x)?.distance(a);
                if verified <= threshold {
                    histories.push(history);
                    return Ok(ReconstructionResult {
                        status: Status::HeuristicSuccess,
                        rays: vec![Ray::new(&x, tol)],
                        residuals: vec![verified],
                        patterns_explored: iterations,
                        restarts_used: restart + 1,
                        best_residual: verified,
                        residual_history: histories,
                    });
                }
            }
            let k = history.len();
            if k > STALL_WINDOW && residual > STALL_FACTOR * history[k - 1 - STALL_WINDOW] {
                break;
            }
            for ((ci, pi), &ai) in c.iter_mut().zip(&p).zip(values) {
                if pi.abs() > tol.residual_eps() {
                    *ci = pi.unit_phase().scale(ai);
                }
            }
        }
        histories.push(history);
    }

    Ok(ReconstructionResult {
        status: Status::HeuristicFail,
        rays: Vec::new(),
        residuals: Vec::new(),
        patterns_explored: iterations,
        restarts_used: opts.restarts,
        best_residual: best,
        residual_history: histories,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::gen_random;
    use crate::magnitude::ray_equal;
    use num_complex::Complex64;
    use rand::Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn random_signal(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        (0..n).map(|_| Complex64::sample_gaussian(rng)).collect()
    }

    #[test]
    fn zero_measurements_give_the_zero_ray() {
        let f = gen_random::<Complex64>(2, 6, 0).unwrap();
        let a = MagnitudeVector::new(vec![0.0; 6]).unwrap();
        let r = reconstruct_complex(&f, &a, &ComplexOptions::default(), &tol()).unwrap();
        assert_eq!(r.status, Status::HeuristicSuccess);
        assert!(r.rays[0].is_zero());
    }

    #[test]
    fn recovers_random_signals_at_4n_minus_2() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut hits = 0;
        for trial in 0..40 {
            let f = gen_random::<Complex64>(2, 6, trial).unwrap();
            let x = random_signal(2, &mut rng);
            let a = magnitude_map(&f, &x).unwrap();
            let opts = ComplexOptions { seed: trial, ..Default::default() };
            let r = reconstruct_complex(&f, &a, &opts, &tol()).unwrap();
            if r.status == Status::HeuristicSuccess && ray_equal(r.rays[0].representative(), &x, &Tolerance::new(1e-10, 1e-6).unwrap()) {
                hits += 1;
            }
        }
        assert!(hits >= 36, "{hits}/40");
    }

    #[test]
    fn residual_never_increases_within_a_restart() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..10 {
            let f = gen_random::<Complex64>(3, 10, trial).unwrap();
            let x = random_signal(3, &mut rng);
            let a = magnitude_map(&f, &x).unwrap();
            let opts = ComplexOptions { restarts: 3, max_iters: 400, seed: trial };
            let r = reconstruct_complex(&f, &a, &opts, &tol()).unwrap();
            for h in &r.residual_history {
                for w in h.windows(2) {
                    assert!(w[1] <= w[0] + 10.0 * f64::EPSILON * (1.0 + a.norm()), "{} > {}", w[1], w[0]);
                }
            }
        }
    }

    #[test]
    fn random_magnitudes_are_inconsistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = gen_random::<Complex64>(2, 6, 1).unwrap();
        let a = MagnitudeVector::new((0..6).map(|_| rng.random_range(0.5..2.0)).collect()).unwrap();
        let opts = ComplexOptions { restarts: 5, max_iters: 2000, seed: 0 };
        let r = reconstruct_complex(&f, &a, &opts, &tol()).unwrap();
        assert_eq!(r.status, Status::HeuristicFail);
        assert!(r.rays.is_empty());
        assert!(r.best_residual > 1e-3);
    }

    #[test]
    fn deterministic_given_seed() {
        let f = gen_random::<Complex64>(2, 6, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = magnitude_map(&f, &random_signal(2, &mut rng)).unwrap();
        let opts = ComplexOptions { seed: 17, ..Default::default() };
        let r1 = reconstruct_complex(&f, &a, &opts, &tol()).unwrap();
        let r2 = reconstruct_complex(&f, &a, &opts, &tol()).unwrap();
        assert_eq!(r1, r2);
        assert!(reconstruct_complex(&f, &a, &ComplexOptions { restarts: 0, ..opts }, &tol()).is_err());
    }
}
