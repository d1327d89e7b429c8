//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use framephase::frames::gen_random;
use framephase::linalg::{self, DenseMatrix, Tolerance};
use framephase::magnitude::ray_distance;
use framephase::{Frame, Ray};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn tol() -> Tolerance {
    Tolerance::default()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn complex_gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn range_of(frame: &Frame<f64>) -> DenseMatrix<f64> {
    linalg::range_basis(&frame.analysis_matrix(), &tol())
}

fn distance_to_range(q: &DenseMatrix<f64>, b: &[f64]) -> f64 {
    let p = q.mul_vec(&q.adjoint_mul_vec(b).unwrap()).unwrap();
    norm(&b.iter().zip(&p).map(|(x, y)| x - y).collect::<Vec<_>>())
}

/// Injectivity straight from the definition: `|Tx| = |Ty|` means
/// `Ty = D_S Tx` for some sign flip `D_S`, so the map fails to be injective
/// iff some `V = W ∩ D_S W` holds a vector with nonzero entries both inside
/// and outside `S`.
pub fn subspace_oracle_injective(frame: &Frame<f64>) -> bool {
    let q = range_of(frame);
    let (m, n) = (q.rows(), q.cols());
    for mask in 0u64..(1 << (m - 1)) {
        let flip = |i: usize| if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
        let stacked: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut row = q.row(i).to_vec();
                row.extend(q.row(i).iter().map(|v| -flip(i) * v));
                row
            })
            .collect();
        let null = linalg::null_space(&DenseMatrix::from_rows(&stacked).unwrap(), &tol());
        let (mut inside, mut outside) = (false, false);
        for j in 0..null.cols() {
            let alpha: Vec<f64> = null.column(j)[..n].to_vec();
            let u = q.mul_vec(&alpha).unwrap();
            let scale = norm(&u).max(1e-300);
            let part = |want: bool| norm(&u.iter().enumerate().filter(|(i, _)| (mask >> i & 1 == 1) == want).map(|(_, v)| *v).collect::<Vec<_>>());
            inside |= part(true) > 1e-7 * scale;
            outside |= part(false) > 1e-7 * scale;
        }
        if inside && outside {
            return false;
        }
    }
    true
}

/// Measures `samples` random signals and tries every sign pattern on their
/// magnitudes; reports whether any pattern other than `±Tx` lands in `W`.
pub fn sampling_oracle_finds_ambiguity(frame: &Frame<f64>, samples: usize, seed: u64) -> bool {
    let q = range_of(frame);
    let m = frame.len();
    let mut r = rng(seed);
    for _ in 0..samples {
        let x = gaussian(&mut r, frame.dim());
        let c = frame.analysis(&x).unwrap();
        let a: Vec<f64> = c.iter().map(|v| v.abs()).collect();
        let thr = 1e-8 * (1.0 + norm(&a));
        for mask in 0u64..(1 << (m - 1)) {
            let b: Vec<f64> = (0..m).map(|i| if mask >> i & 1 == 1 { -a[i] } else { a[i] }).collect();
            if distance_to_range(&q, &b) <= thr && ray_distance(&b, &c) > 1e-6 * (1.0 + norm(&a)) {
                return true;
            }
        }
    }
    false
}

/// Every ray with magnitudes `a`, by trying all `2^(M−1)` sign patterns.
pub fn exhaustive_rays(frame: &Frame<f64>, a: &[f64]) -> Vec<Vec<f64>> {
    let q = range_of(frame);
    let t = frame.analysis_matrix();
    let m = frame.len();
    let thr = 1e-8 * (1.0 + norm(a));
    let mut rays: Vec<Vec<f64>> = Vec::new();
    for mask in 0u64..(1 << (m - 1)) {
        let b: Vec<f64> = (0..m).map(|i| if i > 0 && mask >> (i - 1) & 1 == 1 { -a[i] } else { a[i] }).collect();
        if distance_to_range(&q, &b) > thr {
            continue;
        }
        let x = linalg::least_squares(&t, &b, &tol()).unwrap().x;
        let back = t.mul_vec(&x).unwrap();
        let gap = norm(&back.iter().zip(a).map(|(c, a)| c.abs() - a).collect::<Vec<_>>());
        if gap <= thr && !rays.iter().any(|y| ray_distance(y, &x) <= 1e-6 * norm(&x).max(1.0)) {
            rays.push(x);
        }
    }
    rays
}

pub fn same_ray_set(found: &[Ray<f64>], expected: &[Vec<f64>]) -> bool {
    found.len() == expected.len()
        && expected.iter().all(|e| {
            found
                .iter()
                .any(|r| ray_distance(r.representative(), e) <= 1e-6 * norm(e).max(1.0))
        })
}

/// `X(k, ω) = Σ_t g(t) x(t + k·hop) e^{−2πiωt/M_w}`.
pub fn direct_stft(window: &[f64], hop: usize, x: &[Complex64]) -> Vec<Complex64> {
    let mw = window.len();
    let shifts = (x.len() - mw) / hop + 1;
    let mut out = Vec::new();
    for k in 0..shifts {
        for omega in 0..mw {
            let mut acc = Complex64::new(0.0, 0.0);
            for (t, &g) in window.iter().enumerate() {
                let angle = -2.0 * std::f64::consts::PI * omega as f64 * t as f64 / mw as f64;
                acc += g * x[t + k * hop] * Complex64::from_polar(1.0, angle);
            }
            out.push(acc);
        }
    }
    out
}

/// Random orthonormal basis of `ℝ^n` via Gram–Schmidt.
pub fn random_orthonormal(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while basis.len() < n {
        let mut v = gaussian(&mut r, n);
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let l = norm(&v);
        if l > 1e-6 {
            basis.push(v.into_iter().map(|x| x / l).collect());
        }
    }
    basis
}

/// Small integer frames with exact linear dependencies.
pub fn adversarial_frames() -> Vec<Frame<f64>> {
    let specs: Vec<(usize, Vec<Vec<f64>>)> = vec![
        (2, vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]),
        (2, vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]]),
        (2, vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0], vec![1.0, -1.0]]),
        (2, vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]]),
        (2, vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]]),
        (2, vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, -1.0], vec![2.0, 3.0]]),
        (3, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 1.0, 1.0]]),
        (3, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]]),
        (3, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0]]),
        (3, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 1.0, 1.0], vec![1.0, -1.0, 0.0], vec![0.0, 1.0, -1.0]]),
        (3, vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]]),
        (3, vec![vec![1.0, 1.0, 0.0], vec![1.0, -1.0, 0.0], vec![2.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 2.0], vec![1.0, 1.0, 1.0]]),
    ];
    specs.into_iter().map(|(n, v)| Frame::new(n, v).unwrap()).collect()
}

/// Random frame with one vector replaced by a sum of two others.
pub fn dependent_random(n: usize, m: usize, seed: u64) -> Frame<f64> {
    let f = gen_random::<f64>(n, m, seed).unwrap();
    let mut v = f.vectors().to_vec();
    v[m - 1] = v[0].iter().zip(&v[1]).map(|(a, b)| a + b).collect();
    Frame::new(n, v).unwrap()
}
