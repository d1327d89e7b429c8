use super::matrix::DenseMatrix;
use super::scalar::{norm, Scalar};
use super::Tolerance;
use crate::error::Error;

/// Householder QR with column pivoting: `A · P = Q · R`.
///
/// `q` is the full `m × m` unitary factor and `r` is `m × n` upper
/// trapezoidal. Column `j` of `A · P` is column `perm[j]` of `A`.
#[derive(Debug, Clone)]
pub struct PivotedQr<T> {
    pub q: DenseMatrix<T>,
    pub r: DenseMatrix<T>,
    pub perm: Vec<usize>,
    pub rank: usize,
}

pub fn qr_column_pivot<T: Scalar>(a: &DenseMatrix<T>, tol: &Tolerance) -> PivotedQr<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut q = DenseMatrix::identity(m);
    let mut perm: Vec<usize> = (0..n).collect();
    let steps = m.min(n);

    for j in 0..steps {
        // Remaining column norms are recomputed at every step; at desk scale
        // this avoids the cancellation issues of norm downdating.
        let mut best = j;
        let mut best_norm = -1.0;
        for k in j..n {
            let s: f64 = (j..m).map(|i| r[(i, k)].abs_sq()).sum();
            if s > best_norm {
                best_norm = s;
                best = k;
            }
        }
        r.swap_columns(j, best);
        perm.swap(j, best);

        let x: Vec<T> = (j..m).map(|i| r[(i, j)]).collect();
        let x_norm = norm(&x);
        if x_norm == 0.0 {
            break;
        }
        let alpha = -(x[0].unit_phase().scale(x_norm));
        let mut v = x;
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|c| c.abs_sq()).sum();
        if vv == 0.0 {
            continue;
        }
        let two_over_vv = 2.0 / vv;

        for k in j + 1..n {
            let s = v
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (l, &vl)| acc + vl.conj() * r[(j + l, k)]);
            let s = s.scale(two_over_vv);
            for (l, &vl) in v.iter().enumerate() {
                r[(j + l, k)] -= s * vl;
            }
        }
        r[(j, j)] = alpha;
        for i in j + 1..m {
            r[(i, j)] = T::zero();
        }

        for i in 0..m {
            let s = v
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (l, &vl)| acc + q[(i, j + l)] * vl);
            let s = s.scale(two_over_vv);
            for (l, &vl) in v.iter().enumerate() {
                q[(i, j + l)] -= s * vl.conj();
            }
        }
    }

    let lead = if steps > 0 { r[(0, 0)].abs() } else { 0.0 };
    let rank = if lead == 0.0 {
        0
    } else {
        (0..steps)
            .take_while(|&i| r[(i, i)].abs() > tol.rank_eps() * lead)
            .count()
    };

    PivotedQr { q, r, perm, rank }
}

pub fn rank<T: Scalar>(a: &DenseMatrix<T>, tol: &Tolerance) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        return 0;
    }
    qr_column_pivot(a, tol).rank
}

/// Orthonormal basis of the column space of `a` (as columns).
pub fn range_basis<T: Scalar>(a: &DenseMatrix<T>, tol: &Tolerance) -> DenseMatrix<T> {
    if a.rows() == 0 || a.cols() == 0 {
        return DenseMatrix::zeros(a.rows(), 0);
    }
    let qr = qr_column_pivot(a, tol);
    let keep: Vec<usize> = (0..qr.rank).collect();
    qr.q.select_columns(&keep)
}

/// Orthonormal basis (as columns) of `{x : A·x = 0}`.
pub fn null_space<T: Scalar>(a: &DenseMatrix<T>, tol: &Tolerance) -> DenseMatrix<T> {
    let n = a.cols();
    if a.rows() == 0 {
        return DenseMatrix::identity(n);
    }
    // null(A) is the orthogonal complement of range(A*).
    let qr = qr_column_pivot(&a.adjoint(), tol);
    let keep: Vec<usize> = (qr.rank..n).collect();
    qr.q.select_columns(&keep)
}

#[derive(Debug, Clone)]
pub struct LeastSquares<T> {
    pub x: Vec<T>,
    pub residual: f64,
    /// Set when `A` is column-rank deficient; `x` is then the minimum-norm
    /// minimizer.
    pub degenerate: bool,
}

pub fn least_squares<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &[T],
    tol: &Tolerance,
) -> Result<LeastSquares<T>, Error> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            actual: b.len(),
        });
    }
    let n = a.cols();
    if a.rows() == 0 || n == 0 {
        return Ok(LeastSquares {
            x: vec![T::zero(); n],
            residual: norm(b),
            degenerate: n > 0,
        });
    }
    let qr = qr_column_pivot(a, tol);
    let c = qr.q.adjoint_mul_vec(b)?;
    let rk = qr.rank;

    let mut z = vec![T::zero(); rk];
    for i in (0..rk).rev() {
        let mut s = c[i];
        for (k, &zk) in z.iter().enumerate().skip(i + 1) {
            s -= qr.r[(i, k)] * zk;
        }
        z[i] = s / qr.r[(i, i)];
    }
    let mut x = vec![T::zero(); n];
    for (k, &zk) in z.iter().enumerate() {
        x[qr.perm[k]] = zk;
    }

    let degenerate = rk < n;
    if degenerate {
        // Remove the null-space component of the basic solution.
        let ns = null_space(a, tol);
        let coeffs = ns.adjoint_mul_vec(&x)?;
        let shift = ns.mul_vec(&coeffs)?;
        for (xi, si) in x.iter_mut().zip(shift) {
            *xi -= si;
        }
    }

    let ax = a.mul_vec(&x)?;
    let residual = ax
        .iter()
        .zip(b)
        .map(|(&p, &q)| (p - q).abs_sq())
        .sum::<f64>()
        .sqrt();
    Ok(LeastSquares {
        x,
        residual,
        degenerate,
    })
}

/// Inverse of a square matrix of full rank.
pub fn inverse<T: Scalar>(a: &DenseMatrix<T>, tol: &Tolerance) -> Result<DenseMatrix<T>, Error> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            actual: a.cols(),
        });
    }
    let n = a.rows();
    if rank(a, tol) < n {
        return Err(Error::Singular);
    }
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![T::zero(); n];
        e[j] = T::one();
        columns.push(least_squares(a, &e, tol)?.x);
    }
    DenseMatrix::from_columns(&columns)
}

/// Frobenius distance between the orthogonal projectors onto the column
/// spans of two orthonormal bases.
pub fn subspace_distance<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<f64, Error> {
    let pa = a.matmul(&a.adjoint())?;
    let pb = b.matmul(&b.adjoint())?;
    Ok(pa.sub(&pb)?.frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn random_matrix<T: Scalar>(rows: usize, cols: usize, seed: u64) -> DenseMatrix<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..rows * cols).map(|_| T::sample_gaussian(&mut rng)).collect();
        DenseMatrix::from_row_major(rows, cols, data).unwrap()
    }

    fn check_factorization<T: Scalar>(a: &DenseMatrix<T>) {
        let qr = qr_column_pivot(a, &tol());
        let qtq = qr.q.adjoint().matmul(&qr.q).unwrap();
        let eye = DenseMatrix::identity(a.rows());
        assert!(qtq.sub(&eye).unwrap().frobenius_norm() < 1e-12);
        let ap = a.select_columns(&qr.perm);
        let rebuilt = qr.q.matmul(&qr.r).unwrap();
        let err = rebuilt.sub(&ap).unwrap().frobenius_norm();
        assert!(err <= 1e-12 * a.frobenius_norm().max(1.0), "err {err}");
        for i in 0..a.rows() {
            for j in 0..i.min(a.cols()) {
                assert_eq!(qr.r[(i, j)], T::zero());
            }
        }
    }

    #[test]
    fn identity_has_full_rank_and_identity_q() {
        let eye = DenseMatrix::<f64>::identity(2);
        let qr = qr_column_pivot(&eye, &tol());
        assert_eq!(qr.rank, 2);
        // Q equals the identity up to column signs.
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((qr.q[(i, j)].abs() - expected).abs() < 1e-15);
            }
        }
        check_factorization(&eye);
    }

    #[test]
    fn rank_one_symmetric() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(qr_column_pivot(&a, &tol()).rank, 1);
    }

    #[test]
    fn three_columns_in_the_plane_have_rank_two() {
        let a = DenseMatrix::from_columns(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(qr_column_pivot(&a, &tol()).rank, 2);
        check_factorization(&a);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let a = DenseMatrix::<Complex64>::zeros(3, 2);
        assert_eq!(qr_column_pivot(&a, &tol()).rank, 0);
    }

    #[test]
    fn random_factorizations_reconstruct() {
        for seed in 0..20 {
            check_factorization(&random_matrix::<f64>(5, 3, seed));
            check_factorization(&random_matrix::<f64>(3, 6, seed));
            check_factorization(&random_matrix::<Complex64>(4, 4, seed));
            check_factorization(&random_matrix::<Complex64>(6, 2, seed));
        }
    }

    #[test]
    fn null_space_of_single_row() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0]]).unwrap();
        let ns = null_space(&a, &tol());
        assert_eq!(ns.cols(), 1);
        assert!(ns[(0, 0)].abs() < 1e-15);
        assert!((ns[(1, 0)].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn null_space_of_identity_is_empty() {
        let ns = null_space(&DenseMatrix::<f64>::identity(2), &tol());
        assert_eq!(ns.cols(), 0);
        assert_eq!(ns.rows(), 2);
    }

    #[test]
    fn null_space_of_two_equations() {
        // x1 + x2 = 0, x3 = 0  =>  span (1, -1, 0) / sqrt 2
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let ns = null_space(&a, &tol());
        assert_eq!(ns.cols(), 1);
        let b = ns.column(0);
        let s = b[0].signum();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b[0] * s - h).abs() < 1e-14);
        assert!((b[1] * s + h).abs() < 1e-14);
        assert!(b[2].abs() < 1e-14);
    }

    #[test]
    fn null_space_width_plus_rank_is_cols() {
        for seed in 0..10 {
            let a = random_matrix::<Complex64>(2, 5, seed);
            let ns = null_space(&a, &tol());
            assert_eq!(ns.cols() + rank(&a, &tol()), 5);
            for j in 0..ns.cols() {
                let r = a.mul_vec(&ns.column(j)).unwrap();
                assert!(norm(&r) <= 1e-8 * a.frobenius_norm());
            }
        }
    }

    #[test]
    fn least_squares_identity() {
        let ls = least_squares(&DenseMatrix::identity(2), &[3.0, 4.0], &tol()).unwrap();
        assert!((ls.x[0] - 3.0).abs() < 1e-15 && (ls.x[1] - 4.0).abs() < 1e-15);
        assert!(ls.residual < 1e-15);
        assert!(!ls.degenerate);
    }

    #[test]
    fn least_squares_single_column() {
        let a = DenseMatrix::from_columns(&[vec![1.0, 1.0]]).unwrap();
        let ls = least_squares(&a, &[1.0, 0.0], &tol()).unwrap();
        assert!((ls.x[0] - 0.5).abs() < 1e-15);
        assert!((ls.residual - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn least_squares_analysis_matrix_exact_solve() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let ls = least_squares(&a, &[1.0, 2.0, 3.0], &tol()).unwrap();
        assert!((ls.x[0] - 1.0).abs() < 1e-14 && (ls.x[1] - 2.0).abs() < 1e-14);
        assert!(ls.residual < 1e-14);
    }

    #[test]
    fn least_squares_rank_deficient_gives_minimum_norm() {
        // x1 + x2 = 2 has minimum-norm solution (1, 1).
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let ls = least_squares(&a, &[2.0], &tol()).unwrap();
        assert!(ls.degenerate);
        assert!((ls.x[0] - 1.0).abs() < 1e-14 && (ls.x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn least_squares_rejects_length_mismatch() {
        assert!(least_squares(&DenseMatrix::<f64>::identity(2), &[1.0], &tol()).is_err());
    }

    #[test]
    fn least_squares_zero_residual_in_column_space() {
        for seed in 0..10 {
            let a = random_matrix::<Complex64>(6, 3, seed);
            let x = random_matrix::<Complex64>(3, 1, seed + 100).column(0);
            let b = a.mul_vec(&x).unwrap();
            let ls = least_squares(&a, &b, &tol()).unwrap();
            assert!(ls.residual <= 1e-8 * norm(&b));
            assert!(norm(&crate::linalg::scalar::sub(&ls.x, &x)) < 1e-10);
        }
    }

    #[test]
    fn inverse_rejects_singular() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(inverse(&a, &tol()), Err(Error::Singular)));
        let b = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let inv = inverse(&b, &tol()).unwrap();
        let prod = b.matmul(&inv).unwrap();
        assert!(prod.sub(&DenseMatrix::identity(2)).unwrap().frobenius_norm() < 1e-14);
    }
}
