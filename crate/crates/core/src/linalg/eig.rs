use super::matrix::DenseMatrix;
use super::scalar::Scalar;
use super::Tolerance;
use crate::error::Error;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `A = V · diag(values) · V*` of a Hermitian matrix,
/// eigenvalues sorted in descending order.
#[derive(Debug, Clone)]
pub struct SymEig<T> {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix<T>,
}

impl<T: Scalar> SymEig<T> {
    /// `V · diag(f(λ)) · V*`.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> DenseMatrix<T> {
        let n = self.values.len();
        let mut out = DenseMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for i in 0..n {
                let vik = self.vectors[(i, k)].scale(w);
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Cyclic Jacobi eigen-solver for Hermitian (real symmetric) matrices.
pub fn sym_eig<T: Scalar>(a: &DenseMatrix<T>, tol: &Tolerance) -> Result<SymEig<T>, Error> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            actual: a.cols(),
        });
    }
    let scale = a.frobenius_norm();
    let skew = a.sub(&a.adjoint())?.frobenius_norm();
    if skew > tol.residual_eps() * scale {
        return Err(Error::NotHermitian { skew });
    }

    let n = a.rows();
    let mut m = a.clone();
    // Symmetrize exactly so that rotations act on a Hermitian matrix.
    for i in 0..n {
        m[(i, i)] = T::from_real(m[(i, i)].re());
        for j in i + 1..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()).scale(0.5);
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let mut v = DenseMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].abs_sq())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re()).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.select_columns(&order);
    Ok(SymEig { values, vectors })
}

/// One Jacobi rotation annihilating entry `(p, q)`.
///
/// The unitary acting on columns `p, q` is `diag(1, conj(e)) · [[c, s], [-s, c]]`
/// where `e` is the phase of `m[p, q]`; the diagonal factor makes the pivot
/// entry real so the classical real rotation applies.
fn rotate<T: Scalar>(m: &mut DenseMatrix<T>, v: &mut DenseMatrix<T>, p: usize, q: usize) {
    let g = m[(p, q)];
    let r = g.abs();
    if r == 0.0 {
        return;
    }
    let e = g.scale(1.0 / r);
    let app = m[(p, p)].re();
    let aqq = m[(q, q)].re();
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let u_pp = T::from_real(c);
    let u_pq = T::from_real(s);
    let u_qp = e.conj().scale(-s);
    let u_qq = e.conj().scale(c);

    let n = m.rows();
    for i in 0..n {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = mp * u_pp + mq * u_qp;
        m[(i, q)] = mp * u_pq + mq * u_qq;
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        v[(i, p)] = vp * u_pp + vq * u_qp;
        v[(i, q)] = vp * u_pq + vq * u_qq;
    }
    for j in 0..n {
        let mp = m[(p, j)];
        let mq = m[(q, j)];
        m[(p, j)] = u_pp.conj() * mp + u_qp.conj() * mq;
        m[(q, j)] = u_pq.conj() * mp + u_qq.conj() * mq;
    }
    m[(p, q)] = T::zero();
    m[(q, p)] = T::zero();
}
