//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use crate::error::{Error, Result};
use crate::qstate::matrix::ComplexMatrix;
use crate::scalar::{cr, Real, C};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        self.vectors.column(k)
    }

    pub fn min_value(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    /// `V diag(values) V†`
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(C::new(T::zero(), T::zero()), |acc, k| {
                acc + v[(i, k)] * v[(j, k)].conj() * self.values[k]
            })
        })
    }
}

/// Full eigendecomposition. Rejects input whose Hermitian mismatch exceeds `herm_tol`,
/// naming the offending entry pair.
pub fn hermitian_eig<T: Real>(m: &ComplexMatrix<T>, herm_tol: T) -> Result<HermitianEigen<T>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if let Some((i, j, gap)) = m.hermiticity_violation(herm_tol) {
        return Err(Error::Validation {
            invariant: "hermitian",
            detail: format!("entries ({i},{j}) and ({j},{i}) differ by {gap}"),
        });
    }
    let n = m.rows();
    let mut a: Vec<C<T>> = m.hermitian_part().as_slice().to_vec();
    let mut v = ComplexMatrix::identity(n);
    jacobi(&mut a, n, Some(&mut v));
    let order = descending_order(&a, n);
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, descending. The input slice is consumed as scratch space and
/// is assumed Hermitian (only used on internally constructed matrices).
pub fn hermitian_eigenvalues_in_place<T: Real>(a: &mut [C<T>], n: usize) -> Vec<T> {
    debug_assert_eq!(a.len(), n * n);
    jacobi(a, n, None);
    let mut vals: Vec<T> = (0..n).map(|k| a[k * n + k].re).collect();
    vals.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    vals
}

fn descending_order<T: Real>(a: &[C<T>], n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        a[y * n + y]
            .re
            .partial_cmp(&a[x * n + x].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    order
}

fn off_diagonal_norm<T: Real>(a: &[C<T>], n: usize) -> (T, T) {
    let mut off = T::zero();
    let mut total = T::zero();
    for i in 0..n {
        for j in 0..n {
            let s = a[i * n + j].norm_sqr();
            total = total + s;
            if i != j {
                off = off + s;
            }
        }
    }
    (off.sqrt(), total.sqrt())
}

fn jacobi<T: Real>(a: &mut [C<T>], n: usize, mut v: Option<&mut ComplexMatrix<T>>) {
    let tol = T::tol(1e-13);
    let half = T::lit(0.5);
    for _ in 0..MAX_SWEEPS {
        let (off, total) = off_diagonal_norm(a, n);
        if off <= tol * total || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let abs = apq.norm();
                if abs == T::zero() {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // skip rotations that cannot change anything at this precision
                if abs <= T::epsilon() * T::lit(1e-3) * (app.abs() + aqq.abs()) {
                    a[p * n + q] = cr(T::zero());
                    a[q * n + p] = cr(T::zero());
                    continue;
                }
                let phase_conj = apq.conj().unscale(abs);
                let theta = (aqq - app) * half / abs;
                let t = if theta.abs() > T::lit(1e150).min(T::max_value().sqrt()) {
                    half / theta
                } else {
                    let sign = if theta < T::zero() { -T::one() } else { T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let g_pp = cr(c);
                let g_pq = cr(s);
                let g_qp = phase_conj * (-s);
                let g_qq = phase_conj * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * g_pp + akq * g_qp;
                    a[k * n + q] = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[p * n + q] = cr(T::zero());
                a[q * n + p] = cr(T::zero());
                a[p * n + p] = cr(a[p * n + p].re);
                a[q * n + q] = cr(a[q * n + q].re);

                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * g_pp + vkq * g_qp;
                        v[(k, q)] = vkp * g_pq + vkq * g_qq;
                    }
                }
            }
        }
    }
}

/// Singular values via the spectrum of `M†M`, descending.
pub fn singular_values<T: Real>(m: &ComplexMatrix<T>) -> Vec<T> {
    let g = m.adjoint().matmul(m).expect("M†M is always defined");
    let mut buf = g.as_slice().to_vec();
    hermitian_eigenvalues_in_place(&mut buf, g.rows())
        .into_iter()
        .map(|x| x.max(T::zero()).sqrt())
        .collect()
}
