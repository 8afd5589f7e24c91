//! Small dense complex linear algebra: states, eigendecomposition, and the
//! bipartite operations (partial trace, partial transpose, Schmidt form).
//!
//! Bipartite spaces are always ordered `H_B ⊗ H_A`; the basis index of
//! `|jk⟩` is `j·d_A + k` with `j` on B.

mod eig;
mod matrix;
mod state;

pub use eig::{hermitian_eig, hermitian_eigenvalues_in_place, singular_values, HermitianEigen};
pub use matrix::ComplexMatrix;
pub use state::{BipartitePureState, DensityMatrix, PureState, Tolerances};

pub(crate) use matrix::{inner, norm_sqr};

use crate::error::{Error, Result};
use crate::majorize::ProbVector;
use crate::scalar::{cz, Real, C};

/// Which factor of `H_B ⊗ H_A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    B,
    A,
}

fn check_dims(dim: usize, dims: (usize, usize)) -> Result<()> {
    if dims.0 * dims.1 != dim || dims.0 == 0 || dims.1 == 0 {
        return Err(Error::Dimension(format!(
            "dims {}x{} do not factor dimension {dim}",
            dims.0, dims.1
        )));
    }
    Ok(())
}

/// Reduced state on `keep`.
pub fn partial_trace<T: Real>(
    rho: &DensityMatrix<T>,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<DensityMatrix<T>> {
    check_dims(rho.dim(), dims)?;
    let (db, da) = dims;
    let m = rho.matrix();
    let out = match keep {
        Subsystem::B => ComplexMatrix::from_fn(db, db, |j, jp| {
            (0..da).fold(cz(), |acc, k| acc + m[(j * da + k, jp * da + k)])
        }),
        Subsystem::A => ComplexMatrix::from_fn(da, da, |k, kp| {
            (0..db).fold(cz(), |acc, j| acc + m[(j * da + k, j * da + kp)])
        }),
    };
    Ok(DensityMatrix::from_trusted(out))
}

/// Transpose on the given factor: `(ρ^{T_A})_{jk, j'k'} = ρ_{jk', j'k}`.
pub fn partial_transpose<T: Real>(
    m: &ComplexMatrix<T>,
    dims: (usize, usize),
    on: Subsystem,
) -> Result<ComplexMatrix<T>> {
    if !m.is_square() {
        return Err(Error::Dimension("partial transpose needs a square matrix".into()));
    }
    check_dims(m.rows(), dims)?;
    let da = dims.1;
    Ok(ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        let (j, k) = (r / da, r % da);
        let (jp, kp) = (c / da, c % da);
        match on {
            Subsystem::A => m[(j * da + kp, jp * da + k)],
            Subsystem::B => m[(jp * da + k, j * da + kp)],
        }
    }))
}

/// Sum of singular values. Uses the spectrum directly for Hermitian input.
pub fn trace_norm<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "trace norm needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let scale = m.max_abs().max(T::one());
    if m.hermiticity_violation(T::tol(1e-12) * scale).is_none() {
        let mut buf = m.hermitian_part().as_slice().to_vec();
        return Ok(hermitian_eigenvalues_in_place(&mut buf, m.rows())
            .into_iter()
            .map(|x| x.abs())
            .sum());
    }
    Ok(singular_values(m).into_iter().sum())
}

/// `Ψ = Σ_l √λ_l |left_l⟩|right_l⟩`, with `λ` descending and of length `min(d_B, d_A)`.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition<T> {
    pub coefficients: ProbVector<T>,
    /// Orthonormal vectors on B.
    pub left: Vec<Vec<C<T>>>,
    /// Orthonormal vectors on A.
    pub right: Vec<Vec<C<T>>>,
}

impl<T: Real> SchmidtDecomposition<T> {
    pub fn reconstruct(&self) -> Vec<C<T>> {
        let db = self.left.first().map_or(0, Vec::len);
        let da = self.right.first().map_or(0, Vec::len);
        let mut out = vec![cz(); db * da];
        for (l, &lam) in self.coefficients.entries().iter().enumerate() {
            let s = lam.max(T::zero()).sqrt();
            for j in 0..db {
                for k in 0..da {
                    out[j * da + k] = out[j * da + k] + self.left[l][j] * self.right[l][k] * s;
                }
            }
        }
        out
    }

    pub fn rank(&self, tol: T) -> usize {
        self.coefficients.entries().iter().filter(|&&x| x > tol).count()
    }
}

/// Schmidt decomposition from the spectrum of the smaller reduced state, with the
/// partner vectors recovered by back-substitution and re-orthonormalized.
pub fn schmidt_decomposition<T: Real>(psi: &BipartitePureState<T>) -> SchmidtDecomposition<T> {
    let (db, da) = psi.dims();
    let c = psi.coefficient_matrix();
    let b_side = db <= da;
    let reduced = if b_side {
        c.matmul(&c.adjoint()).expect("shapes agree")
    } else {
        c.transpose().matmul(&c.adjoint().transpose()).expect("shapes agree")
    };
    let eig = hermitian_eig(&reduced, T::infinity()).expect("reduced state is Hermitian");
    let r = reduced.rows();
    let other_dim = if b_side { da } else { db };
    let threshold = T::tol(1e-14);

    let mut small: Vec<Vec<C<T>>> = Vec::with_capacity(r);
    let mut partner: Vec<Vec<C<T>>> = Vec::with_capacity(r);
    let mut lambdas = Vec::with_capacity(r);
    for l in 0..r {
        let v = eig.vector(l);
        let lam = eig.values[l].max(T::zero());
        let back: Vec<C<T>> = if b_side {
            // (u† C)_k
            (0..da)
                .map(|k| (0..db).fold(cz(), |acc, j| acc + v[j].conj() * c[(j, k)]))
                .collect()
        } else {
            // (C conj(w))_j
            (0..db)
                .map(|j| (0..da).fold(cz(), |acc, k| acc + c[(j, k)] * v[k].conj()))
                .collect()
        };
        let candidate = if lam > threshold {
            Some(back.into_iter().map(|z| z.unscale(lam.sqrt())).collect())
        } else {
            None
        };
        partner.push(orthonormal_against(candidate, &partner, other_dim));
        small.push(v);
        lambdas.push(lam);
    }
    let coefficients = ProbVector::from_raw(lambdas);
    if b_side {
        SchmidtDecomposition {
            coefficients,
            left: small,
            right: partner,
        }
    } else {
        SchmidtDecomposition {
            coefficients,
            left: partner,
            right: small,
        }
    }
}

/// Schmidt coefficients only (descending), from raw amplitudes.
pub fn schmidt_coefficients<T: Real>(amps: &[C<T>], dims: (usize, usize)) -> Vec<T> {
    let (db, da) = dims;
    let (n, mut buf) = if db <= da {
        let mut g = vec![cz::<T>(); db * db];
        for i in 0..db {
            for j in i..db {
                let s = (0..da).fold(cz(), |acc, k| acc + amps[i * da + k] * amps[j * da + k].conj());
                g[i * db + j] = s;
                g[j * db + i] = s.conj();
            }
        }
        (db, g)
    } else {
        let mut g = vec![cz(); da * da];
        for k in 0..da {
            for kp in k..da {
                let s = (0..db).fold(cz(), |acc, j| acc + amps[j * da + k] * amps[j * da + kp].conj());
                g[k * da + kp] = s;
                g[kp * da + k] = s.conj();
            }
        }
        (da, g)
    };
    hermitian_eigenvalues_in_place(&mut buf, n)
        .into_iter()
        .map(|x| x.max(T::zero()))
        .collect()
}

/// Gram–Schmidt step: orthonormalize `candidate` against `basis`, or pick the
/// first standard basis vector that survives when the candidate is absent or degenerate.
pub(crate) fn orthonormal_against<T: Real>(
    candidate: Option<Vec<C<T>>>,
    basis: &[Vec<C<T>>],
    dim: usize,
) -> Vec<C<T>> {
    let project_out = |mut v: Vec<C<T>>| -> Option<Vec<C<T>>> {
        for _ in 0..2 {
            for b in basis {
                let ov = inner(b, &v);
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = *x - ov * y;
                }
            }
        }
        let n = norm_sqr(&v).sqrt();
        (n > T::lit(1e-6)).then(|| v.into_iter().map(|z| z.unscale(n)).collect())
    };
    if let Some(v) = candidate.and_then(project_out) {
        return v;
    }
    for e in 0..dim {
        let mut v = vec![cz(); dim];
        v[e] = C::new(T::one(), T::zero());
        if let Some(v) = project_out(v) {
            return v;
        }
    }
    vec![cz(); dim]
}
