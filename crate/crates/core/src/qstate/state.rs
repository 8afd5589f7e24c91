use crate::error::{Error, Result};
use crate::qstate::eig::{hermitian_eig, HermitianEigen};
use crate::qstate::matrix::{norm_sqr, ComplexMatrix};
use crate::scalar::{cr, Real, C};

/// Validation tolerances applied when constructing states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub psd: f64,
    pub trace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-9,
            psd: 1e-9,
            trace: 1e-9,
        }
    }
}

/// A unit-trace positive semidefinite Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        Self::with_tolerances(matrix, Tolerances::default())
    }

    pub fn with_tolerances(matrix: ComplexMatrix<T>, tol: Tolerances) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::Dimension(format!(
                "density matrix must be square and non-empty, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if let Some(bad) = matrix.as_slice().iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation {
                invariant: "finite",
                detail: format!("non-finite entry {bad}"),
            });
        }
        let eig = hermitian_eig(&matrix, T::tol(tol.hermitian))?;
        let trace = matrix.trace().re;
        if (trace - T::one()).abs() > T::tol(tol.trace) {
            return Err(Error::Validation {
                invariant: "unit_trace",
                detail: format!("trace is {trace}"),
            });
        }
        let min = eig.min_value();
        if min < -T::tol(tol.psd) {
            return Err(Error::Validation {
                invariant: "positive_semidefinite",
                detail: format!("minimum eigenvalue {min}"),
            });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_trusted(matrix: ComplexMatrix<T>) -> Self {
        Self { matrix }
    }

    pub fn from_pure(psi: &PureState<T>) -> Self {
        Self::from_trusted(ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        let w = T::one() / T::from_count(d);
        Self::from_trusted(ComplexMatrix::from_real_diagonal(&vec![w; d]))
    }

    /// Diagonal (incoherent) state with the given populations.
    pub fn diagonal(p: &[T]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(p))
    }

    /// `Σ_k w_k |ψ_k⟩⟨ψ_k|`
    pub fn mixture(ensemble: &[(T, PureState<T>)]) -> Result<Self> {
        let d = ensemble
            .first()
            .map(|(_, s)| s.dim())
            .ok_or_else(|| Error::Parameter("empty ensemble".into()))?;
        let mut m = ComplexMatrix::zeros(d, d);
        for (w, s) in ensemble {
            if s.dim() != d {
                return Err(Error::Dimension("ensemble members differ in dimension".into()));
            }
            m = &m + &DensityMatrix::from_pure(s).matrix.scale_real(*w);
        }
        Self::new(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn eig(&self) -> HermitianEigen<T> {
        hermitian_eig(&self.matrix, T::infinity()).expect("density matrices are Hermitian")
    }

    pub fn diagonal_entries(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    pub fn is_diagonal(&self, tol: T) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.matrix[(i, j)].norm() <= tol))
    }

    /// Conjugation `U ρ U†` by a unitary of matching size.
    pub fn conjugate(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        let m = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Ok(Self::from_trusted(m.hermitian_part()))
    }

    pub fn purity(&self) -> T {
        self.matrix.frobenius_norm().powi(2)
    }
}

/// A unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<C<T>>,
}

impl<T: Real> PureState<T> {
    pub fn new(amplitudes: Vec<C<T>>) -> Result<Self> {
        Self::with_tolerance(amplitudes, 1e-9)
    }

    pub fn with_tolerance(amplitudes: Vec<C<T>>, tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("pure state needs at least one amplitude".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation {
                invariant: "finite",
                detail: "non-finite amplitude".into(),
            });
        }
        let n = norm_sqr(&amplitudes);
        if (n - T::one()).abs() > T::tol(tol) {
            return Err(Error::Validation {
                invariant: "unit_norm",
                detail: format!("squared norm is {n}"),
            });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<C<T>>) -> Result<Self> {
        let n = norm_sqr(&amplitudes).sqrt();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::Validation {
                invariant: "unit_norm",
                detail: "cannot normalize a zero or non-finite vector".into(),
            });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z.unscale(n)).collect(),
        })
    }

    pub fn from_real(amplitudes: &[T]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| cr(x)).collect())
    }

    pub fn basis(d: usize, j: usize) -> Self {
        let mut a = vec![cr(T::zero()); d];
        a[j] = cr(T::one());
        Self { amplitudes: a }
    }

    /// Uniform superposition `Σ_j |j⟩/√d`.
    pub fn maximally_coherent(d: usize) -> Self {
        let a = T::one() / T::from_count(d).sqrt();
        Self {
            amplitudes: vec![cr(a); d],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amplitudes
    }

    /// `|⟨self|other⟩|²`
    pub fn fidelity(&self, other: &Self) -> T {
        crate::qstate::matrix::inner(&self.amplitudes, &other.amplitudes).norm_sqr()
    }

    /// `|self⟩ ⊗ |other⟩` with `self` as the first factor.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.amplitudes {
            for &b in &other.amplitudes {
                out.push(a * b);
            }
        }
        Self { amplitudes: out }
    }

    pub fn apply(&self, u: &ComplexMatrix<T>) -> Result<Self> {
        if u.cols() != self.dim() {
            return Err(Error::Dimension(format!(
                "operator with {} columns applied to a {}-dimensional state",
                u.cols(),
                self.dim()
            )));
        }
        Self::normalized(u.mul_vec(&self.amplitudes))
    }
}

/// Pure state on `H_B ⊗ H_A`, amplitudes indexed as `|jk⟩ = j·d_A + k` with `j` on B.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartitePureState<T> {
    dims: (usize, usize),
    state: PureState<T>,
}

impl<T: Real> BipartitePureState<T> {
    pub fn new(dims: (usize, usize), state: PureState<T>) -> Result<Self> {
        if dims.0 == 0 || dims.1 == 0 || dims.0 * dims.1 != state.dim() {
            return Err(Error::Dimension(format!(
                "dims {}x{} do not factor a {}-dimensional state",
                dims.0,
                dims.1,
                state.dim()
            )));
        }
        Ok(Self { dims, state })
    }

    pub fn from_amplitudes(dims: (usize, usize), amplitudes: Vec<C<T>>) -> Result<Self> {
        Self::new(dims, PureState::new(amplitudes)?)
    }

    /// `d_B × d_A` matrix of coefficients `c_jk`.
    pub fn coefficient_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_vec(self.dims.0, self.dims.1, self.state.amplitudes().to_vec())
            .expect("length checked at construction")
    }

    pub fn from_coefficients(c: &ComplexMatrix<T>) -> Result<Self> {
        Self::from_amplitudes((c.rows(), c.cols()), c.as_slice().to_vec())
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn state(&self) -> &PureState<T> {
        &self.state
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        self.state.amplitudes()
    }
}
