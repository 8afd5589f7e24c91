//! Seeded samplers for states, unitaries and incoherent channels.
//!
//! Everything takes an explicit `Rng` so callers control determinism.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::majorize::ProbVector;
use crate::qstate::{hermitian_eig, BipartitePureState, ComplexMatrix, DensityMatrix, PureState};
use crate::scalar::{cr, random_complex, Real, C};
use crate::transform::KrausSet;

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

/// Haar-distributed pure state.
pub fn haar_state<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState<T> {
    loop {
        let v: Vec<C<T>> = (0..d).map(|_| random_complex(rng)).collect();
        if let Ok(s) = PureState::normalized(v) {
            return s;
        }
    }
}

pub fn bipartite_pure<T: Real, R: Rng + ?Sized>(
    dims: (usize, usize),
    rng: &mut R,
) -> BipartitePureState<T> {
    BipartitePureState::new(dims, haar_state(dims.0 * dims.1, rng)).expect("dims factor by construction")
}

/// Pure state with a prescribed coherence vector and random phases.
pub fn state_with_coherence<T: Real, R: Rng + ?Sized>(mu: &[T], rng: &mut R) -> PureState<T> {
    let amps: Vec<C<T>> = mu
        .iter()
        .map(|&p| C::from_polar(p.max(T::zero()).sqrt(), T::lit(rng.gen_range(0.0..std::f64::consts::TAU))))
        .collect();
    PureState::normalized(amps).expect("nonzero coherence vector")
}

/// Random density matrix of dimension `d` and rank at most `rank` (induced measure).
pub fn density_matrix<T: Real, R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> DensityMatrix<T> {
    let g = ginibre::<T, R>(d, rank.max(1), rng);
    let w = g.matmul(&g.adjoint()).expect("shapes agree");
    let tr = w.trace().re;
    DensityMatrix::new(w.scale_real(T::one() / tr).hermitian_part()).expect("Wishart matrices are states")
}

/// Haar-like unitary from Gram–Schmidt orthonormalization of a Gaussian matrix.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix<T> {
    isometry(d, d, rng)
}

/// `rows × cols` matrix with orthonormal columns (`rows ≥ cols`).
pub fn isometry<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    assert!(rows >= cols, "an isometry needs rows >= cols");
    let mut columns: Vec<Vec<C<T>>> = Vec::with_capacity(cols);
    while columns.len() < cols {
        let mut v: Vec<C<T>> = (0..rows).map(|_| random_complex(rng)).collect();
        for _ in 0..2 {
            for b in &columns {
                let ov = crate::qstate::inner(b, &v);
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = *x - ov * y;
                }
            }
        }
        let n = crate::qstate::norm_sqr(&v).sqrt();
        if n > T::lit(1e-6) {
            columns.push(v.into_iter().map(|z| z.unscale(n)).collect());
        }
    }
    ComplexMatrix::from_columns(&columns).expect("equal lengths")
}

/// Uniform point on the probability simplex.
pub fn probability_vector<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> ProbVector<T> {
    let e: Vec<f64> = (0..d).map(|_| -rng.gen_range(f64::MIN_POSITIVE..1.0f64).ln()).collect();
    let s: f64 = e.iter().sum();
    ProbVector::from_raw(e.into_iter().map(|x| T::lit(x / s)).collect())
}

/// Random strictly incoherent channel: each operator is a random permutation times a
/// Gaussian diagonal, rescaled by the (diagonal) inverse square root of `Σ K†K`.
pub fn sio_channel<T: Real, R: Rng + ?Sized>(d: usize, n_ops: usize, rng: &mut R) -> KrausSet<T> {
    let mut perm: Vec<usize> = (0..d).collect();
    let ops: Vec<ComplexMatrix<T>> = (0..n_ops.max(1))
        .map(|_| {
            perm.shuffle(rng);
            let mut k = ComplexMatrix::zeros(d, d);
            for (col, &row) in perm.iter().enumerate() {
                k[(row, col)] = random_complex(rng);
            }
            k
        })
        .collect();
    let mut g = vec![T::zero(); d];
    for k in &ops {
        for col in 0..d {
            for row in 0..d {
                g[col] = g[col] + k[(row, col)].norm_sqr();
            }
        }
    }
    let ops = ops
        .into_iter()
        .map(|k| ComplexMatrix::from_fn(d, d, |i, j| k[(i, j)].unscale(g[j].sqrt())))
        .collect();
    KrausSet::new(ops).expect("rescaled set is complete")
}

/// Random incoherent channel. Each operator sends every column to one uniformly chosen
/// row with a Gaussian weight; after scaling so `Σ K†K ⪯ I`, the remainder
/// `I − Σ K†K = Σ_l |v_l⟩⟨v_l|` is completed with rank-one operators `|r_l⟩⟨v_l|`,
/// which have a single nonzero row and are therefore incoherent.
pub fn io_channel<T: Real, R: Rng + ?Sized>(d: usize, n_ops: usize, rng: &mut R) -> KrausSet<T> {
    let mut ops: Vec<ComplexMatrix<T>> = (0..n_ops.max(1))
        .map(|_| {
            let mut k = ComplexMatrix::zeros(d, d);
            for col in 0..d {
                let row = rng.gen_range(0..d);
                k[(row, col)] = random_complex(rng);
            }
            k
        })
        .collect();
    let gram = |ops: &[ComplexMatrix<T>]| {
        ops.iter().fold(ComplexMatrix::zeros(d, d), |acc, k| {
            &acc + &k.adjoint().matmul(k).expect("square")
        })
    };
    let top = hermitian_eig(&gram(&ops), T::infinity()).expect("Gram matrix is Hermitian").values[0];
    let shrink = T::one() / (top * T::lit(1.0 + rng.gen_range(0.0..0.5))).sqrt();
    for k in &mut ops {
        *k = k.scale_real(shrink);
    }
    let rest = &ComplexMatrix::identity(d) - &gram(&ops);
    let eig = hermitian_eig(&rest.hermitian_part(), T::infinity()).expect("Hermitian remainder");
    for (l, &lam) in eig.values.iter().enumerate() {
        if lam <= T::zero() {
            continue;
        }
        let v = eig.vector(l);
        let row = rng.gen_range(0..d);
        let mut k = ComplexMatrix::zeros(d, d);
        for col in 0..d {
            k[(row, col)] = v[col].conj() * lam.sqrt();
        }
        ops.push(k);
    }
    KrausSet::new(ops).expect("completed set is complete")
}

/// Diagonal unitary with uniformly random phases.
pub fn diagonal_phases<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = crate::scalar::cis(T::lit(rng.gen_range(0.0..std::f64::consts::TAU)));
    }
    m
}

/// Permutation matrix `P|j⟩ = |perm[j]⟩`.
pub fn permutation_matrix<T: Real>(perm: &[usize]) -> ComplexMatrix<T> {
    let d = perm.len();
    let mut m = ComplexMatrix::zeros(d, d);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = cr(T::one());
    }
    m
}
