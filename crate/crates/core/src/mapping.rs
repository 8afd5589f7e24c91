//! The bridge from coherence to entanglement: the generalized CNOT, maximally
//! correlated states, the comparison of coherence and Schmidt vectors of a
//! bipartite pure state, and roof comparisons on maximally correlated states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::majorize::{majorizes, ProbVector, Functional};
use crate::monotones::{c_f_pure, coherence_vector, convex_roof, e_f_pure, RoofKind, RoofOptions};
use crate::qstate::{
    orthonormal_against, schmidt_decomposition, BipartitePureState, ComplexMatrix, DensityMatrix, PureState,
};
use crate::random;
use crate::scalar::{cr, cz, Real, C};

const ZERO_AMPLITUDE: f64 = 1e-10;

/// Generalized CNOT on `H_B ⊗ H_A`: `|j,k⟩ ↦ |j, (j+k) mod d_B⟩` for `k < d_B`,
/// identity on the `k ≥ d_B` sector.
pub fn ucnot<T: Real>(d_b: usize, d_a: usize) -> Result<ComplexMatrix<T>> {
    if d_a < d_b {
        return Err(Error::Dimension(format!(
            "the generalized CNOT needs d_A >= d_B, got d_B = {d_b}, d_A = {d_a}"
        )));
    }
    let n = d_b * d_a;
    let mut u = ComplexMatrix::zeros(n, n);
    for j in 0..d_b {
        for k in 0..d_a {
            let target = if k < d_b { (j + k) % d_b } else { k };
            u[(j * d_a + target, j * d_a + k)] = cr(T::one());
        }
    }
    Ok(u)
}

/// `U(ψ ⊗ |0⟩)` with a `d`-dimensional ancilla.
pub fn cnot_embed<T: Real>(psi: &PureState<T>) -> BipartitePureState<T> {
    let d = psi.dim();
    let mut amps = vec![cz(); d * d];
    for (j, &a) in psi.amplitudes().iter().enumerate() {
        amps[j * d + j] = a;
    }
    BipartitePureState::from_amplitudes((d, d), amps).expect("normalized by construction")
}

/// `ρ_MC = Σ_jk ρ_jk |jj⟩⟨kk|` on `d × d`.
pub fn maximally_correlated<T: Real>(rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    let d = rho.dim();
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for j in 0..d {
        for k in 0..d {
            m[(j * d + j, k * d + k)] = rho.matrix()[(j, k)];
        }
    }
    DensityMatrix::from_trusted(m)
}

/// `Σ_j e^{iθ_j} √λ_j |π₁(j)⟩|π₂(j)⟩`
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtFormWitness<T> {
    pub pi1: Vec<usize>,
    pub pi2: Vec<usize>,
    pub phases: Vec<T>,
}

#[derive(Clone, Debug)]
pub struct Lemma1Report<T> {
    pub mu: ProbVector<T>,
    pub lambda: ProbVector<T>,
    pub mu_majorized_by_lambda: bool,
    pub coherence_rank: usize,
    pub schmidt_rank: usize,
    /// `μ` and `λ` agree up to ordering.
    pub equivalent: bool,
    pub witness: Option<SchmidtFormWitness<T>>,
}

impl<T> Lemma1Report<T> {
    pub fn has_schmidt_form(&self) -> bool {
        self.witness.is_some()
    }
}

/// Compares the coherence vector of `psi` with its Schmidt vector.
pub fn check_lemma1<T: Real>(psi: &BipartitePureState<T>) -> Lemma1Report<T> {
    let mu = coherence_vector(psi.state());
    let lambda = schmidt_decomposition(psi).coefficients;
    let tol = T::tol(1e-10);
    let mu_majorized_by_lambda = majorizes(mu.entries(), lambda.entries(), tol).expect("nonnegative");
    let converse = majorizes(lambda.entries(), mu.entries(), tol).expect("nonnegative");
    let cutoff = psi.amplitudes().iter().fold(T::zero(), |m, z| m.max(z.norm())) * T::tol(ZERO_AMPLITUDE);
    let coherence_rank = psi.amplitudes().iter().filter(|z| z.norm() > cutoff).count();
    let schmidt_rank = lambda.entries().iter().filter(|&&l| l.sqrt() > cutoff).count();
    let witness = schmidt_form_witness(psi, &lambda);
    Lemma1Report {
        mu,
        lambda,
        mu_majorized_by_lambda,
        coherence_rank,
        schmidt_rank,
        equivalent: mu_majorized_by_lambda && converse,
        witness,
    }
}

/// Detects at most one nonzero coefficient per row and column, then checks that the
/// detected permutations and phases rebuild the state.
fn schmidt_form_witness<T: Real>(psi: &BipartitePureState<T>, lambda: &ProbVector<T>) -> Option<SchmidtFormWitness<T>> {
    let (db, da) = psi.dims();
    let c = psi.coefficient_matrix();
    let cutoff = c.max_abs() * T::tol(ZERO_AMPLITUDE);
    let mut terms = Vec::new();
    for j in 0..db {
        for k in 0..da {
            if c[(j, k)].norm() > cutoff {
                terms.push((j, k, c[(j, k)]));
            }
        }
    }
    let mut rows_used = vec![false; db];
    let mut cols_used = vec![false; da];
    for &(j, k, _) in &terms {
        if rows_used[j] || cols_used[k] {
            return None;
        }
        rows_used[j] = true;
        cols_used[k] = true;
    }
    terms.sort_by(|a, b| b.2.norm().partial_cmp(&a.2.norm()).unwrap_or(std::cmp::Ordering::Equal));
    let mut pi1: Vec<usize> = terms.iter().map(|t| t.0).collect();
    let mut pi2: Vec<usize> = terms.iter().map(|t| t.1).collect();
    let mut phases: Vec<T> = terms.iter().map(|t| t.2.arg()).collect();
    pi1.extend((0..db).filter(|&j| !rows_used[j]));
    pi2.extend((0..da).filter(|&k| !cols_used[k]));
    phases.resize(db.min(da), T::zero());

    let mut rebuilt = vec![cz(); db * da];
    for (t, &phase) in phases.iter().enumerate() {
        let amp = C::from_polar(lambda.entries()[t].max(T::zero()).sqrt(), phase);
        rebuilt[pi1[t] * da + pi2[t]] = amp;
    }
    let err = rebuilt
        .iter()
        .zip(psi.amplitudes())
        .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()));
    (err <= T::tol(1e-10)).then_some(SchmidtFormWitness { pi1, pi2, phases })
}

#[derive(Clone, Debug)]
pub struct LocalUnitaryMinimum<T> {
    /// `min_{U₁,U₂} C_f((U₁⊗U₂)Ψ)`, attained in the Schmidt basis and equal to `E_f(Ψ)`.
    pub value: T,
    pub u1: ComplexMatrix<T>,
    pub u2: ComplexMatrix<T>,
    /// Smallest `C_f` over the random local unitaries, when sampling was requested.
    pub sampled_min: Option<T>,
}

/// Minimal coherence of `psi` over local unitaries, realized by rotating both
/// sides into the Schmidt basis. With `samples > 0`, also evaluates `C_f` on that
/// many Haar-random local rotations drawn from `seed`.
///
/// `gc` is rejected: its coherence and entanglement versions live in different
/// dimensions (`d_B·d_A` versus the Schmidt length), so the comparison is undefined.
pub fn min_coherence_over_local_unitaries<T: Real>(
    f: &Functional,
    psi: &BipartitePureState<T>,
    samples: usize,
    seed: u64,
) -> Result<LocalUnitaryMinimum<T>> {
    if let Functional::Gc { .. } = f {
        return Err(Error::Parameter(
            "gc is dimension-explicit; compare coherence and entanglement with a dimension-free functional".into(),
        ));
    }
    let (db, da) = psi.dims();
    let sd = schmidt_decomposition(psi);
    let rotation = |vectors: &[Vec<C<T>>], dim: usize| {
        let mut basis: Vec<Vec<C<T>>> = Vec::with_capacity(dim);
        for v in vectors {
            basis.push(orthonormal_against(Some(v.clone()), &basis, dim));
        }
        while basis.len() < dim {
            basis.push(orthonormal_against(None, &basis, dim));
        }
        ComplexMatrix::from_fn(dim, dim, |l, j| basis[l][j].conj())
    };
    let u1 = rotation(&sd.left, db);
    let u2 = rotation(&sd.right, da);
    let value = e_f_pure(f, psi)?;
    let sampled_min = if samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = T::infinity();
        for _ in 0..samples {
            let v1 = random::haar_unitary::<T, _>(db, &mut rng);
            let v2 = random::haar_unitary::<T, _>(da, &mut rng);
            let rotated = psi.state().apply(&v1.kron(&v2))?;
            best = best.min(c_f_pure(f, &rotated)?);
        }
        Some(best)
    } else {
        None
    };
    Ok(LocalUnitaryMinimum {
        value,
        u1,
        u2,
        sampled_min,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Theorem4Report<T> {
    pub c_roof: T,
    pub e_roof_mc: T,
    pub gap: T,
}

/// Coherence roof of `rho` against the entanglement roof of its maximally correlated image.
pub fn theorem4_check<T: Real>(f: &Functional, rho: &DensityMatrix<T>, opts: &RoofOptions) -> Result<Theorem4Report<T>> {
    let d = rho.dim();
    let c_roof = convex_roof(f, rho, RoofKind::Coherence, opts)?.value;
    let mc = maximally_correlated(rho);
    let e_roof_mc = convex_roof(f, &mc, RoofKind::Entanglement { dims: (d, d) }, opts)?.value;
    Ok(Theorem4Report {
        c_roof,
        e_roof_mc,
        gap: (c_roof - e_roof_mc).abs(),
    })
}
