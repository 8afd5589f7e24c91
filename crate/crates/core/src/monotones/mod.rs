//! Pure-state coherence and entanglement monotones induced by a catalog
//! functional, and a convex-roof search for mixed states.
//!
//! Each restart of the roof search starts from a size-`m` decomposition of the
//! rank-`r` state, obtained from an `m × r` isometry acting on the scaled
//! eigenvectors `√λ_l |e_l⟩`, runs coordinate descent over two-member
//! rotations, and then refines the result by column generation over pure
//! states in the range of `ρ`. Restarts run in parallel and merge by minimum.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::majorize::{Functional, ProbVector};
use crate::qstate::{
    norm_sqr, schmidt_coefficients, schmidt_decomposition, BipartitePureState, DensityMatrix, PureState,
};
use crate::random;
use crate::scalar::{cz, Real, C};

mod descent;
mod polish;

use descent::Descent;
use polish::{polish, Frame};

/// `μ_j = |ψ_j|²` in basis order.
pub fn coherence_vector<T: Real>(psi: &PureState<T>) -> ProbVector<T> {
    ProbVector::from_raw(psi.amplitudes().iter().map(|z| z.norm_sqr()).collect())
}

/// `C_f(ψ) = f(μ(ψ))`.
pub fn c_f_pure<T: Real>(f: &Functional, psi: &PureState<T>) -> Result<T> {
    if let Functional::Gc { d } = *f {
        if d != psi.dim() {
            return Err(Error::Dimension(format!(
                "gc({d}) applied to a {}-dimensional state",
                psi.dim()
            )));
        }
    }
    f.evaluate(coherence_vector(psi).entries())
}

/// `E_f(Ψ) = f(λ(Ψ))`.
pub fn e_f_pure<T: Real>(f: &Functional, psi: &BipartitePureState<T>) -> Result<T> {
    f.evaluate(schmidt_decomposition(psi).coefficients.entries())
}

/// Which pure-state quantity the roof extends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoofKind {
    Coherence,
    Entanglement { dims: (usize, usize) },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoofOptions {
    /// Ensemble cardinality; `None` means `rank²`.
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    /// Maximum coordinate-descent sweeps per restart.
    pub max_iters: usize,
    /// Per-sweep improvement below which a restart counts as converged.
    pub tol: f64,
    pub seed: u64,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 32,
            max_iters: 500,
            tol: 1e-9,
            seed: 0,
        }
    }
}

/// Best decomposition found. `value` is an upper bound on the true roof.
#[derive(Clone, Debug)]
pub struct RoofEstimate<T> {
    pub value: T,
    pub ensemble: Vec<(T, PureState<T>)>,
    pub converged: bool,
    /// Sweeps used by the winning restart.
    pub iterations: usize,
    pub restarts: usize,
}

impl<T: Real> RoofEstimate<T> {
    pub fn weights(&self) -> Vec<T> {
        self.ensemble.iter().map(|(w, _)| *w).collect()
    }
}

const RANK_TOL: f64 = 1e-12;

/// Convex-roof upper estimate of `f` on `rho`.
pub fn convex_roof<T: Real>(
    f: &Functional,
    rho: &DensityMatrix<T>,
    kind: RoofKind,
    opts: &RoofOptions,
) -> Result<RoofEstimate<T>> {
    let n = rho.dim();
    if let RoofKind::Entanglement { dims } = kind {
        if dims.0 * dims.1 != n || dims.0 == 0 || dims.1 == 0 {
            return Err(Error::Dimension(format!(
                "dims {}x{} do not factor dimension {n}",
                dims.0, dims.1
            )));
        }
    }
    let objective = Objective { f: *f, kind };
    // surface parameter errors (e.g. gc dimension) before searching
    objective.pure_value(&PureState::<T>::basis(n, 0))?;

    let eig = rho.eig();
    let kept: Vec<usize> = (0..n).filter(|&l| eig.values[l] > T::tol(RANK_TOL)).collect();
    let frame = Frame {
        vectors: kept.iter().map(|&l| eig.vector(l)).collect(),
        lambda: kept.iter().map(|&l| eig.values[l]).collect(),
    };
    let basis: Vec<Vec<C<T>>> = frame
        .vectors
        .iter()
        .zip(&frame.lambda)
        .map(|(v, lam)| v.iter().map(|&z| z * lam.sqrt()).collect())
        .collect();
    let rank = basis.len();
    if rank == 0 {
        return Err(Error::Validation {
            invariant: "unit_trace",
            detail: "state has no eigenvalue above the rank threshold".into(),
        });
    }
    if rank == 1 {
        let psi = PureState::normalized(basis[0].clone())?;
        let value = objective.pure_value(&psi)?;
        return Ok(RoofEstimate {
            value,
            ensemble: vec![(T::one(), psi)],
            converged: true,
            iterations: 0,
            restarts: 0,
        });
    }
    let m = opts.ensemble_size.unwrap_or(rank * rank);
    if m < rank {
        return Err(Error::Parameter(format!(
            "ensemble size {m} is below the rank {rank} of the state"
        )));
    }
    let restarts = opts.restarts.max(1);
    let runs: Vec<Run<T>> = (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(k as u64);
            let members = if k == 0 {
                let mut v = basis.clone();
                v.resize(m, vec![cz(); n]);
                v
            } else {
                let iso = random::isometry::<T, _>(m, rank, &mut rng);
                (0..m)
                    .map(|row| {
                        (0..n)
                            .map(|i| (0..rank).fold(cz(), |acc, l| acc + iso[(row, l)] * basis[l][i]))
                            .collect()
                    })
                    .collect()
            };
            let mut descent = Descent::new(&objective, members);
            let (converged, sweeps) = descent.run(T::lit(opts.tol), opts.max_iters, &mut rng);
            let mut run = Run {
                value: descent.total(),
                members: descent.members,
                converged,
                sweeps,
            };
            if let Some(p) = polish(&objective, &frame, &run.members, opts.tol, &mut rng) {
                let value: T = p.members.iter().map(|v| objective.member_value(v)).sum();
                if value < run.value {
                    run.value = value;
                    run.members = p.members;
                    run.converged = run.converged && p.converged;
                }
            }
            run
        })
        .collect();

    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one restart");
    let mut ensemble = Vec::new();
    let mut value = T::zero();
    for v in best.members {
        let w = norm_sqr(&v);
        if w <= T::zero() {
            continue;
        }
        let psi = PureState::normalized(v)?;
        value = value + w * objective.pure_value(&psi)?;
        ensemble.push((w, psi));
    }
    Ok(RoofEstimate {
        value,
        ensemble,
        converged: best.converged,
        iterations: best.sweeps,
        restarts,
    })
}

struct Objective {
    f: Functional,
    kind: RoofKind,
}

impl Objective {
    fn pure_value<T: Real>(&self, psi: &PureState<T>) -> Result<T> {
        match self.kind {
            RoofKind::Coherence => c_f_pure(&self.f, psi),
            RoofKind::Entanglement { dims } => {
                e_f_pure(&self.f, &BipartitePureState::new(dims, psi.clone())?)
            }
        }
    }

    /// `w · g(ψ̃/√w)` for an unnormalized member with weight `w = ‖ψ̃‖²`.
    fn member_value<T: Real>(&self, v: &[C<T>]) -> T {
        let w = norm_sqr(v);
        if !(w > T::min_positive_value()) {
            return T::zero();
        }
        let p: Vec<T> = match self.kind {
            RoofKind::Coherence => v.iter().map(|z| z.norm_sqr() / w).collect(),
            RoofKind::Entanglement { dims } => schmidt_coefficients(v, dims).into_iter().map(|x| x / w).collect(),
        };
        w * self.f.evaluate(&p).unwrap_or_else(|_| T::nan())
    }
}

struct Run<T> {
    value: T,
    members: Vec<Vec<C<T>>>,
    converged: bool,
    sweeps: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::ComplexMatrix;
    use crate::scalar::cr;

    fn quick() -> RoofOptions {
        RoofOptions {
            restarts: 4,
            max_iters: 100,
            ..RoofOptions::default()
        }
    }

    #[test]
    fn coherence_vector_examples() {
        let psi = PureState::<f64>::maximally_coherent(3);
        for &x in coherence_vector(&psi).entries() {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(coherence_vector(&PureState::<f64>::basis(3, 0)).entries(), &[1.0, 0.0, 0.0]);
        for theta in [0.0, 1.0, 2.5] {
            let psi = PureState::new(vec![cr(0.7f64.sqrt()), C::from_polar(0.3f64.sqrt(), theta)]).unwrap();
            let mu = coherence_vector(&psi);
            assert!((mu.entries()[0] - 0.7).abs() < 1e-15 && (mu.entries()[1] - 0.3).abs() < 1e-15);
        }
    }

    #[test]
    fn c_f_pure_examples() {
        let plus = PureState::<f64>::maximally_coherent(2);
        assert!((c_f_pure(&Functional::Shannon, &plus).unwrap() - 1.0).abs() < 1e-15);
        let psi = PureState::<f64>::from_real(&[0.7f64.sqrt(), 0.3f64.sqrt()]).unwrap();
        assert!((c_f_pure(&Functional::OneMinusMax, &psi).unwrap() - 0.3).abs() < 1e-15);
        for f in [
            Functional::Shannon,
            Functional::OneMinusMax,
            Functional::Gc { d: 4 },
            Functional::Renyi { alpha: 0.3 },
            Functional::Tail { m: 1 },
        ] {
            assert_eq!(c_f_pure(&f, &PureState::<f64>::basis(4, 2)).unwrap(), 0.0);
        }
        assert!(c_f_pure(&Functional::Gc { d: 3 }, &plus).is_err());
    }

    #[test]
    fn e_f_pure_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = BipartitePureState::from_amplitudes((2, 2), vec![cr(s), cz(), cz(), cr(s)]).unwrap();
        assert!((e_f_pure(&Functional::Shannon, &bell).unwrap() - 1.0).abs() < 1e-14);
        assert!((e_f_pure(&Functional::Gc { d: 2 }, &bell).unwrap() - 1.0).abs() < 1e-14);
        let prod = BipartitePureState::new((2, 3), PureState::<f64>::basis(6, 4)).unwrap();
        assert_eq!(e_f_pure(&Functional::Shannon, &prod).unwrap(), 0.0);
    }

    #[test]
    fn roof_of_pure_state_is_pure_value() {
        let psi = PureState::<f64>::from_real(&[0.8f64.sqrt(), 0.2f64.sqrt()]).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let est = convex_roof(&Functional::Shannon, &rho, RoofKind::Coherence, &quick()).unwrap();
        assert_eq!(est.ensemble.len(), 1);
        let want = c_f_pure(&Functional::Shannon, &psi).unwrap();
        assert!((est.value - want).abs() < 1e-12);
    }

    #[test]
    fn roof_of_maximally_mixed_qubit_is_zero() {
        let rho = DensityMatrix::<f64>::maximally_mixed(2);
        for f in [Functional::Shannon, Functional::Gc { d: 2 }, Functional::OneMinusMax] {
            let est = convex_roof(&f, &rho, RoofKind::Coherence, &quick()).unwrap();
            assert_eq!(est.value, 0.0, "{f}");
        }
    }

    #[test]
    fn roof_of_separable_diagonal_is_zero() {
        let rho = DensityMatrix::<f64>::diagonal(&[0.4, 0.1, 0.3, 0.2]).unwrap();
        let kind = RoofKind::Entanglement { dims: (2, 2) };
        let est = convex_roof(&Functional::Shannon, &rho, kind, &quick()).unwrap();
        assert!(est.value.abs() < 1e-12, "{}", est.value);
    }

    #[test]
    fn ensemble_reconstructs_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random::density_matrix::<f64, _>(3, 3, &mut rng);
        let est = convex_roof(&Functional::Shannon, &rho, RoofKind::Coherence, &quick()).unwrap();
        let rec = DensityMatrix::mixture(&est.ensemble).unwrap();
        assert!((rec.matrix() - rho.matrix()).max_abs() < 1e-8);
        let w: f64 = est.weights().iter().sum();
        assert!((w - 1.0).abs() < 1e-9);
        let recomputed: f64 = est
            .ensemble
            .iter()
            .map(|(w, s)| w * c_f_pure(&Functional::Shannon, s).unwrap())
            .sum();
        assert!((recomputed - est.value).abs() < 1e-10);
    }

    #[test]
    fn more_restarts_never_worse() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random::density_matrix::<f64, _>(3, 2, &mut rng);
        let mut last = f64::INFINITY;
        for restarts in [1, 2, 4, 8] {
            let opts = RoofOptions {
                restarts,
                max_iters: 60,
                ..RoofOptions::default()
            };
            let v = convex_roof(&Functional::Shannon, &rho, RoofKind::Coherence, &opts).unwrap().value;
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random::density_matrix::<f64, _>(3, 3, &mut rng);
        let a = convex_roof(&Functional::Shannon, &rho, RoofKind::Coherence, &quick()).unwrap();
        let b = convex_roof(&Functional::Shannon, &rho, RoofKind::Coherence, &quick()).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn small_ensemble_rejected() {
        let rho = DensityMatrix::<f64>::maximally_mixed(3);
        let opts = RoofOptions {
            ensemble_size: Some(2),
            ..quick()
        };
        assert!(matches!(
            convex_roof(&Functional::Shannon, &rho, RoofKind::Coherence, &opts),
            Err(Error::Parameter(_))
        ));
        let bad = RoofKind::Entanglement { dims: (2, 2) };
        assert!(matches!(
            convex_roof(&Functional::Shannon, &rho, bad, &quick()),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn gc_roof_on_symmetric_state_matches_closed_form() {
        // p|ψ⟩⟨ψ| + (1−p)I/3 with ψ maximally coherent, p = 0.75: roof of gc is 0.5
        let d = 3;
        let p = 0.75;
        let psi = PureState::<f64>::maximally_coherent(d);
        let pure = ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes());
        let mixed = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
        let rho = DensityMatrix::new(&pure.scale_real(p) + &mixed.scale_real(1.0 - p)).unwrap();
        let est = convex_roof(&Functional::Gc { d }, &rho, RoofKind::Coherence, &RoofOptions::default()).unwrap();
        assert!((est.value - 0.5).abs() <= 1e-2, "roof {}", est.value);
    }

    #[test]
    fn gc_entanglement_roof_of_correlated_state_matches_coherence_roof() {
        // on span{|jj⟩} both problems coincide, so the two searches must agree
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let rho = random::density_matrix::<f64, _>(3, 3, &mut rng);
        let mc = crate::mapping::maximally_correlated(&rho);
        let opts = RoofOptions { restarts: 4, ..Default::default() };
        let f = Functional::Gc { d: 3 };
        let c = convex_roof(&f, &rho, RoofKind::Coherence, &opts).unwrap();
        let e = convex_roof(&f, &mc, RoofKind::Entanglement { dims: (3, 3) }, &opts).unwrap();
        assert!((c.value - e.value).abs() < 2e-3, "{} vs {}", c.value, e.value);
    }
}
