//! Incoherent operations on pure states: Kraus classification, selective
//! application, the majorization criterion, explicit strictly incoherent
//! protocols, and maximal conversion probabilities.

use crate::error::{Error, Result};
use crate::majorize::{majorization_slack, majorizes, sorted_desc, t_transform_chain, ProbVector, MAJORIZATION_TOL};
use crate::monotones::coherence_vector;
use crate::qstate::{norm_sqr, schmidt_decomposition, BipartitePureState, ComplexMatrix, DensityMatrix, PureState};
use crate::scalar::{cr, cz, Real};

/// Per-operator incoherence class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KrausClass {
    StrictlyIncoherent,
    Incoherent,
    Neither,
}

/// Class of a whole Kraus set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelClass {
    Sio,
    Io,
    Neither,
}

/// Incoherent iff every column has at most one entry above `1e-12·max|K|`;
/// strictly incoherent iff the same also holds for every row.
pub fn classify_kraus<T: Real>(k: &ComplexMatrix<T>) -> KrausClass {
    let cutoff = k.max_abs() * T::tol(1e-12);
    let nz = |i: usize, j: usize| k[(i, j)].norm() > cutoff;
    let cols_ok = (0..k.cols()).all(|j| (0..k.rows()).filter(|&i| nz(i, j)).count() <= 1);
    if !cols_ok {
        return KrausClass::Neither;
    }
    let rows_ok = (0..k.rows()).all(|i| (0..k.cols()).filter(|&j| nz(i, j)).count() <= 1);
    if rows_ok {
        KrausClass::StrictlyIncoherent
    } else {
        KrausClass::Incoherent
    }
}

const COMPLETENESS_TOL: f64 = 1e-10;
const BRANCH_CUTOFF: f64 = 1e-14;

/// Ordered Kraus operators sharing one shape.
#[derive(Clone, Debug)]
pub struct KrausSet<T> {
    operators: Vec<ComplexMatrix<T>>,
    classes: Vec<KrausClass>,
    class: ChannelClass,
    residual: T,
}

impl<T: Real> KrausSet<T> {
    pub fn new(operators: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::Parameter("a Kraus set needs at least one operator".into()))?;
        let shape = (first.rows(), first.cols());
        if operators.iter().any(|k| (k.rows(), k.cols()) != shape) {
            return Err(Error::Dimension("Kraus operators differ in shape".into()));
        }
        let classes: Vec<KrausClass> = operators.iter().map(classify_kraus).collect();
        let class = if classes.iter().all(|&c| c == KrausClass::StrictlyIncoherent) {
            ChannelClass::Sio
        } else if classes.iter().all(|&c| c != KrausClass::Neither) {
            ChannelClass::Io
        } else {
            ChannelClass::Neither
        };
        let residual = completeness_residual(&operators);
        Ok(Self {
            operators,
            classes,
            class,
            residual,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(d)]).expect("identity is a valid set")
    }

    pub fn operators(&self) -> &[ComplexMatrix<T>] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn class(&self) -> ChannelClass {
        self.class
    }

    pub fn operator_classes(&self) -> &[KrausClass] {
        &self.classes
    }

    /// `max |Σ K†K − I|`
    pub fn completeness_residual(&self) -> T {
        self.residual
    }

    pub fn is_complete(&self) -> bool {
        self.residual <= T::tol(COMPLETENESS_TOL)
    }

    pub fn input_dim(&self) -> usize {
        self.operators[0].cols()
    }

    fn require_complete(&self, dim: usize) -> Result<()> {
        if self.input_dim() != dim {
            return Err(Error::Dimension(format!(
                "Kraus operators act on dimension {}, state has dimension {dim}",
                self.input_dim()
            )));
        }
        if !self.is_complete() {
            return Err(Error::Incomplete {
                residual: self.residual.as_f64(),
            });
        }
        Ok(())
    }
}

fn completeness_residual<T: Real>(ops: &[ComplexMatrix<T>]) -> T {
    let n = ops[0].cols();
    let mut sum = ComplexMatrix::zeros(n, n);
    for k in ops {
        sum = &sum + &k.adjoint().matmul(k).expect("K†K is defined");
    }
    (&sum - &ComplexMatrix::identity(n)).max_abs()
}

/// One branch of a selective measurement.
#[derive(Clone, Debug)]
pub struct SelectiveOutcome<T, S> {
    /// Index of the Kraus operator that produced this branch.
    pub index: usize,
    pub probability: T,
    pub post_state: S,
}

/// `σ_n = K_n ρ K_n† / p_n` for every branch with `p_n > 0`.
pub fn apply_selective<T: Real>(
    rho: &DensityMatrix<T>,
    kraus: &KrausSet<T>,
) -> Result<Vec<SelectiveOutcome<T, DensityMatrix<T>>>> {
    kraus.require_complete(rho.dim())?;
    let mut out = Vec::new();
    for (index, k) in kraus.operators().iter().enumerate() {
        let m = k.matmul(rho.matrix())?.matmul(&k.adjoint())?;
        let p = m.trace().re;
        if p > T::lit(BRANCH_CUTOFF) {
            out.push(SelectiveOutcome {
                index,
                probability: p,
                post_state: DensityMatrix::from_trusted(m.scale_real(T::one() / p).hermitian_part()),
            });
        }
    }
    Ok(out)
}

/// Pure-state version of [`apply_selective`].
pub fn apply_selective_pure<T: Real>(
    psi: &PureState<T>,
    kraus: &KrausSet<T>,
) -> Result<Vec<SelectiveOutcome<T, PureState<T>>>> {
    kraus.require_complete(psi.dim())?;
    let mut out = Vec::new();
    for (index, k) in kraus.operators().iter().enumerate() {
        let v = k.mul_vec(psi.amplitudes());
        let p = norm_sqr(&v);
        if p > T::lit(BRANCH_CUTOFF) {
            out.push(SelectiveOutcome {
                index,
                probability: p,
                post_state: PureState::normalized(v)?,
            });
        }
    }
    Ok(out)
}

/// Deterministic convertibility under IO/SIO: `μ(ψ) ≺ μ(φ)`.
pub fn can_transform<T: Real>(psi: &PureState<T>, phi: &PureState<T>) -> bool {
    majorizes(
        coherence_vector(psi).entries(),
        coherence_vector(phi).entries(),
        T::tol(MAJORIZATION_TOL),
    )
    .expect("coherence vectors are nonnegative")
}

/// Strictly incoherent protocol taking `ψ` to `φ` in every branch.
///
/// The protocol removes the phases of `ψ`, sorts its amplitudes, runs one
/// two-operator stage per T-transform linking the sorted coherence vectors,
/// then unsorts into the order of `φ` and installs its phases. Stages are
/// composed by multiplying operators along every branch sequence. When the
/// dimensions differ, both states are zero-padded to the larger one.
pub fn synthesize_io<T: Real>(psi: &PureState<T>, phi: &PureState<T>) -> Result<KrausSet<T>> {
    let n = psi.dim().max(phi.dim());
    let pad = |s: &PureState<T>| {
        let mut v = s.amplitudes().to_vec();
        v.resize(n, cz());
        v
    };
    let (src, dst) = (pad(psi), pad(phi));
    let mu_src: Vec<T> = src.iter().map(|z| z.norm_sqr()).collect();
    let mu_dst: Vec<T> = dst.iter().map(|z| z.norm_sqr()).collect();
    if !majorizes(&mu_src, &mu_dst, T::tol(MAJORIZATION_TOL))? {
        return Err(Error::NotMajorized(
            "coherence vector of the source is not majorized by that of the target".into(),
        ));
    }

    let order_src = descending_indices(&mu_src);
    let order_dst = descending_indices(&mu_dst);
    // diagonal phase removal followed by sorting: |order_src[i]⟩ ↦ |i⟩
    let mut entry = ComplexMatrix::zeros(n, n);
    for (i, &old) in order_src.iter().enumerate() {
        let z = src[old];
        entry[(i, old)] = if z.norm() > T::zero() { z.conj().unscale(z.norm()) } else { cr(T::one()) };
    }
    // unsorting followed by phase installation: |i⟩ ↦ phase·|order_dst[i]⟩
    let mut exit = ComplexMatrix::zeros(n, n);
    for (i, &new) in order_dst.iter().enumerate() {
        let z = dst[new];
        exit[(new, i)] = if z.norm() > T::zero() { z.unscale(z.norm()) } else { cr(T::one()) };
    }

    let sorted_src = sorted_desc(&mu_src);
    let sorted_dst = sorted_desc(&mu_dst);
    let chain = t_transform_chain(&sorted_src, &sorted_dst)?;
    // v_0 = μ↓(φ), v_i = T_i v_{i−1}, with the last one pinned to μ↓(ψ)
    let mut vs = vec![sorted_dst.clone()];
    for t in &chain {
        let mut v = vs.last().expect("nonempty").clone();
        t.apply(&mut v);
        vs.push(v);
    }
    *vs.last_mut().expect("nonempty") = sorted_src;

    let mut branches = vec![entry];
    for (step, t) in chain.iter().enumerate().rev() {
        let chi: Vec<T> = vs[step + 1].iter().map(|x| x.max(T::zero()).sqrt()).collect();
        let xi: Vec<T> = vs[step].iter().map(|x| x.max(T::zero()).sqrt()).collect();
        let stage = stage_operators(n, t.i, t.j, t.a, &chi, &xi);
        let mut next = Vec::with_capacity(branches.len() * stage.len());
        for e in &branches {
            for s in &stage {
                let k = s.matmul(e)?;
                if k.frobenius_norm() > T::lit(BRANCH_CUTOFF) {
                    next.push(k);
                }
            }
        }
        branches = next;
    }
    let ops = branches
        .iter()
        .map(|k| exit.matmul(k))
        .collect::<Result<Vec<_>>>()?;
    KrausSet::new(ops)
}

fn descending_indices<T: Real>(v: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].partial_cmp(&v[a]).unwrap_or(std::cmp::Ordering::Equal));
    idx
}

/// Operators for one T-stage sending amplitudes `chi` to `xi`, where
/// `chi² = T·xi²` on coordinates `(p, q)`. Columns `p` and `q` are renormalized so the
/// stage is complete to rounding even when the amplitudes carry rounding error.
fn stage_operators<T: Real>(n: usize, p: usize, q: usize, a: T, chi: &[T], xi: &[T]) -> Vec<ComplexMatrix<T>> {
    let tiny = T::tol(1e-15);
    if a >= T::one() - tiny {
        return vec![ComplexMatrix::identity(n)];
    }
    if a <= tiny {
        let mut swap = ComplexMatrix::identity(n);
        swap[(p, p)] = cz();
        swap[(q, q)] = cz();
        swap[(p, q)] = cr(T::one());
        swap[(q, p)] = cr(T::one());
        return vec![swap];
    }
    let ratio = |num: T, den: T| if den > T::zero() { num / den } else { T::one() };
    let (sa, sb) = (a.sqrt(), (T::one() - a).sqrt());
    // column p: K1 puts √a·ξ_p/χ_p on (p,p), K2 puts √(1−a)·ξ_q/χ_p on (q,p)
    let (k1_pp, k2_qp) = (sa * ratio(xi[p], chi[p]), sb * ratio(xi[q], chi[p]));
    let (k1_qq, k2_pq) = (sa * ratio(xi[q], chi[q]), sb * ratio(xi[p], chi[q]));
    let np = (k1_pp * k1_pp + k2_qp * k2_qp).sqrt();
    let nq = (k1_qq * k1_qq + k2_pq * k2_pq).sqrt();

    let mut k1 = ComplexMatrix::identity(n).scale_real(sa);
    k1[(p, p)] = cr(k1_pp / np);
    k1[(q, q)] = cr(k1_qq / nq);
    let mut k2 = ComplexMatrix::identity(n).scale_real(sb);
    k2[(p, p)] = cz();
    k2[(q, q)] = cz();
    k2[(q, p)] = cr(k2_qp / np);
    k2[(p, q)] = cr(k2_pq / nq);
    vec![k1, k2]
}

fn tail_ratio_min<T: Real>(numer: &[T], denom: &[T]) -> T {
    let n = numer.len().max(denom.len());
    let mut a = sorted_desc(numer);
    let mut b = sorted_desc(denom);
    a.resize(n, T::zero());
    b.resize(n, T::zero());
    let mut best = T::one();
    let (mut ta, mut tb) = (T::zero(), T::zero());
    // suffix sums from the smallest entry; m = 0 contributes the ratio of totals ≈ 1
    for m in (1..n).rev() {
        ta = ta + a[m];
        tb = tb + b[m];
        if tb > T::tol(1e-14) {
            best = best.min(ta / tb);
        }
    }
    best.max(T::zero())
}

/// `min_m Σ_{j≥m} μ↓_j(ψ) / Σ_{j≥m} μ↓_j(φ)`; exactly 1 iff [`can_transform`].
pub fn max_prob_coherent<T: Real>(psi: &PureState<T>, phi: &PureState<T>) -> T {
    let (a, b) = (coherence_vector(psi), coherence_vector(phi));
    prob_from_vectors(a.entries(), b.entries())
}

fn prob_from_vectors<T: Real>(source: &[T], target: &[T]) -> T {
    if majorizes(source, target, T::tol(MAJORIZATION_TOL)).expect("nonnegative") {
        T::one()
    } else {
        tail_ratio_min(source, target).min(T::one())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntangledProbability<T> {
    pub upper_bound: T,
    /// The target is in Schmidt form in the reference basis, so the bound is attained.
    pub exact: bool,
}

/// Whether the coefficient matrix has no entries off the main diagonal.
pub fn has_reference_schmidt_form<T: Real>(phi: &BipartitePureState<T>) -> bool {
    let c = phi.coefficient_matrix();
    let cutoff = c.max_abs() * T::tol(1e-12);
    (0..c.rows()).all(|j| (0..c.cols()).all(|k| j == k || c[(j, k)].norm() <= cutoff))
}

/// Upper bound on the probability of generating `Φ` from `ψ` with an incoherent
/// ancilla, using the Schmidt vector of `Φ` in the tail-ratio formula.
pub fn max_prob_entangled<T: Real>(psi: &PureState<T>, phi: &BipartitePureState<T>) -> EntangledProbability<T> {
    let mu = coherence_vector(psi);
    let lambda = schmidt_decomposition(phi).coefficients;
    EntangledProbability {
        upper_bound: prob_from_vectors(mu.entries(), lambda.entries()),
        exact: has_reference_schmidt_form(phi),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theorem5Report {
    /// `μ(ψ) ≺ λ(Φ)`, necessary for any incoherent conversion.
    pub necessary_holds: bool,
    pub schmidt_form_target: bool,
    /// Sufficiency verdict; only defined for Schmidt-form targets.
    pub iff_verdict: Option<bool>,
}

/// Coherence-to-entanglement conversion check.
pub fn theorem5_check<T: Real>(psi: &PureState<T>, phi: &BipartitePureState<T>) -> Theorem5Report {
    let mu = coherence_vector(psi);
    let lambda = schmidt_decomposition(phi).coefficients;
    let necessary_holds =
        majorizes(mu.entries(), lambda.entries(), T::tol(MAJORIZATION_TOL)).expect("nonnegative");
    let schmidt_form_target = has_reference_schmidt_form(phi);
    Theorem5Report {
        necessary_holds,
        schmidt_form_target,
        iff_verdict: schmidt_form_target.then_some(necessary_holds),
    }
}

#[derive(Clone, Debug)]
pub struct LemmaB1Report<T> {
    pub lhs: ProbVector<T>,
    pub rhs: ProbVector<T>,
    /// Minimum prefix-sum margin of `lhs ≺ rhs`.
    pub slack: T,
    pub holds: bool,
}

/// `μ(ψ) ≺ Σ_n p_n μ↓(φ_n)` over the branches of an incoherent operation.
pub fn lemma_b1_check<T: Real>(psi: &PureState<T>, kraus: &KrausSet<T>) -> Result<LemmaB1Report<T>> {
    if let Some(index) = kraus.operator_classes().iter().position(|&c| c == KrausClass::Neither) {
        return Err(Error::NotIncoherent { index });
    }
    let outcomes = apply_selective_pure(psi, kraus)?;
    let out_dim = kraus.operators()[0].rows();
    let mut rhs = vec![T::zero(); out_dim];
    for o in &outcomes {
        let mu = sorted_desc(coherence_vector(&o.post_state).entries());
        for (r, m) in rhs.iter_mut().zip(mu) {
            *r = *r + o.probability * m;
        }
    }
    let lhs = coherence_vector(psi);
    let slack = majorization_slack(lhs.entries(), &rhs)?;
    Ok(LemmaB1Report {
        holds: slack >= -T::tol(MAJORIZATION_TOL),
        lhs,
        rhs: ProbVector::from_raw(rhs),
        slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::scalar::C;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn classification_examples() {
        let diag = ComplexMatrix::<f64>::from_real_diagonal(&[1.0, 0.5, 0.2]);
        assert_eq!(classify_kraus(&diag), KrausClass::StrictlyIncoherent);
        let perm = random::permutation_matrix::<f64>(&[2, 0, 1]);
        assert_eq!(classify_kraus(&perm), KrausClass::StrictlyIncoherent);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ComplexMatrix::from_rows(&[vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]]).unwrap();
        assert_eq!(classify_kraus(&h), KrausClass::Neither);
        let mut io = ComplexMatrix::<f64>::zeros(2, 2);
        io[(0, 0)] = c(1.0, 0.0);
        io[(0, 1)] = c(1.0, 0.0);
        assert_eq!(classify_kraus(&io), KrausClass::Incoherent);
    }

    #[test]
    fn identity_channel_single_outcome() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random::density_matrix::<f64, _>(3, 3, &mut rng);
        let out = apply_selective(&rho, &KrausSet::identity(3)).unwrap();
        assert_eq!(out.len(), 1);
        assert!((out[0].probability - 1.0).abs() < 1e-14);
        assert!((out[0].post_state.matrix() - rho.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn dephasing_projectors_on_plus() {
        let p0 = ComplexMatrix::<f64>::from_real_diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::<f64>::from_real_diagonal(&[0.0, 1.0]);
        let k = KrausSet::new(vec![p0, p1]).unwrap();
        let plus = DensityMatrix::from_pure(&PureState::<f64>::maximally_coherent(2));
        let out = apply_selective(&plus, &k).unwrap();
        assert_eq!(out.len(), 2);
        for o in out {
            assert!((o.probability - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn incomplete_set_rejected() {
        let k = KrausSet::new(vec![ComplexMatrix::<f64>::from_real_diagonal(&[1.0, 0.5])]).unwrap();
        let psi = PureState::<f64>::basis(2, 0);
        assert!(matches!(apply_selective_pure(&psi, &k), Err(Error::Incomplete { .. })));
    }

    #[test]
    fn can_transform_examples() {
        let plus = PureState::<f64>::maximally_coherent(2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let any = random::haar_state::<f64, _>(2, &mut rng);
        assert!(can_transform(&plus, &any));
        assert!(!can_transform(&PureState::basis(2, 0), &plus));
        let a = PureState::<f64>::from_real(&[0.6f64.sqrt(), 0.4f64.sqrt()]).unwrap();
        let b = PureState::<f64>::from_real(&[0.7f64.sqrt(), 0.3f64.sqrt()]).unwrap();
        assert!(can_transform(&a, &b));
    }

    #[test]
    fn synthesize_identity_when_equal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = random::haar_state::<f64, _>(4, &mut rng);
        let k = synthesize_io(&psi, &psi).unwrap();
        assert_eq!(k.len(), 1);
        assert!((&k.operators()[0] - &ComplexMatrix::identity(4)).max_abs() < 1e-15);
    }

    #[test]
    fn synthesize_plus_to_biased_qubit() {
        let plus = PureState::<f64>::maximally_coherent(2);
        let target = PureState::<f64>::from_real(&[0.8f64.sqrt(), 0.2f64.sqrt()]).unwrap();
        let k = synthesize_io(&plus, &target).unwrap();
        assert_eq!(k.len(), 2);
        assert_eq!(k.class(), ChannelClass::Sio);
        assert!(k.completeness_residual() <= 1e-12);
        for o in apply_selective_pure(&plus, &k).unwrap() {
            assert!(o.post_state.fidelity(&target) >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn synthesize_rejects_non_majorized() {
        let plus = PureState::<f64>::maximally_coherent(2);
        assert!(matches!(
            synthesize_io(&PureState::basis(2, 0), &plus),
            Err(Error::NotMajorized(_))
        ));
    }

    #[test]
    fn synthesize_handles_vanishing_target_amplitudes() {
        let src = PureState::<f64>::maximally_coherent(3);
        let dst = PureState::<f64>::from_real(&[0.0, 1.0, 0.0]).unwrap();
        let k = synthesize_io(&src, &dst).unwrap();
        assert!(k.completeness_residual() <= 1e-10);
        for o in apply_selective_pure(&src, &k).unwrap() {
            assert!(o.post_state.fidelity(&dst) >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn synthesize_random_d5_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let phi = random::haar_state::<f64, _>(5, &mut rng);
        // ψ from μ(φ) mixed by a random doubly stochastic average
        let mu = coherence_vector(&phi).into_entries();
        let mut mixed = vec![0.0; 5];
        let w = random::probability_vector::<f64, _>(5, &mut rng).into_entries();
        for (s, wt) in w.iter().enumerate() {
            for i in 0..5 {
                mixed[i] += wt * mu[(i + s) % 5];
            }
        }
        let psi = random::state_with_coherence(&mixed, &mut rng);
        let k = synthesize_io(&psi, &phi).unwrap();
        assert!(k.completeness_residual() <= 1e-10);
        assert_eq!(k.class(), ChannelClass::Sio);
        for o in apply_selective_pure(&psi, &k).unwrap() {
            assert!(o.post_state.fidelity(&phi) >= 1.0 - 1e-10);
        }
    }

    #[test]
    fn max_prob_coherent_examples() {
        let a = PureState::<f64>::from_real(&[0.7f64.sqrt(), 0.3f64.sqrt()]).unwrap();
        let plus = PureState::<f64>::maximally_coherent(2);
        assert!((max_prob_coherent(&a, &plus) - 0.6).abs() < 1e-15);
        assert_eq!(max_prob_coherent(&plus, &a), 1.0);
        assert_eq!(max_prob_coherent(&PureState::<f64>::basis(3, 1), &PureState::maximally_coherent(3)), 0.0);
    }

    #[test]
    fn max_prob_entangled_examples() {
        let psi = PureState::<f64>::maximally_coherent(3);
        let third = (1.0f64 / 3.0).sqrt();
        let mut amps = vec![cz(); 9];
        for j in 0..3 {
            amps[j * 3 + j] = cr(third);
        }
        let phi = BipartitePureState::from_amplitudes((3, 3), amps).unwrap();
        let r = max_prob_entangled(&psi, &phi);
        assert_eq!(r.upper_bound, 1.0);
        assert!(r.exact);

        let two = PureState::<f64>::from_real(&[0.5f64.sqrt(), 0.5f64.sqrt(), 0.0]).unwrap();
        assert_eq!(max_prob_entangled(&two, &phi).upper_bound, 0.0);
    }

    #[test]
    fn theorem5_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = BipartitePureState::from_amplitudes((2, 2), vec![cr(s), cz(), cz(), cr(s)]).unwrap();
        let r = theorem5_check(&PureState::<f64>::maximally_coherent(2), &bell);
        assert!(r.necessary_holds && r.schmidt_form_target);
        assert_eq!(r.iff_verdict, Some(true));
        let r = theorem5_check(&PureState::<f64>::basis(2, 0), &bell);
        assert!(!r.necessary_holds);
        assert_eq!(r.iff_verdict, Some(false));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let generic = random::bipartite_pure::<f64, _>((2, 2), &mut rng);
        assert_eq!(theorem5_check(&PureState::maximally_coherent(4), &generic).iff_verdict, None);
    }

    #[test]
    fn lemma_b1_identity_and_refusal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let psi = random::haar_state::<f64, _>(3, &mut rng);
        let r = lemma_b1_check(&psi, &KrausSet::identity(3)).unwrap();
        assert!(r.holds);
        assert!(crate::majorize::equiv(r.lhs.entries(), r.rhs.entries(), 1e-12).unwrap());

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ComplexMatrix::from_rows(&[vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]]).unwrap();
        let k = KrausSet::new(vec![h]).unwrap();
        assert!(matches!(
            lemma_b1_check(&PureState::basis(2, 0), &k),
            Err(Error::NotIncoherent { index: 0 })
        ));
    }

    #[test]
    fn lemma_b1_on_random_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for trial in 0..500 {
            let d = 2 + trial % 4;
            let psi = random::haar_state::<f64, _>(d, &mut rng);
            let k = if trial % 2 == 0 {
                random::io_channel::<f64, _>(d, 1 + trial % 3, &mut rng)
            } else {
                random::sio_channel::<f64, _>(d, 1 + trial % 3, &mut rng)
            };
            assert!(k.is_complete(), "residual {}", k.completeness_residual());
            assert_ne!(k.class(), ChannelClass::Neither);
            let r = lemma_b1_check(&psi, &k).unwrap();
            assert!(r.slack >= -1e-9, "trial {trial}: slack {}", r.slack);
        }
    }

    #[test]
    fn lemma_b1_on_synthesized_protocol() {
        let plus = PureState::<f64>::maximally_coherent(3);
        let target = PureState::<f64>::from_real(&[0.7f64.sqrt(), 0.2f64.sqrt(), 0.1f64.sqrt()]).unwrap();
        let k = synthesize_io(&plus, &target).unwrap();
        let r = lemma_b1_check(&plus, &k).unwrap();
        assert!(r.holds);
        for (a, b) in r.rhs.entries().iter().zip(sorted_desc(coherence_vector(&target).entries())) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
