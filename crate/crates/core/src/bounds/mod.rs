//! Observable measures and certified lower bounds on generalized concurrence.
//!
//! For a state in dimension `d`, `C_gc ≥ max(C_l1, C_R) − (d − 2)` and, for `d × d`
//! bipartite states, `E_gc ≥ max(N, E_R) − (d − 2)`. Two one-parameter families
//! saturate these chains and have closed forms.

mod robustness;

pub use robustness::{robustness_coherence, RobustnessOptions, RobustnessSolution};

use crate::error::{Error, Result};
use crate::qstate::{partial_transpose, trace_norm, ComplexMatrix, DensityMatrix, PureState, Subsystem};
use crate::scalar::{cr, Real, C};

/// Recognition tolerance for the closed-form families.
const FAMILY_TOL: f64 = 1e-9;
/// Certificate and roof estimate agree well enough to call the bound tight.
const ROOF_MATCH_TOL: f64 = 1e-3;

/// `Σ_{j≠k} |ρ_jk|`
pub fn c_l1<T: Real>(rho: &DensityMatrix<T>) -> T {
    let m = rho.matrix();
    let n = rho.dim();
    let mut total = T::zero();
    for j in 0..n {
        for k in 0..n {
            if j != k {
                total = total + m[(j, k)].norm();
            }
        }
    }
    total
}

/// `‖ρ^{T_A}‖₁ − 1`, floored at zero.
pub fn negativity<T: Real>(rho: &DensityMatrix<T>, dims: (usize, usize)) -> Result<T> {
    let pt = partial_transpose(rho.matrix(), dims, Subsystem::A)?;
    Ok((trace_norm(&pt)? - T::one()).max(T::zero()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductBound<T> {
    /// `d·|Π c_j|^{2/d}`
    pub lhs: T,
    /// `(Σ|c_j|)² − (d − 1)·Σ|c_j|²`
    pub rhs: T,
    pub holds: bool,
    /// The moduli are all equal, or all equal but one which vanishes.
    pub saturated: bool,
}

pub fn product_bound_check<T: Real>(c: &[C<T>]) -> ProductBound<T> {
    let d = c.len();
    let abs: Vec<T> = c.iter().map(|z| z.norm()).collect();
    let dd = T::from_count(d);
    let lhs = if d == 0 || abs.iter().any(|&a| a == T::zero()) {
        T::zero()
    } else {
        // geometric mean of |c_j|², taken in logs to stay finite
        let mean_log = abs.iter().map(|a| a.ln()).sum::<T>() / dd;
        dd * (T::lit(2.0) * mean_log).exp()
    };
    let sum: T = abs.iter().copied().sum();
    let sum_sq: T = abs.iter().map(|&a| a * a).sum();
    let rhs = sum * sum - (dd - T::one()) * sum_sq;
    let scale = abs.iter().copied().fold(T::zero(), T::max);
    let eq_tol = T::tol(1e-12) * scale.max(T::min_positive_value());
    let saturated = if d <= 2 {
        true
    } else {
        let all_equal = abs.iter().all(|&a| (a - scale).abs() <= eq_tol);
        let zeros = abs.iter().filter(|&&a| a <= eq_tol).count();
        let rest_equal = zeros == 1 && abs.iter().filter(|&&a| a > eq_tol).all(|&a| (a - scale).abs() <= eq_tol);
        all_equal || rest_equal
    };
    ProductBound {
        lhs,
        rhs,
        holds: lhs >= rhs - T::tol(1e-12),
        saturated,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCertificate<T> {
    pub measure_name: &'static str,
    pub lower_bound: T,
    /// Named quantities the bound is built from, all nonnegative.
    pub witnesses: Vec<(&'static str, T)>,
    pub dimension: usize,
    /// Exact value when the state belongs to a recognized closed-form family.
    pub closed_form: Option<T>,
    pub tight: bool,
}

impl<T: Real> BoundCertificate<T> {
    fn from_witnesses(measure_name: &'static str, witnesses: Vec<(&'static str, T)>, dimension: usize) -> Self {
        let best = witnesses.iter().map(|w| w.1).fold(T::zero(), T::max);
        let lower_bound = (best - T::from_count(dimension.saturating_sub(2))).max(T::zero());
        Self {
            measure_name,
            lower_bound,
            witnesses,
            dimension,
            closed_form: None,
            tight: false,
        }
    }

    fn with_closed_form(mut self, exact: T) -> Self {
        self.closed_form = Some(exact);
        self.tight = (exact - self.lower_bound).abs() <= T::tol(1e-6);
        self
    }

    pub fn witness(&self, name: &str) -> Option<T> {
        self.witnesses.iter().find(|w| w.0 == name).map(|w| w.1)
    }

    /// Marks the bound tight when an upper estimate of the same quantity meets it.
    pub fn with_upper_estimate(mut self, estimate: T) -> Self {
        if (estimate - self.lower_bound).abs() <= T::lit(ROOF_MATCH_TOL) {
            self.tight = true;
        }
        self
    }
}

/// Lower bound on the gc coherence concurrence from `C_l1` and `C_R`.
///
/// The robustness witness is the solver's certified lower end, so the bound stays
/// valid even when the solver stops short of the optimum.
pub fn certify_cgc_lower<T: Real>(rho: &DensityMatrix<T>, opts: &RobustnessOptions) -> Result<BoundCertificate<T>> {
    let d = rho.dim();
    if d < 2 {
        return Err(Error::Dimension("coherence certificate needs d ≥ 2".into()));
    }
    let l1 = c_l1(rho);
    let robust = robustness_coherence(rho, opts)?;
    let cert = BoundCertificate::from_witnesses(
        "c_gc",
        vec![("c_l1", l1), ("c_R", robust.lower_bound.max(T::zero()))],
        d,
    );
    Ok(match symmetric_parameter(rho) {
        Some(p) => cert.with_closed_form(symmetric_closed_forms(d, p).2),
        None => cert,
    })
}

/// Lower bound on the gc entanglement concurrence from negativity and, for
/// isotropic or maximally correlated states, the robustness of entanglement.
pub fn certify_egc_lower<T: Real>(
    rho: &DensityMatrix<T>,
    dims: (usize, usize),
    opts: &RobustnessOptions,
) -> Result<BoundCertificate<T>> {
    if dims.0 != dims.1 {
        return Err(Error::Dimension(format!(
            "entanglement certificate needs a d×d state, got {}×{}",
            dims.0, dims.1
        )));
    }
    let d = dims.0;
    if rho.dim() != d * d {
        return Err(Error::Dimension(format!("state of dimension {} does not match {d}×{d}", rho.dim())));
    }
    let mut witnesses = vec![("negativity", negativity(rho, dims)?)];
    let mut exact = None;
    if let Some(f) = isotropic_fidelity(rho, d) {
        let (n, e_gc) = isotropic_closed_forms(d, f);
        witnesses.push(("e_R", n));
        exact = Some(e_gc);
    } else if let Some(reduced) = recognize_maximally_correlated(rho, d) {
        let robust = robustness_coherence(&reduced, opts)?;
        witnesses.push(("e_R", robust.lower_bound.max(T::zero())));
    }
    let cert = BoundCertificate::from_witnesses("e_gc", witnesses, d);
    Ok(match exact {
        Some(e) => cert.with_closed_form(e),
        None => cert,
    })
}

/// `ρ = p|ψ⟩⟨ψ| + (1 − p)·I/d` with `ψ` the uniform superposition.
#[derive(Clone, Debug)]
pub struct SymmetricFamily<T> {
    pub state: DensityMatrix<T>,
    /// Fidelity with the uniform superposition, `p + (1 − p)/d`.
    pub fidelity: T,
    pub c_l1: T,
    pub c_r: T,
    pub c_gc: T,
}

pub fn symmetric_family<T: Real>(d: usize, p: T) -> Result<SymmetricFamily<T>> {
    if d < 2 {
        return Err(Error::Parameter(format!("symmetric family needs d ≥ 2, got {d}")));
    }
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::Parameter(format!("mixing weight {} outside [0, 1]", p.as_f64())));
    }
    let dd = T::from_count(d);
    let off = cr(p / dd);
    let diag = cr(T::one() / dd);
    let m = ComplexMatrix::from_fn(d, d, |j, k| if j == k { diag } else { off });
    let (l1, _, gc) = symmetric_closed_forms(d, p);
    Ok(SymmetricFamily {
        state: DensityMatrix::from_trusted(m),
        fidelity: p + (T::one() - p) / dd,
        c_l1: l1,
        c_r: l1,
        c_gc: gc,
    })
}

/// `ρ = F|Φ⟩⟨Φ| + (1 − F)(I − |Φ⟩⟨Φ|)/(d² − 1)` with `|Φ⟩ = Σ_j |jj⟩/√d`.
#[derive(Clone, Debug)]
pub struct IsotropicFamily<T> {
    pub state: DensityMatrix<T>,
    pub negativity: T,
    pub e_r: T,
    pub e_gc: T,
}

pub fn isotropic_family<T: Real>(d: usize, f: T) -> Result<IsotropicFamily<T>> {
    if d < 2 {
        return Err(Error::Parameter(format!("isotropic family needs d ≥ 2, got {d}")));
    }
    let dd = T::from_count(d);
    let floor = T::one() / (dd * dd);
    if !(f >= floor - T::tol(1e-12) && f <= T::one()) {
        return Err(Error::Parameter(format!(
            "fidelity {} outside [1/d², 1] for d = {d}",
            f.as_f64()
        )));
    }
    let (n, e_gc) = isotropic_closed_forms(d, f);
    Ok(IsotropicFamily {
        state: isotropic_state(d, f),
        negativity: n,
        e_r: n,
        e_gc,
    })
}

fn isotropic_state<T: Real>(d: usize, f: T) -> DensityMatrix<T> {
    let dd = T::from_count(d);
    let noise = (T::one() - f) / (dd * dd - T::one());
    // projector weight on |Φ⟩ beyond the isotropic noise floor
    let peak = (f - noise) / dd;
    let m = ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let on_phi = r % (d + 1) == 0 && c % (d + 1) == 0;
        let mut v = if on_phi { peak } else { T::zero() };
        if r == c {
            v = v + noise;
        }
        cr(v)
    });
    DensityMatrix::from_trusted(m)
}

/// `(C_l1 = C_R, C_gc)` for the symmetric family; the middle entry is the fidelity.
fn symmetric_closed_forms<T: Real>(d: usize, p: T) -> (T, T, T) {
    let dd = T::from_count(d);
    let f = p + (T::one() - p) / dd;
    let l1 = p * (dd - T::one());
    let gc = (dd * f - (dd - T::one())).max(T::zero());
    (l1, f, gc)
}

/// `(N = E_R, E_gc)` for the isotropic family.
fn isotropic_closed_forms<T: Real>(d: usize, f: T) -> (T, T) {
    let dd = T::from_count(d);
    (
        (dd * f - T::one()).max(T::zero()),
        (dd * f - (dd - T::one())).max(T::zero()),
    )
}

fn max_deviation<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> T {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).norm())
        .fold(T::zero(), T::max)
}

/// Mixing weight `p` if `ρ` is the symmetric-family state.
pub fn symmetric_parameter<T: Real>(rho: &DensityMatrix<T>) -> Option<T> {
    let d = rho.dim();
    if d < 2 {
        return None;
    }
    let p = rho.matrix()[(0, 1)].re * T::from_count(d);
    if !(p >= -T::lit(FAMILY_TOL) && p <= T::one() + T::lit(FAMILY_TOL)) {
        return None;
    }
    let p = p.max(T::zero()).min(T::one());
    let model = symmetric_family(d, p).ok()?;
    (max_deviation(rho.matrix(), model.state.matrix()) <= T::tol(FAMILY_TOL)).then_some(p)
}

/// Fidelity `F` if `ρ` is isotropic on `d × d`.
pub fn isotropic_fidelity<T: Real>(rho: &DensityMatrix<T>, d: usize) -> Option<T> {
    let phi = {
        let mut v = vec![cr(T::zero()); d * d];
        let amp = cr(T::one() / T::from_count(d).sqrt());
        for j in 0..d {
            v[j * d + j] = amp;
        }
        PureState::new(v).ok()?
    };
    let f = rho.matrix().quadratic_form(phi.amplitudes());
    let dd = T::from_count(d);
    if f < T::one() / (dd * dd) - T::tol(FAMILY_TOL) {
        return None;
    }
    let f = f.max(T::one() / (dd * dd)).min(T::one());
    (max_deviation(rho.matrix(), isotropic_state(d, f).matrix()) <= T::tol(FAMILY_TOL)).then_some(f)
}

/// The `d × d` coherence matrix `ρ_jk = ⟨jj|ρ|kk⟩` if `ρ` lives on `span{|jj⟩}`.
fn recognize_maximally_correlated<T: Real>(rho: &DensityMatrix<T>, d: usize) -> Option<DensityMatrix<T>> {
    let m = rho.matrix();
    let n = d * d;
    let tol = T::tol(FAMILY_TOL);
    for r in 0..n {
        for c in 0..n {
            if (r % (d + 1) != 0 || c % (d + 1) != 0) && m[(r, c)].norm() > tol {
                return None;
            }
        }
    }
    let reduced = ComplexMatrix::from_fn(d, d, |j, k| m[(j * (d + 1), k * (d + 1))]);
    DensityMatrix::new(reduced).ok()
}
