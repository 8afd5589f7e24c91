//! Robustness of coherence as the smallest diagonal envelope of `ρ`:
//! `C_R(ρ) = min { Σ_i d_i − 1 : diag(d) ⪰ ρ }`.
//!
//! Solved by cutting planes. Each cut `v` asks `Σ_i |v_i|² d_i ≥ v†ρv`, and the
//! bounds `d_i ≥ ρ_ii` are always present. The restricted program gives a lower
//! bound; shifting its solution by the most negative eigenvalue of `diag(d) − ρ`
//! gives a feasible envelope and thus an upper bound.

use crate::error::{Error, Result};
use crate::lp;
use crate::qstate::{hermitian_eig, ComplexMatrix, DensityMatrix};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobustnessOptions {
    /// Target gap between the feasible envelope and the relaxation bound.
    pub tol: f64,
    pub max_cuts: usize,
}

impl Default for RobustnessOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_cuts: 4000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustnessSolution<T> {
    /// `Σ_i d_i − 1` for the returned envelope.
    pub value: T,
    /// Relaxation bound from the final cut set; the optimum lies in `[lower_bound, value]`.
    pub lower_bound: T,
    /// Feasible envelope `d` with `diag(d) ⪰ ρ`.
    pub diagonal_certificate: Vec<T>,
    pub cuts: usize,
    /// Smallest eigenvalue of `diag(d) − ρ` for the certificate.
    pub residual_min_eig: T,
}

pub fn robustness_coherence<T: Real>(
    rho: &DensityMatrix<T>,
    opts: &RobustnessOptions,
) -> Result<RobustnessSolution<T>> {
    let n = rho.dim();
    let m = rho.matrix();
    let lb: Vec<f64> = (0..n).map(|i| m[(i, i)].re.as_f64()).collect();
    let tol = T::tol(opts.tol).as_f64();
    let envelope_gap = |d: &[f64]| -> (Vec<T>, T, ComplexMatrix<T>) {
        let d_t: Vec<T> = d.iter().map(|&x| T::lit(x)).collect();
        let diff = &ComplexMatrix::from_real_diagonal(&d_t) - m;
        let eig = hermitian_eig(&diff.hermitian_part(), T::infinity()).expect("Hermitian by construction");
        let min = eig.min_value();
        (d_t, min, eig.vectors)
    };

    // cut k: Σ_i w_ki s_i ≥ β_k with s = d − lb
    let mut cut_weights: Vec<Vec<f64>> = Vec::new();
    let mut cut_rhs: Vec<f64> = Vec::new();
    let mut s = vec![0.0; n];
    let mut best: Option<(f64, Vec<T>, T)> = None;
    let mut lower = lb.iter().sum::<f64>() - 1.0;
    loop {
        let d: Vec<f64> = s.iter().zip(&lb).map(|(a, b)| a + b).collect();
        let (d_t, min_eig, vectors) = envelope_gap(&d);
        // feasible envelope by a uniform shift
        let shift = (-min_eig).max(T::zero());
        let cert: Vec<T> = d_t.iter().map(|&x| x + shift).collect();
        let upper = cert.iter().copied().sum::<T>().as_f64() - 1.0;
        if best.as_ref().is_none_or(|b| upper < b.0) {
            let residual = if shift > T::zero() {
                envelope_gap(&cert.iter().map(|x| x.as_f64()).collect::<Vec<_>>()).1
            } else {
                min_eig
            };
            best = Some((upper, cert, residual));
        }
        let (best_upper, _, _) = best.as_ref().expect("set above");
        if best_upper - lower <= tol {
            break;
        }
        if cut_weights.len() >= opts.max_cuts {
            return Err(Error::NonConvergence {
                iterations: cut_weights.len(),
                lower,
                upper: *best_upper,
            });
        }
        let before = cut_weights.len();
        for k in 0..n {
            let v = vectors.column(k);
            let w: Vec<f64> = v.iter().map(|z| z.norm_sqr().as_f64()).collect();
            let vrv = m.quadratic_form(&v).as_f64();
            let beta = vrv - w.iter().zip(&lb).map(|(a, b)| a * b).sum::<f64>();
            let achieved: f64 = w.iter().zip(&s).map(|(a, b)| a * b).sum();
            if achieved < beta - 1e-15 {
                cut_weights.push(w);
                cut_rhs.push(beta);
            }
        }
        if cut_weights.len() == before {
            // no violated direction left at working precision
            break;
        }
        let (next, value) = solve_relaxation(n, &cut_weights, &cut_rhs).ok_or(Error::NonConvergence {
            iterations: cut_weights.len(),
            lower,
            upper: best.as_ref().map_or(f64::INFINITY, |b| b.0),
        })?;
        lower = lower.max(value + lb.iter().sum::<f64>() - 1.0);
        s = next;
    }
    let (upper, cert, residual) = best.expect("at least one round");
    Ok(RobustnessSolution {
        value: T::lit(upper),
        lower_bound: T::lit(lower.min(upper)),
        diagonal_certificate: cert,
        cuts: cut_weights.len(),
        residual_min_eig: residual,
    })
}

/// `min Σ s` subject to the cuts and `s ≥ 0`. Solved through its dual
/// `max βᵀy s.t. Wᵀy ≤ 1, y ≥ 0`, which has one row per coordinate rather than per cut.
/// Returns `s` and the optimal value.
fn solve_relaxation(n: usize, weights: &[Vec<f64>], rhs: &[f64]) -> Option<(Vec<f64>, f64)> {
    let mut columns: Vec<Vec<f64>> = weights.to_vec();
    let mut cost: Vec<f64> = rhs.iter().map(|b| -b).collect();
    for i in 0..n {
        let mut col = vec![0.0; n];
        col[i] = 1.0;
        columns.push(col);
        cost.push(0.0);
    }
    let sol = lp::minimize(&columns, &cost, &vec![1.0; n]).ok()?;
    // the multipliers of the dual program are −s
    let s = sol.y.iter().map(|z| (-z).max(0.0)).collect();
    Some((s, -sol.value))
}
