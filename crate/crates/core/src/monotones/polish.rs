//! Column-generation refinement of a roof ensemble.
//!
//! Pure states in the range of `ρ` are written in eigenbasis coordinates
//! `ψ = Σ_l c_l |e_l⟩`. For a fixed dictionary of such states, the best
//! decomposition is a linear program in the weights: minimize `Σ_k w_k g(ψ_k)`
//! subject to `Σ_k w_k c_k c_k† = diag(λ)` and `w ≥ 0`. New dictionary states
//! come from a local search on the reduced cost `g(ψ) − ⟨y, a(ψ)⟩`, where `y`
//! solves the dual program. A basic optimal solution has at most `r²` members.

use rand_chacha::ChaCha8Rng;

use super::descent::line_min;
use super::{Objective, RoofKind};
use crate::lp::{self, LpSolution};
use crate::qstate::{hermitian_eig, inner, norm_sqr, schmidt_decomposition, BipartitePureState, ComplexMatrix, PureState};
use crate::scalar::{cr, cz, random_complex, Real, C};

const ROUNDS: usize = 40;
const RANDOM_PROBES: usize = 24;
const LOCAL_STARTS: usize = 4;
const LOCAL_PASSES: usize = 12;
const PRICE_TOL: f64 = 1e-10;
const WEIGHT_FLOOR: f64 = 1e-14;
const STALL_ROUNDS: usize = 10;
const STALL_TOL: f64 = 1e-7;

/// Orthonormal eigenvectors spanning the range of `ρ` and their eigenvalues.
pub(super) struct Frame<T> {
    pub(super) vectors: Vec<Vec<C<T>>>,
    pub(super) lambda: Vec<T>,
}

impl<T: Real> Frame<T> {
    fn rank(&self) -> usize {
        self.vectors.len()
    }

    fn coords(&self, v: &[C<T>]) -> Vec<C<T>> {
        self.vectors.iter().map(|e| inner(e, v)).collect()
    }

    fn embed(&self, c: &[C<T>]) -> Vec<C<T>> {
        let n = self.vectors[0].len();
        let mut out = vec![cz(); n];
        for (cl, e) in c.iter().zip(&self.vectors) {
            for (o, &x) in out.iter_mut().zip(e) {
                *o = *o + *cl * x;
            }
        }
        out
    }

    /// Real coordinates of `c c†`: diagonal entries, then `Re`/`Im` of the upper triangle.
    fn constraint_column(&self, c: &[C<T>]) -> Vec<f64> {
        let r = self.rank();
        let mut a = Vec::with_capacity(r * r);
        a.extend(c.iter().map(|z| z.norm_sqr().as_f64()));
        for l in 0..r {
            for k in (l + 1)..r {
                let z = c[l] * c[k].conj();
                a.push(z.re.as_f64());
                a.push(z.im.as_f64());
            }
        }
        a
    }

    fn rhs(&self) -> Vec<f64> {
        let r = self.rank();
        let mut b: Vec<f64> = self.lambda.iter().map(|x| x.as_f64()).collect();
        b.resize(r * r, 0.0);
        b
    }
}

struct Column<T> {
    coords: Vec<C<T>>,
    cost: f64,
    a: Vec<f64>,
}

struct Pricer<'a, T> {
    objective: &'a Objective,
    frame: &'a Frame<T>,
}

impl<'a, T: Real> Pricer<'a, T> {
    fn column(&self, coords: Vec<C<T>>) -> Column<T> {
        let cost = self.objective.member_value(&self.frame.embed(&coords)).as_f64();
        let a = self.frame.constraint_column(&coords);
        Column { coords, cost, a }
    }

    fn reduced_cost(&self, c: &[C<T>], y: &[f64]) -> T {
        let cost = self.objective.member_value(&self.frame.embed(c));
        let dot: f64 = self.frame.constraint_column(c).iter().zip(y).map(|(a, y)| a * y).sum();
        cost - T::lit(dot)
    }

    /// The normalized state for `c`; drift in `‖c‖` must not hide its Schmidt structure.
    fn bipartite(&self, c: &[C<T>], dims: (usize, usize)) -> Option<BipartitePureState<T>> {
        let psi = PureState::normalized(self.frame.embed(c)).ok()?;
        BipartitePureState::new(dims, psi).ok()
    }

    /// Coordinate rows `r_i` with `ψ_i = Σ_l r_il c_l`.
    fn rows(&self) -> Vec<Vec<C<T>>> {
        let n = self.frame.vectors[0].len();
        (0..n).map(|i| self.frame.vectors.iter().map(|e| e[i]).collect()).collect()
    }

    /// Points whose pure-state distribution has one more vanishing entry:
    /// `c` with a basis amplitude projected out (coherence), or the range
    /// projection of the state with one Schmidt term removed.
    fn targets(&self, c: &[C<T>], rows: &[Vec<C<T>>]) -> Vec<Vec<C<T>>> {
        match self.objective.kind {
            RoofKind::Coherence => rows
                .iter()
                .filter_map(|row| {
                    let rn = norm_sqr(row);
                    let amp = dot(row, c);
                    if rn <= T::tol(1e-12) || amp.norm() <= T::tol(1e-12) {
                        return None;
                    }
                    Some(c.iter().zip(row).map(|(&x, &r)| x - r.conj() * amp / rn).collect())
                })
                .collect(),
            RoofKind::Entanglement { dims } => {
                let Some(state) = self.bipartite(c, dims) else {
                    return Vec::new();
                };
                let sd = schmidt_decomposition(&state);
                let k = sd.rank(T::tol(1e-12));
                if k < 2 {
                    return Vec::new();
                }
                let (db, da) = dims;
                let coeffs = sd.coefficients.entries();
                (0..k)
                    .map(|dropped| {
                        let mut v = vec![cz(); db * da];
                        for t in (0..k).filter(|&t| t != dropped) {
                            let s = coeffs[t].sqrt();
                            for j in 0..db {
                                for a in 0..da {
                                    v[j * da + a] = v[j * da + a] + sd.left[t][j] * sd.right[t][a] * s;
                                }
                            }
                        }
                        self.frame.coords(&v)
                    })
                    .collect()
            }
        }
    }

    /// Orthonormal coordinate directions that would leave the current face.
    /// For coherence the face fixes the vanished amplitudes at zero. For
    /// entanglement it is the part of the range inside `span(left) ⊗ span(right)`
    /// of the nonzero Schmidt terms, which keeps the Schmidt rank from growing.
    fn forbidden_directions(&self, c: &[C<T>], rows: &[Vec<C<T>>]) -> Vec<Vec<C<T>>> {
        let r = c.len();
        match self.objective.kind {
            RoofKind::Coherence => {
                let mut basis: Vec<Vec<C<T>>> = Vec::new();
                let vanished = rows
                    .iter()
                    .filter(|row| norm_sqr(row) > T::tol(1e-12) && dot(row, c).norm() <= T::tol(1e-10));
                for row in vanished {
                    let mut g: Vec<C<T>> = row.iter().map(|z| z.conj()).collect();
                    for q in &basis {
                        let ov = inner(q, &g);
                        for (x, &b) in g.iter_mut().zip(q) {
                            *x = *x - ov * b;
                        }
                    }
                    let n = norm_sqr(&g).sqrt();
                    if n > T::tol(1e-9) {
                        basis.push(g.into_iter().map(|z| z.unscale(n)).collect());
                    }
                }
                basis
            }
            RoofKind::Entanglement { dims } => {
                let (db, da) = dims;
                let Some(state) = self.bipartite(c, dims) else {
                    return Vec::new();
                };
                let sd = schmidt_decomposition(&state);
                let k = sd.rank(T::tol(1e-18));
                if k >= db.min(da) {
                    return Vec::new();
                }
                // P = P_left ⊗ P_right on the kept Schmidt vectors
                let project = |v: &[C<T>]| -> Vec<C<T>> {
                    let mut out = vec![cz(); db * da];
                    for s in 0..k {
                        for t in 0..k {
                            let mut ov = cz();
                            for j in 0..db {
                                for a in 0..da {
                                    ov = ov + (sd.left[s][j] * sd.right[t][a]).conj() * v[j * da + a];
                                }
                            }
                            for j in 0..db {
                                for a in 0..da {
                                    out[j * da + a] = out[j * da + a] + sd.left[s][j] * sd.right[t][a] * ov;
                                }
                            }
                        }
                    }
                    out
                };
                // Q = R†(I − P)R in range coordinates; its support is what leaves the face
                let projected: Vec<Vec<C<T>>> = self.frame.vectors.iter().map(|e| project(e)).collect();
                let q = ComplexMatrix::from_fn(r, r, |l, m| {
                    let delta = if l == m { cr(T::one()) } else { cz() };
                    delta - inner(&self.frame.vectors[l], &projected[m])
                });
                let Ok(eig) = hermitian_eig(&q.hermitian_part(), T::infinity()) else {
                    return Vec::new();
                };
                (0..r).filter(|&l| eig.values[l] > T::tol(1e-9)).map(|l| eig.vector(l)).collect()
            }
        }
    }

    /// Line searches along great circles through `c`, aimed at the targets
    /// and along random directions that keep already vanished amplitudes at zero.
    fn descend(&self, mut c: Vec<C<T>>, y: &[f64], rng: &mut ChaCha8Rng) -> (Vec<C<T>>, T) {
        let r = c.len();
        let rows = self.rows();
        let mut val = self.reduced_cost(&c, y);
        for _ in 0..LOCAL_PASSES {
            let before = val;
            let mut directions: Vec<Vec<C<T>>> = self
                .targets(&c, &rows)
                .into_iter()
                .filter_map(|t| orthogonal_part(&c, t))
                .collect();
            let forbidden = self.forbidden_directions(&c, &rows);
            for _ in 0..2 * r {
                let mut u = random_unit::<T>(r, rng);
                for q in &forbidden {
                    let ov = inner(q, &u);
                    for (x, &b) in u.iter_mut().zip(q) {
                        *x = *x - ov * b;
                    }
                }
                if let Some(u) = orthogonal_part(&c, u) {
                    directions.push(u);
                }
            }
            for u in directions {
                let step = |t: T| -> Vec<C<T>> {
                    let (co, si) = (t.cos(), t.sin());
                    c.iter().zip(&u).map(|(&a, &b)| a * co + b * si).collect()
                };
                if let Some((t, _)) = line_min(val, |t| self.reduced_cost(&step(t), y)) {
                    let next = step(t);
                    let n = norm_sqr(&next).sqrt();
                    c = next.into_iter().map(|z| z.unscale(n)).collect();
                    val = self.reduced_cost(&c, y);
                }
            }
            if before - val < T::tol(1e-13) {
                break;
            }
        }
        (c, val)
    }
}

/// `Σ_l a_l b_l` without conjugation.
fn dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(cz(), |acc, (&x, &y)| acc + x * y)
}

/// Unit vector along the part of `v` orthogonal to the unit vector `c`.
fn orthogonal_part<T: Real>(c: &[C<T>], mut v: Vec<C<T>>) -> Option<Vec<C<T>>> {
    let ov = inner(c, &v);
    for (x, &b) in v.iter_mut().zip(c) {
        *x = *x - ov * b;
    }
    let n = norm_sqr(&v).sqrt();
    (n > T::tol(1e-12)).then(|| v.into_iter().map(|z| z.unscale(n)).collect())
}

fn random_unit<T: Real>(r: usize, rng: &mut ChaCha8Rng) -> Vec<C<T>> {
    loop {
        let v: Vec<C<T>> = (0..r).map(|_| random_complex(rng)).collect();
        let n = norm_sqr(&v).sqrt();
        if n > T::lit(1e-6) {
            return v.into_iter().map(|z| z.unscale(n)).collect();
        }
    }
}

fn solve<T>(columns: &[Column<T>], b: &[f64]) -> Option<LpSolution> {
    let a: Vec<Vec<f64>> = columns.iter().map(|c| c.a.clone()).collect();
    let cost: Vec<f64> = columns.iter().map(|c| c.cost).collect();
    lp::minimize(&a, &cost, b).ok()
}

pub(super) struct Polished<T> {
    pub(super) members: Vec<Vec<C<T>>>,
    /// Pricing found no improving state, or the value stalled.
    pub(super) converged: bool,
}

/// Refines the decomposition `seeds` (unnormalized members summing to `ρ`).
pub(super) fn polish<T: Real>(
    objective: &Objective,
    frame: &Frame<T>,
    seeds: &[Vec<C<T>>],
    tol: f64,
    rng: &mut ChaCha8Rng,
) -> Option<Polished<T>> {
    let r = frame.rank();
    let pricer = Pricer { objective, frame };
    let mut columns: Vec<Column<T>> = (0..r)
        .map(|l| {
            let mut c = vec![cz(); r];
            c[l] = cr(T::one());
            pricer.column(c)
        })
        .collect();
    for s in seeds {
        let c = frame.coords(s);
        let n = norm_sqr(&c).sqrt();
        if n > T::lit(1e-9) {
            columns.push(pricer.column(c.into_iter().map(|z| z.unscale(n)).collect()));
        }
    }
    let b = frame.rhs();
    let mut converged = false;
    let mut history = Vec::new();
    for _ in 0..ROUNDS {
        let LpSolution { x: w, y, value } = solve(&columns, &b)?;
        history.push(value);
        if history.len() > STALL_ROUNDS && history[history.len() - 1 - STALL_ROUNDS] - value < tol.max(STALL_TOL) {
            converged = true;
            break;
        }
        let mut starts: Vec<(Vec<C<T>>, T)> = columns
            .iter()
            .zip(&w)
            .filter(|(_, &wk)| wk > WEIGHT_FLOOR)
            .map(|(col, _)| col.coords.clone())
            .chain((0..RANDOM_PROBES).map(|_| random_unit(r, rng)))
            .map(|c| {
                let h = pricer.reduced_cost(&c, &y);
                (c, h)
            })
            .collect();
        starts.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let mut added = 0;
        for (c, _) in starts.into_iter().take(LOCAL_STARTS) {
            let (c, h) = pricer.descend(c, &y, rng);
            if h < -T::lit(PRICE_TOL) {
                columns.push(pricer.column(c));
                added += 1;
            }
        }
        if added == 0 {
            converged = true;
            break;
        }
    }
    let w = solve(&columns, &b)?.x;
    let support: Vec<(T, &Vec<C<T>>)> = columns
        .iter()
        .zip(&w)
        .filter(|(_, &wk)| wk > WEIGHT_FLOOR)
        .map(|(col, &wk)| (T::lit(wk), &col.coords))
        .collect();

    // exact repair: with M = Σ w c c†, the map diag(√λ)·M^{-1/2} sends the LP
    // ensemble to one whose second moment is diag(λ) to rounding
    let mut moment = ComplexMatrix::zeros(r, r);
    for (wk, c) in &support {
        moment = &moment + &ComplexMatrix::outer(c, c).scale_real(*wk);
    }
    let eig = hermitian_eig(&moment.hermitian_part(), T::infinity()).ok()?;
    if eig.min_value() <= T::zero() {
        return None;
    }
    let inv_sqrt = ComplexMatrix::from_fn(r, r, |i, j| {
        (0..r).fold(cz(), |acc, k| {
            acc + eig.vectors[(i, k)] * eig.vectors[(j, k)].conj() / eig.values[k].sqrt()
        })
    });
    let repair = ComplexMatrix::from_fn(r, r, |i, j| inv_sqrt[(i, j)] * frame.lambda[i].sqrt());
    let members = support
        .iter()
        .map(|(wk, c)| {
            let scaled: Vec<C<T>> = c.iter().map(|&z| z * wk.sqrt()).collect();
            frame.embed(&repair.mul_vec(&scaled))
        })
        .collect();
    Some(Polished { members, converged })
}

