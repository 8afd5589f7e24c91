//! Coordinate descent over two-member unitary rotations of an ensemble.
//!
//! Members are unnormalized vectors `ψ̃_k` with `Σ_k |ψ̃_k⟩⟨ψ̃_k| = ρ`. A rotation
//! of the pair `(k1, k2)` by `[[c, −s·e^{iφ}], [s·e^{−iφ}, c]]` keeps that sum fixed.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::Objective;
use crate::qstate::norm_sqr;
use crate::scalar::{cis, cz, Real, C};

const GRID: usize = 12;
const GOLDEN_ITERS: usize = 36;
const PHASES: usize = 4;

/// Minimizes `g` over `θ ∈ (−π/2, π/2)` by a uniform grid followed by golden-section
/// refinement. Returns `(θ, g(θ))` for the best point, or `None` if nothing beats `current`.
pub(super) fn line_min<T: Real>(current: T, mut g: impl FnMut(T) -> T) -> Option<(T, T)> {
    let pi = T::PI();
    let step = pi / T::from_count(GRID);
    let mut best_theta = T::zero();
    let mut best = current;
    for k in 1..GRID {
        let theta = -pi / T::lit(2.0) + step * T::from_count(k);
        let v = g(theta);
        if v < best {
            best = v;
            best_theta = theta;
        }
    }
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let (mut lo, mut hi) = (best_theta - step, best_theta + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    for _ in 0..GOLDEN_ITERS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = g(x2);
        }
    }
    let (theta, val) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    let (theta, val) = if val < best { (theta, val) } else { (best_theta, best) };
    (val < current && theta != T::zero()).then_some((theta, val))
}

pub(super) struct Descent<'a, T> {
    objective: &'a Objective,
    pub(super) members: Vec<Vec<C<T>>>,
    values: Vec<T>,
    scratch: (Vec<C<T>>, Vec<C<T>>),
}

impl<'a, T: Real> Descent<'a, T> {
    pub(super) fn new(objective: &'a Objective, members: Vec<Vec<C<T>>>) -> Self {
        let values = members.iter().map(|v| objective.member_value(v)).collect();
        let n = members.first().map_or(0, Vec::len);
        Self {
            objective,
            members,
            values,
            scratch: (vec![cz(); n], vec![cz(); n]),
        }
    }

    pub(super) fn total(&self) -> T {
        self.values.iter().copied().sum()
    }

    /// Sweeps over all pairs until a sweep improves the total by less than `tol`.
    /// Returns whether that happened within `max_sweeps`, and the sweeps used.
    pub(super) fn run(&mut self, tol: T, max_sweeps: usize, rng: &mut ChaCha8Rng) -> (bool, usize) {
        let m = self.members.len();
        let quarter_pi = T::FRAC_PI_4();
        let mut sweeps = 0;
        while sweeps < max_sweeps {
            sweeps += 1;
            let before = self.total();
            for k1 in 0..m {
                for k2 in (k1 + 1)..m {
                    // φ and φ + π give the same family up to θ ↦ −θ
                    let offset = T::lit(rng.gen_range(0.0..std::f64::consts::FRAC_PI_4));
                    for q in 0..PHASES {
                        self.improve_pair(k1, k2, cis(offset + quarter_pi * T::from_count(q)));
                    }
                }
            }
            if before - self.total() < tol {
                return (true, sweeps);
            }
        }
        (false, sweeps)
    }

    fn rotated_value(&mut self, k1: usize, k2: usize, theta: T, phase: C<T>) -> T {
        let (c, s) = (theta.cos(), theta.sin());
        let (a, b) = (&self.members[k1], &self.members[k2]);
        let (x, y) = &mut self.scratch;
        for i in 0..a.len() {
            x[i] = a[i] * c - phase * b[i] * s;
            y[i] = phase.conj() * a[i] * s + b[i] * c;
        }
        self.objective.member_value(x) + self.objective.member_value(y)
    }

    fn improve_pair(&mut self, k1: usize, k2: usize, phase: C<T>) {
        if norm_sqr(&self.members[k1]) + norm_sqr(&self.members[k2]) <= T::min_positive_value() {
            return;
        }
        let current = self.values[k1] + self.values[k2];
        let Some((theta, _)) = line_min(current, |t| self.rotated_value(k1, k2, t, phase)) else {
            return;
        };
        let (c, s) = (theta.cos(), theta.sin());
        let a = std::mem::take(&mut self.members[k1]);
        let b = std::mem::take(&mut self.members[k2]);
        let x: Vec<C<T>> = a.iter().zip(&b).map(|(&p, &q)| p * c - phase * q * s).collect();
        let y: Vec<C<T>> = a.iter().zip(&b).map(|(&p, &q)| phase.conj() * p * s + q * c).collect();
        self.values[k1] = self.objective.member_value(&x);
        self.values[k2] = self.objective.member_value(&y);
        self.members[k1] = x;
        self.members[k2] = y;
    }
}
