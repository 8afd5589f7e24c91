//! Dense two-phase simplex for small standard-form linear programs
//! `min cᵀx  s.t.  A x = b, x ≥ 0`, returning primal and dual solutions.

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 50_000;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum LpError {
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub(crate) struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
    /// Multipliers with `Aᵀy ≤ c` and `bᵀy = value` at optimality.
    pub y: Vec<f64>,
}

struct Tableau {
    rows: usize,
    width: usize,
    /// `rows × (width + 1)`, last entry of each row is the right-hand side.
    t: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * (self.width + 1) + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width + 1;
        let p = self.t[r * w + c];
        for j in 0..w {
            self.t[r * w + j] /= p;
        }
        let pivot_row: Vec<f64> = self.t[r * w..(r + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.t[i * w + c];
            if f != 0.0 {
                for j in 0..w {
                    self.t[i * w + j] -= f * pivot_row[j];
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs `c_j − c_Bᵀ B⁻¹ A_j` for the current basis.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for (j, dj) in d.iter_mut().enumerate() {
                    *dj -= cb * self.at(i, j);
                }
            }
        }
        d
    }

    /// Runs simplex pivots for `cost` over columns allowed by `enter`.
    fn optimize(&mut self, cost: &[f64], enter: impl Fn(usize) -> bool) -> Result<(), LpError> {
        let mut stalls = 0usize;
        for _ in 0..MAX_PIVOTS {
            let d = self.reduced_costs(cost);
            // Dantzig's rule, switching to Bland's rule after repeated degenerate steps
            let bland = stalls > 50;
            let mut col = None;
            let mut best = -COST_TOL;
            for (j, &dj) in d.iter().enumerate().take(self.width) {
                if !enter(j) || dj >= -COST_TOL {
                    continue;
                }
                if bland {
                    col = Some(j);
                    break;
                }
                if dj < best {
                    best = dj;
                    col = Some(j);
                }
            }
            let Some(c) = col else {
                return Ok(());
            };
            let mut row = None;
            let mut ratio = f64::INFINITY;
            for i in 0..self.rows {
                let a = self.at(i, c);
                if a > PIVOT_TOL {
                    let q = self.rhs(i).max(0.0) / a;
                    let better = match row {
                        None => true,
                        Some(r) => q < ratio - 1e-14 || (q <= ratio + 1e-14 && self.basis[i] < self.basis[r]),
                    };
                    if better {
                        ratio = q;
                        row = Some(i);
                    }
                }
            }
            let Some(r) = row else {
                return Err(LpError::Unbounded);
            };
            stalls = if ratio <= 1e-14 { stalls + 1 } else { 0 };
            self.pivot(r, c);
        }
        Err(LpError::IterationLimit)
    }
}

/// Solves `min cᵀx s.t. Σ_j x_j·columns[j] = b, x ≥ 0`.
pub(crate) fn minimize(columns: &[Vec<f64>], cost: &[f64], b: &[f64]) -> Result<LpSolution, LpError> {
    let m = b.len();
    let n = columns.len();
    let width = n + m;
    let mut t = vec![0.0; m * (width + 1)];
    let sign: Vec<f64> = b.iter().map(|&bi| if bi < 0.0 { -1.0 } else { 1.0 }).collect();
    for i in 0..m {
        let row = &mut t[i * (width + 1)..(i + 1) * (width + 1)];
        for (j, col) in columns.iter().enumerate() {
            row[j] = sign[i] * col[i];
        }
        row[n + i] = 1.0;
        row[width] = sign[i] * b[i];
    }
    let mut tab = Tableau {
        rows: m,
        width,
        t,
        basis: (n..n + m).collect(),
    };

    let mut phase1 = vec![0.0; width];
    phase1[n..].iter_mut().for_each(|c| *c = 1.0);
    tab.optimize(&phase1, |_| true)?;
    let infeasibility: f64 = (0..m).filter(|&i| tab.basis[i] >= n).map(|i| tab.rhs(i)).sum();
    let scale = 1.0 + b.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if infeasibility > 1e-8 * scale {
        return Err(LpError::Infeasible);
    }
    // drive remaining artificials out where possible; rows where that fails are redundant
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| tab.at(i, j).abs() > 1e-9) {
                tab.pivot(i, j);
            }
        }
    }

    let mut phase2 = vec![0.0; width];
    phase2[..n].copy_from_slice(cost);
    tab.optimize(&phase2, |j| j < n)?;

    let mut x = vec![0.0; n];
    for i in 0..m {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.rhs(i).max(0.0);
        }
    }
    let value = x.iter().zip(cost).map(|(a, b)| a * b).sum();
    // y = c_Bᵀ B⁻¹; B⁻¹ of the sign-adjusted rows sits under the artificial columns
    let y = (0..m)
        .map(|k| {
            let s: f64 = (0..m).map(|i| phase2[tab.basis[i]] * tab.at(i, n + k)).sum();
            s * sign[k]
        })
        .collect();
    Ok(LpSolution { value, x, y })
}
