//! Checks against closed forms that do not route through the library's solvers.

use cohent::bounds::{c_l1, negativity, robustness_coherence, RobustnessOptions};
use cohent::majorize::{t_transform_chain, Functional};
use cohent::monotones::{e_f_pure, RoofKind, RoofOptions};
use cohent::qstate::schmidt_coefficients;
use cohent::{random, BipartitePureState, Complex64, DensityMatrix64, Matrix64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Schmidt coefficients of a two-qubit state from `|det C|`.
fn qubit_schmidt(amps: &[Complex64]) -> (f64, f64) {
    let det = (amps[0] * amps[3] - amps[1] * amps[2]).norm();
    let root = (1.0 - 4.0 * det * det).max(0.0).sqrt();
    ((1.0 + root) / 2.0, (1.0 - root) / 2.0)
}

/// Two-qubit concurrence of a mixed state through the spin-flipped spectrum.
fn wootters(rho: &Matrix64) -> f64 {
    let y = Matrix64::from_fn(4, 4, |i, j| {
        // σ_y ⊗ σ_y has entries ±1 on the anti-diagonal
        match (i, j) {
            (0, 3) | (3, 0) => Complex64::new(-1.0, 0.0),
            (1, 2) | (2, 1) => Complex64::new(1.0, 0.0),
            _ => Complex64::new(0.0, 0.0),
        }
    });
    let conj = Matrix64::from_fn(4, 4, |i, j| rho[(i, j)].conj());
    let tilde = y.matmul(&conj).unwrap().matmul(&y).unwrap();
    let r = rho.matmul(&tilde).unwrap();
    // eigenvalues of ρρ̃ are real and nonnegative; take them from the characteristic polynomial
    let mut roots = quartic_real_roots(&r);
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let s: Vec<f64> = roots.iter().map(|x| x.max(0.0).sqrt()).collect();
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

/// Real roots of `det(xI − M)` for a 4×4 matrix with real nonnegative spectrum,
/// found by bisection on sign changes of the characteristic polynomial.
fn quartic_real_roots(m: &Matrix64) -> Vec<f64> {
    let char_poly = |x: f64| -> f64 {
        let shifted = Matrix64::from_fn(4, 4, |i, j| {
            let d = if i == j { Complex64::new(x, 0.0) } else { Complex64::new(0.0, 0.0) };
            d - m[(i, j)]
        });
        det4(&shifted).re
    };
    let hi = 1.0 + m.max_abs() * 4.0;
    let steps = 40_000;
    let mut roots = Vec::new();
    let mut prev_x = -1e-9;
    let mut prev = char_poly(prev_x);
    for k in 1..=steps {
        let x = hi * k as f64 / steps as f64;
        let v = char_poly(x);
        if prev == 0.0 || prev.signum() != v.signum() {
            let (mut a, mut b) = (prev_x, x);
            for _ in 0..100 {
                let mid = 0.5 * (a + b);
                if char_poly(a).signum() == char_poly(mid).signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev_x = x;
        prev = v;
    }
    // repeated roots do not change sign; pad with zeros (rank-deficient states)
    roots.resize(4, 0.0);
    roots
}

fn det4(m: &Matrix64) -> Complex64 {
    fn minor(m: &[[Complex64; 4]; 4], skip_row: usize, skip_col: usize, n: usize) -> Complex64 {
        if n == 1 {
            for i in 0..4 {
                if (skip_row >> i) & 1 == 0 {
                    for j in 0..4 {
                        if (skip_col >> j) & 1 == 0 {
                            return m[i][j];
                        }
                    }
                }
            }
        }
        let row = (0..4).find(|i| (skip_row >> i) & 1 == 0).unwrap();
        let mut total = Complex64::new(0.0, 0.0);
        let mut sign = 1.0;
        for j in 0..4 {
            if (skip_col >> j) & 1 == 1 {
                continue;
            }
            total += m[row][j] * sign * minor(m, skip_row | (1 << row), skip_col | (1 << j), n - 1);
            sign = -sign;
        }
        total
    }
    let mut a = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = m[(i, j)];
        }
    }
    minor(&a, 0, 0, 4)
}

#[test]
fn qubit_schmidt_coefficients_from_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let psi = random::bipartite_pure::<f64, _>((2, 2), &mut rng);
        let (a, b) = qubit_schmidt(psi.amplitudes());
        let got = schmidt_coefficients(psi.amplitudes(), (2, 2));
        assert!((got[0] - a).abs() < 1e-10 && (got[1] - b).abs() < 1e-10);
        let h = -(a * a.log2() + if b > 0.0 { b * b.log2() } else { 0.0 });
        assert!((e_f_pure(&Functional::Shannon, &psi).unwrap() - h).abs() < 1e-9);
    }
}

#[test]
fn qubit_robustness_is_twice_the_coherence_entry() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for rank in [1, 2] {
        for _ in 0..50 {
            let rho = random::density_matrix::<f64, _>(2, rank, &mut rng);
            let expected = 2.0 * rho.matrix()[(0, 1)].norm();
            let r = robustness_coherence(&rho, &RobustnessOptions::default()).unwrap();
            assert!((r.value - expected).abs() < 1e-6, "{} vs {expected}", r.value);
            assert!((c_l1(&rho) - expected).abs() < 1e-14);
        }
    }
}

#[test]
fn gc_roof_matches_two_qubit_concurrence() {
    // for two qubits gc is 2√(λ₀λ₁), the pure-state concurrence, whose roof has a closed form
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = RoofOptions { restarts: 4, ..Default::default() };
    for _ in 0..6 {
        let rho = random::density_matrix::<f64, _>(4, 2, &mut rng);
        let exact = wootters(rho.matrix());
        let est = cohent::monotones::convex_roof(
            &Functional::Gc { d: 2 },
            &rho,
            RoofKind::Entanglement { dims: (2, 2) },
            &opts,
        )
        .unwrap();
        assert!(est.value >= exact - 1e-6, "roof {} below closed form {exact}", est.value);
        assert!(est.value - exact < 5e-3, "roof {} vs closed form {exact}", est.value);
    }
}

#[test]
fn werner_negativity() {
    // p|Ψ⁻⟩⟨Ψ⁻| + (1 − p)I/4 has negativity max(0, (3p − 1)/2)
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = [0.0, s, -s, 0.0];
        let m = Matrix64::from_fn(4, 4, |i, j| {
            let mut v = p * singlet[i] * singlet[j];
            if i == j {
                v += (1.0 - p) / 4.0;
            }
            Complex64::new(v, 0.0)
        });
        let rho = DensityMatrix64::new(m).unwrap();
        let n = negativity(&rho, (2, 2)).unwrap();
        assert!((n - ((3.0 * p - 1.0) / 2.0).max(0.0)).abs() < 1e-12, "p={p}: {n}");
    }
}

#[test]
fn product_state_has_one_schmidt_term() {
    let a = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
    let b = [Complex64::new(0.28, 0.96), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
    let amps: Vec<Complex64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
    let psi = BipartitePureState::from_amplitudes((2, 3), amps).unwrap();
    let lambda = schmidt_coefficients(psi.amplitudes(), (2, 3));
    assert!((lambda[0] - 1.0).abs() < 1e-14 && lambda[1].abs() < 1e-14);
}

/// Explicit doubly stochastic product of the chain, applied as a full matrix.
fn chain_matrix(chain: &[cohent::TTransform<f64>], n: usize) -> Vec<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for t in chain {
        let mut next = m.clone();
        for col in 0..n {
            next[t.i][col] = t.a * m[t.i][col] + (1.0 - t.a) * m[t.j][col];
            next[t.j][col] = (1.0 - t.a) * m[t.i][col] + t.a * m[t.j][col];
        }
        m = next;
    }
    m
}

proptest! {
    #[test]
    fn chain_is_doubly_stochastic(seed: u64, n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut source = random::probability_vector::<f64, _>(n, &mut rng).into_entries();
        source.sort_by(|a, b| b.partial_cmp(a).unwrap());
        // mixing toward uniform keeps the order and produces a majorized target
        let target: Vec<f64> = source.iter().map(|s| 0.5 * s + 0.5 / n as f64).collect();
        let chain = t_transform_chain(&target, &source).unwrap();
        let m = chain_matrix(&chain, n);
        for i in 0..n {
            let row: f64 = m[i].iter().sum();
            let col: f64 = (0..n).map(|r| m[r][i]).sum();
            prop_assert!((row - 1.0).abs() < 1e-12 && (col - 1.0).abs() < 1e-12);
            prop_assert!(m[i].iter().all(|&x| x >= -1e-15));
            let image: f64 = (0..n).map(|j| m[i][j] * source[j]).sum();
            prop_assert!((image - target[i]).abs() < 1e-12);
        }
    }
}
