//! End-to-end acceptance criteria. Each test prints one PASS/FAIL line.

use cohent::bounds::{
    c_l1, certify_cgc_lower, certify_egc_lower, isotropic_family, negativity, product_bound_check,
    robustness_coherence, symmetric_family, RobustnessOptions,
};
use cohent::majorize::{majorization_slack, Functional};
use cohent::mapping::{check_lemma1, cnot_embed, maximally_correlated, theorem4_check};
use cohent::monotones::{convex_roof, RoofKind, RoofOptions};
use cohent::random;
use cohent::transform::{
    apply_selective_pure, can_transform, lemma_b1_check, max_prob_coherent, max_prob_entangled, synthesize_io,
    KrausClass,
};
use cohent::{BipartitePureState, Complex64, DensityMatrix64, PureState64};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, failures: &[String], detail: String) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} [{verdict}] {name}: {detail}");
    for f in failures.iter().take(5) {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {id} failed ({} violations)", failures.len());
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

#[test]
fn criterion_01_symmetric_family() {
    let opts = RobustnessOptions::default();
    let roof_opts = RoofOptions { restarts: 4, seed: 1, ..Default::default() };
    let mut failures = Vec::new();
    let (mut worst_measure, mut worst_cert, mut worst_roof) = (0.0f64, 0.0f64, 0.0f64);
    for d in 2..=5usize {
        let df = d as f64;
        for p in grid(0.0, 1.0, 11) {
            let fam = symmetric_family(d, p).unwrap();
            let fid = p + (1.0 - p) / df;
            let expected = df * fid - 1.0;
            let l1 = c_l1(&fam.state);
            let r = robustness_coherence(&fam.state, &opts).unwrap();
            let dev = (l1 - expected).abs().max((r.value - expected).abs());
            worst_measure = worst_measure.max(dev);
            if dev > 1e-5 {
                failures.push(format!("d={d} p={p}: c_l1={l1} c_R={} expected {expected}", r.value));
            }
            let gc = (df * fid - (df - 1.0)).max(0.0);
            let cert = certify_cgc_lower(&fam.state, &opts).unwrap();
            let dev = (cert.lower_bound - gc).abs();
            worst_cert = worst_cert.max(dev);
            if dev > 1e-12 || !cert.tight {
                failures.push(format!("d={d} p={p}: certificate {} vs {gc}", cert.lower_bound));
            }
            if d == 3 {
                let roof = convex_roof(&Functional::Gc { d: 3 }, &fam.state, RoofKind::Coherence, &roof_opts).unwrap();
                let dev = (roof.value - cert.lower_bound).abs();
                worst_roof = worst_roof.max(dev);
                if dev > 1e-2 {
                    failures.push(format!("p={p}: gc roof {} vs certificate {}", roof.value, cert.lower_bound));
                }
            }
        }
    }
    report(
        1,
        "symmetric family closed forms",
        &failures,
        format!("max dev measures {worst_measure:.1e}, certificate {worst_cert:.1e}, roof {worst_roof:.1e}"),
    );
}

#[test]
fn criterion_02_isotropic_family() {
    let opts = RobustnessOptions::default();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for d in 2..=4usize {
        let df = d as f64;
        let fs = grid(1.0 / (df * df), 1.0, 61);
        let step = fs[1] - fs[0];
        let mut first_negative = None;
        let mut first_gc = None;
        for &f in &fs {
            let fam = isotropic_family(d, f).unwrap();
            let n = negativity(&fam.state, (d, d)).unwrap();
            let n_exact = (df * f - 1.0).max(0.0);
            let cert = certify_egc_lower(&fam.state, (d, d), &opts).unwrap();
            let gc_exact = (df * f - (df - 1.0)).max(0.0);
            let dev = (n - n_exact).abs().max((cert.lower_bound - gc_exact).abs());
            worst = worst.max(dev);
            if dev > 1e-9 {
                failures.push(format!("d={d} F={f}: N={n} (exact {n_exact}), bound {} (exact {gc_exact})", cert.lower_bound));
            }
            if n > 1e-9 && first_negative.is_none() {
                first_negative = Some(f);
            }
            if cert.lower_bound > 1e-9 && first_gc.is_none() {
                first_gc = Some(f);
            }
        }
        for (label, found, kink) in [("N", first_negative, 1.0 / df), ("E_gc", first_gc, (df - 1.0) / df)] {
            match found {
                Some(f) if f > kink && f - kink <= step + 1e-12 => {}
                other => failures.push(format!("d={d}: {label} kink at {other:?}, expected just above {kink}")),
            }
        }
    }
    report(2, "isotropic family closed forms and kinks", &failures, format!("max dev {worst:.1e}"));
}

fn schmidt_form_state(dims: (usize, usize), rng: &mut ChaCha8Rng) -> BipartitePureState<f64> {
    let (db, da) = dims;
    let r = db.min(da);
    let mut rows: Vec<usize> = (0..db).collect();
    let mut cols: Vec<usize> = (0..da).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let weights = random::probability_vector::<f64, _>(r, rng);
    let mut amps = vec![Complex64::new(0.0, 0.0); db * da];
    for l in 0..r {
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        amps[rows[l] * da + cols[l]] = Complex64::from_polar(weights.entries()[l].sqrt(), phase);
    }
    BipartitePureState::from_amplitudes(dims, amps).unwrap()
}

#[test]
fn criterion_03_coherence_vs_schmidt() {
    let dims = [(2, 2), (3, 3), (3, 4), (4, 6)];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    let mut worst = f64::INFINITY;
    for i in 0..10_000 {
        let d = dims[i % dims.len()];
        let psi = random::bipartite_pure::<f64, _>(d, &mut rng);
        let r = check_lemma1(&psi);
        let slack = majorization_slack(r.mu.entries(), r.lambda.entries()).unwrap();
        worst = worst.min(slack);
        if slack < -1e-10 || r.coherence_rank < r.schmidt_rank {
            failures.push(format!("{d:?}: slack {slack:e}, ranks {} / {}", r.coherence_rank, r.schmidt_rank));
        }
    }
    for i in 0..1_000 {
        let d = dims[i % dims.len()];
        let psi = schmidt_form_state(d, &mut rng);
        let r = check_lemma1(&psi);
        if !r.equivalent || !r.has_schmidt_form() {
            failures.push(format!("{d:?}: constructed Schmidt-form state not recognized"));
        }
    }
    report(
        3,
        "coherence vector majorized by Schmidt vector",
        &failures,
        format!("10000 random states, min slack {worst:.1e}; 1000 Schmidt-form states"),
    );
}

#[test]
fn criterion_04_roof_equality_under_embedding() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let opts = RoofOptions { restarts: 4, seed: 4, ..Default::default() };
    let mut failures = Vec::new();
    let mut worst_mixed = 0.0f64;
    let mut worst_pure = 0.0f64;
    let functionals = [Functional::Shannon, Functional::Gc { d: 3 }];
    for _ in 0..50 {
        let rho = random::density_matrix::<f64, _>(3, 3, &mut rng);
        for f in &functionals {
            let r = theorem4_check(f, &rho, &opts).unwrap();
            worst_mixed = worst_mixed.max(r.gap);
            if r.gap > 5e-3 {
                failures.push(format!("{f}: coherence roof {} vs entanglement roof {}", r.c_roof, r.e_roof_mc));
            }
        }
    }
    for _ in 0..10 {
        let rho = DensityMatrix64::from_pure(&random::haar_state(3, &mut rng));
        for f in &functionals {
            let r = theorem4_check(f, &rho, &opts).unwrap();
            worst_pure = worst_pure.max(r.gap);
            if r.gap > 1e-10 {
                failures.push(format!("{f}: pure-state gap {:e}", r.gap));
            }
        }
    }
    report(
        4,
        "coherence roof equals entanglement roof of the embedded state",
        &failures,
        format!("50 mixed qutrits max gap {worst_mixed:.1e}; pure max gap {worst_pure:.1e}"),
    );
}

/// `(ψ, φ)` with `μ(ψ) ≺ μ(φ)`: `μ(ψ)` is a random doubly stochastic image of `μ(φ)`.
fn majorized_pair(d: usize, rng: &mut ChaCha8Rng) -> (PureState64, PureState64) {
    let target = random::probability_vector::<f64, _>(d, rng).into_entries();
    let mut source = target.clone();
    for _ in 0..rng.gen_range(0..2 * d) {
        let i = rng.gen_range(0..d);
        let j = rng.gen_range(0..d);
        if i != j {
            let a: f64 = rng.gen();
            let (x, y) = (source[i], source[j]);
            source[i] = a * x + (1.0 - a) * y;
            source[j] = (1.0 - a) * x + a * y;
        }
    }
    source.shuffle(rng);
    (random::state_with_coherence(&source, rng), random::state_with_coherence(&target, rng))
}

#[test]
fn criterion_05_kraus_synthesis_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let (mut worst_residual, mut worst_fid) = (0.0f64, 1.0f64);
    for i in 0..1_000 {
        let d = 2 + i % 5;
        let (psi, phi) = majorized_pair(d, &mut rng);
        let kraus = match synthesize_io(&psi, &phi) {
            Ok(k) => k,
            Err(e) => {
                failures.push(format!("d={d}: synthesis failed: {e}"));
                continue;
            }
        };
        worst_residual = worst_residual.max(kraus.completeness_residual());
        if kraus.completeness_residual() > 1e-10 {
            failures.push(format!("d={d}: residual {:e}", kraus.completeness_residual()));
        }
        if kraus.operator_classes().iter().any(|&c| c != KrausClass::StrictlyIncoherent) {
            failures.push(format!("d={d}: operator not strictly incoherent"));
        }
        let mut total = 0.0;
        for o in apply_selective_pure(&psi, &kraus).unwrap() {
            let fid = o.post_state.fidelity(&phi);
            total += o.probability;
            worst_fid = worst_fid.min(fid);
            if fid < 1.0 - 1e-10 {
                failures.push(format!("d={d}: branch {} fidelity {fid}", o.index));
            }
        }
        if (total - 1.0).abs() > 1e-10 {
            failures.push(format!("d={d}: branch probabilities sum to {total}"));
        }
    }
    report(
        5,
        "strictly incoherent synthesis",
        &failures,
        format!("1000 pairs, max residual {worst_residual:.1e}, min fidelity 1 - {:.1e}", 1.0 - worst_fid),
    );
}

#[test]
fn criterion_06_incoherent_channel_majorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    let mut worst = f64::INFINITY;
    for i in 0..10_000 {
        let d = 2 + i % 4;
        let n_ops = rng.gen_range(1..=4);
        let kraus = if i % 2 == 0 {
            random::io_channel::<f64, _>(d, n_ops, &mut rng)
        } else {
            random::sio_channel::<f64, _>(d, n_ops, &mut rng)
        };
        let psi = random::haar_state::<f64, _>(d, &mut rng);
        let r = lemma_b1_check(&psi, &kraus).unwrap();
        worst = worst.min(r.slack);
        if r.slack < -1e-9 {
            failures.push(format!("d={d}: slack {:e}", r.slack));
        }
    }
    report(6, "incoherent channels majorize on average", &failures, format!("10000 channels, min slack {worst:.1e}"));
}

#[test]
fn criterion_07_probability_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..1_000 {
        let d = 2 + i % 5;
        let psi = random::haar_state::<f64, _>(d, &mut rng);
        let phi = random::haar_state::<f64, _>(d, &mut rng);
        let p = max_prob_coherent(&psi, &phi);
        if (p == 1.0) != can_transform(&psi, &phi) {
            failures.push(format!("d={d}: probability {p} disagrees with convertibility"));
        }
        let entangled = max_prob_entangled(&psi, &cnot_embed(&phi));
        let dev = (entangled.upper_bound - p).abs();
        worst = worst.max(dev);
        if dev > 1e-12 || !entangled.exact {
            failures.push(format!("d={d}: embedded bound {} vs {p}", entangled.upper_bound));
        }
        let (src, tgt) = majorized_pair(d, &mut rng);
        if max_prob_coherent(&src, &tgt) != 1.0 {
            failures.push(format!("d={d}: majorized pair has probability {}", max_prob_coherent(&src, &tgt)));
        }
    }
    for d in 3..=6 {
        let low_rank = random::state_with_coherence(&[0.5, 0.5], &mut rng);
        let full = random::haar_state::<f64, _>(d, &mut rng);
        let p = max_prob_coherent(&low_rank, &full);
        if p != 0.0 {
            failures.push(format!("d={d}: rank-deficient source gives {p}"));
        }
    }
    report(
        7,
        "maximal conversion probabilities",
        &failures,
        format!("1000 pairs, embedding identity max dev {worst:.1e}, rank obstruction gives 0"),
    );
}

#[test]
fn criterion_08_product_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let mut worst = f64::INFINITY;
    let c = |rng: &mut ChaCha8Rng, modulus: f64| Complex64::from_polar(modulus, rng.gen_range(0.0..std::f64::consts::TAU));
    for i in 0..100_000 {
        let d = 3 + i % 6;
        let v: Vec<Complex64> = (0..d).map(|_| Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)).collect();
        let r = product_bound_check(&v);
        worst = worst.min(r.lhs - r.rhs);
        if r.lhs - r.rhs < -1e-12 || !r.holds {
            failures.push(format!("d={d}: lhs {} rhs {}", r.lhs, r.rhs));
        }
    }
    let mut worst_eq = 0.0f64;
    for i in 0..1_000 {
        let d = 3 + i % 6;
        let modulus = rng.gen_range(0.2..2.0);
        let equal: Vec<Complex64> = (0..d).map(|_| c(&mut rng, modulus)).collect();
        let mut one_zero = equal.clone();
        one_zero[rng.gen_range(0..d)] = Complex64::new(0.0, 0.0);
        for v in [equal, one_zero] {
            let r = product_bound_check(&v);
            worst_eq = worst_eq.max((r.lhs - r.rhs).abs());
            if (r.lhs - r.rhs).abs() > 1e-12 || !r.saturated {
                failures.push(format!("d={d}: saturating vector gives lhs {} rhs {}", r.lhs, r.rhs));
            }
        }
    }
    report(
        8,
        "product bound",
        &failures,
        format!("100000 vectors, min slack {worst:.1e}; saturating families max |lhs - rhs| {worst_eq:.1e}"),
    );
}

#[test]
fn criterion_09_pure_state_robustness() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let opts = RobustnessOptions::default();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..100 {
        let d = 2 + i % 7;
        let rho = DensityMatrix64::from_pure(&random::haar_state(d, &mut rng));
        let r = robustness_coherence(&rho, &opts).unwrap();
        let dev = (r.value - c_l1(&rho)).abs();
        worst = worst.max(dev);
        if dev > 1e-5 {
            failures.push(format!("d={d}: robustness {} vs l1 {}", r.value, c_l1(&rho)));
        }
    }
    report(9, "robustness equals l1 on pure states", &failures, format!("100 states, max dev {worst:.1e}"));
}

#[test]
fn criterion_10_negativity_of_embedded_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..1_000 {
        let d = 2 + i % 5;
        let rank = rng.gen_range(1..=d);
        let rho = random::density_matrix::<f64, _>(d, rank, &mut rng);
        let n = negativity(&maximally_correlated(&rho), (d, d)).unwrap();
        let dev = (n - c_l1(&rho)).abs();
        worst = worst.max(dev);
        if dev > 1e-9 {
            failures.push(format!("d={d}: negativity {n} vs l1 {}", c_l1(&rho)));
        }
    }
    report(10, "negativity of embedded state equals l1", &failures, format!("1000 states, max dev {worst:.1e}"));
}
