//! Randomized invariant suites. Each suite draws from its own ChaCha stream of
//! the global seed, so suites can run in parallel without changing results.

use cohent::bounds::{
    c_l1, certify_cgc_lower, certify_egc_lower, isotropic_family, negativity, product_bound_check,
    robustness_coherence, symmetric_family, RobustnessOptions,
};
use cohent::mapping::{check_lemma1, cnot_embed, maximally_correlated};
use cohent::monotones::{c_f_pure, convex_roof, e_f_pure};
use cohent::qstate::{partial_trace, schmidt_decomposition, Subsystem};
use cohent::transform::{can_transform, lemma_b1_check, max_prob_coherent, synthesize_io, KrausClass};
use cohent::{random, Complex64, DensityMatrix64, Functional, PureState64, RoofKind, RoofOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Global, SelftestArgs};
use crate::error::CliError;
use crate::report::Report;
use crate::state_file::{self, StateFile};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    /// First failing case, with the state in state-file form where there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<Value>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            failed: 0,
            counterexample: None,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, case: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(case());
            }
        }
    }
}

struct Ctx {
    trials: usize,
    restarts: usize,
    seed: u64,
    rng: ChaCha8Rng,
}

type SuiteFn = fn(&mut Ctx, &mut SuiteResult);

const SUITES: &[(&str, SuiteFn)] = &[
    ("spectrum", spectrum),
    ("schmidt_marginals", schmidt_marginals),
    ("coherence_majorized_by_schmidt", coherence_majorized_by_schmidt),
    ("embedding_preserves_values", embedding_preserves_values),
    ("conversion_probability", conversion_probability),
    ("incoherent_synthesis", incoherent_synthesis),
    ("product_bound", product_bound),
    ("robustness_bracket", robustness_bracket),
    ("correlated_negativity", correlated_negativity),
    ("family_certificates", family_certificates),
];

const ROOF_SUITES: &[(&str, SuiteFn)] = &[("certificate_below_roof", certificate_below_roof)];

/// Returns the report and, when any check failed, the error that sets the exit code.
pub fn run(g: &Global, a: &SelftestArgs) -> (Report, Option<CliError>) {
    let trials = if a.quick { a.trials.div_ceil(10).max(1) } else { a.trials };
    let mut suites: Vec<(&str, SuiteFn)> = SUITES.to_vec();
    if !a.quick {
        suites.extend_from_slice(ROOF_SUITES);
    }
    let mut results: Vec<SuiteResult> = suites
        .par_iter()
        .enumerate()
        .map(|(stream, (name, suite))| {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            rng.set_stream(stream as u64);
            let mut ctx = Ctx {
                trials,
                restarts: g.restarts,
                seed: g.seed,
                rng,
            };
            let mut result = SuiteResult::new(name);
            suite(&mut ctx, &mut result);
            result
        })
        .collect();
    results.insert(0, validation(a, g.validation_tol()));

    let fixtures: Vec<Vec<u8>> = a.fixtures.iter().map(|p| std::fs::read(p).unwrap_or_default()).collect();
    let inputs: Vec<&[u8]> = fixtures.iter().map(Vec::as_slice).collect();
    let mut report = Report::new(
        "selftest",
        json!({
            "seed": g.seed,
            "trials": a.trials,
            "quick": a.quick,
            "restarts": g.restarts,
            "fixtures": a.fixtures.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        }),
        &inputs,
    );
    let failures: usize = results.iter().map(|r| r.failed).sum();
    report.result("suites", results.len() as f64);
    report.result("checks", results.iter().map(|r| r.checked).sum::<usize>() as f64);
    report.result("failures", failures as f64);
    report.diagnostic("seed", g.seed);
    report.diagnostic("trials_per_suite", trials);
    report.details = json!(results);
    (report, (failures > 0).then_some(CliError::Invariant { failures }))
}

/// Corrupted states must be rejected with the expected invariant named.
fn validation(a: &SelftestArgs, tol: f64) -> SuiteResult {
    let mut r = SuiteResult::new("validation");
    let d = |data: &[[f64; 2]]| StateFile {
        kind: state_file::Kind::Density,
        dim: Some(2),
        dims: None,
        data: data.to_vec(),
    };
    let cases = [
        (d(&[[0.5, 0.0], [0.1, 0.0], [0.2, 0.0], [0.5, 0.0]]), "hermitian"),
        (d(&[[0.5, 0.0], [0.0, 0.0], [0.0, 0.0], [0.6, 0.0]]), "unit_trace"),
        (d(&[[0.5, 0.0], [0.9, 0.0], [0.9, 0.0], [0.5, 0.0]]), "positive_semidefinite"),
        (d(&[[f64::NAN, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]]), "finite"),
        (
            StateFile {
                kind: state_file::Kind::Pure,
                dim: Some(2),
                dims: None,
                data: vec![[1.0, 0.0], [1.0, 0.0]],
            },
            "unit_norm",
        ),
    ];
    for (file, expected) in cases {
        let got = file.validate(tol).err().and_then(|e| e.to_json()["error"]["invariant"].as_str().map(String::from));
        r.check(got.as_deref() == Some(expected), || {
            json!({ "state": file_json(&file), "expected": expected, "got": got })
        });
    }
    for path in &a.fixtures {
        let outcome = std::fs::read(path)
            .map_err(|e| e.to_string())
            .and_then(|bytes| match state_file::parse(&bytes, tol) {
                Ok(_) => Err("fixture was accepted".to_string()),
                Err(e) => Ok(e.to_json()["error"]["invariant"].as_str().unwrap_or("unknown").to_string()),
            });
        let name = path.display().to_string();
        if let Ok(invariant) = &outcome {
            r.notes.push(json!({ "fixture": name, "invariant": invariant }));
        }
        r.check(outcome.is_ok(), || json!({ "fixture": name, "detail": outcome.clone().unwrap_err() }));
    }
    r
}

/// NaN is not valid JSON, so non-finite entries are written as strings.
fn file_json(f: &StateFile) -> Value {
    let data: Vec<Value> = f
        .data
        .iter()
        .map(|z| json!(z.iter().map(|x| if x.is_finite() { json!(x) } else { json!(x.to_string()) }).collect::<Vec<_>>()))
        .collect();
    json!({ "kind": f.kind, "dim": f.dim, "dims": f.dims, "data": data })
}

fn pure_json(psi: &PureState64, dims: Option<(usize, usize)>) -> Value {
    json!(StateFile::from_pure(psi, dims))
}

fn density_json(rho: &DensityMatrix64) -> Value {
    json!(StateFile::from_matrix(rho.matrix()))
}

fn catalog() -> Vec<Functional> {
    vec![
        Functional::Shannon,
        Functional::OneMinusMax,
        Functional::Renyi { alpha: 0.5 },
        Functional::Tail { m: 1 },
        Functional::Tail { m: 2 },
    ]
}

fn spectrum(ctx: &mut Ctx, r: &mut SuiteResult) {
    for _ in 0..ctx.trials {
        let d = ctx.rng.gen_range(2..=6);
        let rank = ctx.rng.gen_range(1..=d);
        let rho = random::density_matrix::<f64, _>(d, rank, &mut ctx.rng);
        let vals = rho.eig().values;
        let ok = vals.iter().all(|&x| x >= -1e-10) && (vals.iter().sum::<f64>() - 1.0).abs() < 1e-10;
        r.check(ok, || json!({ "state": density_json(&rho), "eigenvalues": vals }));
    }
}

fn schmidt_marginals(ctx: &mut Ctx, r: &mut SuiteResult) {
    for _ in 0..ctx.trials {
        let dims = (ctx.rng.gen_range(1..=4), ctx.rng.gen_range(1..=4));
        let psi = random::bipartite_pure::<f64, _>(dims, &mut ctx.rng);
        let lambda = schmidt_decomposition(&psi).coefficients.sorted_desc();
        let rho = DensityMatrix64::from_pure(psi.state());
        let mut worst: f64 = 0.0;
        for keep in [Subsystem::B, Subsystem::A] {
            let spec = partial_trace(&rho, dims, keep).map(|m| m.eig().values).unwrap_or_default();
            for (k, l) in lambda.iter().enumerate() {
                worst = worst.max((l - spec.get(k).copied().unwrap_or(f64::NAN)).abs());
            }
        }
        r.check(worst < 1e-10, || json!({ "state": pure_json(psi.state(), Some(dims)), "deviation": worst }));
    }
}

fn coherence_majorized_by_schmidt(ctx: &mut Ctx, r: &mut SuiteResult) {
    for _ in 0..ctx.trials {
        let dims = (ctx.rng.gen_range(2..=4), ctx.rng.gen_range(2..=4));
        let psi = random::bipartite_pure::<f64, _>(dims, &mut ctx.rng);
        let rep = check_lemma1(&psi);
        r.check(rep.mu_majorized_by_lambda && rep.coherence_rank >= rep.schmidt_rank, || {
            json!({ "state": pure_json(psi.state(), Some(dims)) })
        });
    }
}

fn embedding_preserves_values(ctx: &mut Ctx, r: &mut SuiteResult) {
    for _ in 0..ctx.trials {
        let d = ctx.rng.gen_range(2..=5);
        let psi = random::haar_state::<f64, _>(d, &mut ctx.rng);
        let embedded = cnot_embed(&psi);
        let mut fs = catalog();
        fs.push(Functional::Gc { d });
        for f in fs {
            let (e, c) = (e_f_pure(&f, &embedded), c_f_pure(&f, &psi));
            let ok = matches!((&e, &c), (Ok(x), Ok(y)) if (x - y).abs() <= 1e-12);
            r.check(ok, || json!({ "state": pure_json(&psi, None), "f": format!("{f}"), "e": format!("{e:?}"), "c": format!("{c:?}") }));
        }
    }
}

fn conversion_probability(ctx: &mut Ctx, r: &mut SuiteResult) {
    for _ in 0..ctx.trials {
        let d = ctx.rng.gen_range(2..=5);
        let psi = random::haar_state::<f64, _>(d, &mut ctx.rng);
        let phi = random::haar_state::<f64, _>(d, &mut ctx.rng);
        let p = max_prob_coherent(&psi, &phi);
        let ok = (0.0..=1.0).contains(&p) && ((p == 1.0) == can_transform(&psi, &phi));
        r.check(ok, || json!({ "source": pure_json(&psi, None), "target": pure_json(&phi, None), "probability": p }));
    }
}

fn incoherent_synthesis(ctx: &mut Ctx, r: &mut SuiteResult) {
    for _ in 0..ctx.trials {
        let d = ctx.rng.gen_range(2..=5);
        let psi = random::haar_state::<f64, _>(d, &mut ctx.rng);
        // moving weight onto the largest entry keeps the order and raises every prefix sum
        let mu: Vec<f64> = psi.amplitudes().iter().map(|z| z.norm_sqr()).collect();
        let top = (0..d).fold(0, |b, j| if mu[j] > mu[b] { j } else { b });
        let t: f64 = ctx.rng.gen();
        let target_mu: Vec<f64> = mu
            .iter()
            .enumerate()
            .map(|(j, m)| (1.0 - t) * m + if j == top { t } else { 0.0 })
            .collect();
        let phi = random::state_with_coherence::<f64, _>(&target_mu, &mut ctx.rng);
        let case = || json!({ "source": pure_json(&psi, None), "target": pure_json(&phi, None) });
        let Ok(kraus) = synthesize_io(&psi, &phi) else {
            r.check(false, case);
            continue;
        };
        let incoherent = kraus.operator_classes().iter().all(|&c| c != KrausClass::Neither);
        let landed = cohent::transform::apply_selective_pure(&psi, &kraus).map(|outcomes| {
            outcomes.iter().all(|o| {
                let overlap: Complex64 =
                    o.post_state.amplitudes().iter().zip(phi.amplitudes()).map(|(x, y)| x.conj() * y).sum();
                overlap.norm_sqr() > 1.0 - 1e-9
            })
        });
        let lemma = lemma_b1_check(&psi, &kraus).map(|rep| rep.holds);
        r.check(
            kraus.is_complete() && incoherent && landed == Ok(true) && lemma == Ok(true),
            case,
        );
    }
}

fn product_bound(ctx: &mut Ctx, r: &mut SuiteResult) {
    for _ in 0..ctx.trials {
        let d = ctx.rng.gen_range(3..=8);
        let c: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(ctx.rng.gen_range(-1.0..1.0), ctx.rng.gen_range(-1.0..1.0)))
            .collect();
        let b = product_bound_check(&c);
        r.check(b.holds, || json!({ "vector": c.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(), "lhs": b.lhs, "rhs": b.rhs }));
    }
    for d in 3..=8 {
        let equal: Vec<Complex64> = (0..d).map(|k| Complex64::from_polar(0.7, k as f64)).collect();
        let mut one_zero = equal.clone();
        one_zero[d - 1] = Complex64::new(0.0, 0.0);
        for c in [equal, one_zero] {
            let b = product_bound_check(&c);
            r.check(b.saturated && (b.lhs - b.rhs).abs() <= 1e-12 * b.rhs.abs().max(1.0), || {
                json!({ "vector": c.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(), "lhs": b.lhs, "rhs": b.rhs })
            });
        }
    }
}

fn robustness_bracket(ctx: &mut Ctx, r: &mut SuiteResult) {
    let opts = RobustnessOptions::default();
    for _ in 0..ctx.trials {
        let d = ctx.rng.gen_range(2..=5);
        let rank = ctx.rng.gen_range(1..=d);
        let rho = random::density_matrix::<f64, _>(d, rank, &mut ctx.rng);
        let l1 = c_l1(&rho);
        let ok = match robustness_coherence(&rho, &opts) {
            Ok(s) => {
                s.value <= l1 + 1e-6
                    && s.value - s.lower_bound <= 1e-6
                    && s.residual_min_eig >= -1e-7
                    && (rank > 1 || (s.value - l1).abs() <= 1e-6)
            }
            Err(_) => false,
        };
        r.check(ok, || json!({ "state": density_json(&rho), "c_l1": l1 }));
    }
}

fn correlated_negativity(ctx: &mut Ctx, r: &mut SuiteResult) {
    for _ in 0..ctx.trials {
        let d = ctx.rng.gen_range(2..=5);
        let rho = random::density_matrix::<f64, _>(d, d, &mut ctx.rng);
        let n = negativity(&maximally_correlated(&rho), (d, d));
        let l1 = c_l1(&rho);
        r.check(matches!(n, Ok(x) if (x - l1).abs() < 1e-9), || json!({ "state": density_json(&rho), "c_l1": l1 }));
    }
}

fn family_certificates(ctx: &mut Ctx, r: &mut SuiteResult) {
    let opts = RobustnessOptions::default();
    for _ in 0..ctx.trials.div_ceil(4) {
        let d = ctx.rng.gen_range(2..=4);
        let p: f64 = ctx.rng.gen();
        let fam = symmetric_family::<f64>(d, p).expect("parameters in range");
        let cert = certify_cgc_lower(&fam.state, &opts);
        r.check(matches!(&cert, Ok(c) if (c.lower_bound - fam.c_gc).abs() <= 1e-5), || {
            json!({ "family": "symmetric", "d": d, "p": p, "state": density_json(&fam.state) })
        });
        let lo = 1.0 / (d * d) as f64;
        let f = lo + (1.0 - lo) * ctx.rng.gen::<f64>();
        let fam = isotropic_family::<f64>(d, f).expect("parameters in range");
        let cert = certify_egc_lower(&fam.state, (d, d), &opts);
        r.check(matches!(&cert, Ok(c) if (c.lower_bound - fam.e_gc).abs() <= 1e-5 && c.tight), || {
            json!({ "family": "isotropic", "d": d, "F": f, "state": density_json(&fam.state) })
        });
    }
}

fn certificate_below_roof(ctx: &mut Ctx, r: &mut SuiteResult) {
    let opts = RoofOptions {
        restarts: ctx.restarts.min(4),
        seed: ctx.seed,
        ..Default::default()
    };
    for _ in 0..ctx.trials.div_ceil(50).min(4) {
        let rho = random::density_matrix::<f64, _>(3, 3, &mut ctx.rng);
        let cert = certify_cgc_lower(&rho, &RobustnessOptions::default());
        let roof = convex_roof(&Functional::Gc { d: 3 }, &rho, RoofKind::Coherence, &opts);
        let ok = matches!((&cert, &roof), (Ok(c), Ok(e)) if c.lower_bound <= e.value + 1e-6);
        r.check(ok, || json!({ "state": density_json(&rho) }));
    }
}

