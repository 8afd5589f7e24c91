use cohent::transform::{
    apply_selective_pure, can_transform, lemma_b1_check, max_prob_coherent, max_prob_entangled, synthesize_io,
    theorem5_check,
};
use cohent::{Complex64, KrausSet64, PureState64};
use serde_json::{json, Value};

use crate::args::{Global, TransformArgs};
use crate::error::{CliError, CliResult};
use crate::report::Report;
use crate::state_file;

pub fn run(g: &Global, a: &TransformArgs) -> CliResult<Report> {
    let source = state_file::load(&a.source, g.validation_tol())?;
    let target = state_file::load(&a.target, g.validation_tol())?;
    let psi = source.pure("source")?;
    target.pure("target")?;
    let mut report = Report::new(
        "transform",
        json!({
            "source": a.source.display().to_string(),
            "target": a.target.display().to_string(),
            "synthesize": a.synthesize,
            "prob": a.prob,
        }),
        &[&source.bytes, &target.bytes],
    );

    if let Some(phi) = target.bipartite() {
        if a.synthesize {
            return Err(CliError::input(
                "single_system_target",
                "synthesis is only available for single-system targets",
            ));
        }
        let check = theorem5_check(psi, &phi);
        let bound = max_prob_entangled(psi, &phi);
        report.diagnostic("target", "bipartite");
        report.result("necessary_condition", flag(check.necessary_holds));
        if let Some(v) = check.iff_verdict {
            report.result("feasible", flag(v));
        }
        if a.prob {
            report.result("probability_upper_bound", bound.upper_bound);
        }
        report.details = json!({ "exact": bound.exact, "schmidt_form_target": check.schmidt_form_target });
        return Ok(report);
    }

    let phi = target.pure("target")?;
    let feasible = can_transform(psi, phi);
    report.diagnostic("target", "single");
    report.result("feasible", flag(feasible));
    if a.prob {
        report.result("probability", max_prob_coherent(psi, phi));
    }
    if a.synthesize && feasible {
        let kraus = synthesize_io(psi, phi)?;
        let verification = verify(psi, phi, &kraus)?;
        report.result("kraus_operators", kraus.len() as f64);
        report.result("completeness_residual", kraus.completeness_residual());
        report.result("max_branch_infidelity", verification.max_infidelity);
        report.result("majorization_slack", verification.slack);
        report.details = json!({ "kraus": serialize_kraus(&kraus), "branches": verification.branches });
    }
    Ok(report)
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

struct Verification {
    max_infidelity: f64,
    slack: f64,
    branches: Value,
}

/// Applies the synthesized operators and checks every branch lands on the target.
fn verify(psi: &PureState64, phi: &PureState64, kraus: &KrausSet64) -> CliResult<Verification> {
    let n = kraus.input_dim();
    let pad = |s: &PureState64| -> Vec<Complex64> {
        let mut v = s.amplitudes().to_vec();
        v.resize(n, Complex64::new(0.0, 0.0));
        v
    };
    let source = PureState64::new(pad(psi))?;
    let target = pad(phi);
    let outcomes = apply_selective_pure(&source, kraus)?;
    let mut max_infidelity: f64 = 0.0;
    let mut branches = Vec::new();
    for o in &outcomes {
        let overlap: Complex64 = o.post_state.amplitudes().iter().zip(&target).map(|(x, y)| x.conj() * y).sum();
        let infidelity = (1.0 - overlap.norm_sqr()).max(0.0);
        max_infidelity = max_infidelity.max(infidelity);
        branches.push(json!({ "index": o.index, "probability": o.probability, "infidelity": infidelity }));
    }
    let slack = lemma_b1_check(&source, kraus)?.slack;
    Ok(Verification {
        max_infidelity,
        slack,
        branches: Value::Array(branches),
    })
}

fn serialize_kraus(kraus: &KrausSet64) -> Value {
    let operators: Vec<Value> = kraus
        .operators()
        .iter()
        .zip(kraus.operator_classes())
        .map(|(k, class)| {
            json!({
                "class": format!("{class:?}"),
                "rows": k.rows(),
                "cols": k.cols(),
                "data": k.as_slice().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "class": format!("{:?}", kraus.class()), "operators": operators })
}
