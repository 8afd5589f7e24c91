use cohent::bounds::{certify_cgc_lower, certify_egc_lower, BoundCertificate, RobustnessOptions};
use cohent::monotones::convex_roof;
use cohent::{Functional, RoofKind, RoofOptions};
use serde_json::json;

use crate::args::{CertifyArgs, CertifyMeasure, Global};
use crate::error::{CliError, CliResult};
use crate::report::Report;
use crate::state_file;

pub fn run(g: &Global, a: &CertifyArgs) -> CliResult<Report> {
    let loaded = state_file::load(&a.state, g.validation_tol())?;
    let rho = loaded.density();
    let measure = match (a.measure, loaded.dims) {
        (CertifyMeasure::Auto, Some((b, x))) if b == x => CertifyMeasure::Egc,
        (CertifyMeasure::Auto, _) => CertifyMeasure::Cgc,
        (m, _) => m,
    };
    let mut report = Report::new(
        "certify",
        json!({
            "state": a.state.display().to_string(),
            "measure": format!("{measure:?}").to_lowercase(),
            "roof": a.roof,
            "seed": g.seed,
            "restarts": g.restarts,
            "tol": g.solver_tol(),
        }),
        &[&loaded.bytes],
    );
    let opts = RobustnessOptions {
        tol: g.solver_tol(),
        ..Default::default()
    };
    let (cert, kind) = match measure {
        CertifyMeasure::Egc => {
            let dims = loaded
                .dims
                .ok_or_else(|| CliError::input("bipartite", "e_gc needs a state file with `dims`"))?;
            (certify_egc_lower(&rho, dims, &opts)?, RoofKind::Entanglement { dims })
        }
        _ => (certify_cgc_lower(&rho, &opts)?, RoofKind::Coherence),
    };
    let cert = if a.roof {
        let roof_opts = RoofOptions {
            restarts: g.restarts,
            seed: g.seed,
            ..Default::default()
        };
        let est = convex_roof(&Functional::gc(cert.dimension)?, &rho, kind, &roof_opts)?;
        report.result("roof", est.value);
        report.diagnostic("roof_converged", est.converged);
        cert.with_upper_estimate(est.value)
    } else {
        cert
    };
    write_certificate(&mut report, &cert);
    Ok(report)
}

fn write_certificate(report: &mut Report, cert: &BoundCertificate<f64>) {
    report.result("lower_bound", cert.lower_bound);
    for (name, value) in &cert.witnesses {
        report.result(&format!("witness:{name}"), *value);
    }
    if let Some(exact) = cert.closed_form {
        report.analytic(cert.measure_name, cert.lower_bound, exact);
    }
    report.details = json!({
        "measure": cert.measure_name,
        "lower_bound": cert.lower_bound,
        "witnesses": cert.witnesses.iter().map(|(n, v)| json!({ "name": n, "value": v })).collect::<Vec<_>>(),
        "dimension": cert.dimension,
        "closed_form": cert.closed_form,
        "tight": cert.tight,
    });
}
