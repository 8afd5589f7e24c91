use cohent::bounds::{c_l1, isotropic_family, isotropic_fidelity, negativity, symmetric_family, symmetric_parameter};
use cohent::monotones::{c_f_pure, convex_roof, e_f_pure};
use cohent::{Functional, RoofKind, RoofOptions};
use serde_json::json;

use crate::args::{Global, MeasureArgs, MeasureKind};
use crate::error::{CliError, CliResult};
use crate::report::Report;
use crate::state_file::{self, State};

/// Parses `shannon`, `geom`, `gc`, `gc:<d>`, `renyi:<alpha>`, `tail:<m>`.
/// A bare `gc` takes the dimension from context.
pub fn parse_functional(spec: &str, gc_dim: usize) -> CliResult<Functional> {
    let bad = |detail: String| CliError::input("functional", detail);
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let f = match (name, arg) {
        ("shannon", None) => Functional::Shannon,
        ("geom", None) => Functional::OneMinusMax,
        ("gc", None) => Functional::gc(gc_dim)?,
        ("gc", Some(a)) => Functional::gc(a.parse().map_err(|_| bad(format!("gc dimension `{a}`")))?)?,
        ("renyi", Some(a)) => {
            let alpha: f64 = a.parse().map_err(|_| bad(format!("renyi order `{a}`")))?;
            Functional::renyi(alpha)?
        }
        ("tail", Some(a)) => Functional::tail(a.parse().map_err(|_| bad(format!("tail index `{a}`")))?)?,
        _ => return Err(bad(format!("unknown functional `{spec}`"))),
    };
    Ok(f)
}

pub fn run(g: &Global, a: &MeasureArgs) -> CliResult<Report> {
    let loaded = state_file::load(&a.state, g.validation_tol())?;
    let d = loaded.dim();
    let gc_dim = match (a.kind, loaded.dims) {
        (MeasureKind::Entanglement, Some((b, x))) => b.min(x),
        _ => d,
    };
    let f = parse_functional(&a.functional, gc_dim)?;
    let mut report = Report::new(
        "measure",
        json!({
            "state": a.state.display().to_string(),
            "f": a.functional,
            "kind": format!("{:?}", a.kind).to_lowercase(),
            "seed": g.seed,
            "restarts": g.restarts,
            "ensemble_size": a.ensemble_size,
            "max_iters": a.max_iters,
        }),
        &[&loaded.bytes],
    );
    let dims = match a.kind {
        MeasureKind::Entanglement => Some(loaded.dims.ok_or_else(|| {
            CliError::input("bipartite", "entanglement needs a state file with `dims`")
        })?),
        MeasureKind::Coherence => None,
    };
    let key = format!("{}:{}", if dims.is_some() { "e" } else { "c" }, a.functional);

    let value = match (&loaded.state, dims) {
        (State::Pure(psi), None) => {
            report.diagnostic("method", "pure");
            c_f_pure(&f, psi)?
        }
        (State::Pure(_), Some(_)) => {
            report.diagnostic("method", "pure");
            e_f_pure(&f, &loaded.bipartite().expect("dims validated at load"))?
        }
        (State::Density(rho), _) => {
            let opts = RoofOptions {
                ensemble_size: a.ensemble_size,
                restarts: g.restarts,
                max_iters: a.max_iters,
                tol: 1e-9,
                seed: g.seed,
            };
            let kind = dims.map_or(RoofKind::Coherence, |dims| RoofKind::Entanglement { dims });
            let est = convex_roof(&f, rho, kind, &opts)?;
            report.diagnostic("method", "convex_roof");
            report.diagnostic("converged", est.converged);
            report.diagnostic("iterations", est.iterations);
            report.diagnostic("restarts", est.restarts);
            report.diagnostic("ensemble_members", est.ensemble.len());
            report.diagnostic("seed", g.seed);
            est.value
        }
    };
    report.result(&key, value);

    let rho = loaded.density();
    report.result("c_l1", c_l1(&rho));
    if let Some(dims) = loaded.dims {
        report.result("negativity", negativity(&rho, dims)?);
    }

    if let Functional::Gc { d: gd } = f {
        match dims {
            None if gd == d => {
                if let Some(p) = symmetric_parameter(&rho) {
                    report.analytic(&key, value, symmetric_family::<f64>(d, p)?.c_gc);
                }
            }
            Some((b, x)) if b == x && gd == b => {
                if let Some(fid) = isotropic_fidelity(&rho, b) {
                    report.analytic(&key, value, isotropic_family::<f64>(b, fid)?.e_gc);
                }
            }
            _ => {}
        }
    }
    Ok(report)
}
