use cohent::bounds::{
    c_l1, certify_cgc_lower, certify_egc_lower, isotropic_family, negativity, robustness_coherence,
    symmetric_family, RobustnessOptions,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::args::{FamilyArgs, FamilyName, Global};
use crate::error::{CliError, CliResult};
use crate::report::Report;

/// One row of a symmetric-family sweep. Column order is the CSV schema.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetricRow {
    pub p: f64,
    pub fidelity: f64,
    pub c_l1_analytic: f64,
    pub c_l1_numeric: f64,
    pub c_l1_gap: f64,
    pub c_r_analytic: f64,
    pub c_r_numeric: f64,
    pub c_r_gap: f64,
    pub c_gc_analytic: f64,
    pub c_gc_certified: f64,
    pub c_gc_gap: f64,
}

/// One row of an isotropic-family sweep. Column order is the CSV schema.
#[derive(Clone, Debug, Serialize)]
pub struct IsotropicRow {
    pub f: f64,
    pub negativity_analytic: f64,
    pub negativity_numeric: f64,
    pub negativity_gap: f64,
    pub e_gc_analytic: f64,
    pub e_gc_certified: f64,
    pub e_gc_gap: f64,
}

/// `start:stop:steps`, evenly spaced and inclusive of both ends.
pub fn parse_sweep(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::input("sweep", format!("expected start:stop:steps, got `{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, steps] = parts.as_slice() else { return Err(bad()) };
    let start: f64 = start.parse().map_err(|_| bad())?;
    let stop: f64 = stop.parse().map_err(|_| bad())?;
    let steps: usize = steps.parse().map_err(|_| bad())?;
    if steps == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    let span = stop - start;
    Ok((0..steps)
        .map(|k| if k + 1 == steps { stop } else { start + span * k as f64 / (steps - 1) as f64 })
        .collect())
}

pub enum Table {
    Symmetric(Vec<SymmetricRow>),
    Isotropic(Vec<IsotropicRow>),
}

impl Table {
    fn len(&self) -> usize {
        match self {
            Self::Symmetric(r) => r.len(),
            Self::Isotropic(r) => r.len(),
        }
    }

    fn max_gap(&self) -> f64 {
        match self {
            Self::Symmetric(rows) => rows
                .iter()
                .map(|r| r.c_l1_gap.max(r.c_r_gap).max(r.c_gc_gap))
                .fold(0.0, f64::max),
            Self::Isotropic(rows) => rows
                .iter()
                .map(|r| r.negativity_gap.max(r.e_gc_gap))
                .fold(0.0, f64::max),
        }
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let res = match self {
            Self::Symmetric(rows) => rows.iter().try_for_each(|r| w.serialize(r)),
            Self::Isotropic(rows) => rows.iter().try_for_each(|r| w.serialize(r)),
        };
        res.map_err(|e| CliError::input("csv", e.to_string()))?;
        let bytes = w.into_inner().map_err(|e| CliError::input("csv", e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn to_value(&self) -> serde_json::Value {
        match self {
            Self::Symmetric(rows) => json!(rows),
            Self::Isotropic(rows) => json!(rows),
        }
    }
}

pub fn table(g: &Global, a: &FamilyArgs) -> CliResult<Table> {
    let d = a.d;
    if d < 2 {
        return Err(CliError::input("dimension", format!("family sweeps need d ≥ 2, got {d}")));
    }
    let points = match &a.sweep {
        Some(s) => parse_sweep(s)?,
        None => {
            let start = match a.family {
                FamilyName::Symmetric => 0.0,
                FamilyName::Isotropic => 1.0 / (d * d) as f64,
            };
            parse_sweep(&format!("{start}:1:11"))?
        }
    };
    let opts = RobustnessOptions {
        tol: g.solver_tol(),
        ..Default::default()
    };
    Ok(match a.family {
        FamilyName::Symmetric => Table::Symmetric(
            points
                .par_iter()
                .map(|&p| symmetric_row(d, p, &opts))
                .collect::<CliResult<_>>()?,
        ),
        FamilyName::Isotropic => Table::Isotropic(
            points
                .par_iter()
                .map(|&f| isotropic_row(d, f, &opts))
                .collect::<CliResult<_>>()?,
        ),
    })
}

fn symmetric_row(d: usize, p: f64, opts: &RobustnessOptions) -> CliResult<SymmetricRow> {
    let fam = symmetric_family::<f64>(d, p)?;
    let l1 = c_l1(&fam.state);
    let robust = robustness_coherence(&fam.state, opts)?.value;
    let cert = certify_cgc_lower(&fam.state, opts)?.lower_bound;
    Ok(SymmetricRow {
        p,
        fidelity: fam.fidelity,
        c_l1_analytic: fam.c_l1,
        c_l1_numeric: l1,
        c_l1_gap: (l1 - fam.c_l1).abs(),
        c_r_analytic: fam.c_r,
        c_r_numeric: robust,
        c_r_gap: (robust - fam.c_r).abs(),
        c_gc_analytic: fam.c_gc,
        c_gc_certified: cert,
        c_gc_gap: (cert - fam.c_gc).abs(),
    })
}

fn isotropic_row(d: usize, f: f64, opts: &RobustnessOptions) -> CliResult<IsotropicRow> {
    let fam = isotropic_family::<f64>(d, f)?;
    let n = negativity(&fam.state, (d, d))?;
    let cert = certify_egc_lower(&fam.state, (d, d), opts)?.lower_bound;
    Ok(IsotropicRow {
        f,
        negativity_analytic: fam.negativity,
        negativity_numeric: n,
        negativity_gap: (n - fam.negativity).abs(),
        e_gc_analytic: fam.e_gc,
        e_gc_certified: cert,
        e_gc_gap: (cert - fam.e_gc).abs(),
    })
}

pub fn report(g: &Global, a: &FamilyArgs, table: &Table) -> Report {
    let mut report = Report::new(
        "family",
        json!({
            "family": format!("{:?}", a.family).to_lowercase(),
            "d": a.d,
            "sweep": a.sweep,
            "tol": g.solver_tol(),
        }),
        &[],
    );
    report.result("rows", table.len() as f64);
    report.result("max_gap", table.max_gap());
    report.details = table.to_value();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_hits_both_ends() {
        let pts = parse_sweep("0:1:11").unwrap();
        assert_eq!(pts.len(), 11);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[3], 0.3);
        assert_eq!(pts[10], 1.0);
        assert_eq!(parse_sweep("0.5:0.5:1").unwrap(), vec![0.5]);
        for bad in ["0:1", "0:1:0", "a:1:2", "0:1:2:3"] {
            assert!(parse_sweep(bad).is_err(), "{bad}");
        }
    }
}
