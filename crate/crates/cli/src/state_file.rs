//! JSON state files.
//!
//! ```json
//! { "kind": "pure", "dims": [2, 2], "data": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]] }
//! ```
//!
//! `kind` is `pure` or `density`. Give either `dim` or `dims: [d_B, d_A]`; with
//! `dims` the state is bipartite and amplitudes are indexed `j·d_A + k` with `j`
//! on B. Density data is row-major. Entries are `[re, im]` pairs.

use std::path::Path;

use cohent::qstate::Tolerances;
use cohent::{BipartitePureState, Complex64, DensityMatrix64, Matrix64, PureState64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Pure,
    Density,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 2]>,
    pub data: Vec<[f64; 2]>,
}

/// A validated state together with the raw bytes it was read from.
#[derive(Clone, Debug)]
pub struct LoadedState {
    pub state: State,
    pub dims: Option<(usize, usize)>,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug)]
pub enum State {
    Pure(PureState64),
    Density(DensityMatrix64),
}

impl LoadedState {
    pub fn dim(&self) -> usize {
        match &self.state {
            State::Pure(p) => p.dim(),
            State::Density(r) => r.dim(),
        }
    }

    pub fn density(&self) -> DensityMatrix64 {
        match &self.state {
            State::Pure(p) => DensityMatrix64::from_pure(p),
            State::Density(r) => r.clone(),
        }
    }

    pub fn pure(&self, role: &str) -> CliResult<&PureState64> {
        match &self.state {
            State::Pure(p) => Ok(p),
            State::Density(_) => Err(CliError::input("pure_state", format!("{role} must be a pure state file"))),
        }
    }

    pub fn bipartite(&self) -> Option<BipartitePureState<f64>> {
        match (&self.state, self.dims) {
            (State::Pure(p), Some(dims)) => BipartitePureState::new(dims, p.clone()).ok(),
            _ => None,
        }
    }
}

pub fn load(path: &Path, tol: f64) -> CliResult<LoadedState> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&bytes, tol).map(|(state, dims)| LoadedState { state, dims, bytes })
}

pub fn parse(bytes: &[u8], tol: f64) -> CliResult<(State, Option<(usize, usize)>)> {
    let file: StateFile =
        serde_json::from_slice(bytes).map_err(|e| CliError::input("state_file_syntax", e.to_string()))?;
    file.validate(tol)
}

impl StateFile {
    pub fn from_pure(psi: &PureState64, dims: Option<(usize, usize)>) -> Self {
        Self {
            kind: Kind::Pure,
            dim: dims.is_none().then_some(psi.dim()),
            dims: dims.map(|(b, a)| [b, a]),
            data: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_matrix(m: &Matrix64) -> Self {
        Self {
            kind: Kind::Density,
            dim: Some(m.rows()),
            dims: None,
            data: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn validate(&self, tol: f64) -> CliResult<(State, Option<(usize, usize)>)> {
        let (d, dims) = match (self.dim, self.dims) {
            (Some(_), Some(_)) => return Err(CliError::input("dimension", "give either `dim` or `dims`, not both")),
            (None, None) => return Err(CliError::input("dimension", "missing `dim` or `dims`")),
            (Some(d), None) => (d, None),
            (None, Some([b, a])) => (b * a, Some((b, a))),
        };
        if d == 0 {
            return Err(CliError::input("dimension", "dimension must be positive"));
        }
        if let Some((i, _)) = self
            .data
            .iter()
            .enumerate()
            .find(|(_, z)| !z[0].is_finite() || !z[1].is_finite())
        {
            return Err(CliError::input("finite", format!("entry {i} is not finite")));
        }
        let entries: Vec<Complex64> = self.data.iter().map(|z| Complex64::new(z[0], z[1])).collect();
        let expected = match self.kind {
            Kind::Pure => d,
            Kind::Density => d * d,
        };
        if entries.len() != expected {
            return Err(CliError::input(
                "dimension",
                format!("expected {expected} entries for dimension {d}, found {}", entries.len()),
            ));
        }
        let state = match self.kind {
            Kind::Pure => State::Pure(PureState64::with_tolerance(entries, tol)?),
            Kind::Density => {
                let tolerances = Tolerances {
                    hermitian: tol,
                    psd: tol,
                    trace: tol,
                };
                State::Density(DensityMatrix64::with_tolerances(Matrix64::from_vec(d, d, entries)?, tolerances)?)
            }
        };
        Ok((state, dims))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_str(s: &str) -> CliResult<(State, Option<(usize, usize)>)> {
        parse(s.as_bytes(), 1e-9)
    }

    #[test]
    fn scientific_notation_is_accepted() {
        let (state, dims) = parse_str(r#"{"kind":"pure","dim":2,"data":[[6e-1,0],[0,8E-1]]}"#).unwrap();
        assert!(dims.is_none());
        assert!(matches!(state, State::Pure(_)));
    }

    #[test]
    fn violations_name_the_invariant() {
        let cases = [
            (r#"{"kind":"pure","dim":2,"data":[[1,0],[1,0]]}"#, "unit_norm"),
            (r#"{"kind":"density","dim":2,"data":[[0.5,0],[0.1,0],[0.2,0],[0.5,0]]}"#, "hermitian"),
            (r#"{"kind":"density","dim":2,"data":[[0.5,0],[0,0],[0,0],[0.6,0]]}"#, "unit_trace"),
            (r#"{"kind":"density","dim":2,"data":[[0.5,0],[0.9,0],[0.9,0],[0.5,0]]}"#, "positive_semidefinite"),
            (r#"{"kind":"pure","dim":3,"data":[[1,0],[0,0]]}"#, "dimension"),
            (r#"{"kind":"pure","dim":1,"data":[[1e999,0]]}"#, "state_file_syntax"),
            (r#"{"kind":"pure","dim":1,"data":[[NaN,0]]}"#, "state_file_syntax"),
            (r#"{"kind":"pure","dim":1,"data":[[1,0]],"extra":1}"#, "state_file_syntax"),
        ];
        for (text, invariant) in cases {
            let err = parse_str(text).unwrap_err();
            assert_eq!(err.to_json()["error"]["invariant"], invariant, "{text}");
            assert_eq!(err.exit_code(), 2);
        }
    }

    #[test]
    fn round_trip_through_file_form() {
        let psi = PureState64::new(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
        let text = serde_json::to_string(&StateFile::from_pure(&psi, None)).unwrap();
        let (State::Pure(back), _) = parse_str(&text).unwrap() else { panic!("kind changed") };
        assert_eq!(back, psi);
    }
}
