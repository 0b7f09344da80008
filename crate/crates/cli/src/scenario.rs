//! Scenario documents: a dimension, named observables given as matrices of
//! `[re, im]` pairs, and an optional state.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "observables": {
//!     "Z": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
//!     "X": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
//!   },
//!   "state": { "amplitudes": [[0.7071067811865476, 0], [0.7071067811865476, 0]] }
//! }
//! ```

use std::path::Path;

use entropic_core::linalg::MAX_DIM;
use entropic_core::{Density, Matrix, Observable, State, C64};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Amplitude vectors within this distance of unit norm are renormalized.
const STATE_NORM_TOL: f64 = 1e-6;

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    dim: usize,
    observables: IndexMap<String, RawMatrix>,
    #[serde(default)]
    state: Option<RawState>,
    #[serde(default)]
    labels: IndexMap<String, String>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
enum RawState {
    Amplitudes(Vec<[f64; 2]>),
    Matrix(RawMatrix),
}

#[derive(Debug)]
pub struct Scenario {
    pub dim: usize,
    pub observables: IndexMap<String, Observable>,
    pub state: Option<Density>,
    pub labels: IndexMap<String, String>,
}

fn to_matrix(name: &str, dim: usize, raw: &RawMatrix) -> Result<Matrix> {
    if raw.len() != dim || raw.iter().any(|row| row.len() != dim) {
        let rows = raw.len();
        let cols = raw.iter().map(Vec::len).max().unwrap_or(0);
        return Err(CliError::Dimension(format!("{name} is {rows}×{cols}, expected {dim}×{dim}")));
    }
    let rows = raw
        .iter()
        .map(|row| row.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    Ok(Matrix::from_rows(rows)?)
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawScenario = serde_json::from_str(text)?;
        let dim = raw.dim;
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(CliError::Input(format!("dim {dim} outside 2..={MAX_DIM}")));
        }
        if raw.observables.is_empty() {
            return Err(CliError::Input("no observables given".into()));
        }
        let mut observables = IndexMap::new();
        for (name, m) in &raw.observables {
            let matrix = to_matrix(name, dim, m)?;
            let obs = Observable::new(matrix).map_err(|e| CliError::Input(format!("observable {name}: {e}")))?;
            observables.insert(name.clone(), obs);
        }
        let state = match &raw.state {
            None => None,
            Some(RawState::Amplitudes(v)) => {
                if v.len() != dim {
                    return Err(CliError::Dimension(format!("state has {} amplitudes, expected {dim}", v.len())));
                }
                let amps: Vec<C64> = v.iter().map(|&[re, im]| C64::new(re, im)).collect();
                let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > STATE_NORM_TOL {
                    return Err(CliError::Input(format!("state norm {norm} is not 1")));
                }
                Some(State::normalized(amps)?.density())
            }
            Some(RawState::Matrix(m)) => {
                let matrix = to_matrix("state", dim, m)?;
                Some(Density::new(matrix).map_err(|e| CliError::Input(format!("state: {e}")))?)
            }
        };
        Ok(Self {
            dim,
            observables,
            state,
            labels: raw.labels,
        })
    }

    /// Observables named in `order`, or all of them in document order when
    /// `order` is empty.
    pub fn select(&self, order: &[String]) -> Result<Vec<(String, &Observable)>> {
        if order.is_empty() {
            return Ok(self.observables.iter().map(|(k, v)| (k.clone(), v)).collect());
        }
        order
            .iter()
            .map(|name| {
                self.observables
                    .get(name)
                    .map(|o| (name.clone(), o))
                    .ok_or_else(|| CliError::Input(format!("unknown observable {name:?}")))
            })
            .collect()
    }

    pub fn label<'a>(&'a self, name: &'a str) -> &'a str {
        self.labels.get(name).map(String::as_str).unwrap_or(name)
    }

    /// Re-encodes matrices as a scenario document, for counterexample dumps.
    pub fn document(observables: &[(&str, &Matrix)], state: Option<&Matrix>) -> serde_json::Value {
        let encode = |m: &Matrix| -> RawMatrix {
            (0..m.dim()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect()
        };
        let raw = RawScenario {
            dim: observables.first().map(|(_, m)| m.dim()).unwrap_or(0),
            observables: observables.iter().map(|(k, m)| (k.to_string(), encode(m))).collect(),
            state: state.map(|m| RawState::Matrix(encode(m))),
            labels: IndexMap::new(),
        };
        serde_json::to_value(raw).expect("scenario serializes")
    }
}
