//! JSON encodings of states, operators, pentagrams and graphs.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use pentaks_core::orthograph::OrthogonalityGraph;
use pentaks_core::{Error as CoreError, HermitianOperator, Pentagram, StateVector, C64};

use crate::error::{AppError, Result};

/// `{"dim": n, "re": [...], "im": [...]}`. A missing `im` means a real vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateVectorJson {
    pub dim: usize,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl From<&StateVector> for StateVectorJson {
    fn from(v: &StateVector) -> Self {
        Self {
            dim: v.dim(),
            re: v.amplitudes().iter().map(|z| z.re).collect(),
            im: v.amplitudes().iter().map(|z| z.im).collect(),
        }
    }
}

impl StateVectorJson {
    /// Validates against the unit-norm contract; `field` prefixes any error.
    pub fn to_state(&self, field: &str) -> Result<StateVector> {
        if self.dim != 3 && self.dim != 4 {
            return Err(AppError::field(format!("{field}.dim"), format!("must be 3 or 4, got {}", self.dim)));
        }
        if self.re.len() != self.dim {
            return Err(AppError::field(
                format!("{field}.re"),
                format!("has {} entries but dim is {}", self.re.len(), self.dim),
            ));
        }
        if !self.im.is_empty() && self.im.len() != self.dim {
            return Err(AppError::field(
                format!("{field}.im"),
                format!("has {} entries but dim is {}", self.im.len(), self.dim),
            ));
        }
        let amps: Vec<C64> = (0..self.dim)
            .map(|k| C64::new(self.re[k], self.im.get(k).copied().unwrap_or(0.0)))
            .collect();
        StateVector::new(&amps).map_err(|e| match e {
            CoreError::NotNormalized { norm } => {
                AppError::field(field, format!("norm is {norm}, expected 1 within 1e-12"))
            }
            other => AppError::field(field, other.to_string()),
        })
    }
}

/// Row-major `re` and `im` matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&HermitianOperator> for OperatorJson {
    fn from(op: &HermitianOperator) -> Self {
        let n = op.dim();
        let part = |f: fn(C64) -> f64| (0..n).map(|i| (0..n).map(|j| f(op.entry(i, j))).collect()).collect();
        Self { dim: n, re: part(|z| z.re), im: part(|z| z.im) }
    }
}

impl OperatorJson {
    pub fn to_operator(&self, field: &str) -> Result<HermitianOperator> {
        let n = self.dim;
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == n && m.iter().all(|r| r.len() == n);
        if !shape_ok(&self.re) {
            return Err(AppError::field(format!("{field}.re"), format!("must be {n} x {n}")));
        }
        if !shape_ok(&self.im) {
            return Err(AppError::field(format!("{field}.im"), format!("must be {n} x {n}")));
        }
        let entries: Vec<C64> = (0..n * n).map(|k| C64::new(self.re[k / n][k % n], self.im[k / n][k % n])).collect();
        HermitianOperator::new(n, &entries).map_err(|e| AppError::field(field, e.to_string()))
    }
}

/// Five vectors `|0>, ..., |4>` in pentagram order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PentagramJson {
    pub vectors: Vec<StateVectorJson>,
}

impl From<&Pentagram> for PentagramJson {
    fn from(p: &Pentagram) -> Self {
        Self { vectors: p.vectors().iter().map(StateVectorJson::from).collect() }
    }
}

impl PentagramJson {
    pub fn to_pentagram(&self) -> Result<Pentagram> {
        if self.vectors.len() != 5 {
            return Err(AppError::field("vectors", format!("needs 5 entries, got {}", self.vectors.len())));
        }
        let mut out = Vec::with_capacity(5);
        for (k, v) in self.vectors.iter().enumerate() {
            out.push(v.to_state(&format!("vectors[{k}]"))?);
        }
        let arr: [StateVector; 5] = out.try_into().expect("length checked");
        Pentagram::new(arr).map_err(|e| AppError::field("vectors", e.to_string()))
    }
}

/// `{"nodes": [...], "edges": [[i, j], ...], "bases": [[...], ...], "realization": {label: state}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub nodes: Vec<String>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub bases: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<BTreeMap<String, StateVectorJson>>,
}

impl From<&OrthogonalityGraph> for GraphJson {
    fn from(g: &OrthogonalityGraph) -> Self {
        let realization = g.realization().map(|r| {
            g.labels()
                .iter()
                .zip(r)
                .map(|(l, v)| (l.clone(), StateVectorJson::from(v)))
                .collect()
        });
        Self {
            nodes: g.labels().to_vec(),
            edges: g.edges().iter().map(|&(i, j)| [i, j]).collect(),
            bases: g.bases().to_vec(),
            realization,
        }
    }
}

impl GraphJson {
    /// Builds and validates the graph, including edge orthogonality when realized.
    pub fn to_graph(&self) -> Result<OrthogonalityGraph> {
        let mut seen = BTreeMap::new();
        for (i, label) in self.nodes.iter().enumerate() {
            if seen.insert(label.as_str(), i).is_some() {
                return Err(AppError::field("nodes", format!("label `{label}` appears twice")));
            }
        }
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let graph = OrthogonalityGraph::new(self.nodes.clone(), &edges, self.bases.clone())
            .map_err(|e| AppError::field("edges/bases", e.to_string()))?;
        let Some(realization) = &self.realization else {
            return Ok(graph);
        };
        if let Some(unknown) = realization.keys().find(|k| !seen.contains_key(k.as_str())) {
            return Err(AppError::field(format!("realization.{unknown}"), "is not a node label"));
        }
        let mut vectors = Vec::with_capacity(self.nodes.len());
        for label in &self.nodes {
            let v = realization
                .get(label)
                .ok_or_else(|| AppError::field("realization", format!("missing node `{label}`")))?;
            vectors.push(v.to_state(&format!("realization.{label}"))?);
        }
        graph
            .with_realization(vectors)
            .map_err(|e| AppError::field("realization", e.to_string()))
    }
}

fn json_error<E>(path: &Path, e: serde_path_to_error::Error<E>) -> AppError
where
    E: Into<serde_json::Error>,
{
    let at = e.path().to_string();
    let context = if at == "." { path.display().to_string() } else { format!("{} at `{at}`", path.display()) };
    AppError::Json { context, source: e.into_inner().into() }
}

/// Parses `path`; type errors report the JSON path of the offending field.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| json_error(path, e))?;
    de.end().map_err(|source| AppError::Json { context: path.display().to_string(), source })?;
    Ok(value)
}

/// Converts an already parsed document, with the same error reporting as [`read_json`].
pub fn from_value<T: DeserializeOwned>(path: &Path, value: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| json_error(path, e))
}

pub fn read_graph(path: &Path) -> Result<OrthogonalityGraph> {
    read_json::<GraphJson>(path)?.to_graph()
}

pub fn read_state(path: &Path) -> Result<StateVector> {
    read_json::<StateVectorJson>(path)?.to_state("state")
}
