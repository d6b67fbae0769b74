//! JSON file formats.
//!
//! ```json
//! {"vertices": [1, 2, 3], "edges": [[1, 2], [2, 3]]}
//! {"coefficients": [{"from": 1, "to": 2, "value": 0.5}]}
//! {"values": [{"vertex": 1, "value": -1.0}]}
//! ```
//!
//! Directed edges or vertices missing from a field file are zero.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use graphcalc_core::{DirectedEdge, Graph, ScalarField, SubgraphSpec, VectorField, VertexId};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[VertexId; 2]>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        GraphFile { vertices: g.vertices().to_vec(), edges: g.edges().iter().map(|&(a, b)| [a, b]).collect() }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let edges: Vec<_> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        Ok(Graph::new(&self.vertices, &edges)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coefficient {
    pub from: VertexId,
    pub to: VertexId,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub coefficients: Vec<Coefficient>,
}

impl FieldFile {
    /// Every directed edge, in tangent-graph order.
    pub fn from_field(x: &VectorField<'_>) -> Self {
        let tg = x.graph().tangent();
        let coefficients = tg
            .directed_edges()
            .iter()
            .zip(x.coefficients())
            .map(|(u, &value)| Coefficient { from: u.base, to: u.tip, value })
            .collect();
        FieldFile { coefficients }
    }

    pub fn to_field<'g>(&self, g: &'g Graph) -> Result<VectorField<'g>> {
        let tg = g.tangent();
        let mut c = vec![0.0; tg.len()];
        let mut seen = BTreeSet::new();
        for coef in &self.coefficients {
            let k = tg.require(DirectedEdge::new(coef.from, coef.to))?;
            if !seen.insert(k) {
                return Err(CliError::Invalid(format!("directed edge {}->{} listed twice", coef.from, coef.to)));
            }
            c[k] = finite(coef.value)?;
        }
        Ok(VectorField::new(g, c)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarValue {
    pub vertex: VertexId,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarFile {
    pub values: Vec<ScalarValue>,
}

impl ScalarFile {
    pub fn from_field(phi: &ScalarField<'_>) -> Self {
        let g = phi.graph();
        let values =
            g.vertices().iter().zip(phi.values()).map(|(&vertex, &value)| ScalarValue { vertex, value }).collect();
        ScalarFile { values }
    }

    pub fn to_field<'g>(&self, g: &'g Graph) -> Result<ScalarField<'g>> {
        let mut v = vec![0.0; g.vertex_count()];
        let mut seen = BTreeSet::new();
        for s in &self.values {
            let i = g.require_vertex(s.vertex)?;
            if !seen.insert(i) {
                return Err(CliError::Invalid(format!("vertex {} listed twice", s.vertex)));
            }
            v[i] = finite(s.value)?;
        }
        Ok(ScalarField::new(g, v)?)
    }
}

/// A subgraph; without `edges` it is the subgraph induced by `vertices`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgraphFile {
    pub vertices: Vec<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[VertexId; 2]>>,
}

impl SubgraphFile {
    pub fn to_spec(&self, g: &Graph) -> Result<SubgraphSpec> {
        let spec = match &self.edges {
            None => SubgraphSpec::induced(g, self.vertices.iter().copied()),
            Some(edges) => SubgraphSpec::new(self.vertices.iter().copied(), edges.iter().map(|e| (e[0], e[1]))),
        };
        spec.validate(g)?;
        Ok(spec)
    }

    pub fn from_spec(spec: &SubgraphSpec) -> Self {
        SubgraphFile {
            vertices: spec.vertices().iter().copied().collect(),
            edges: Some(spec.edges().iter().map(|&(a, b)| [a, b]).collect()),
        }
    }
}

/// Initial data and step control for a Maxwell run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub graph: GraphFile,
    #[serde(rename = "E0")]
    pub e0: FieldFile,
    #[serde(rename = "B0")]
    pub b0: FieldFile,
    /// Current density; zero when absent.
    #[serde(rename = "J", default)]
    pub j: Option<FieldFile>,
    /// Charge density; zero when absent.
    #[serde(default)]
    pub rho: Option<ScalarFile>,
    pub dt: f64,
    pub steps: usize,
    /// Emit every n-th state; every state when absent.
    #[serde(default)]
    pub record_every: Option<usize>,
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Invalid(format!("non-finite value {v}")))
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    read_json::<GraphFile>(path)?.to_graph()
}
