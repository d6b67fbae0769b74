//! Scalar and vector fields.
//!
//! A [`ScalarField`] holds one value per vertex (canonical vertex order), a
//! [`VectorField`] one coefficient per directed edge (canonical directed-edge
//! order). Both borrow the graph they live on; operations between fields on
//! different graphs fail with [`Error::GraphMismatch`].

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{DirectedEdge, Graph, VertexId};
use crate::numerics::{dot, norm};
use crate::{Error, Result};

/// Tolerance for treating a function as mean-zero: `|Σφ| ≤ 1e-9·(1 + max|φ|)`.
pub const MEAN_ZERO_TOLERANCE: f64 = 1e-9;

fn same_graph(a: &Graph, b: &Graph) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GraphMismatch)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField<'g> {
    graph: &'g Graph,
    values: Vec<f64>,
}

impl<'g> ScalarField<'g> {
    pub fn new(graph: &'g Graph, values: Vec<f64>) -> Result<Self> {
        if values.len() != graph.vertex_count() {
            return Err(Error::DimensionMismatch { expected: graph.vertex_count(), found: values.len() });
        }
        Ok(ScalarField { graph, values })
    }

    pub fn zeros(graph: &'g Graph) -> Self {
        Self::constant(graph, 0.0)
    }

    pub fn constant(graph: &'g Graph, c: f64) -> Self {
        ScalarField { graph, values: vec![c; graph.vertex_count()] }
    }

    pub fn from_fn(graph: &'g Graph, mut f: impl FnMut(VertexId) -> f64) -> Self {
        ScalarField { graph, values: graph.vertices().iter().map(|&v| f(v)).collect() }
    }

    /// e_i, the delta function at vertex `v`.
    pub fn basis(graph: &'g Graph, v: VertexId) -> Result<Self> {
        let i = graph.require_vertex(v)?;
        let mut values = vec![0.0; graph.vertex_count()];
        values[i] = 1.0;
        Ok(ScalarField { graph, values })
    }

    /// 1_H for a vertex set; labels not in the graph are ignored.
    pub fn indicator(graph: &'g Graph, vertices: &BTreeSet<VertexId>) -> Self {
        Self::from_fn(graph, |v| if vertices.contains(&v) { 1.0 } else { 0.0 })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, v: VertexId) -> Result<f64> {
        Ok(self.values[self.graph.require_vertex(v)?])
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Membership in the mean-zero subspace, up to [`MEAN_ZERO_TOLERANCE`].
    pub fn is_mean_zero(&self) -> bool {
        let scale = 1.0 + self.values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        self.sum().abs() <= MEAN_ZERO_TOLERANCE * scale
    }

    /// The field minus its average.
    pub fn centered(&self) -> Self {
        let mean = self.sum() / self.values.len() as f64;
        ScalarField { graph: self.graph, values: self.values.iter().map(|x| x - mean).collect() }
    }

    pub fn inner_product(&self, other: &ScalarField<'_>) -> Result<f64> {
        same_graph(self.graph, other.graph)?;
        Ok(dot(&self.values, &other.values))
    }

    pub fn add(&self, other: &ScalarField<'_>) -> Result<Self> {
        same_graph(self.graph, other.graph)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(ScalarField { graph: self.graph, values })
    }

    pub fn sub(&self, other: &ScalarField<'_>) -> Result<Self> {
        same_graph(self.graph, other.graph)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(ScalarField { graph: self.graph, values })
    }

    pub fn scale(&self, s: f64) -> Self {
        ScalarField { graph: self.graph, values: self.values.iter().map(|x| x * s).collect() }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &ScalarField<'_>) -> Result<Self> {
        same_graph(self.graph, other.graph)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(ScalarField { graph: self.graph, values })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorField<'g> {
    graph: &'g Graph,
    coefficients: Vec<f64>,
}

impl<'g> VectorField<'g> {
    pub fn new(graph: &'g Graph, coefficients: Vec<f64>) -> Result<Self> {
        let n = graph.tangent().len();
        if coefficients.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: coefficients.len() });
        }
        Ok(VectorField { graph, coefficients })
    }

    pub fn zeros(graph: &'g Graph) -> Self {
        Self::constant(graph, 0.0)
    }

    pub fn constant(graph: &'g Graph, c: f64) -> Self {
        VectorField { graph, coefficients: vec![c; graph.tangent().len()] }
    }

    pub fn from_fn(graph: &'g Graph, mut f: impl FnMut(DirectedEdge) -> f64) -> Self {
        let coefficients = graph.tangent().directed_edges().iter().map(|&u| f(u)).collect();
        VectorField { graph, coefficients }
    }

    /// e_u for the directed edge `base -> tip`.
    pub fn basis(graph: &'g Graph, base: VertexId, tip: VertexId) -> Result<Self> {
        let k = graph.tangent().require(DirectedEdge::new(base, tip))?;
        Ok(Self::basis_index(graph, k))
    }

    pub fn basis_index(graph: &'g Graph, k: usize) -> Self {
        let mut coefficients = vec![0.0; graph.tangent().len()];
        coefficients[k] = 1.0;
        VectorField { graph, coefficients }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.coefficients
    }

    pub fn at(&self, base: VertexId, tip: VertexId) -> Result<f64> {
        Ok(self.coefficients[self.graph.tangent().require(DirectedEdge::new(base, tip))?])
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coefficients)
    }

    pub fn max_abs(&self) -> f64 {
        self.coefficients.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// ⟨X, Y⟩ = Σ_u X(u)·Y(u).
    pub fn inner_product(&self, other: &VectorField<'_>) -> Result<f64> {
        same_graph(self.graph, other.graph)?;
        Ok(dot(&self.coefficients, &other.coefficients))
    }

    /// X̄(u) = X(σ(u)).
    pub fn reverse(&self) -> Self {
        let tg = self.graph.tangent();
        let coefficients = (0..tg.len()).map(|k| self.coefficients[tg.reverse_index(k)]).collect();
        VectorField { graph: self.graph, coefficients }
    }

    /// (X + X̄)/2.
    pub fn symmetric_part(&self) -> Self {
        let tg = self.graph.tangent();
        let coefficients =
            (0..tg.len()).map(|k| 0.5 * (self.coefficients[k] + self.coefficients[tg.reverse_index(k)])).collect();
        VectorField { graph: self.graph, coefficients }
    }

    /// (X − X̄)/2.
    pub fn antisymmetric_part(&self) -> Self {
        let tg = self.graph.tangent();
        let coefficients =
            (0..tg.len()).map(|k| 0.5 * (self.coefficients[k] - self.coefficients[tg.reverse_index(k)])).collect();
        VectorField { graph: self.graph, coefficients }
    }

    pub fn parity_parts(&self) -> (Self, Self) {
        (self.symmetric_part(), self.antisymmetric_part())
    }

    pub fn is_symmetric(&self) -> bool {
        self.coefficients == self.reverse().coefficients
    }

    pub fn add(&self, other: &VectorField<'_>) -> Result<Self> {
        same_graph(self.graph, other.graph)?;
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect();
        Ok(VectorField { graph: self.graph, coefficients })
    }

    pub fn sub(&self, other: &VectorField<'_>) -> Result<Self> {
        same_graph(self.graph, other.graph)?;
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a - b).collect();
        Ok(VectorField { graph: self.graph, coefficients })
    }

    pub fn scale(&self, s: f64) -> Self {
        VectorField { graph: self.graph, coefficients: self.coefficients.iter().map(|x| x * s).collect() }
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: f64, other: &VectorField<'_>) -> Result<Self> {
        same_graph(self.graph, other.graph)?;
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + s * b).collect();
        Ok(VectorField { graph: self.graph, coefficients })
    }
}

/// (φX)(u) = φ(π(u))·X(u).
pub fn pointwise_scale<'g>(phi: &ScalarField<'_>, x: &VectorField<'g>) -> Result<VectorField<'g>> {
    same_graph(phi.graph, x.graph)?;
    let tg = x.graph.tangent();
    let coefficients = (0..tg.len()).map(|k| phi.values[tg.base_index(k)] * x.coefficients[k]).collect();
    Ok(VectorField { graph: x.graph, coefficients })
}
