//! Walks, line integrals, simple-cycle enumeration and the circulation system.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::field::VectorField;
use crate::graph::{DirectedEdge, Graph, VertexId};
use crate::numerics::DenseMatrix;
use crate::{Error, Result};

/// Default guard on the number of simple cycles enumerated.
pub const DEFAULT_CYCLE_LIMIT: usize = 1_000_000;

/// A walk ω₀ω₁…ω_N (N ≥ 1) through adjacent vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk<'g> {
    graph: &'g Graph,
    vertices: Vec<VertexId>,
    /// Tangent-graph index of each step ω_{n−1}ω_n.
    steps: Vec<usize>,
}

impl<'g> Walk<'g> {
    pub fn new(graph: &'g Graph, vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidWalk("a walk needs at least one step"));
        }
        for &v in &vertices {
            graph.require_vertex(v)?;
        }
        let tg = graph.tangent();
        let steps = vertices
            .windows(2)
            .map(|w| {
                tg.index_of(DirectedEdge::new(w[0], w[1]))
                    .ok_or(Error::InvalidWalk("consecutive vertices are not adjacent"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Walk { graph, vertices, steps })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// N(ω), the number of steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Tangent-graph indices of the directed edges traversed, in order.
    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    /// No undirected edge is traversed twice.
    pub fn is_trail(&self) -> bool {
        let tg = self.graph.tangent();
        let mut seen = BTreeSet::new();
        self.steps.iter().all(|&k| seen.insert(k.min(tg.reverse_index(k))))
    }

    pub fn is_circuit(&self) -> bool {
        self.vertices.first() == self.vertices.last() && self.is_trail()
    }

    /// A circuit of length at least 3 with no repeated vertex among ω₀…ω_{N−1}.
    pub fn is_simple_circuit(&self) -> bool {
        if self.len() < 3 || !self.is_circuit() {
            return false;
        }
        let body = &self.vertices[..self.len()];
        body.iter().collect::<BTreeSet<_>>().len() == body.len()
    }

    /// The same walk traversed backwards.
    pub fn reversed(&self) -> Self {
        let tg = self.graph.tangent();
        Walk {
            graph: self.graph,
            vertices: self.vertices.iter().rev().copied().collect(),
            steps: self.steps.iter().rev().map(|&k| tg.reverse_index(k)).collect(),
        }
    }
}

/// ω·X = Σₙ X(ω_{n−1}ω_n).
pub fn line_integral(w: &Walk<'_>, x: &VectorField<'_>) -> Result<f64> {
    if w.graph() != x.graph() {
        return Err(Error::GraphMismatch);
    }
    let c = x.coefficients();
    Ok(w.steps().iter().map(|&k| c[k]).sum())
}

/// t_ω: 1 on each directed edge the trail traverses, 0 elsewhere.
pub fn trail_tangent_field<'g>(w: &Walk<'g>) -> Result<VectorField<'g>> {
    if !w.is_trail() {
        return Err(Error::NotATrail);
    }
    let mut c = vec![0.0; w.graph().tangent().len()];
    for &k in w.steps() {
        c[k] = 1.0;
    }
    VectorField::new(w.graph(), c)
}

/// Every simple cycle of a graph, one canonical circuit per cycle.
///
/// The canonical circuit starts at the cycle's smallest vertex and moves to the
/// smaller of its two neighbours on the cycle. Cycles are sorted by length,
/// then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSet {
    cycles: Vec<Vec<VertexId>>,
}

impl CycleSet {
    /// Vertex sequences ω₀…ω_{N−1} (the closing vertex is not repeated).
    pub fn cycles(&self) -> &[Vec<VertexId>] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Closed circuits in circulation-system row order: for each cycle the
    /// canonical orientation, then its reversal (same starting vertex).
    pub fn circuits(&self) -> Vec<Vec<VertexId>> {
        let mut out = Vec::with_capacity(2 * self.cycles.len());
        for c in &self.cycles {
            let mut forward = c.clone();
            forward.push(c[0]);
            let mut backward = forward.clone();
            backward.reverse();
            out.push(forward);
            out.push(backward);
        }
        out
    }

    /// The circuits as walks on `g`.
    pub fn walks<'g>(&self, g: &'g Graph) -> Result<Vec<Walk<'g>>> {
        self.circuits().into_iter().map(|c| Walk::new(g, c)).collect()
    }
}

struct Search<'a> {
    neighbors: &'a [Vec<usize>],
    start: usize,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    stack: Vec<usize>,
    found: Vec<Vec<usize>>,
    limit: usize,
}

impl Search<'_> {
    fn unblock(&mut self, v: usize) {
        let mut pending = vec![v];
        while let Some(u) = pending.pop() {
            if self.blocked[u] {
                self.blocked[u] = false;
                pending.append(&mut self.blocked_by[u]);
            }
        }
    }

    /// Johnson's circuit search restricted to vertices ≥ start. Each undirected
    /// cycle shows up twice (once per direction); only the direction whose
    /// second vertex is smaller than its last is kept.
    fn circuit(&mut self, v: usize) -> Result<bool> {
        let mut closed = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in &self.neighbors[v] {
            if w < self.start {
                continue;
            }
            if w == self.start {
                // closing a 2-step walk is not a simple circuit, but it still
                // proves v lies on a closed walk, which is what unblocking needs
                closed = true;
                let n = self.stack.len();
                if n >= 3 && self.stack[1] < self.stack[n - 1] {
                    if self.found.len() == self.limit {
                        return Err(Error::CycleLimitExceeded { limit: self.limit });
                    }
                    self.found.push(self.stack.clone());
                }
            } else if !self.blocked[w] && self.circuit(w)? {
                closed = true;
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for &w in &self.neighbors[v] {
                if w >= self.start && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.stack.pop();
        Ok(closed)
    }
}

/// Enumerates every simple cycle of `g`.
///
/// Fails with [`Error::CycleLimitExceeded`] once more than `limit` cycles are
/// found; cycle counts grow exponentially with density.
pub fn simple_cycles(g: &Graph, limit: usize) -> Result<CycleSet> {
    let n = g.vertex_count();
    let neighbors: Vec<Vec<usize>> = (0..n).map(|i| g.neighbors(i).to_vec()).collect();
    let mut search = Search {
        neighbors: &neighbors,
        start: 0,
        blocked: vec![false; n],
        blocked_by: vec![Vec::new(); n],
        stack: Vec::new(),
        found: Vec::new(),
        limit,
    };
    for s in 0..n {
        search.start = s;
        for i in s..n {
            search.blocked[i] = false;
            search.blocked_by[i].clear();
        }
        search.circuit(s)?;
    }
    // vertex indices follow label order, so index order is label order
    let mut cycles: Vec<Vec<VertexId>> =
        search.found.into_iter().map(|c| c.into_iter().map(|i| g.label(i)).collect()).collect();
    cycles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(CycleSet { cycles })
}

/// One row per oriented simple circuit, one column per directed edge; the row
/// of circuit ω is the indicator of the directed edges ω traverses, so
/// `matrix · X` lists the circulations of X.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculationSystem {
    pub cycles: CycleSet,
    pub matrix: DenseMatrix,
}

impl CirculationSystem {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    /// Circulations of `x` around every oriented simple circuit, in row order.
    pub fn circulations(&self, x: &VectorField<'_>) -> Result<Vec<f64>> {
        self.matrix.mul_vec(x.coefficients())
    }
}

pub fn circulation_system(g: &Graph, limit: usize) -> Result<CirculationSystem> {
    let cycles = simple_cycles(g, limit)?;
    let tg = g.tangent();
    let circuits = cycles.circuits();
    let mut matrix = DenseMatrix::zeros(circuits.len(), tg.len());
    for (r, c) in circuits.iter().enumerate() {
        for w in c.windows(2) {
            matrix[(r, tg.require(DirectedEdge::new(w[0], w[1]))?)] = 1.0;
        }
    }
    Ok(CirculationSystem { cycles, matrix })
}
