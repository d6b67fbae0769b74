//! Graphs, tangent graphs, subgraphs and their boundaries.
//!
//! Vertex labels are positive integers. Internally every vertex gets a dense
//! index by ascending label, edges are kept sorted by `(min, max)` and directed
//! edges by `(base, tip)`. Those orderings are the layout contract for every
//! matrix and coefficient vector in the crate.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::VectorField;
use crate::numerics::DenseMatrix;
use crate::{Error, Result};

pub type VertexId = u32;

/// Finite simple graph with canonical orderings.
///
/// Disconnected graphs can be built (so that validation can be exercised), but
/// analysis entry points call [`Graph::require_connected`] and reject them.
#[derive(Debug, Clone)]
pub struct Graph {
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    index: BTreeMap<VertexId, usize>,
    neighbors: Vec<Vec<usize>>,
    connected: bool,
    tangent: TangentGraph,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        core::ptr::eq(self, other) || (self.vertices == other.vertices && self.edges == other.edges)
    }
}

impl Eq for Graph {}

/// Builds a graph from vertex labels and unordered vertex pairs.
pub fn build_graph(vertices: &[VertexId], edges: &[(VertexId, VertexId)]) -> Result<Graph> {
    Graph::new(vertices, edges)
}

impl Graph {
    pub fn new(vertices: &[VertexId], edges: &[(VertexId, VertexId)]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0]));
            }
        }
        if sorted[0] == 0 {
            return Err(Error::InvalidLabel(0));
        }
        let index: BTreeMap<VertexId, usize> = sorted.iter().enumerate().map(|(i, &v)| (v, i)).collect();

        let mut canon = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            for v in [a, b] {
                if !index.contains_key(&v) {
                    return Err(Error::UnknownVertex(v));
                }
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        for w in canon.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge(w[0].0, w[0].1));
            }
        }

        let mut neighbors = vec![Vec::new(); sorted.len()];
        for &(a, b) in &canon {
            let (ia, ib) = (index[&a], index[&b]);
            neighbors[ia].push(ib);
            neighbors[ib].push(ia);
        }
        neighbors.iter_mut().for_each(|n| n.sort_unstable());

        let connected = is_connected(&neighbors);
        let tangent = TangentGraph::build(&sorted, &index, &canon);
        Ok(Graph { vertices: sorted, edges: canon, index, neighbors, connected, tangent })
    }

    /// Path 1–2–…–n.
    pub fn path(n: u32) -> Result<Self> {
        let vertices: Vec<VertexId> = (1..=n).collect();
        let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Graph::new(&vertices, &edges)
    }

    /// Cycle C_n on vertices 1..=n, n ≥ 3.
    pub fn cycle(n: u32) -> Result<Self> {
        let vertices: Vec<VertexId> = (1..=n).collect();
        let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        edges.push((n, 1));
        Graph::new(&vertices, &edges)
    }

    /// Complete graph K_n.
    pub fn complete(n: u32) -> Result<Self> {
        let vertices: Vec<VertexId> = (1..=n).collect();
        let edges: Vec<_> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        Graph::new(&vertices, &edges)
    }

    /// Vertex labels in ascending order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Edges as `(min, max)` label pairs in lexicographic order.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `|E| − |V| + 1` for a connected graph.
    pub fn cyclomatic_number(&self) -> usize {
        (self.edges.len() + 1).saturating_sub(self.vertices.len())
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn require_vertex(&self, v: VertexId) -> Result<usize> {
        self.index_of(v).ok_or(Error::UnknownVertex(v))
    }

    pub fn label(&self, i: usize) -> VertexId {
        self.vertices[i]
    }

    /// Neighbor indices of the vertex with index `i`, ascending.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.connected {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    pub fn tangent(&self) -> &TangentGraph {
        &self.tangent
    }

    pub fn adjacency_matrix(&self) -> DenseMatrix {
        let n = self.vertex_count();
        let mut a = DenseMatrix::zeros(n, n);
        for (i, nb) in self.neighbors.iter().enumerate() {
            for &j in nb {
                a[(i, j)] = 1.0;
            }
        }
        a
    }

    pub fn degree_matrix(&self) -> DenseMatrix {
        let degrees: Vec<f64> = self.neighbors.iter().map(|n| n.len() as f64).collect();
        DenseMatrix::diagonal(&degrees)
    }
}

fn is_connected(neighbors: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; neighbors.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &neighbors[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == neighbors.len()
}

/// An edge `{base, tip}` traversed from `base` to `tip`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedEdge {
    pub base: VertexId,
    pub tip: VertexId,
}

impl DirectedEdge {
    pub const fn new(base: VertexId, tip: VertexId) -> Self {
        DirectedEdge { base, tip }
    }

    pub const fn reversed(self) -> Self {
        DirectedEdge { base: self.tip, tip: self.base }
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.base, self.tip)
    }
}

/// The tangent graph: one vertex per directed edge of the base graph.
///
/// Two directed edges `(i,j)` and `(k,l)` are adjacent when `j = k` or
/// `i = l`, i.e. when one ends where the other starts. In particular every
/// directed edge is adjacent to its reversal.
#[derive(Debug, Clone)]
pub struct TangentGraph {
    directed: Vec<DirectedEdge>,
    lookup: BTreeMap<DirectedEdge, usize>,
    base: Vec<usize>,
    tip: Vec<usize>,
    reverse: Vec<usize>,
    outgoing: Vec<Vec<usize>>,
    adjacency: Vec<(usize, usize)>,
}

impl TangentGraph {
    /// Tangent graph of `g`; the same value is available as [`Graph::tangent`].
    pub fn of(g: &Graph) -> Self {
        g.tangent.clone()
    }

    fn build(vertices: &[VertexId], index: &BTreeMap<VertexId, usize>, edges: &[(VertexId, VertexId)]) -> Self {
        let mut directed: Vec<DirectedEdge> =
            edges.iter().flat_map(|&(a, b)| [DirectedEdge::new(a, b), DirectedEdge::new(b, a)]).collect();
        directed.sort_unstable();
        let lookup: BTreeMap<DirectedEdge, usize> = directed.iter().enumerate().map(|(k, &u)| (u, k)).collect();
        let base: Vec<usize> = directed.iter().map(|u| index[&u.base]).collect();
        let tip: Vec<usize> = directed.iter().map(|u| index[&u.tip]).collect();
        let reverse: Vec<usize> = directed.iter().map(|u| lookup[&u.reversed()]).collect();

        let mut outgoing = vec![Vec::new(); vertices.len()];
        for (k, &b) in base.iter().enumerate() {
            outgoing[b].push(k);
        }

        let mut adjacency = Vec::new();
        for k in 0..directed.len() {
            for l in k + 1..directed.len() {
                if tip[k] == base[l] || base[k] == tip[l] {
                    adjacency.push((k, l));
                }
            }
        }
        TangentGraph { directed, lookup, base, tip, reverse, outgoing, adjacency }
    }

    /// Number of directed edges, `2|E|`.
    pub fn len(&self) -> usize {
        self.directed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directed.is_empty()
    }

    pub fn directed_edges(&self) -> &[DirectedEdge] {
        &self.directed
    }

    pub fn directed_edge(&self, k: usize) -> DirectedEdge {
        self.directed[k]
    }

    pub fn index_of(&self, u: DirectedEdge) -> Option<usize> {
        self.lookup.get(&u).copied()
    }

    pub fn require(&self, u: DirectedEdge) -> Result<usize> {
        self.index_of(u).ok_or(Error::UnknownDirectedEdge(u.base, u.tip))
    }

    /// σ(u): the same edge traversed the other way.
    pub fn reverse_edge(&self, u: DirectedEdge) -> Result<DirectedEdge> {
        let k = self.require(u)?;
        Ok(self.directed[self.reverse[k]])
    }

    /// Index of σ(u) given the index of u.
    #[inline]
    pub fn reverse_index(&self, k: usize) -> usize {
        self.reverse[k]
    }

    /// Vertex index of the base point π(u).
    #[inline]
    pub fn base_index(&self, k: usize) -> usize {
        self.base[k]
    }

    /// Vertex index of the end point π₊(u).
    #[inline]
    pub fn tip_index(&self, k: usize) -> usize {
        self.tip[k]
    }

    /// Directed edges based at the vertex with index `i`.
    pub fn outgoing(&self, i: usize) -> &[usize] {
        &self.outgoing[i]
    }

    /// Tangent-graph edges as index pairs `(k, l)` with `k < l`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.adjacency
    }

    pub fn is_adjacent(&self, k: usize, l: usize) -> bool {
        self.adjacency.binary_search(&(k.min(l), k.max(l))).is_ok()
    }
}

/// A subgraph `H`, given by vertex and edge label sets.
///
/// Validation against a concrete graph happens where the subgraph is used. The
/// edge set may be any subset of the induced edges; isolated vertices are fine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphSpec {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<(VertexId, VertexId)>,
}

impl SubgraphSpec {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Self {
        SubgraphSpec {
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect(),
        }
    }

    /// Subgraph with the given vertices and every edge of `g` between them.
    pub fn induced(g: &Graph, vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        let edges = g.edges().iter().copied().filter(|(a, b)| vertices.contains(a) && vertices.contains(b)).collect();
        SubgraphSpec { vertices, edges }
    }

    pub fn whole(g: &Graph) -> Self {
        SubgraphSpec::new(g.vertices().iter().copied(), g.edges().iter().copied())
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.edges
    }

    /// Checks `H ⊆ G` and returns the membership mask over vertex indices.
    pub fn validate(&self, g: &Graph) -> Result<Vec<bool>> {
        if self.vertices.is_empty() {
            return Err(Error::InvalidSubgraph("no vertices"));
        }
        let mut mask = vec![false; g.vertex_count()];
        for &v in &self.vertices {
            let i = g.index_of(v).ok_or(Error::InvalidSubgraph("vertex not in graph"))?;
            mask[i] = true;
        }
        for &(a, b) in &self.edges {
            if !g.has_edge(a, b) {
                return Err(Error::InvalidSubgraph("edge not in graph"));
            }
            if !self.vertices.contains(&a) || !self.vertices.contains(&b) {
                return Err(Error::InvalidSubgraph("edge endpoint outside vertex subset"));
            }
        }
        Ok(mask)
    }
}

/// The boundary ∂H of a subgraph together with its inward normal.
#[derive(Debug, Clone)]
pub struct BoundarySpec<'g> {
    /// Boundary vertices inside H.
    pub v_minus: BTreeSet<VertexId>,
    /// Boundary vertices outside H.
    pub v_plus: BTreeSet<VertexId>,
    /// Edges of G with exactly one endpoint in H, canonically ordered.
    pub boundary_edges: Vec<(VertexId, VertexId)>,
    /// Tangent indices (in G's coordinates) of the directed boundary edges.
    pub directed: Vec<usize>,
    /// Inward normal n_H in G's coordinates: +1 on directed boundary edges
    /// based outside H, −1 on those based inside, 0 everywhere else.
    pub normal: VectorField<'g>,
    /// Membership of each vertex index in H.
    pub inside: Vec<bool>,
}

pub fn boundary<'g>(g: &'g Graph, h: &SubgraphSpec) -> Result<BoundarySpec<'g>> {
    let inside = h.validate(g)?;
    let tg = g.tangent();
    let mut v_minus = BTreeSet::new();
    let mut v_plus = BTreeSet::new();
    let mut boundary_edges = Vec::new();
    for &(a, b) in g.edges() {
        let (ia, ib) = (g.index_of(a).unwrap(), g.index_of(b).unwrap());
        if inside[ia] != inside[ib] {
            let (inner, outer) = if inside[ia] { (a, b) } else { (b, a) };
            v_minus.insert(inner);
            v_plus.insert(outer);
            boundary_edges.push((a, b));
        }
    }

    let mut normal = vec![0.0; tg.len()];
    let mut directed = Vec::new();
    for k in 0..tg.len() {
        let (b, t) = (tg.base_index(k), tg.tip_index(k));
        if inside[b] != inside[t] {
            directed.push(k);
            normal[k] = if inside[b] { -1.0 } else { 1.0 };
        }
    }
    let normal = VectorField::new(g, normal)?;
    Ok(BoundarySpec { v_minus, v_plus, boundary_edges, directed, normal, inside })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ScalarField;
    use crate::fixtures::*;
    use crate::operators::gradient;

    #[test]
    fn canonical_orderings() {
        let g = Graph::new(&[4, 2, 3, 1], &[(3, 2), (1, 4), (2, 1), (3, 1), (4, 3)]).unwrap();
        assert_eq!(g.vertices(), &[1, 2, 3, 4]);
        assert_eq!(g.edges(), &[(1, 2), (1, 3), (1, 4), (2, 3), (3, 4)]);
        assert_eq!(g, diag_rect());
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Graph::new(&[], &[]).unwrap_err(), Error::EmptyGraph);
        assert_eq!(Graph::new(&[1, 1], &[]).unwrap_err(), Error::DuplicateVertex(1));
        assert_eq!(Graph::new(&[0, 1], &[]).unwrap_err(), Error::InvalidLabel(0));
        assert_eq!(Graph::new(&[1, 2], &[(1, 1)]).unwrap_err(), Error::SelfLoop(1));
        assert_eq!(Graph::new(&[1, 2], &[(1, 3)]).unwrap_err(), Error::UnknownVertex(3));
        assert_eq!(Graph::new(&[1, 2], &[(1, 2), (2, 1)]).unwrap_err(), Error::DuplicateEdge(1, 2));
    }

    #[test]
    fn disconnected_graphs_are_flagged() {
        let g = Graph::new(&[1, 2, 3, 4], &[(1, 2), (3, 4)]).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.require_connected(), Err(Error::Disconnected));
        assert!(p2().is_connected());
    }

    #[test]
    fn tangent_graph_of_p2() {
        let g = p2();
        let tg = g.tangent();
        assert_eq!(tg.directed_edges(), &[DirectedEdge::new(1, 2), DirectedEdge::new(2, 1)]);
        assert_eq!(tg.edges(), &[(0, 1)]);
    }

    #[test]
    fn tangent_graph_of_triangle_with_pendant() {
        let g = fig1();
        let tg = g.tangent();
        let labels: Vec<(u32, u32)> = tg.directed_edges().iter().map(|u| (u.base, u.tip)).collect();
        assert_eq!(labels, [(1, 2), (1, 3), (1, 4), (2, 1), (2, 3), (3, 1), (3, 2), (4, 1)]);

        // exhaustive application of the adjacency rule over all ordered pairs
        let mut expected = BTreeSet::new();
        for (k, u) in tg.directed_edges().iter().enumerate() {
            for (l, v) in tg.directed_edges().iter().enumerate() {
                if k != l && (u.tip == v.base || u.base == v.tip) {
                    expected.insert((k.min(l), k.max(l)));
                }
            }
        }
        let got: BTreeSet<_> = tg.edges().iter().copied().collect();
        assert_eq!(got, expected);

        // reversal pairs plus two tangent edges per pair of incident edges:
        // degrees 3,2,2,1 give 3+1+1 incident pairs
        assert_eq!(tg.edges().len(), 4 + 2 * 5);

        // spot checks against the drawing: 12–23, 21–32, 14–41, 41–13
        let idx = |a, b| tg.index_of(DirectedEdge::new(a, b)).unwrap();
        assert!(tg.is_adjacent(idx(1, 2), idx(2, 3)));
        assert!(tg.is_adjacent(idx(2, 1), idx(3, 2)));
        assert!(tg.is_adjacent(idx(1, 4), idx(4, 1)));
        assert!(tg.is_adjacent(idx(4, 1), idx(1, 3)));
        assert!(!tg.is_adjacent(idx(1, 2), idx(1, 3)));
        assert!(!tg.is_adjacent(idx(1, 4), idx(2, 3)));
    }

    #[test]
    fn reversal_is_a_fixed_point_free_involution() {
        let g = diag_rect();
        let tg = g.tangent();
        let u = DirectedEdge::new(1, 2);
        assert_eq!(tg.reverse_edge(u).unwrap(), DirectedEdge::new(2, 1));
        let v = DirectedEdge::new(1, 3);
        assert_eq!(tg.reverse_edge(tg.reverse_edge(v).unwrap()).unwrap(), v);
        assert_eq!(tg.reverse_edge(DirectedEdge::new(2, 4)), Err(Error::UnknownDirectedEdge(2, 4)));
        for k in 0..tg.len() {
            let r = tg.reverse_index(k);
            assert_ne!(r, k);
            assert_eq!(tg.reverse_index(r), k);
            assert!(tg.is_adjacent(k, r));
        }
    }

    #[test]
    fn projections_and_reversal_are_homomorphisms() {
        for g in [p2(), k3(), fig1(), diag_rect(), cycle(5), path(4)] {
            let tg = g.tangent();
            assert_eq!(tg.len(), 2 * g.edge_count());
            for k in 0..tg.len() {
                // π∘σ = π₊
                assert_eq!(tg.base_index(tg.reverse_index(k)), tg.tip_index(k));
            }
            for &(k, l) in tg.edges() {
                let (bk, bl) = (g.label(tg.base_index(k)), g.label(tg.base_index(l)));
                assert!(g.has_edge(bk, bl));
                let (tk, tl) = (g.label(tg.tip_index(k)), g.label(tg.tip_index(l)));
                assert!(g.has_edge(tk, tl));
                assert!(tg.is_adjacent(tg.reverse_index(k), tg.reverse_index(l)));
            }
        }
    }

    #[test]
    fn boundary_of_an_edge_in_the_diagonal_rectangle() {
        let g = diag_rect();
        let h = SubgraphSpec::new([1, 2], [(1, 2)]);
        let b = boundary(&g, &h).unwrap();
        assert_eq!(b.v_minus.iter().copied().collect::<Vec<_>>(), [1, 2]);
        assert_eq!(b.v_plus.iter().copied().collect::<Vec<_>>(), [3, 4]);
        assert_eq!(b.boundary_edges, [(1, 3), (1, 4), (2, 3)]);
        let labels: BTreeSet<_> =
            b.directed.iter().map(|&k| g.tangent().directed_edge(k)).map(|u| (u.base, u.tip)).collect();
        let expected: BTreeSet<_> = [(1, 3), (3, 1), (1, 4), (4, 1), (2, 3), (3, 2)].into_iter().collect();
        assert_eq!(labels, expected);
        for &(a, c) in &b.boundary_edges {
            assert!(b.v_minus.contains(&a) ^ b.v_minus.contains(&c));
            assert!(!h.edges().contains(&(a, c)));
        }
        // inward: +1 exactly when the tip lies in H
        let tg = g.tangent();
        for &k in &b.directed {
            let inward = b.inside[tg.tip_index(k)];
            assert_eq!(b.normal.coefficients()[k], if inward { 1.0 } else { -1.0 });
        }
    }

    #[test]
    fn boundary_of_whole_graph_is_empty() {
        let g = diag_rect();
        let b = boundary(&g, &SubgraphSpec::whole(&g)).unwrap();
        assert!(b.boundary_edges.is_empty() && b.v_minus.is_empty() && b.v_plus.is_empty());
        assert!(b.normal.coefficients().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn boundary_of_isolated_vertex() {
        let g = diag_rect();
        let b = boundary(&g, &SubgraphSpec::new([1], [])).unwrap();
        assert_eq!(b.boundary_edges, [(1, 2), (1, 3), (1, 4)]);
    }

    #[test]
    fn invalid_subgraphs() {
        let g = diag_rect();
        assert!(matches!(boundary(&g, &SubgraphSpec::new([1, 7], [])), Err(Error::InvalidSubgraph(_))));
        assert!(matches!(boundary(&g, &SubgraphSpec::new([2, 4], [(2, 4)])), Err(Error::InvalidSubgraph(_))));
        assert!(matches!(boundary(&g, &SubgraphSpec::new([1], [(1, 2)])), Err(Error::InvalidSubgraph(_))));
        assert!(matches!(boundary(&g, &SubgraphSpec::new([], [])), Err(Error::InvalidSubgraph(_))));
    }

    #[test]
    fn gradient_of_indicator_is_the_normal() {
        let g = diag_rect();
        for verts in [&[1u32][..], &[1, 2], &[2, 4], &[1, 2, 3]] {
            let h = SubgraphSpec::new(verts.iter().copied(), []);
            let b = boundary(&g, &h).unwrap();
            let ind = ScalarField::indicator(&g, h.vertices());
            assert_eq!(gradient(&ind).coefficients(), b.normal.coefficients());
        }
    }
}
