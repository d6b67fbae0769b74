//! Seeded generators for graphs, subgraphs and fields.

use graphcalc_core::{Graph, ScalarField, SubgraphSpec, VectorField, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected graph on vertices 1..=n with between n−1 and `max_edges` edges:
/// a random spanning tree plus uniformly chosen extra edges.
pub fn connected_graph(rng: &mut impl Rng, n: u32, max_edges: usize) -> Graph {
    assert!(n >= 1);
    let vertices: Vec<VertexId> = (1..=n).collect();
    let mut order = vertices.clone();
    order.shuffle(rng);
    let mut edges: Vec<(VertexId, VertexId)> = (1..order.len())
        .map(|i| {
            let parent = order[rng.random_range(0..i)];
            (parent.min(order[i]), parent.max(order[i]))
        })
        .collect();
    let tree = edges.len();
    let complete = (n as usize) * (n as usize - 1) / 2;
    let target = rng.random_range(tree..=max_edges.clamp(tree, complete));
    let mut rest: Vec<(VertexId, VertexId)> =
        (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).filter(|e| !edges.contains(e)).collect();
    rest.shuffle(rng);
    edges.extend(rest.into_iter().take(target - tree));
    Graph::new(&vertices, &edges).expect("generated graph is valid")
}

/// Non-empty vertex subset (each vertex with probability 1/2) with each
/// induced edge kept with probability 1/2.
pub fn subgraph(rng: &mut impl Rng, g: &Graph) -> SubgraphSpec {
    let mut vertices: Vec<VertexId> = g.vertices().iter().copied().filter(|_| rng.random_bool(0.5)).collect();
    if vertices.is_empty() {
        vertices.push(g.vertices()[rng.random_range(0..g.vertex_count())]);
    }
    let edges: Vec<_> = g
        .edges()
        .iter()
        .copied()
        .filter(|(a, b)| vertices.contains(a) && vertices.contains(b))
        .filter(|_| rng.random_bool(0.5))
        .collect();
    SubgraphSpec::new(vertices, edges)
}

/// Uniform coefficients in [−1, 1).
pub fn vector_field<'g>(rng: &mut impl Rng, g: &'g Graph) -> VectorField<'g> {
    VectorField::new(g, (0..g.tangent().len()).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
}

pub fn scalar_field<'g>(rng: &mut impl Rng, g: &'g Graph) -> ScalarField<'g> {
    ScalarField::new(g, (0..g.vertex_count()).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
}

/// Integer coefficients in [−5, 5].
pub fn integer_vector_field<'g>(rng: &mut impl Rng, g: &'g Graph) -> VectorField<'g> {
    VectorField::new(g, (0..g.tangent().len()).map(|_| f64::from(rng.random_range(-5..=5))).collect()).unwrap()
}

pub fn integer_scalar_field<'g>(rng: &mut impl Rng, g: &'g Graph) -> ScalarField<'g> {
    ScalarField::new(g, (0..g.vertex_count()).map(|_| f64::from(rng.random_range(-5..=5))).collect()).unwrap()
}

pub fn vertex(rng: &mut impl Rng, g: &Graph) -> VertexId {
    g.vertices()[rng.random_range(0..g.vertex_count())]
}
