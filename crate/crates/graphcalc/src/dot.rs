//! Graphviz DOT output. Presentation only.

use std::fmt::Write;

use graphcalc_core::{Graph, SubgraphSpec};

/// The graph itself; vertices and edges of `highlight` are drawn bold.
pub fn graph_dot(g: &Graph, highlight: Option<&SubgraphSpec>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for &v in g.vertices() {
        let bold = highlight.is_some_and(|h| h.vertices().contains(&v));
        let style = if bold { " [style=bold, color=blue]" } else { "" };
        let _ = writeln!(out, "  \"{v}\"{style};");
    }
    for &(a, b) in g.edges() {
        let bold = highlight.is_some_and(|h| h.edges().contains(&(a, b)));
        let style = if bold { " [style=bold, color=blue]" } else { "" };
        let _ = writeln!(out, "  \"{a}\" -- \"{b}\"{style};");
    }
    out.push_str("}\n");
    out
}

/// The tangent graph: one node per directed edge, labelled `ij`.
pub fn tangent_dot(g: &Graph) -> String {
    let tg = g.tangent();
    let mut out = String::from("graph T {\n  node [shape=box];\n");
    for u in tg.directed_edges() {
        let _ = writeln!(out, "  \"{}->{}\" [label=\"{}{}\"];", u.base, u.tip, u.base, u.tip);
    }
    for &(k, l) in tg.edges() {
        let (u, w) = (tg.directed_edge(k), tg.directed_edge(l));
        // reversal pairs are dashed to separate them from head-to-tail pairs
        let style = if u.reversed() == w { " [style=dashed]" } else { "" };
        let _ = writeln!(out, "  \"{}->{}\" -- \"{}->{}\"{style};", u.base, u.tip, w.base, w.tip);
    }
    out.push_str("}\n");
    out
}
