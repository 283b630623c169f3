use itertools::Itertools;

use super::{GraphError, GraphKind, UniformGraph};

/// All r-sets not present in `g`.
pub fn complement(g: &UniformGraph) -> Result<UniformGraph, GraphError> {
    if g.is_directed() {
        return Err(GraphError::Directed);
    }
    let missing: Vec<Vec<usize>> = (0..g.order()).combinations(g.arity()).filter(|t| !g.has_edge(t)).collect();
    UniformGraph::new(g.kind(), g.order(), missing)
}

/// The 3-graph whose edges are the triples inducing an out-star S3 in `d`.
pub fn dto3_transform(d: &UniformGraph) -> Result<UniformGraph, GraphError> {
    if !d.is_directed() {
        return Err(GraphError::KindMismatch(d.kind(), GraphKind::DIGRAPH));
    }
    if let Some(e) = d.edges().find(|e| d.has_edge(&[e[1], e[0]])) {
        return Err(GraphError::Digon(e[0] + 1, e[1] + 1));
    }
    let mut edges = Vec::new();
    for t in (0..d.order()).combinations(3) {
        let arcs: Vec<(usize, usize)> =
            [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)].into_iter().filter(|&(a, b)| d.has_edge(&[t[a], t[b]])).collect();
        if arcs.len() == 2 && arcs[0].0 == arcs[1].0 {
            edges.push(t);
        }
    }
    UniformGraph::new(GraphKind::TRIPLE, d.order(), edges)
}
