use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{canonical_form, CanonicalKey, ForbiddenFamily, GraphError, GraphKind, UniformGraph};

/// The ambient graph universe: kind plus whether digraphs may contain digons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Universe {
    pub kind: GraphKind,
    pub digons: bool,
}

impl Universe {
    pub fn undirected(arity: usize) -> Self {
        Universe { kind: GraphKind { arity, directed: false }, digons: false }
    }

    /// Oriented graphs (no digons).
    pub fn oriented() -> Self {
        Universe { kind: GraphKind::DIGRAPH, digons: false }
    }

    pub fn digraphs_with_digons() -> Self {
        Universe { kind: GraphKind::DIGRAPH, digons: true }
    }

    /// Largest n for which full class enumeration is supported.
    pub fn enumeration_cap(&self) -> usize {
        match (self.kind.directed, self.kind.arity) {
            (true, _) => 5,
            (false, 2) => 8,
            _ => 7,
        }
    }

    pub fn admits(&self, g: &UniformGraph) -> bool {
        g.kind() == self.kind && (self.digons || !g.has_digon())
    }
}

/// One isomorphism class, stored as its canonical representative.
#[derive(Debug, Clone)]
pub struct IsoClass {
    pub key: CanonicalKey,
    pub graph: UniformGraph,
    pub aut_size: u64,
}

/// One canonical representative per isomorphism class of family-free graphs
/// on `n` vertices, sorted by canonical key.
pub fn enumerate_graphs(n: usize, universe: Universe, family: &ForbiddenFamily) -> Result<Vec<UniformGraph>, GraphError> {
    Ok(enumerate_classes(n, universe, family)?.into_iter().map(|c| c.graph).collect())
}

/// Like [`enumerate_graphs`] but keeps keys and automorphism counts.
///
/// Classes on `k` vertices are extended by one vertex in every possible way;
/// candidates containing a forbidden member are dropped before canonisation.
/// Both containment modes are hereditary, so every family-free class on `k+1`
/// vertices arises from a family-free class on `k`.
pub fn enumerate_classes(n: usize, universe: Universe, family: &ForbiddenFamily) -> Result<Vec<IsoClass>, GraphError> {
    let cap = universe.enumeration_cap();
    if n > cap {
        return Err(GraphError::CapExceeded { what: "enumeration", cap, n });
    }
    family.check_kind(universe.kind)?;
    let base = UniformGraph::empty(universe.kind, 0)?;
    if !family.is_free(&base) {
        return Ok(Vec::new());
    }
    let mut level: Vec<IsoClass> = vec![IsoClass { key: canonical_form(&base).key, graph: base, aut_size: 1 }];
    for k in 0..n {
        let extended: Vec<Vec<(CanonicalKey, UniformGraph, u64)>> = level
            .par_iter()
            .map(|parent| {
                extensions(&parent.graph, universe)
                    .into_iter()
                    .filter(|g| family.is_free(g))
                    .map(|g| {
                        let cf = canonical_form(&g);
                        let rep = g.relabel(&cf.labeling);
                        (cf.key, rep, cf.aut_size)
                    })
                    .collect()
            })
            .collect();
        let mut merged: BTreeMap<CanonicalKey, (UniformGraph, u64)> = BTreeMap::new();
        for batch in extended {
            for (key, g, aut) in batch {
                merged.entry(key).or_insert((g, aut));
            }
        }
        level = merged.into_iter().map(|(key, (graph, aut_size))| IsoClass { key, graph, aut_size }).collect();
        debug_assert!(level.iter().all(|c| c.graph.order() == k + 1));
    }
    Ok(level)
}

/// Every graph obtained by adding vertex `n` to `g` with an arbitrary link.
fn extensions(g: &UniformGraph, universe: Universe) -> Vec<UniformGraph> {
    let n = g.order();
    let kind = g.kind();
    let base: Vec<Vec<usize>> = g.edges().map(<[usize]>::to_vec).collect();
    let mut out = Vec::new();
    if kind.directed {
        let choices: usize = if universe.digons { 4 } else { 3 };
        let total = choices.pow(n as u32);
        for code in 0..total {
            let mut edges = base.clone();
            let mut c = code;
            for u in 0..n {
                match c % choices {
                    1 => edges.push(vec![u, n]),
                    2 => edges.push(vec![n, u]),
                    3 => {
                        edges.push(vec![u, n]);
                        edges.push(vec![n, u]);
                    }
                    _ => {}
                }
                c /= choices;
            }
            out.push(UniformGraph::new(kind, n + 1, edges).expect("valid extension"));
        }
    } else {
        let link: Vec<Vec<usize>> = super::CombinationsVec::combinations_vec(0..n, kind.arity - 1);
        assert!(link.len() < 64, "link too large to enumerate");
        for mask in 0u64..(1u64 << link.len()) {
            let mut edges = base.clone();
            for (i, l) in link.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    let mut e = l.clone();
                    e.push(n);
                    edges.push(e);
                }
            }
            out.push(UniformGraph::new(kind, n + 1, edges).expect("valid extension"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{contains, named_graph, ContainMode};
    use std::collections::BTreeSet;

    fn all_labelled(kind: GraphKind, n: usize, digons: bool) -> Vec<UniformGraph> {
        let slots = kind.slots(n);
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << slots.len()) {
            let edges: Vec<&Vec<usize>> = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s).collect();
            let g = UniformGraph::new(kind, n, edges).unwrap();
            if digons || !g.has_digon() {
                out.push(g);
            }
        }
        out
    }

    fn brute_keys(kind: GraphKind, n: usize, digons: bool, family: &ForbiddenFamily) -> BTreeSet<CanonicalKey> {
        all_labelled(kind, n, digons).into_iter().filter(|g| family.is_free(g)).map(|g| canonical_form(&g).key).collect()
    }

    #[test]
    fn known_class_counts() {
        let none = ForbiddenFamily::empty();
        let counts: Vec<usize> = (0..=6).map(|n| enumerate_graphs(n, Universe::undirected(3), &none).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5, 34, 2136]);
        assert_eq!(enumerate_graphs(3, Universe::oriented(), &none).unwrap().len(), 7);
        assert_eq!(enumerate_graphs(4, Universe::oriented(), &none).unwrap().len(), 42);
        assert_eq!(enumerate_graphs(4, Universe::undirected(2), &none).unwrap().len(), 11);
    }

    #[test]
    fn matches_filter_then_dedup() {
        let k4 = ForbiddenFamily::subgraphs([named_graph("K4").unwrap()]);
        let ind41 = ForbiddenFamily::new(vec![("4:123".parse().unwrap(), ContainMode::Induced)]);
        for n in 0..=5 {
            for fam in [&ForbiddenFamily::empty(), &k4, &ind41] {
                let got: BTreeSet<CanonicalKey> = enumerate_classes(n, Universe::undirected(3), fam).unwrap().into_iter().map(|c| c.key).collect();
                assert_eq!(got, brute_keys(GraphKind::TRIPLE, n, false, fam), "n = {n}");
            }
        }
        let s3 = ForbiddenFamily::subgraphs(["d3:12,13".parse().unwrap()]);
        for n in 0..=4 {
            for fam in [&ForbiddenFamily::empty(), &s3] {
                let got: BTreeSet<CanonicalKey> = enumerate_classes(n, Universe::oriented(), fam).unwrap().into_iter().map(|c| c.key).collect();
                assert_eq!(got, brute_keys(GraphKind::DIGRAPH, n, false, fam));
            }
            let got: BTreeSet<CanonicalKey> =
                enumerate_classes(n, Universe::digraphs_with_digons(), &ForbiddenFamily::empty()).unwrap().into_iter().map(|c| c.key).collect();
            assert_eq!(got, brute_keys(GraphKind::DIGRAPH, n, true, &ForbiddenFamily::empty()));
        }
    }

    #[test]
    fn k4_free_on_five_vertices() {
        let k4 = named_graph("K4").unwrap();
        let fam = ForbiddenFamily::subgraphs([k4.clone()]);
        let free = enumerate_graphs(5, Universe::undirected(3), &fam).unwrap();
        let filtered: Vec<UniformGraph> = enumerate_graphs(5, Universe::undirected(3), &ForbiddenFamily::empty())
            .unwrap()
            .into_iter()
            .filter(|g| !contains(g, &k4, ContainMode::Subgraph))
            .collect();
        assert_eq!(free, filtered);
        assert!(!free.is_empty());
    }

    #[test]
    fn orbit_stabiliser() {
        // Σ n!/|Aut| over classes = number of labelled graphs.
        let classes = enumerate_classes(5, Universe::undirected(3), &ForbiddenFamily::empty()).unwrap();
        let total: u64 = classes.iter().map(|c| 120 / c.aut_size).sum();
        assert_eq!(total, 1 << 10);
        let classes = enumerate_classes(4, Universe::oriented(), &ForbiddenFamily::empty()).unwrap();
        let total: u64 = classes.iter().map(|c| 24 / c.aut_size).sum();
        assert_eq!(total, 3u64.pow(6));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_graphs(8, Universe::undirected(3), &ForbiddenFamily::empty()),
            Err(GraphError::CapExceeded { .. })
        ));
        assert!(enumerate_graphs(6, Universe::oriented(), &ForbiddenFamily::empty()).is_err());
    }
}
