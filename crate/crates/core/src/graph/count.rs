use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;

use super::{canonical_form, CanonicalKey, GraphError, GraphKind, UniformGraph};

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Classifies labelled h-vertex subgraphs by isomorphism class, memoising
/// on the edge-indicator mask of the subset.
pub struct Classifier {
    kind: GraphKind,
    h: usize,
    slots: Vec<Vec<usize>>,
    cache: HashMap<u128, CanonicalKey>,
    tuple: Vec<usize>,
}

impl Classifier {
    pub fn new(kind: GraphKind, h: usize) -> Self {
        let slots = kind.slots(h);
        assert!(slots.len() <= 128, "subset size {h} too large for mask classification");
        Classifier { kind, h, slots, cache: HashMap::new(), tuple: vec![0; kind.arity] }
    }

    pub fn subset_size(&self) -> usize {
        self.h
    }

    /// Edge-indicator mask of `g` restricted to `vertices` (in that order).
    pub fn mask(&mut self, g: &UniformGraph, vertices: &[usize]) -> u128 {
        let mut m = 0u128;
        for (i, s) in self.slots.iter().enumerate() {
            for (t, &p) in self.tuple.iter_mut().zip(s) {
                *t = vertices[p];
            }
            if g.has_edge(&self.tuple) {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn graph_of_mask(&self, mask: u128) -> UniformGraph {
        let edges: Vec<&Vec<usize>> = self.slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s).collect();
        UniformGraph::new(self.kind, self.h, edges).expect("mask describes a valid graph")
    }

    pub fn class_of_mask(&mut self, mask: u128) -> &CanonicalKey {
        if !self.cache.contains_key(&mask) {
            let key = canonical_form(&self.graph_of_mask(mask)).key;
            self.cache.insert(mask, key);
        }
        &self.cache[&mask]
    }

    pub fn classify(&mut self, g: &UniformGraph, vertices: &[usize]) -> &CanonicalKey {
        let m = self.mask(g, vertices);
        self.class_of_mask(m)
    }
}

fn check_pair(h: &UniformGraph, g: &UniformGraph) -> Result<(), GraphError> {
    if h.kind() != g.kind() {
        return Err(GraphError::KindMismatch(h.kind(), g.kind()));
    }
    Ok(())
}

/// Number of |V(H)|-subsets of V(G) inducing a copy of H.
pub fn induced_count(h: &UniformGraph, g: &UniformGraph) -> Result<u64, GraphError> {
    check_pair(h, g)?;
    if h.order() > g.order() {
        return Ok(0);
    }
    let target = canonical_form(h).key;
    let mut classifier = Classifier::new(g.kind(), h.order());
    let mut count = 0;
    for subset in (0..g.order()).combinations(h.order()) {
        if *classifier.classify(g, &subset) == target {
            count += 1;
        }
    }
    Ok(count)
}

/// Counts of every isomorphism class among the h-subsets of `g`.
pub fn induced_profile(g: &UniformGraph, h: usize) -> BTreeMap<CanonicalKey, u64> {
    let mut classifier = Classifier::new(g.kind(), h);
    let mut out = BTreeMap::new();
    for subset in (0..g.order()).combinations(h) {
        *out.entry(classifier.classify(g, &subset).clone()).or_insert(0) += 1;
    }
    out
}

/// Induced density `e_H(G) / C(n, h)`.
pub fn density(h: &UniformGraph, g: &UniformGraph) -> Result<BigRational, GraphError> {
    check_pair(h, g)?;
    if h.order() > g.order() {
        return Err(GraphError::HostTooSmall(h.order(), g.order()));
    }
    let c = induced_count(h, g)?;
    Ok(BigRational::new(BigInt::from(c), BigInt::from(binomial(g.order(), h.order()))))
}

/// A density target: one graph, or a union of isomorphism classes on the same
/// vertex count (such as the `m.k` families). Its density is the sum of the
/// members' densities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Target {
    members: Vec<UniformGraph>,
    keys: BTreeSet<CanonicalKey>,
}

impl Target {
    pub fn new(members: Vec<UniformGraph>) -> Result<Self, GraphError> {
        let first = members.first().ok_or(GraphError::BadTarget)?;
        if members.iter().any(|m| m.kind() != first.kind() || m.order() != first.order()) {
            return Err(GraphError::BadTarget);
        }
        let mut keys = BTreeSet::new();
        let mut kept = Vec::new();
        for m in members {
            if keys.insert(canonical_form(&m).key) {
                kept.push(m);
            }
        }
        Ok(Target { members: kept, keys })
    }

    pub fn single(g: UniformGraph) -> Self {
        Target::new(vec![g]).expect("a single graph is a valid target")
    }

    pub fn members(&self) -> &[UniformGraph] {
        &self.members
    }

    pub fn keys(&self) -> &BTreeSet<CanonicalKey> {
        &self.keys
    }

    pub fn contains_key(&self, key: &CanonicalKey) -> bool {
        self.keys.contains(key)
    }

    pub fn order(&self) -> usize {
        self.members[0].order()
    }

    pub fn kind(&self) -> GraphKind {
        self.members[0].kind()
    }

    pub fn induced_count(&self, g: &UniformGraph) -> Result<u64, GraphError> {
        if self.kind() != g.kind() {
            return Err(GraphError::KindMismatch(self.kind(), g.kind()));
        }
        if self.order() > g.order() {
            return Ok(0);
        }
        let mut classifier = Classifier::new(g.kind(), self.order());
        let mut count = 0;
        for subset in (0..g.order()).combinations(self.order()) {
            if self.keys.contains(classifier.classify(g, &subset)) {
                count += 1;
            }
        }
        Ok(count)
    }

    pub fn density(&self, g: &UniformGraph) -> Result<BigRational, GraphError> {
        if self.order() > g.order() {
            return Err(GraphError::HostTooSmall(self.order(), g.order()));
        }
        let c = self.induced_count(g)?;
        Ok(BigRational::new(BigInt::from(c), BigInt::from(binomial(g.order(), self.order()))))
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(" | "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complement, enumerate_graphs, named_graph, ForbiddenFamily, Universe};
    use num_traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(s: &str) -> UniformGraph {
        s.parse().unwrap()
    }

    #[test]
    fn edge_in_k4() {
        let k4 = g("4:123,124,134,234");
        assert_eq!(induced_count(&g("3:123"), &k4).unwrap(), 4);
        assert_eq!(density(&g("3:123"), &k4).unwrap(), BigRational::one());
        assert_eq!(induced_count(&g("4:123,124,134"), &k4).unwrap(), 0);
    }

    #[test]
    fn c5_is_all_four_two() {
        let c5 = g("5:123,234,345,145,125");
        let four_two = g("4:123,124");
        // Oracle: each 4-subset of C5 drops one vertex, which kills exactly
        // the three edges through it, leaving 2 edges.
        let mut manual = 0;
        for drop in 0..5 {
            let keep: Vec<usize> = (0..5).filter(|&v| v != drop).collect();
            if c5.induced(&keep).edge_count() == 2 {
                manual += 1;
            }
        }
        assert_eq!(manual, 5);
        assert_eq!(induced_count(&four_two, &c5).unwrap(), 5);
        assert_eq!(density(&four_two, &c5).unwrap(), BigRational::one());
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        assert!(induced_count(&g("d2:12"), &g("3:123")).is_err());
        assert!(density(&g("4:123"), &g("3:123")).is_err());
    }

    #[test]
    fn densities_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for h in 3..=5 {
            let classes = enumerate_graphs(h, Universe::undirected(3), &ForbiddenFamily::empty()).unwrap();
            for _ in 0..5 {
                let n = rng.gen_range(h..=9);
                let edges: Vec<Vec<usize>> = GraphKind::TRIPLE.slots(n).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
                let host = UniformGraph::new(GraphKind::TRIPLE, n, edges).unwrap();
                let total: BigRational = classes.iter().map(|c| density(c, &host).unwrap()).sum();
                assert_eq!(total, BigRational::one());
            }
        }
    }

    #[test]
    fn complement_preserves_induced_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let classes = enumerate_graphs(4, Universe::undirected(3), &ForbiddenFamily::empty()).unwrap();
        for _ in 0..10 {
            let n = rng.gen_range(4..=8);
            let edges: Vec<Vec<usize>> = GraphKind::TRIPLE.slots(n).into_iter().filter(|_| rng.gen_bool(0.4)).collect();
            let host = UniformGraph::new(GraphKind::TRIPLE, n, edges).unwrap();
            let host_c = complement(&host).unwrap();
            for h in &classes {
                assert_eq!(induced_count(h, &host).unwrap(), induced_count(&complement(h).unwrap(), &host_c).unwrap());
            }
        }
    }

    #[test]
    fn target_family_sums_members() {
        let family = Target::new(crate::graph::named_family("5.6").unwrap()).unwrap();
        assert!(family.members().len() > 1);
        let host = complement(&named_graph("K6").unwrap()).unwrap();
        assert!(family.density(&host).unwrap().is_zero());
        let k7 = named_graph("K7").unwrap();
        let total: BigRational = family.members().iter().map(|m| density(m, &k7).unwrap()).sum();
        assert_eq!(family.density(&k7).unwrap(), total);
    }
}
