use std::cmp::Ordering;
use std::fmt;

use super::{GraphKind, UniformGraph};

/// Isomorphism-class key: the lexicographically smallest edge-indicator
/// bitstring over all vertex orderings, with bits in [`GraphKind::slots`] order.
///
/// Keys compare by kind, then order, then bitstring.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    kind: GraphKind,
    order: usize,
    /// MSB-first packing, so `Vec<u64>` ordering is bitstring ordering.
    bits: Vec<u64>,
}

impl CanonicalKey {
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bit_len(&self) -> usize {
        self.kind.slot_count(self.order)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i / 64] >> (63 - i % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// The canonical representative (vertex `i` sits at canonical position `i`).
    pub fn to_graph(&self) -> UniformGraph {
        let slots = self.kind.slots(self.order);
        let edges: Vec<Vec<usize>> = slots.into_iter().enumerate().filter(|(i, _)| self.bit(*i)).map(|(_, s)| s).collect();
        UniformGraph::new(self.kind, self.order, edges).expect("key bits describe a valid graph")
    }

    /// Compact text form `<d?><n>:<hex>`, used in certificates.
    pub fn to_hex(&self) -> String {
        let nbits = self.bit_len();
        let mut s = String::new();
        if self.kind.directed {
            s.push('d');
        } else if self.kind.arity == 2 {
            s.push('p');
        }
        s.push_str(&format!("{}:", self.order));
        let nibbles = nbits.div_ceil(4);
        for k in 0..nibbles {
            let mut v = 0u8;
            for b in 0..4 {
                let i = 4 * k + b;
                v <<= 1;
                if i < nbits && self.bit(i) {
                    v |= 1;
                }
            }
            s.push(char::from_digit(v as u32, 16).unwrap());
        }
        s
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    /// Number of automorphisms (fixing the labelled prefix, if any).
    pub aut_size: u64,
    /// `labeling[v]` is the canonical position of input vertex `v`.
    pub labeling: Vec<usize>,
}

impl CanonicalForm {
    pub fn graph(&self) -> UniformGraph {
        self.key.to_graph()
    }
}

pub fn canonical_form(g: &UniformGraph) -> CanonicalForm {
    canonical_form_fixing(g, 0)
}

/// Canonical form where vertices `0..fixed` keep their positions (flags).
/// Only the remaining vertices are permuted.
pub fn canonical_form_fixing(g: &UniformGraph, fixed: usize) -> CanonicalForm {
    assert!(fixed <= g.order());
    let n = g.order();
    let initial: Vec<usize> = (0..n).map(|v| v.min(fixed)).collect();
    let colors = refine(g, initial);

    // Positions are filled cell by cell, cells ordered by color.
    let mut position_color: Vec<usize> = colors.clone();
    position_color.sort_unstable();

    let slots = g.kind().slots_by_position(n);
    let mut offsets = Vec::with_capacity(n + 1);
    let mut acc = 0;
    for s in &slots {
        offsets.push(acc);
        acc += s.len();
    }
    offsets.push(acc);
    let words = acc.div_ceil(64).max(1);

    let mut search = Search {
        g,
        colors,
        position_color,
        slots,
        offsets,
        placed: vec![usize::MAX; n],
        used: vec![false; n],
        cur: vec![0; words],
        best: None,
        best_placed: Vec::new(),
        count: 0,
        tuple: vec![0; g.arity()],
    };
    search.dfs(0);

    let bits = search.best.take().unwrap_or_else(|| vec![0; words]);
    let mut labeling = vec![0; n];
    for (pos, &v) in search.best_placed.iter().enumerate() {
        labeling[v] = pos;
    }
    CanonicalForm {
        key: CanonicalKey { kind: g.kind(), order: n, bits },
        aut_size: search.count.max(1),
        labeling,
    }
}

struct Search<'a> {
    g: &'a UniformGraph,
    colors: Vec<usize>,
    position_color: Vec<usize>,
    slots: Vec<Vec<Vec<usize>>>,
    offsets: Vec<usize>,
    placed: Vec<usize>,
    used: Vec<bool>,
    cur: Vec<u64>,
    best: Option<Vec<u64>>,
    best_placed: Vec<usize>,
    count: u64,
    tuple: Vec<usize>,
}

impl Search<'_> {
    fn dfs(&mut self, p: usize) {
        let n = self.placed.len();
        if p == n {
            match self.best.as_ref().map(|b| self.cur.cmp(b)) {
                None | Some(Ordering::Less) => {
                    self.best = Some(self.cur.clone());
                    self.best_placed = self.placed.clone();
                    self.count = 1;
                }
                Some(Ordering::Equal) => self.count += 1,
                Some(Ordering::Greater) => {}
            }
            return;
        }
        let want = self.position_color[p];
        for v in 0..n {
            if self.used[v] || self.colors[v] != want {
                continue;
            }
            self.placed[p] = v;
            self.used[v] = true;
            self.write_bits(p);
            let prune = match &self.best {
                Some(b) => cmp_prefix(&self.cur, b, self.offsets[p + 1]) == Ordering::Greater,
                None => false,
            };
            if !prune {
                self.dfs(p + 1);
            }
            self.used[v] = false;
        }
    }

    fn write_bits(&mut self, p: usize) {
        let start = self.offsets[p];
        for (k, slot) in self.slots[p].iter().enumerate() {
            for (t, &q) in self.tuple.iter_mut().zip(slot) {
                *t = self.placed[q];
            }
            let i = start + k;
            let mask = 1u64 << (63 - i % 64);
            if self.g.has_edge(&self.tuple) {
                self.cur[i / 64] |= mask;
            } else {
                self.cur[i / 64] &= !mask;
            }
        }
    }
}

fn cmp_prefix(a: &[u64], b: &[u64], nbits: usize) -> Ordering {
    let full = nbits / 64;
    match a[..full].cmp(&b[..full]) {
        Ordering::Equal => {}
        o => return o,
    }
    let rem = nbits % 64;
    if rem == 0 {
        return Ordering::Equal;
    }
    let mask = !0u64 << (64 - rem);
    (a[full] & mask).cmp(&(b[full] & mask))
}

/// Colour refinement: repeatedly split colour classes by the multiset of
/// colours seen through incident edges. Colour ids are ranks of sorted
/// signatures, so the result is invariant under relabelling.
fn refine(g: &UniformGraph, initial: Vec<usize>) -> Vec<usize> {
    let n = g.order();
    let mut incident: Vec<Vec<(bool, Vec<usize>)>> = vec![Vec::new(); n];
    for e in g.edges() {
        if g.is_directed() {
            incident[e[0]].push((true, vec![e[1]]));
            incident[e[1]].push((false, vec![e[0]]));
        } else {
            for (i, &v) in e.iter().enumerate() {
                let others: Vec<usize> = e.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &u)| u).collect();
                incident[v].push((true, others));
            }
        }
    }
    let mut colors = rank(&initial);
    let mut classes = count_distinct(&colors);
    loop {
        let sigs: Vec<(usize, Vec<(bool, Vec<usize>)>)> = (0..n)
            .map(|v| {
                let mut s: Vec<(bool, Vec<usize>)> = incident[v]
                    .iter()
                    .map(|(dir, others)| {
                        let mut c: Vec<usize> = others.iter().map(|&u| colors[u]).collect();
                        c.sort_unstable();
                        (*dir, c)
                    })
                    .collect();
                s.sort_unstable();
                (colors[v], s)
            })
            .collect();
        let next = rank(&sigs);
        let next_classes = count_distinct(&next);
        colors = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    colors
}

fn rank<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = values.to_vec();
    sorted.sort();
    sorted.dedup();
    values.iter().map(|v| sorted.binary_search(v).unwrap()).collect()
}

fn count_distinct(c: &[usize]) -> usize {
    let mut s = c.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CombinationsVec;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn k4_minus() -> UniformGraph {
        "4:123,124,134".parse().unwrap()
    }

    #[test]
    fn relabelled_k4_minus_has_same_key() {
        let base = canonical_form(&k4_minus()).key;
        let mut perm: Vec<usize> = (0..4).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..24 {
            perm.shuffle(&mut rng);
            assert_eq!(canonical_form(&k4_minus().relabel(&perm)).key, base);
        }
    }

    #[test]
    fn sixteen_labelled_graphs_on_four_vertices_give_five_keys() {
        let triples = (0..4).combinations_vec(3);
        let mut keys = BTreeSet::new();
        for mask in 0u32..16 {
            let edges: Vec<Vec<usize>> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| triples[i].clone()).collect();
            let g = UniformGraph::new(GraphKind::TRIPLE, 4, edges).unwrap();
            keys.insert(canonical_form(&g).key);
        }
        assert_eq!(keys.len(), 5);
    }

    #[test]
    fn empty_graph_key_is_zero_with_full_symmetric_group() {
        let mut fact = 1u64;
        for n in 0..=7 {
            if n > 0 {
                fact *= n as u64;
            }
            let cf = canonical_form(&UniformGraph::empty(GraphKind::TRIPLE, n).unwrap());
            assert!(cf.key.is_zero());
            assert_eq!(cf.aut_size, fact, "n = {n}");
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(canonical_form(&k4_minus()).aut_size, 6);
        let c5: UniformGraph = "5:123,234,345,145,125".parse().unwrap();
        assert_eq!(canonical_form(&c5).aut_size, 10);
        let s3: UniformGraph = "d3:12,13".parse().unwrap();
        assert_eq!(canonical_form(&s3).aut_size, 2);
        let c3: UniformGraph = "d3:12,23,31".parse().unwrap();
        assert_eq!(canonical_form(&c3).aut_size, 3);
    }

    #[test]
    fn directed_orientation_matters() {
        let a: UniformGraph = "d3:12,13".parse().unwrap();
        let b: UniformGraph = "d3:21,31".parse().unwrap();
        assert_ne!(canonical_form(&a).key, canonical_form(&b).key);
    }

    #[test]
    fn labeling_maps_to_canonical_graph() {
        let g: UniformGraph = "6:123,345,256,146".parse().unwrap();
        let cf = canonical_form(&g);
        assert_eq!(g.relabel(&cf.labeling), cf.graph());
    }

    #[test]
    fn fixed_prefix_is_respected() {
        // Labelled vertex 1 is the centre in one flag and a leaf in the other.
        let a: UniformGraph = "d3:12,13".parse().unwrap();
        let b: UniformGraph = "d3:21,23".parse().unwrap();
        assert_eq!(canonical_form(&a).key, canonical_form(&b).key);
        assert_ne!(canonical_form_fixing(&a, 1).key, canonical_form_fixing(&b, 1).key);
        let cf = canonical_form_fixing(&a, 1);
        assert_eq!(cf.labeling[0], 0);
        assert_eq!(cf.aut_size, 2);
    }

    #[test]
    fn random_relabelings_are_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..100 {
            let n = rng.gen_range(3..=7);
            let kind = if rng.gen_bool(0.3) { GraphKind::DIGRAPH } else { GraphKind::TRIPLE };
            let edges: Vec<Vec<usize>> = kind.slots(n).into_iter().filter(|_| rng.gen_bool(0.4)).collect();
            let g = UniformGraph::new(kind, n, edges).unwrap();
            let cf = canonical_form(&g);
            let mut perm: Vec<usize> = (0..n).collect();
            for _ in 0..100 {
                perm.shuffle(&mut rng);
                let other = canonical_form(&g.relabel(&perm));
                assert_eq!(other.key, cf.key);
                assert_eq!(other.aut_size, cf.aut_size);
            }
        }
    }
}
