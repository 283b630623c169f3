//! Small r-uniform graphs (r = 2, 3) and directed 2-graphs.
//!
//! A [`UniformGraph`] is immutable once built. Vertices are `0..order`
//! internally; the text format uses 1-based symbols.

mod canon;
mod contain;
mod count;
mod enumerate;
mod named;
mod transform;

pub use canon::{canonical_form, canonical_form_fixing, CanonicalForm, CanonicalKey};
pub use contain::{contains, ContainMode, ForbiddenFamily};
pub use count::{binomial, density, induced_count, induced_profile, Classifier, Target};
pub use enumerate::{enumerate_classes, enumerate_graphs, IsoClass, Universe};
pub use named::{named_family, named_graph};
pub use transform::{complement, dto3_transform};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest vertex count a [`UniformGraph`] may have.
pub const MAX_ORDER: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unsupported arity {0} (expected 2 or 3)")]
    Arity(usize),
    #[error("directed graphs must have arity 2")]
    DirectedArity,
    #[error("order {0} exceeds the maximum of {MAX_ORDER}")]
    TooLarge(usize),
    #[error("edge {0:?} has {1} vertices, expected {2}")]
    EdgeSize(Vec<usize>, usize, usize),
    #[error("edge {0:?} uses a vertex outside 0..{1}")]
    VertexOutOfRange(Vec<usize>, usize),
    #[error("edge {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("graph kinds differ: {0} vs {1}")]
    KindMismatch(GraphKind, GraphKind),
    #[error("pattern graph has {0} vertices but host has only {1}")]
    HostTooSmall(usize, usize),
    #[error("operation requires an undirected graph")]
    Directed,
    #[error("digraph contains the digon {0}<->{1}")]
    Digon(usize, usize),
    #[error("{what} is capped at n = {cap}, got {n}")]
    CapExceeded { what: &'static str, cap: usize, n: usize },
    #[error("cannot parse graph {0:?}: {1}")]
    Parse(String, String),
    #[error("unknown graph name {0:?}")]
    UnknownName(String),
    #[error("target family is empty or mixes orders/kinds")]
    BadTarget,
}

/// Arity and directedness of a graph universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphKind {
    pub arity: usize,
    pub directed: bool,
}

impl GraphKind {
    pub const TRIPLE: GraphKind = GraphKind { arity: 3, directed: false };
    pub const PAIR: GraphKind = GraphKind { arity: 2, directed: false };
    pub const DIGRAPH: GraphKind = GraphKind { arity: 2, directed: true };

    pub fn new(arity: usize, directed: bool) -> Result<Self, GraphError> {
        if !(2..=3).contains(&arity) {
            return Err(GraphError::Arity(arity));
        }
        if directed && arity != 2 {
            return Err(GraphError::DirectedArity);
        }
        Ok(GraphKind { arity, directed })
    }

    /// Number of edge slots spanned by vertices `0..n`.
    pub fn slot_count(&self, n: usize) -> usize {
        if self.directed {
            n * n.saturating_sub(1)
        } else {
            binomial(n, self.arity) as usize
        }
    }

    /// All edge slots over positions `0..n`, grouped by their largest position.
    ///
    /// Undirected slots are listed in colex order; the directed slots completed
    /// at position `p` are `(0,p), (p,0), (1,p), (p,1), ...`. Concatenating the
    /// groups gives the bit order used by canonical keys and subset masks.
    pub fn slots_by_position(&self, n: usize) -> Vec<Vec<Vec<usize>>> {
        (0..n)
            .map(|p| {
                let mut out = Vec::new();
                if self.directed {
                    for a in 0..p {
                        out.push(vec![a, p]);
                        out.push(vec![p, a]);
                    }
                } else if self.arity == 2 {
                    for a in 0..p {
                        out.push(vec![a, p]);
                    }
                } else {
                    for b in 1..p {
                        for a in 0..b {
                            out.push(vec![a, b, p]);
                        }
                    }
                }
                out
            })
            .collect()
    }

    pub fn slots(&self, n: usize) -> Vec<Vec<usize>> {
        self.slots_by_position(n).into_iter().flatten().collect()
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.directed {
            write!(f, "directed 2-graph")
        } else {
            write!(f, "{}-graph", self.arity)
        }
    }
}

/// An r-uniform graph, or an oriented/directed 2-graph.
#[derive(Clone)]
pub struct UniformGraph {
    kind: GraphKind,
    order: usize,
    /// Flattened edge tuples, `arity` entries each, sorted lexicographically.
    edges: Vec<usize>,
    /// Indicator over `order^arity` ordered tuples. Undirected edges set every
    /// permutation so lookups never need to sort.
    adj: Vec<u64>,
}

impl UniformGraph {
    pub fn new<I, E>(kind: GraphKind, order: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        let kind = GraphKind::new(kind.arity, kind.directed)?;
        if order > MAX_ORDER {
            return Err(GraphError::TooLarge(order));
        }
        let r = kind.arity;
        let mut tuples: Vec<Vec<usize>> = Vec::new();
        for e in edges {
            let e = e.as_ref();
            if e.len() != r {
                return Err(GraphError::EdgeSize(e.to_vec(), e.len(), r));
            }
            if e.iter().any(|&v| v >= order) {
                return Err(GraphError::VertexOutOfRange(e.to_vec(), order));
            }
            let mut t = e.to_vec();
            let mut sorted = t.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(GraphError::RepeatedVertex(e.to_vec()));
            }
            if !kind.directed {
                t = sorted;
            }
            tuples.push(t);
        }
        tuples.sort_unstable();
        tuples.dedup();
        Ok(Self::from_sorted_tuples(kind, order, tuples))
    }

    fn from_sorted_tuples(kind: GraphKind, order: usize, tuples: Vec<Vec<usize>>) -> Self {
        let r = kind.arity;
        let cells = order.pow(r as u32);
        let mut g = UniformGraph {
            kind,
            order,
            edges: Vec::with_capacity(tuples.len() * r),
            adj: vec![0; cells.div_ceil(64)],
        };
        for t in &tuples {
            g.edges.extend_from_slice(t);
            if kind.directed {
                g.set_adj(t);
            } else if r == 2 {
                g.set_adj(&[t[0], t[1]]);
                g.set_adj(&[t[1], t[0]]);
            } else {
                let (a, b, c) = (t[0], t[1], t[2]);
                for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                    g.set_adj(&p);
                }
            }
        }
        g
    }

    fn cell(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &v| acc * self.order + v)
    }

    fn set_adj(&mut self, t: &[usize]) {
        let i = self.cell(t);
        self.adj[i / 64] |= 1 << (i % 64);
    }

    pub fn empty(kind: GraphKind, order: usize) -> Result<Self, GraphError> {
        Self::new(kind, order, std::iter::empty::<Vec<usize>>())
    }

    /// Complete undirected r-graph on `order` vertices.
    pub fn complete(kind: GraphKind, order: usize) -> Result<Self, GraphError> {
        if kind.directed {
            return Err(GraphError::Directed);
        }
        Self::new(kind, order, (0..order).combinations_vec(kind.arity))
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn arity(&self) -> usize {
        self.kind.arity
    }

    pub fn is_directed(&self) -> bool {
        self.kind.directed
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.kind.arity
    }

    pub fn edges(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.edges.chunks(self.kind.arity)
    }

    /// Edge test for a tuple of distinct in-range vertices. Undirected tuples
    /// may be given in any order; directed tuples are `(tail, head)`.
    #[inline]
    pub fn has_edge(&self, t: &[usize]) -> bool {
        debug_assert_eq!(t.len(), self.kind.arity);
        let i = self.cell(t);
        self.adj[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn has_digon(&self) -> bool {
        self.kind.directed && self.edges().any(|e| self.has_edge(&[e[1], e[0]]))
    }

    /// Graph induced on `vertices`, relabelled so `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> UniformGraph {
        let slots = self.kind.slots(vertices.len());
        let mut tuples = Vec::new();
        let mut host = vec![0; self.kind.arity];
        for s in slots {
            for (h, &p) in host.iter_mut().zip(&s) {
                *h = vertices[p];
            }
            if self.has_edge(&host) {
                tuples.push(s);
            }
        }
        tuples.sort_unstable();
        Self::from_sorted_tuples(self.kind, vertices.len(), tuples)
    }

    /// Relabel: old vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> UniformGraph {
        assert_eq!(perm.len(), self.order);
        let edges: Vec<Vec<usize>> = self.edges().map(|e| e.iter().map(|&v| perm[v]).collect()).collect();
        UniformGraph::new(self.kind, self.order, edges).expect("relabelling preserves validity")
    }

    /// Parse the text format, using `default_arity` when no edge fixes the arity.
    pub fn parse_with_arity(s: &str, default_arity: usize) -> Result<Self, GraphError> {
        let err = |m: &str| GraphError::Parse(s.to_string(), m.to_string());
        let t = s.trim();
        let (directed, body) = match t.strip_prefix('d') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (n, edges) = body.split_once(':').ok_or_else(|| err("missing ':'"))?;
        let order: usize = n.trim().parse().map_err(|_| err("bad vertex count"))?;
        let mut tuples = Vec::new();
        for tok in edges.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let tuple = tok
                .chars()
                .map(|c| symbol_to_vertex(c).ok_or_else(|| err("bad vertex symbol")))
                .collect::<Result<Vec<_>, _>>()?;
            tuples.push(tuple);
        }
        let arity = if directed {
            2
        } else {
            tuples.first().map_or(default_arity, Vec::len)
        };
        let kind = GraphKind::new(arity, directed)?;
        if order > 35 {
            return Err(err("text format supports at most 35 vertices"));
        }
        UniformGraph::new(kind, order, tuples)
    }
}

pub(crate) fn vertex_symbol(v: usize) -> char {
    match v {
        0..=8 => (b'1' + v as u8) as char,
        9..=34 => (b'a' + (v - 9) as u8) as char,
        _ => '?',
    }
}

pub(crate) fn symbol_to_vertex(c: char) -> Option<usize> {
    match c {
        '1'..='9' => Some(c as usize - '1' as usize),
        'a'..='z' => Some(c as usize - 'a' as usize + 9),
        _ => None,
    }
}

impl FromStr for UniformGraph {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_with_arity(s, 3)
    }
}

impl fmt::Display for UniformGraph {
    /// `n:e1,e2,...` with 1-based symbols; `d` prefix for directed graphs.
    /// Graphs with more than 35 vertices fall back to `n:[...]` lists.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.directed {
            write!(f, "d")?;
        }
        write!(f, "{}:", self.order)?;
        let wide = self.order > 35;
        for (i, e) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if wide {
                let parts: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
                write!(f, "[{}]", parts.join(" "))?;
            } else {
                for &v in e {
                    write!(f, "{}", vertex_symbol(v))?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniformGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniformGraph({self})")
    }
}

impl PartialEq for UniformGraph {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.order == other.order && self.edges == other.edges
    }
}

impl Eq for UniformGraph {}

impl std::hash::Hash for UniformGraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        self.order.hash(state);
        self.edges.hash(state);
    }
}

/// `combinations_vec(k)` on a range: all k-subsets in lexicographic order.
pub(crate) trait CombinationsVec {
    fn combinations_vec(self, k: usize) -> Vec<Vec<usize>>;
}

impl CombinationsVec for std::ops::Range<usize> {
    fn combinations_vec(self, k: usize) -> Vec<Vec<usize>> {
        use itertools::Itertools;
        self.combinations(k).collect()
    }
}
