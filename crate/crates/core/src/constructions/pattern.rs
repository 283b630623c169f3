use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::ConstructionError;
use crate::graph::{symbol_to_vertex, vertex_symbol, GraphKind, UniformGraph};
use crate::rational::parse_rational;

/// Part weights, exact or floating.
#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl Weights {
    pub fn balanced(k: usize) -> Weights {
        Weights::Exact(vec![BigRational::new(BigInt::one(), BigInt::from(k)); k])
    }

    pub fn len(&self) -> usize {
        match self {
            Weights::Exact(w) => w.len(),
            Weights::Float(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_f64(&self) -> Vec<f64> {
        match self {
            Weights::Exact(w) => w.iter().map(crate::rational::to_f64).collect(),
            Weights::Float(w) => w.clone(),
        }
    }

    fn validate(&self) -> Result<(), ConstructionError> {
        match self {
            Weights::Exact(w) => {
                if w.iter().any(|x| x.is_negative()) {
                    return Err(ConstructionError::NegativeWeight);
                }
                let s: BigRational = w.iter().sum();
                if !s.is_one() {
                    return Err(ConstructionError::WeightSum(crate::rational::to_f64(&s)));
                }
            }
            Weights::Float(w) => {
                if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
                    return Err(ConstructionError::NegativeWeight);
                }
                let s: f64 = w.iter().sum();
                if (s - 1.0).abs() > 1e-12 {
                    return Err(ConstructionError::WeightSum(s));
                }
            }
        }
        Ok(())
    }
}

/// A weighted blow-up template. Part edges are multisets of parts (sorted) for
/// undirected patterns and ordered pairs of distinct parts for directed ones.
/// A loop edge `{i,..,i}` makes part `i` internally complete; recursive parts
/// contain a scaled copy of the whole construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    kind: GraphKind,
    parts: usize,
    edges: BTreeSet<Vec<usize>>,
    recursive: BTreeSet<usize>,
    weights: Weights,
}

impl Pattern {
    pub fn new(
        kind: GraphKind,
        parts: usize,
        edges: impl IntoIterator<Item = Vec<usize>>,
        recursive: impl IntoIterator<Item = usize>,
        weights: Weights,
    ) -> Result<Self, ConstructionError> {
        let kind = GraphKind::new(kind.arity, kind.directed)?;
        if parts == 0 {
            return Err(ConstructionError::Parse("a pattern needs at least one part".into()));
        }
        let mut set = BTreeSet::new();
        for mut e in edges {
            if e.len() != kind.arity {
                return Err(ConstructionError::EdgeArity(e, kind.arity));
            }
            if let Some(&bad) = e.iter().find(|&&p| p >= parts) {
                return Err(ConstructionError::BadPart(bad + 1));
            }
            if kind.directed {
                if e[0] == e[1] {
                    return Err(ConstructionError::DirectedLoop(e[0] + 1));
                }
            } else {
                e.sort_unstable();
            }
            set.insert(e);
        }
        let recursive: BTreeSet<usize> = recursive.into_iter().collect();
        if let Some(&bad) = recursive.iter().find(|&&p| p >= parts) {
            return Err(ConstructionError::BadPart(bad + 1));
        }
        for &p in &recursive {
            if set.contains(&vec![p; kind.arity]) {
                return Err(ConstructionError::LoopOnRecursive(p + 1));
            }
        }
        if weights.len() != parts {
            return Err(ConstructionError::WeightCount(weights.len(), parts));
        }
        weights.validate()?;
        Ok(Pattern { kind, parts, edges: set, recursive, weights })
    }

    /// Balanced, non-recursive blow-up of a graph (parts are its vertices).
    pub fn from_graph(g: &UniformGraph) -> Result<Self, ConstructionError> {
        Pattern::new(g.kind(), g.order(), g.edges().map(<[usize]>::to_vec), [], Weights::balanced(g.order()))
    }

    pub fn with_weights(&self, weights: Weights) -> Result<Self, ConstructionError> {
        Pattern::new(self.kind, self.parts, self.edges.iter().cloned(), self.recursive.iter().copied(), weights)
    }

    pub fn with_recursive(&self, recursive: impl IntoIterator<Item = usize>) -> Result<Self, ConstructionError> {
        Pattern::new(self.kind, self.parts, self.edges.iter().cloned(), recursive, self.weights.clone())
    }

    /// Every part recursive.
    pub fn iterated(&self) -> Result<Self, ConstructionError> {
        self.with_recursive(0..self.parts)
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn edges(&self) -> &BTreeSet<Vec<usize>> {
        &self.edges
    }

    pub fn recursive(&self) -> &BTreeSet<usize> {
        &self.recursive
    }

    pub fn is_recursive(&self) -> bool {
        !self.recursive.is_empty()
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    /// Whether vertices in `parts` (one entry per vertex of an r-tuple) span an
    /// edge, ignoring recursion.
    #[inline]
    pub fn is_edge(&self, parts: &[usize]) -> bool {
        if self.kind.directed {
            self.edges.contains(parts)
        } else {
            let mut s = parts.to_vec();
            s.sort_unstable();
            self.edges.contains(&s)
        }
    }

    pub fn is_loop_complete(&self, part: usize) -> bool {
        !self.kind.directed && self.edges.contains(&vec![part; self.kind.arity])
    }

    /// Complement of the multiset edge set over the parts, loops included.
    pub fn complement(&self) -> Result<Pattern, ConstructionError> {
        if self.kind.directed {
            return Err(ConstructionError::Graph(crate::graph::GraphError::Directed));
        }
        if self.is_recursive() {
            return Err(ConstructionError::RecursivePattern);
        }
        let all = (0..self.parts).combinations_with_replacement(self.kind.arity);
        let edges: Vec<Vec<usize>> = all.filter(|m| !self.edges.contains(m)).collect();
        Pattern::new(self.kind, self.parts, edges, [], self.weights.clone())
    }

    /// Drop the given parts (whose weights must be zero).
    pub fn restrict_to(&self, keep: &[usize]) -> Result<Pattern, ConstructionError> {
        let index = |p: usize| keep.iter().position(|&q| q == p);
        let edges: Vec<Vec<usize>> = self
            .edges
            .iter()
            .filter_map(|e| e.iter().map(|&p| index(p)).collect::<Option<Vec<usize>>>())
            .collect();
        let recursive: Vec<usize> = self.recursive.iter().filter_map(|&p| index(p)).collect();
        let weights = match &self.weights {
            Weights::Exact(w) => Weights::Exact(keep.iter().map(|&p| w[p].clone()).collect()),
            Weights::Float(w) => Weights::Float(keep.iter().map(|&p| w[p]).collect()),
        };
        Pattern::new(self.kind, keep.len(), edges, recursive, weights)
    }
}

impl FromStr for Pattern {
    type Err = ConstructionError;

    /// `parts=<k>; weights=<w1,...>; edges=<112,...>; recursive=<i,j>; directed=<0|1>`.
    /// `weights` defaults to balanced; rationals (`p/q`) give exact weights,
    /// any decimal makes them floating.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| ConstructionError::Parse(format!("{m} in {s:?}"));
        let mut parts = None;
        let mut weights_txt = None;
        let mut edges_txt = None;
        let mut recursive_txt = None;
        let mut directed = false;
        for field in s.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (k, v) = field.split_once('=').ok_or_else(|| bad("field without '='"))?;
            let v = v.trim();
            match k.trim() {
                "parts" => parts = Some(v.parse::<usize>().map_err(|_| bad("bad part count"))?),
                "weights" => weights_txt = Some(v.to_string()),
                "edges" => edges_txt = Some(v.to_string()),
                "recursive" => recursive_txt = Some(v.to_string()),
                "directed" => {
                    directed = match v {
                        "0" => false,
                        "1" => true,
                        _ => return Err(bad("directed must be 0 or 1")),
                    }
                }
                other => return Err(bad(&format!("unknown field {other}"))),
            }
        }
        let parts = parts.ok_or_else(|| bad("missing parts"))?;
        let decode = |tok: &str| -> Result<Vec<usize>, ConstructionError> {
            tok.chars().map(|c| symbol_to_vertex(c).ok_or_else(|| bad("bad part symbol"))).collect()
        };
        let edges: Vec<Vec<usize>> = match &edges_txt {
            Some(t) => t.split(',').map(str::trim).filter(|x| !x.is_empty()).map(decode).collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        let arity = if directed { 2 } else { edges.first().map_or(3, Vec::len) };
        let recursive: Vec<usize> = match &recursive_txt {
            Some(t) => t
                .split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<usize>().ok().filter(|&p| p >= 1).map(|p| p - 1).ok_or_else(|| bad("bad recursive part")))
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        let weights = match &weights_txt {
            None => Weights::balanced(parts),
            Some(t) => {
                let toks: Vec<&str> = t.split(',').map(str::trim).collect();
                if toks.iter().any(|x| x.contains('.') || x.contains('e')) {
                    Weights::Float(toks.iter().map(|x| parse_float_weight(x)).collect::<Option<_>>().ok_or_else(|| bad("bad weight"))?)
                } else {
                    Weights::Exact(toks.iter().map(|x| parse_rational(x)).collect::<Option<_>>().ok_or_else(|| bad("bad weight"))?)
                }
            }
        };
        let kind = GraphKind::new(arity, directed)?;
        Pattern::new(kind, parts, edges, recursive, weights)
    }
}

fn parse_float_weight(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((p, q)) => Some(p.trim().parse::<f64>().ok()? / q.trim().parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = match &self.weights {
            Weights::Exact(w) => w.iter().map(|x| x.to_string()).collect(),
            Weights::Float(w) => w.iter().map(|x| format!("{x:e}")).collect(),
        };
        let e: Vec<String> = self.edges.iter().map(|e| e.iter().map(|&p| vertex_symbol(p)).collect()).collect();
        write!(f, "parts={}; weights={}; edges={}", self.parts, w.join(","), e.join(","))?;
        if self.is_recursive() {
            let r: Vec<String> = self.recursive.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "; recursive={}", r.join(","))?;
        }
        write!(f, "; directed={}", u8::from(self.kind.directed))
    }
}

/// Patterns that appear throughout: the balanced tripartite one, the 3-edge, `{112}`, directed S2.
pub mod catalog {
    use super::*;

    fn p(s: &str) -> Pattern {
        s.parse().expect("catalog pattern")
    }

    /// `([3], {112, 223, 331, 123})`.
    pub fn turan() -> Pattern {
        p("parts=3; edges=112,223,133,123")
    }

    pub fn single_edge() -> Pattern {
        p("parts=3; edges=123")
    }

    /// `([2], {112})`.
    pub fn one_one_two() -> Pattern {
        p("parts=2; edges=112")
    }

    /// `([2], {12})` with arcs from part 1 to part 2.
    pub fn out_arc() -> Pattern {
        p("parts=2; edges=12; directed=1")
    }

    /// Complete bipartite 3-graph `([2], {112, 122})`.
    pub fn bipartite() -> Pattern {
        p("parts=2; edges=112,122")
    }

    pub fn complete_graph(t: usize) -> Pattern {
        Pattern::from_graph(&UniformGraph::complete(GraphKind::TRIPLE, t).expect("valid")).expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p: Pattern = "parts=3; weights=1/3,1/3,1/3; edges=112,223,331,123".parse().unwrap();
        assert_eq!(p.parts(), 3);
        assert_eq!(p.edges().len(), 4);
        assert!(p.is_edge(&[1, 0, 0]));
        assert!(p.is_edge(&[2, 0, 2]));
        assert!(!p.is_edge(&[0, 0, 2]));
        let again: Pattern = p.to_string().parse().unwrap();
        assert_eq!(again, p);

        let d: Pattern = "parts=2; weights=0.25,0.75; edges=12; recursive=1; directed=1".parse().unwrap();
        assert!(d.kind().directed);
        assert!(d.is_edge(&[0, 1]));
        assert!(!d.is_edge(&[1, 0]));
        assert!(matches!(d.weights(), Weights::Float(_)));
        assert_eq!(d.recursive().iter().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn invariants_are_checked() {
        assert!(matches!("parts=2; weights=1/2,1/3; edges=112".parse::<Pattern>(), Err(ConstructionError::WeightSum(_))));
        assert!(matches!("parts=2; edges=113".parse::<Pattern>(), Err(ConstructionError::BadPart(3))));
        assert!(matches!("parts=2; edges=111,112; recursive=1".parse::<Pattern>(), Err(ConstructionError::LoopOnRecursive(1))));
        assert!(matches!("parts=2; edges=11; directed=1".parse::<Pattern>(), Err(ConstructionError::DirectedLoop(1))));
        assert!("parts=2; weights=0.5,0.5000000000001; edges=112".parse::<Pattern>().is_ok());
        assert!("parts=2; weights=0.5,0.50001; edges=112".parse::<Pattern>().is_err());
        assert!("parts=2; weights=-1/2,3/2; edges=112".parse::<Pattern>().is_err());
    }

    #[test]
    fn complement_counts_all_multisets() {
        let t = catalog::turan();
        let c = t.complement().unwrap();
        assert_eq!(c.edges().len(), 10 - 4);
        assert_eq!(c.complement().unwrap().edges(), t.edges());
    }
}
