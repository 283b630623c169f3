use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;

use super::SdpError;
use crate::graph::{
    canonical_form_fixing, enumerate_classes, CanonicalKey, ForbiddenFamily, GraphKind, UniformGraph, Universe,
};

/// A fully labelled admissible graph on `s` vertices.
#[derive(Debug, Clone)]
pub struct TypeSigma {
    pub graph: UniformGraph,
    pub key: CanonicalKey,
}

impl TypeSigma {
    pub fn size(&self) -> usize {
        self.graph.order()
    }
}

/// A type together with all its admissible flags of one order, sorted by
/// label-preserving canonical key.
#[derive(Debug, Clone)]
pub struct FlagFamily {
    pub sigma: TypeSigma,
    pub flag_order: usize,
    pub flags: Vec<UniformGraph>,
    keys: Vec<CanonicalKey>,
    index: HashMap<CanonicalKey, usize>,
}

impl FlagFamily {
    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn keys(&self) -> &[CanonicalKey] {
        &self.keys
    }

    /// Index of the flag `g` (first `s` vertices labelled), if admissible.
    pub fn index_of(&self, g: &UniformGraph) -> Option<usize> {
        self.index.get(&canonical_form_fixing(g, self.sigma.size()).key).copied()
    }

    /// Memoising classifier for induced flags inside a host graph.
    pub fn classifier(&self) -> FlagClassifier<'_> {
        FlagClassifier { family: self, slots: self.sigma.graph.kind().slots(self.flag_order), cache: HashMap::new() }
    }
}

pub struct FlagClassifier<'a> {
    family: &'a FlagFamily,
    slots: Vec<Vec<usize>>,
    cache: HashMap<u128, Option<usize>>,
}

impl FlagClassifier<'_> {
    /// The flag induced on `vertices` of `host`, the first `s` of which carry
    /// the labels. `None` if the labelled part is not the type.
    pub fn classify(&mut self, host: &UniformGraph, vertices: &[usize]) -> Option<usize> {
        let mut mask = 0u128;
        let mut t = vec![0; host.arity()];
        for (i, s) in self.slots.iter().enumerate() {
            for (x, &p) in t.iter_mut().zip(s) {
                *x = vertices[p];
            }
            if host.has_edge(&t) {
                mask |= 1 << i;
            }
        }
        if let Some(&hit) = self.cache.get(&mask) {
            return hit;
        }
        let kind = host.kind();
        let edges: Vec<&Vec<usize>> = self.slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s).collect();
        let g = UniformGraph::new(kind, self.family.flag_order, edges).expect("valid flag");
        let s = self.family.sigma.size();
        let restricted = g.induced(&(0..s).collect::<Vec<_>>());
        let result = if restricted == self.family.sigma.graph { self.family.index_of(&g) } else { None };
        self.cache.insert(mask, result);
        result
    }
}

/// Slots on `m` vertices that touch at least one of the vertices `s..m`.
fn extension_slots(kind: GraphKind, s: usize, m: usize) -> Vec<Vec<usize>> {
    kind.slots(m).into_iter().filter(|t| t.iter().any(|&v| v >= s)).collect()
}

/// All admissible flags of `sigma` on `m` vertices, up to isomorphisms fixing
/// the labelled vertices.
pub fn flags_of(sigma: &TypeSigma, m: usize, universe: Universe, family: &ForbiddenFamily) -> FlagFamily {
    let kind = universe.kind;
    let s = sigma.size();
    let base: Vec<Vec<usize>> = sigma.graph.edges().map(<[usize]>::to_vec).collect();
    let mut found: BTreeMap<CanonicalKey, UniformGraph> = BTreeMap::new();
    let mut consider = |edges: Vec<Vec<usize>>| {
        let g = UniformGraph::new(kind, m, edges).expect("valid extension");
        if universe.admits(&g) && family.is_free(&g) {
            let cf = canonical_form_fixing(&g, s);
            found.entry(cf.key).or_insert_with(|| g.relabel(&cf.labeling));
        }
    };
    if kind.directed {
        // Each vertex pair touching a new vertex: absent, forward, backward (or both).
        let pairs: Vec<(usize, usize)> = (0..m).tuple_combinations().filter(|&(_, b)| b >= s).collect();
        let choices: usize = if universe.digons { 4 } else { 3 };
        for code in 0..choices.pow(pairs.len() as u32) {
            let mut edges = base.clone();
            let mut c = code;
            for &(a, b) in &pairs {
                match c % choices {
                    1 => edges.push(vec![a, b]),
                    2 => edges.push(vec![b, a]),
                    3 => edges.extend([vec![a, b], vec![b, a]]),
                    _ => {}
                }
                c /= choices;
            }
            consider(edges);
        }
    } else {
        let ext = extension_slots(kind, s, m);
        assert!(ext.len() < 32, "too many extension slots");
        for mask in 0u32..(1 << ext.len()) {
            let mut edges = base.clone();
            edges.extend(ext.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone()));
            consider(edges);
        }
    }
    let keys: Vec<CanonicalKey> = found.keys().cloned().collect();
    let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    FlagFamily { sigma: sigma.clone(), flag_order: m, flags: found.into_values().collect(), keys, index }
}

/// Largest problem order supported for each kind.
pub fn sdp_cap(kind: GraphKind) -> usize {
    match (kind.directed, kind.arity) {
        (true, _) => 5,
        (false, 2) => 8,
        _ => 6,
    }
}

/// Every admissible type with `s ≡ n (mod 2)`, `s ≤ n - 2`, and its flags on
/// `(n + s) / 2` vertices. Types without flags are dropped. Ordered by
/// `(s, canonical key)`.
pub fn enumerate_types_and_flags(n: usize, universe: Universe, family: &ForbiddenFamily) -> Result<Vec<FlagFamily>, SdpError> {
    let cap = sdp_cap(universe.kind);
    if n > cap {
        return Err(SdpError::CapExceeded { cap, n });
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for s in (n % 2..=n - 2).step_by(2) {
        let m = (n + s) / 2;
        for class in enumerate_classes(s, universe, family)? {
            let sigma = TypeSigma { graph: class.graph, key: class.key };
            let fam = flags_of(&sigma, m, universe, family);
            if !fam.is_empty() {
                out.push(fam);
            }
        }
    }
    Ok(out)
}
