use serde::{Deserialize, Serialize};

use super::{GraphKind, UniformGraph};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContainMode {
    /// Not necessarily induced copy.
    #[default]
    Subgraph,
    Induced,
}

/// Does `host` contain a copy of `pattern` (as a subgraph or induced)?
///
/// Kind mismatches simply answer `false`.
pub fn contains(host: &UniformGraph, pattern: &UniformGraph, mode: ContainMode) -> bool {
    if host.kind() != pattern.kind() || pattern.order() > host.order() {
        return false;
    }
    if mode == ContainMode::Subgraph && pattern.edge_count() > host.edge_count() {
        return false;
    }
    let plan = Plan::new(pattern, mode);
    let mut state = Embed {
        host,
        pattern,
        plan: &plan,
        image: vec![usize::MAX; pattern.order()],
        used: vec![false; host.order()],
        tuple: vec![0; pattern.arity()],
    };
    state.extend(0)
}

/// Vertex order plus, per step, the pattern tuples that become fully placed.
struct Plan {
    order: Vec<usize>,
    checks: Vec<Vec<(Vec<usize>, bool)>>,
}

impl Plan {
    fn new(pattern: &UniformGraph, mode: ContainMode) -> Plan {
        let n = pattern.order();
        let kind = pattern.kind();
        // Greedy: next vertex shares the most edges with those already chosen.
        let mut degree = vec![0usize; n];
        for e in pattern.edges() {
            for &v in e {
                degree[v] += 1;
            }
        }
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut chosen = vec![false; n];
        while order.len() < n {
            let score = |v: usize| -> (usize, usize) {
                let links = pattern
                    .edges()
                    .filter(|e| e.contains(&v) && e.iter().filter(|&&u| u != v).all(|&u| chosen[u]))
                    .count();
                (links, degree[v])
            };
            let next = (0..n).filter(|&v| !chosen[v]).max_by(|&a, &b| score(a).cmp(&score(b)).then(b.cmp(&a))).unwrap();
            chosen[next] = true;
            order.push(next);
        }
        let mut position = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let mut checks = vec![Vec::new(); n];
        let tuples: Vec<Vec<usize>> = match mode {
            ContainMode::Subgraph => pattern.edges().map(<[usize]>::to_vec).collect(),
            ContainMode::Induced => all_tuples(kind, n),
        };
        for t in tuples {
            let last = t.iter().map(|&v| position[v]).max().unwrap();
            let present = pattern.has_edge(&t);
            checks[last].push((t, present));
        }
        Plan { order, checks }
    }
}

fn all_tuples(kind: GraphKind, n: usize) -> Vec<Vec<usize>> {
    kind.slots(n)
}

struct Embed<'a> {
    host: &'a UniformGraph,
    pattern: &'a UniformGraph,
    plan: &'a Plan,
    image: Vec<usize>,
    used: Vec<bool>,
    tuple: Vec<usize>,
}

impl Embed<'_> {
    fn extend(&mut self, step: usize) -> bool {
        if step == self.pattern.order() {
            return true;
        }
        let v = self.plan.order[step];
        for w in 0..self.host.order() {
            if self.used[w] {
                continue;
            }
            self.image[v] = w;
            if self.consistent(step) {
                self.used[w] = true;
                if self.extend(step + 1) {
                    return true;
                }
                self.used[w] = false;
            }
        }
        self.image[v] = usize::MAX;
        false
    }

    fn consistent(&mut self, step: usize) -> bool {
        for (t, present) in &self.plan.checks[step] {
            for (x, &v) in self.tuple.iter_mut().zip(t) {
                *x = self.image[v];
            }
            if self.host.has_edge(&self.tuple) != *present {
                return false;
            }
        }
        true
    }
}

/// A forbidden family: graph plus containment mode per member.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ForbiddenFamily {
    members: Vec<(UniformGraph, ContainMode)>,
}

impl ForbiddenFamily {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(members: Vec<(UniformGraph, ContainMode)>) -> Self {
        ForbiddenFamily { members }
    }

    /// All members forbidden as (not necessarily induced) subgraphs.
    pub fn subgraphs(graphs: impl IntoIterator<Item = UniformGraph>) -> Self {
        ForbiddenFamily { members: graphs.into_iter().map(|g| (g, ContainMode::Subgraph)).collect() }
    }

    pub fn with(mut self, g: UniformGraph, mode: ContainMode) -> Self {
        self.members.push((g, mode));
        self
    }

    pub fn members(&self) -> &[(UniformGraph, ContainMode)] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_free(&self, g: &UniformGraph) -> bool {
        self.members.iter().all(|(f, mode)| !contains(g, f, *mode))
    }

    /// Members whose kind differs from `kind`.
    pub fn check_kind(&self, kind: GraphKind) -> Result<(), super::GraphError> {
        match self.members.iter().find(|(f, _)| f.kind() != kind) {
            Some((f, _)) => Err(super::GraphError::KindMismatch(f.kind(), kind)),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named_graph;
    use itertools::Itertools;

    fn g(s: &str) -> UniformGraph {
        s.parse().unwrap()
    }

    #[test]
    fn k4_contains_k4_minus_only_as_subgraph() {
        let k4 = named_graph("K4").unwrap();
        let k4m = named_graph("K4-").unwrap();
        assert!(contains(&k4, &k4m, ContainMode::Subgraph));
        assert!(!contains(&k4, &k4m, ContainMode::Induced));
    }

    #[test]
    fn c5_contains_an_edge() {
        assert!(contains(&named_graph("C5").unwrap(), &g("3:123"), ContainMode::Subgraph));
    }

    #[test]
    fn h7_has_independent_neighbourhoods() {
        let h7 = named_graph("H7").unwrap();
        let f32 = named_graph("F32").unwrap();
        // Oracle: every 5-subset, every labelling of F32 onto it.
        let mut brute = false;
        for five in (0..7).combinations(5) {
            for perm in five.iter().copied().permutations(5) {
                if f32.edges().all(|e| h7.has_edge(&[perm[e[0]], perm[e[1]], perm[e[2]]])) {
                    brute = true;
                }
            }
        }
        assert!(!brute);
        assert!(!contains(&h7, &f32, ContainMode::Subgraph));
    }

    #[test]
    fn directed_containment_respects_orientation() {
        let path = g("d3:12,23");
        let out_star = g("d3:12,13");
        let host = g("d4:12,13,14");
        assert!(contains(&host, &out_star, ContainMode::Subgraph));
        assert!(!contains(&host, &path, ContainMode::Subgraph));
        assert!(contains(&host, &g("d3:12"), ContainMode::Subgraph));
        assert!(!contains(&host, &g("d3:12"), ContainMode::Induced));
        assert!(contains(&host, &g("d2:12"), ContainMode::Induced));
    }

    #[test]
    fn family_freeness() {
        let fam = ForbiddenFamily::subgraphs([named_graph("K4").unwrap()]).with(g("4:123"), ContainMode::Induced);
        assert!(!fam.is_free(&named_graph("K4").unwrap()));
        assert!(!fam.is_free(&g("4:123")));
        assert!(fam.is_free(&g("4:123,124")));
        assert!(fam.check_kind(GraphKind::TRIPLE).is_ok());
        assert!(fam.check_kind(GraphKind::DIGRAPH).is_err());
    }
}
