//! The semi-definite upper-bound problem: types, flags, averaged flag-pair
//! densities, and exchange with an external solver.

mod flags;
mod round;
mod sdpa;

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    binomial, canonical_form_fixing, enumerate_classes, ContainMode, ForbiddenFamily, GraphError, GraphKind, IsoClass,
    Target, UniformGraph, Universe,
};

pub use flags::{enumerate_types_and_flags, flags_of, sdp_cap, FlagClassifier, FlagFamily, TypeSigma};
pub use round::{round_block, round_solution, RoundedBlock};
pub use sdpa::{export_problem, import_solution, parse_solution, parse_sdpa, write_problem, SdpaProblem, SolverSolution};

#[derive(Debug, Error)]
pub enum SdpError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("semi-definite problems are capped at N = {cap}, got {n}")]
    CapExceeded { cap: usize, n: usize },
    #[error("target has {0} vertices but N = {1}")]
    TargetTooLarge(usize, usize),
    #[error("no admissible graphs on {0} vertices")]
    NoAdmissibleGraphs(usize),
    #[error("flags of orders {0} and {1} over a {2}-vertex type do not fit in {3} vertices")]
    SizeMismatch(usize, usize, usize, usize),
    #[error("flag does not restrict to the given type")]
    TypeMismatch,
    #[error("malformed solver file: {0}")]
    Malformed(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("solver matrix for block {block} is badly non-PSD (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { block: usize, min_eigenvalue: f64 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad problem description: {0}")]
    Spec(String),
}

/// One forbidden graph with its containment mode, as stored in files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenEntry {
    pub graph: String,
    #[serde(default)]
    pub mode: ContainMode,
}

/// Everything needed to rebuild a [`DensityProblem`]; the on-disk problem
/// file is this structure as JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub order: usize,
    pub arity: usize,
    #[serde(default)]
    pub directed: bool,
    #[serde(default)]
    pub digons: bool,
    #[serde(default)]
    pub forbidden: Vec<ForbiddenEntry>,
    /// Target classes (their densities are summed), in graph string format.
    pub target: Vec<String>,
}

impl ProblemSpec {
    pub fn new(order: usize, universe: Universe, family: &ForbiddenFamily, target: &Target) -> Self {
        ProblemSpec {
            order,
            arity: universe.kind.arity,
            directed: universe.kind.directed,
            digons: universe.digons,
            forbidden: family.members().iter().map(|(g, m)| ForbiddenEntry { graph: g.to_string(), mode: *m }).collect(),
            target: target.members().iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn universe(&self) -> Result<Universe, SdpError> {
        let kind = GraphKind::new(self.arity, self.directed)?;
        Ok(Universe { kind, digons: self.directed && self.digons })
    }

    fn parse_graph(&self, s: &str) -> Result<UniformGraph, SdpError> {
        let g = UniformGraph::parse_with_arity(s, self.arity)?;
        let want = self.universe()?.kind;
        if g.kind() != want {
            return Err(SdpError::Spec(format!("graph {s} is a {} but the problem is about {want}s", g.kind())));
        }
        Ok(g)
    }

    pub fn family(&self) -> Result<ForbiddenFamily, SdpError> {
        let members = self.forbidden.iter().map(|f| Ok((self.parse_graph(&f.graph)?, f.mode))).collect::<Result<_, SdpError>>()?;
        Ok(ForbiddenFamily::new(members))
    }

    pub fn target(&self) -> Result<Target, SdpError> {
        let members = self.target.iter().map(|s| self.parse_graph(s)).collect::<Result<_, _>>()?;
        Ok(Target::new(members)?)
    }

    pub fn assemble(&self) -> Result<DensityProblem, SdpError> {
        assemble(self.order, self.universe()?, &self.family()?, &self.target()?)
    }
}

/// Averaged flag-pair densities for one type, over every admissible graph.
/// Entry `(a, b, c)` with `a <= b` means `D[a][b] = D[b][a] = c / denom`.
#[derive(Debug, Clone)]
pub struct TypeBlock {
    pub flags: FlagFamily,
    pub denom: u64,
    pub entries: Vec<Vec<(usize, usize, u64)>>,
}

impl TypeBlock {
    pub fn size(&self) -> usize {
        self.flags.len()
    }

    /// Dense `D_{σ,i}`.
    pub fn matrix(&self, i: usize) -> Vec<Vec<BigRational>> {
        let n = self.size();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        let d = BigInt::from(self.denom);
        for &(a, b, c) in &self.entries[i] {
            let v = BigRational::new(BigInt::from(c), d.clone());
            m[a][b] = v.clone();
            m[b][a] = v;
        }
        m
    }

    /// `⟨Q, D_{σ,i}⟩`.
    pub fn inner(&self, i: usize, q: &[Vec<BigRational>]) -> BigRational {
        let mut acc = BigRational::zero();
        for &(a, b, c) in &self.entries[i] {
            let mult = if a == b { c } else { 2 * c };
            acc += &q[a][b] * BigRational::from_integer(BigInt::from(mult));
        }
        acc / BigRational::from_integer(BigInt::from(self.denom))
    }
}

/// The assembled problem: minimise `b` subject to
/// `b >= d_i + Σ_σ ⟨Q_σ, D_{σ,i}⟩` for every admissible `G_i` on `N`
/// vertices, with every `Q_σ` positive semi-definite.
#[derive(Debug, Clone)]
pub struct DensityProblem {
    pub spec: ProblemSpec,
    pub universe: Universe,
    pub family: ForbiddenFamily,
    pub target: Target,
    pub graphs: Vec<IsoClass>,
    pub d: Vec<BigRational>,
    pub blocks: Vec<TypeBlock>,
}

impl DensityProblem {
    pub fn order(&self) -> usize {
        self.spec.order
    }

    /// `d_i + Σ_σ ⟨Q_σ, D_{σ,i}⟩`.
    pub fn constraint_value(&self, i: usize, q: &[Vec<Vec<BigRational>>]) -> BigRational {
        let mut v = self.d[i].clone();
        for (block, qs) in self.blocks.iter().zip(q) {
            v += block.inner(i, qs);
        }
        v
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(TypeBlock::size).collect()
    }
}

/// Counts, for one graph, how often each ordered flag pair appears on a
/// random labelled copy of the type plus a random split of the rest.
fn pair_counts(g: &UniformGraph, flags: &FlagFamily) -> Vec<(usize, usize, u64)> {
    let n = g.order();
    let sigma = &flags.sigma.graph;
    let s = sigma.order();
    let half = flags.flag_order - s;
    let sigma_slots = g.kind().slots(s);
    let mut cls = flags.classifier();
    let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut t = vec![0; g.arity()];
    for theta in (0..n).permutations(s) {
        let is_type = sigma_slots.iter().all(|slot| {
            for (x, &p) in t.iter_mut().zip(slot) {
                *x = theta[p];
            }
            g.has_edge(&t) == sigma.has_edge(slot)
        });
        if !is_type {
            continue;
        }
        let rest: Vec<usize> = (0..n).filter(|v| !theta.contains(v)).collect();
        for a in rest.iter().copied().combinations(half) {
            let b: Vec<usize> = rest.iter().copied().filter(|v| !a.contains(v)).collect();
            let va: Vec<usize> = theta.iter().copied().chain(a).collect();
            let Some(fa) = cls.classify(g, &va) else { continue };
            let vb: Vec<usize> = theta.iter().copied().chain(b).collect();
            let Some(fb) = cls.classify(g, &vb) else { continue };
            if fa <= fb {
                *counts.entry((fa, fb)).or_insert(0) += 1;
            }
        }
    }
    counts.into_iter().map(|((a, b), c)| (a, b, c)).collect()
}

fn falling(n: usize, k: usize) -> u64 {
    (0..k).map(|i| (n - i) as u64).product()
}

/// Builds the problem for order `n`.
pub fn assemble(n: usize, universe: Universe, family: &ForbiddenFamily, target: &Target) -> Result<DensityProblem, SdpError> {
    let cap = sdp_cap(universe.kind);
    if n > cap {
        return Err(SdpError::CapExceeded { cap, n });
    }
    if target.kind() != universe.kind {
        return Err(GraphError::KindMismatch(target.kind(), universe.kind).into());
    }
    family.check_kind(universe.kind)?;
    if target.order() > n {
        return Err(SdpError::TargetTooLarge(target.order(), n));
    }
    let graphs = enumerate_classes(n, universe, family)?;
    if graphs.is_empty() {
        return Err(SdpError::NoAdmissibleGraphs(n));
    }
    let d: Vec<BigRational> = graphs.par_iter().map(|c| target.density(&c.graph)).collect::<Result<_, _>>()?;
    let mut blocks = Vec::new();
    for flags in enumerate_types_and_flags(n, universe, family)? {
        let s = flags.sigma.size();
        let half = flags.flag_order - s;
        let denom = falling(n, s) * binomial(n - s, half);
        let entries: Vec<Vec<(usize, usize, u64)>> = graphs.par_iter().map(|c| pair_counts(&c.graph, &flags)).collect();
        blocks.push(TypeBlock { flags, denom, entries });
    }
    Ok(DensityProblem { spec: ProblemSpec::new(n, universe, family, target), universe, family: family.clone(), target: target.clone(), graphs, d, blocks })
}

/// Probability, over a uniformly random injective placement of the type's
/// labels in `g` and uniformly random disjoint extension sets, that the two
/// extensions induce `f1` and `f2` respectively (label-preserving).
pub fn flag_pair_density(
    f1: &UniformGraph,
    f2: &UniformGraph,
    sigma: &UniformGraph,
    g: &UniformGraph,
) -> Result<BigRational, SdpError> {
    let s = sigma.order();
    let (m1, m2, n) = (f1.order(), f2.order(), g.order());
    if m1 < s || m2 < s || m1 + m2 - s > n {
        return Err(SdpError::SizeMismatch(m1, m2, s, n));
    }
    for f in [f1, f2] {
        if f.kind() != g.kind() || sigma.kind() != g.kind() {
            return Err(GraphError::KindMismatch(f.kind(), g.kind()).into());
        }
        if f.induced(&(0..s).collect::<Vec<_>>()) != *sigma {
            return Err(SdpError::TypeMismatch);
        }
    }
    let k1 = canonical_form_fixing(f1, s).key;
    let k2 = canonical_form_fixing(f2, s).key;
    let mut hits = 0u64;
    let mut total = 0u64;
    for theta in (0..n).permutations(s) {
        let is_type = g.induced(&theta) == *sigma;
        let rest: Vec<usize> = (0..n).filter(|v| !theta.contains(v)).collect();
        for a in rest.iter().copied().combinations(m1 - s) {
            let rest_b: Vec<usize> = rest.iter().copied().filter(|v| !a.contains(v)).collect();
            for b in rest_b.into_iter().combinations(m2 - s) {
                total += 1;
                if !is_type {
                    continue;
                }
                let va: Vec<usize> = theta.iter().copied().chain(a.iter().copied()).collect();
                let vb: Vec<usize> = theta.iter().copied().chain(b).collect();
                if canonical_form_fixing(&g.induced(&va), s).key == k1 && canonical_form_fixing(&g.induced(&vb), s).key == k2 {
                    hits += 1;
                }
            }
        }
    }
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(total)))
}
