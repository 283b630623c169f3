//! Brute-force `ex_H(n, F)`: enumerate every family-free class on `n`
//! vertices and count induced copies of the target. Deliberately naive so it
//! can serve as ground truth for everything else.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{binomial, enumerate_classes, ForbiddenFamily, GraphError, Target, UniformGraph, Universe};
use crate::rational::format_rational;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("oracle is capped at n = {cap} for this kind of graph, got {n}")]
    CapExceeded { cap: usize, n: usize },
    #[error("n = {n} is smaller than the target order {h}")]
    TooSmall { n: usize, h: usize },
    #[error("no family-free graph on {0} vertices")]
    Empty(usize),
    #[error("density sequence increases from n = {n} ({prev}) to n = {} ({next})", n + 1)]
    NotMonotone { n: usize, prev: String, next: String },
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub n: usize,
    pub max_count: u64,
    /// `max_count / C(n, h)`.
    pub max_density: BigRational,
    /// Canonical representatives attaining the maximum, by canonical key.
    pub witnesses: Vec<UniformGraph>,
}

pub fn oracle_cap(universe: Universe) -> usize {
    match (universe.kind.directed, universe.kind.arity) {
        (true, _) => 5,
        (false, 2) => 8,
        _ => 6,
    }
}

/// Maximum number of induced copies of `target` over family-free graphs on
/// `n` vertices.
pub fn turan_h_number(n: usize, universe: Universe, family: &ForbiddenFamily, target: &Target) -> Result<OracleResult, OracleError> {
    let cap = oracle_cap(universe);
    if n > cap {
        return Err(OracleError::CapExceeded { cap, n });
    }
    if target.kind() != universe.kind {
        return Err(GraphError::KindMismatch(target.kind(), universe.kind).into());
    }
    let h = target.order();
    if n < h {
        return Err(OracleError::TooSmall { n, h });
    }
    let classes = enumerate_classes(n, universe, family)?;
    if classes.is_empty() {
        return Err(OracleError::Empty(n));
    }
    let counts: Vec<u64> = classes.par_iter().map(|c| target.induced_count(&c.graph)).collect::<Result<_, _>>()?;
    let max_count = *counts.iter().max().expect("nonempty");
    // Classes come sorted by canonical key, so witnesses are too.
    let witnesses = classes.iter().zip(&counts).filter(|(_, &c)| c == max_count).map(|(cl, _)| cl.graph.clone()).collect();
    let max_density = BigRational::new(BigInt::from(max_count), BigInt::from(binomial(n, h)));
    Ok(OracleResult { n, max_count, max_density, witnesses })
}

/// `ex_H(n, F) / C(n, h)` for each `n` in `range`, checked to be
/// nonincreasing.
pub fn density_sequence(
    universe: Universe,
    family: &ForbiddenFamily,
    target: &Target,
    range: impl IntoIterator<Item = usize>,
) -> Result<Vec<(usize, BigRational)>, OracleError> {
    let mut out: Vec<(usize, BigRational)> = Vec::new();
    for n in range {
        let r = turan_h_number(n, universe, family, target)?;
        if let Some((pn, prev)) = out.last() {
            if r.max_density > *prev {
                return Err(OracleError::NotMonotone { n: *pn, prev: format_rational(prev), next: format_rational(&r.max_density) });
            }
        }
        out.push((n, r.max_density));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{canonical_form, contains, named_family, named_graph, ContainMode};
    use crate::rational::ratio;

    #[test]
    fn four_two_at_four() {
        let t = Target::new(named_family("4.2").unwrap()).unwrap();
        let r = turan_h_number(4, Universe::undirected(3), &ForbiddenFamily::empty(), &t).unwrap();
        assert_eq!(r.max_count, 1);
        assert_eq!(r.max_density, ratio(1, 1));
        assert_eq!(r.witnesses.len(), 1);
        assert_eq!(canonical_form(&r.witnesses[0]).key, canonical_form(&t.members()[0]).key);
    }

    #[test]
    fn witnesses_are_family_free_and_attain_the_max() {
        let k4 = named_graph("K4").unwrap();
        let fam = ForbiddenFamily::subgraphs([k4.clone()]);
        let t = Target::single(named_graph("K4-").unwrap());
        let r = turan_h_number(5, Universe::undirected(3), &fam, &t).unwrap();
        assert!(!r.witnesses.is_empty());
        for w in &r.witnesses {
            assert!(!contains(w, &k4, ContainMode::Subgraph));
            assert_eq!(t.induced_count(w).unwrap(), r.max_count);
        }
        assert!(r.max_density >= ratio(16, 27));
    }

    #[test]
    fn full_order_with_empty_family_is_one() {
        for name in ["edge", "K4-", "4.2", "C5"] {
            let t = Target::new(named_family(name).unwrap()).unwrap();
            let r = turan_h_number(t.order(), Universe::undirected(3), &ForbiddenFamily::empty(), &t).unwrap();
            assert_eq!(r.max_density, ratio(1, 1), "{name}");
        }
    }

    #[test]
    fn caps_and_errors() {
        let t = Target::single(named_graph("edge").unwrap());
        assert!(matches!(
            turan_h_number(7, Universe::undirected(3), &ForbiddenFamily::empty(), &t),
            Err(OracleError::CapExceeded { cap: 6, n: 7 })
        ));
        assert!(matches!(turan_h_number(2, Universe::undirected(3), &ForbiddenFamily::empty(), &t), Err(OracleError::TooSmall { .. })));
    }

    #[test]
    fn sequence_is_nonincreasing() {
        let t = Target::single(named_graph("edge").unwrap());
        let fam = ForbiddenFamily::subgraphs([named_graph("K4-").unwrap()]);
        let seq = density_sequence(Universe::undirected(3), &fam, &t, 3..=6).unwrap();
        assert_eq!(seq.len(), 4);
        assert!(seq.windows(2).all(|w| w[0].1 >= w[1].1));
    }
}
