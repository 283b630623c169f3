use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;

use super::{ConstructionError, DensityValue, Pattern, Scalar, Weights};
use crate::graph::{CanonicalKey, Classifier, Target};

/// Number of vertices each part receives, for every way of distributing `h`
/// vertices over `k` parts.
pub(crate) fn compositions(h: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(h: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == k {
            cur.push(h);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for c in 0..=h {
            cur.push(c);
            go(h - c, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        go(h, k, &mut Vec::new(), &mut out);
    }
    out
}

pub(crate) fn multinomial(counts: &[usize]) -> u64 {
    let mut acc = 1u64;
    let mut n = 0u64;
    for &c in counts {
        for i in 1..=c as u64 {
            n += 1;
            acc = acc * n / i;
        }
    }
    acc
}

/// The labelled graph a composition produces: vertices are assigned to
/// parts in blocks, and the pattern decides every slot.
fn composition_mask(p: &Pattern, slots: &[Vec<usize>], counts: &[usize]) -> u128 {
    let assign: Vec<usize> = counts.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c)).collect();
    let mut parts = vec![0; p.kind().arity];
    let mut mask = 0u128;
    for (i, s) in slots.iter().enumerate() {
        for (x, &v) in parts.iter_mut().zip(s) {
            *x = assign[v];
        }
        if p.is_edge(&parts) {
            mask |= 1 << i;
        }
    }
    mask
}

/// The weight-independent part of a blow-up density: which compositions
/// produce which class, with their multinomial coefficients.
pub(crate) struct BlowupPlan {
    terms: Vec<(CanonicalKey, Vec<usize>, u64)>,
}

impl BlowupPlan {
    pub(crate) fn new(p: &Pattern, h: usize, keep: Option<&Target>) -> Result<Self, ConstructionError> {
        if p.is_recursive() {
            return Err(ConstructionError::RecursivePattern);
        }
        let kind = p.kind();
        let slots = kind.slots(h);
        if slots.len() > 128 {
            return Err(ConstructionError::CapExceeded { what: "blow-up subgraph order", cap: max_order(kind), n: h });
        }
        let wanted_edges: Option<BTreeSet<usize>> = keep.map(|t| t.members().iter().map(|g| g.edge_count()).collect());
        let mut classifier = Classifier::new(kind, h);
        let mut terms = Vec::new();
        for counts in compositions(h, p.parts()) {
            let mask = composition_mask(p, &slots, &counts);
            if let Some(w) = &wanted_edges {
                if !w.contains(&(mask.count_ones() as usize)) {
                    continue;
                }
            }
            let key = classifier.class_of_mask(mask).clone();
            if keep.is_none_or(|t| t.contains_key(&key)) {
                let coef = multinomial(&counts);
                terms.push((key, counts, coef));
            }
        }
        Ok(BlowupPlan { terms })
    }

    pub(crate) fn eval_by_class<T: Scalar>(&self, w: &[T]) -> BTreeMap<CanonicalKey, T> {
        let mut out: BTreeMap<CanonicalKey, T> = BTreeMap::new();
        for (key, counts, coef) in &self.terms {
            if let Some(x) = term(w, counts, *coef) {
                let slot = out.entry(key.clone()).or_insert_with(T::zero);
                *slot = slot.clone() + x;
            }
        }
        out
    }

    pub(crate) fn eval<T: Scalar>(&self, w: &[T]) -> T {
        self.terms.iter().filter_map(|(_, counts, coef)| term(w, counts, *coef)).fold(T::zero(), |a, b| a + b)
    }

    pub(crate) fn len(&self) -> usize {
        self.terms.len()
    }
}

fn term<T: Scalar>(w: &[T], counts: &[usize], coef: u64) -> Option<T> {
    let mut x = T::from_u64(coef);
    for (wi, &c) in w.iter().zip(counts) {
        if c == 0 {
            continue;
        }
        if wi.is_exact_zero() {
            return None;
        }
        x = x * wi.pow(c);
    }
    Some(x)
}

fn max_order(kind: crate::graph::GraphKind) -> usize {
    (1..).take_while(|&n| kind.slot_count(n) <= 128).last().unwrap_or(1)
}

fn check_kind(p: &Pattern, target: &Target) -> Result<(), ConstructionError> {
    if p.kind() != target.kind() {
        return Err(ConstructionError::KindMismatch(p.kind(), target.kind()));
    }
    Ok(())
}

/// Rounding error bound for a float sum of `terms` products of `h` factors,
/// each at most one.
pub(crate) fn float_error(terms: usize, h: usize) -> f64 {
    (terms.max(1) as f64) * (h as f64 + 2.0) * f64::EPSILON
}

/// Limit density of `target` (summed over its classes) in the blow-up.
pub fn blowup_density(p: &Pattern, target: &Target) -> Result<DensityValue, ConstructionError> {
    check_kind(p, target)?;
    let h = target.order();
    let plan = BlowupPlan::new(p, h, Some(target))?;
    Ok(match p.weights() {
        Weights::Exact(w) => DensityValue::Exact(plan.eval::<BigRational>(w)),
        Weights::Float(w) => DensityValue::Float { value: plan.eval::<f64>(w), error: float_error(plan.len(), h) },
    })
}

/// Limit density of every h-vertex class with positive density.
pub fn blowup_distribution(p: &Pattern, h: usize) -> Result<BTreeMap<CanonicalKey, DensityValue>, ConstructionError> {
    let plan = BlowupPlan::new(p, h, None)?;
    Ok(match p.weights() {
        Weights::Exact(w) => plan.eval_by_class::<BigRational>(w).into_iter().map(|(k, v)| (k, DensityValue::Exact(v))).collect(),
        Weights::Float(w) => {
            let err = float_error(plan.len(), h);
            plan.eval_by_class::<f64>(w).into_iter().map(|(k, v)| (k, DensityValue::Float { value: v, error: err })).collect()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::catalog;
    use crate::graph::{named_family, named_graph};
    use crate::rational::ratio;
    use num_traits::{One, Zero};

    fn exact(p: &Pattern, name: &str) -> BigRational {
        let t = Target::new(named_family(name).unwrap()).unwrap();
        blowup_density(p, &t).unwrap().exact().unwrap().clone()
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(4, 3).len(), 15);
        assert_eq!(compositions(0, 2), vec![vec![0, 0]]);
        assert_eq!(multinomial(&[2, 1, 1]), 12);
        assert_eq!(multinomial(&[0, 5]), 1);
    }

    #[test]
    fn classical_values() {
        assert_eq!(exact(&catalog::turan(), "K4-"), ratio(16, 27));
        assert_eq!(exact(&catalog::turan(), "edge"), ratio(5, 9));
        assert_eq!(exact(&catalog::single_edge(), "edge"), ratio(2, 9));
        assert_eq!(exact(&catalog::complete_graph(4), "K4"), ratio(3, 32));
        assert_eq!(exact(&catalog::bipartite(), "edge"), ratio(3, 4));
    }

    #[test]
    fn distribution_sums_to_one() {
        for p in [catalog::turan(), catalog::one_one_two(), catalog::out_arc()] {
            for h in 2..=5 {
                let d = blowup_distribution(&p, h).unwrap();
                let total: BigRational = d.values().map(|v| v.exact().unwrap().clone()).sum();
                assert!(total.is_one(), "{p} h={h}");
            }
        }
    }

    #[test]
    fn zero_weight_part_contributes_nothing() {
        let p: Pattern = "parts=3; weights=1/2,1/2,0; edges=123,112".parse().unwrap();
        let q: Pattern = "parts=2; weights=1/2,1/2; edges=112".parse().unwrap();
        assert_eq!(exact(&p, "edge"), exact(&q, "edge"));
        let none: Pattern = "parts=2; weights=1,0; edges=122".parse().unwrap();
        assert!(exact(&none, "edge").is_zero());
    }

    #[test]
    fn float_weights_match_exact() {
        let p: Pattern = "parts=2; weights=0.75,0.25; edges=112".parse().unwrap();
        let t = Target::single(named_graph("edge").unwrap());
        match blowup_density(&p, &t).unwrap() {
            DensityValue::Float { value, error } => {
                assert!((value - 27.0 / 64.0).abs() <= error);
                assert!(error < 1e-13);
            }
            other => panic!("expected float, got {other:?}"),
        }
    }

    #[test]
    fn recursive_patterns_are_rejected() {
        let p = catalog::one_one_two().with_recursive([1]).unwrap();
        let t = Target::single(named_graph("edge").unwrap());
        assert!(matches!(blowup_density(&p, &t), Err(ConstructionError::RecursivePattern)));
    }
}
