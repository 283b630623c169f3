use std::collections::HashMap;

use num_rational::BigRational;

use super::blowup::float_error;
use super::{ConstructionError, DensityValue, Pattern, Scalar, Weights};
use crate::graph::{canonical_form, GraphKind, Target, UniformGraph};

/// Position of a slot tuple in [`GraphKind::slots`] order.
pub(crate) fn slot_index(kind: GraphKind, t: &[usize]) -> usize {
    use crate::graph::binomial;
    if kind.directed {
        let (x, y) = (t[0], t[1]);
        let (a, p) = if x < y { (x, y) } else { (y, x) };
        p * (p - 1) + 2 * a + usize::from(x != a)
    } else if kind.arity == 2 {
        let (a, b) = (t[0].min(t[1]), t[0].max(t[1]));
        binomial(b, 2) as usize + a
    } else {
        let mut s = [t[0], t[1], t[2]];
        s.sort_unstable();
        binomial(s[2], 3) as usize + binomial(s[1], 2) as usize + s[0]
    }
}

/// Evaluates `p(F)`: the probability that a fixed labelled `F` appears on
/// |F| independently sampled vertices of the infinite iterated construction.
///
/// Conditioning on the top-level parts, configurations that put every vertex
/// in one recursive part reproduce `p(F)` itself, which gives
/// `p(F) = A_F / (1 - Σ_{i recursive} w_i^|F|)` where `A_F` sums over all other
/// part assignments. Vertices sharing a recursive part contribute `p` of the
/// induced labelled subgraph; everything else is fixed by the pattern.
pub(crate) struct Iterated<'a, T> {
    pattern: &'a Pattern,
    weights: &'a [T],
    slots: Vec<Vec<Vec<usize>>>,
    memo: HashMap<(usize, u128), T>,
    pub(crate) terms: usize,
}

impl<'a, T: Scalar> Iterated<'a, T> {
    pub(crate) fn new(pattern: &'a Pattern, weights: &'a [T]) -> Self {
        Iterated { pattern, weights, slots: Vec::new(), memo: HashMap::new(), terms: 0 }
    }

    fn slots(&mut self, f: usize) -> &[Vec<usize>] {
        while self.slots.len() <= f {
            let n = self.slots.len();
            self.slots.push(self.pattern.kind().slots(n));
        }
        &self.slots[f]
    }

    pub(crate) fn prob(&mut self, f: usize, mask: u128) -> Result<T, ConstructionError> {
        let kind = self.pattern.kind();
        if f < kind.arity {
            return Ok(T::one());
        }
        if let Some(v) = self.memo.get(&(f, mask)) {
            return Ok(v.clone());
        }
        let k = self.pattern.parts();
        let slots = self.slots(f).to_vec();
        let mut psi = vec![0usize; f];
        let mut total = T::zero();
        let mut parts = vec![0usize; kind.arity];
        loop {
            let constant = psi.iter().all(|&x| x == psi[0]);
            if !(constant && self.pattern.recursive().contains(&psi[0])) {
                if let Some(t) = self.assignment_term(f, mask, &psi, &slots, &mut parts)? {
                    total = total + t;
                    self.terms += 1;
                }
            }
            // Next assignment in [k]^f.
            let mut i = 0;
            while i < f {
                psi[i] += 1;
                if psi[i] < k {
                    break;
                }
                psi[i] = 0;
                i += 1;
            }
            if i == f {
                break;
            }
        }
        let mut self_weight = T::zero();
        for &r in self.pattern.recursive() {
            self_weight = self_weight + self.weights[r].pow(f);
        }
        let denom = T::one() - self_weight;
        if denom.is_exact_zero() || denom.to_f64() <= 0.0 {
            return Err(ConstructionError::Divergent);
        }
        let v = total / denom;
        self.memo.insert((f, mask), v.clone());
        Ok(v)
    }

    fn assignment_term(
        &mut self,
        f: usize,
        mask: u128,
        psi: &[usize],
        slots: &[Vec<usize>],
        parts: &mut [usize],
    ) -> Result<Option<T>, ConstructionError> {
        let p = self.pattern;
        for (i, s) in slots.iter().enumerate() {
            for (x, &v) in parts.iter_mut().zip(s) {
                *x = psi[v];
            }
            let same = parts.iter().all(|&x| x == parts[0]);
            if same && p.recursive().contains(&parts[0]) {
                continue;
            }
            if p.is_edge(parts) != (mask >> i & 1 == 1) {
                return Ok(None);
            }
        }
        let mut term = T::one();
        for &v in psi {
            if self.weights[v].is_exact_zero() {
                return Ok(None);
            }
            term = term * self.weights[v].clone();
        }
        let kind = p.kind();
        for &r in p.recursive() {
            let members: Vec<usize> = (0..f).filter(|&v| psi[v] == r).collect();
            if members.len() < kind.arity {
                continue;
            }
            let sub_slots = kind.slots(members.len());
            let mut sub = 0u128;
            for (j, s) in sub_slots.iter().enumerate() {
                let mapped: Vec<usize> = s.iter().map(|&x| members[x]).collect();
                if mask >> slot_index(kind, &mapped) & 1 == 1 {
                    sub |= 1 << j;
                }
            }
            term = term * self.prob(members.len(), sub)?;
        }
        Ok(Some(term))
    }

    /// Density of the unlabelled graph `h`: `h!/|Aut h|` labellings, each with
    /// probability `p(h)`.
    pub(crate) fn density_of(&mut self, h: &UniformGraph) -> Result<T, ConstructionError> {
        let kind = h.kind();
        let slots = kind.slots(h.order());
        let mut mask = 0u128;
        for (i, s) in slots.iter().enumerate() {
            if h.has_edge(s) {
                mask |= 1 << i;
            }
        }
        let labellings = factorial(h.order()) / canonical_form(h).aut_size;
        Ok(T::from_u64(labellings) * self.prob(h.order(), mask)?)
    }

    pub(crate) fn target_density(&mut self, target: &Target) -> Result<T, ConstructionError> {
        let mut acc = T::zero();
        for g in target.members() {
            acc = acc + self.density_of(g)?;
        }
        Ok(acc)
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub(crate) fn check(p: &Pattern, target: &Target) -> Result<(), ConstructionError> {
    if !p.is_recursive() {
        return Err(ConstructionError::NotRecursive);
    }
    if p.kind() != target.kind() {
        return Err(ConstructionError::KindMismatch(p.kind(), target.kind()));
    }
    if p.kind().slot_count(target.order()) > 128 {
        return Err(ConstructionError::CapExceeded { what: "iterated target order", cap: 9, n: target.order() });
    }
    Ok(())
}

/// Limit density of `target` in the iterated blow-up of `p`.
pub fn iterated_density(p: &Pattern, target: &Target) -> Result<DensityValue, ConstructionError> {
    check(p, target)?;
    Ok(match p.weights() {
        Weights::Exact(w) => DensityValue::Exact(Iterated::<BigRational>::new(p, w).target_density(target)?),
        Weights::Float(w) => {
            let mut it = Iterated::<f64>::new(p, w);
            let value = it.target_density(target)?;
            let self_mass: f64 = p.recursive().iter().map(|&r| w[r].powi(target.order() as i32)).sum();
            let error = float_error(it.terms, target.order()) / (1.0 - self_mass).max(f64::EPSILON);
            DensityValue::Float { value, error }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::catalog;
    use crate::graph::{named_graph, GraphKind};
    use crate::rational::ratio;

    fn exact(p: &Pattern, name: &str) -> BigRational {
        let t = Target::single(named_graph(name).unwrap());
        iterated_density(p, &t).unwrap().exact().unwrap().clone()
    }

    #[test]
    fn slot_index_matches_slot_order() {
        for kind in [GraphKind::TRIPLE, GraphKind::PAIR, GraphKind::DIGRAPH] {
            for (i, s) in kind.slots(7).iter().enumerate() {
                assert_eq!(slot_index(kind, s), i);
                let mut r = s.clone();
                if !kind.directed {
                    r.reverse();
                    assert_eq!(slot_index(kind, &r), i);
                }
            }
        }
    }

    #[test]
    fn one_one_two_recursive_in_second_part() {
        // Edge density 3x(1-x)^2/(1-x^3) with x the weight of the recursive part.
        let p: Pattern = "parts=2; weights=1/2,1/2; edges=112; recursive=2".parse().unwrap();
        assert_eq!(exact(&p, "edge"), ratio(3, 8) / (ratio(1, 1) - ratio(1, 8)));
        assert_eq!(exact(&p, "edge"), ratio(3, 7));
    }

    #[test]
    fn turan_iterated_single_edge() {
        // Iterating the single-edge pattern: 6w^3 / (1 - 3w^3) at w = 1/3 is 1/4.
        let p = catalog::single_edge().iterated().unwrap();
        assert_eq!(exact(&p, "edge"), ratio(1, 4));
    }

    #[test]
    fn divergence_is_reported() {
        let p: Pattern = "parts=2; weights=1,0; edges=112; recursive=1".parse().unwrap();
        let t = Target::single(named_graph("edge").unwrap());
        assert!(matches!(iterated_density(&p, &t), Err(ConstructionError::Divergent)));
    }

    #[test]
    fn non_recursive_is_rejected() {
        let t = Target::single(named_graph("edge").unwrap());
        assert!(matches!(iterated_density(&catalog::turan(), &t), Err(ConstructionError::NotRecursive)));
    }

    #[test]
    fn directed_star() {
        // S_k density k x (1-x)^{k-1} / (1 - x^k) with x the recursive weight.
        let p: Pattern = "parts=2; weights=1/2,1/2; edges=12; recursive=1; directed=1".parse().unwrap();
        for k in 2..=5usize {
            let x = ratio(1, 2);
            let one = ratio(1, 1);
            let want = ratio(k as i64, 1) * x.pow(k as i32) / (one - x.pow(k as i32));
            assert_eq!(exact(&p, &format!("S{k}")), want, "k={k}");
        }
    }
}
