use super::{ConstructionError, Pattern};
use crate::graph::UniformGraph;

/// Whether some map `V(g) -> parts` sends every edge of `g` to an edge of the
/// pattern, i.e. whether `g` embeds in a large enough blow-up. Backtracks
/// vertex by vertex, checking each edge once its last vertex is placed.
pub fn pattern_hom_exists(g: &UniformGraph, p: &Pattern) -> Result<bool, ConstructionError> {
    if p.is_recursive() {
        return Err(ConstructionError::RecursivePattern);
    }
    if g.kind() != p.kind() {
        return Err(ConstructionError::KindMismatch(g.kind(), p.kind()));
    }
    let n = g.order();
    let mut by_last: Vec<Vec<&[usize]>> = vec![Vec::new(); n];
    for e in g.edges() {
        let last = *e.iter().max().expect("nonempty edge");
        by_last[last].push(e);
    }
    let mut assign = vec![0usize; n];
    Ok(extend(0, &mut assign, &by_last, p))
}

fn extend(v: usize, assign: &mut [usize], by_last: &[Vec<&[usize]>], p: &Pattern) -> bool {
    if v == assign.len() {
        return true;
    }
    let mut parts = vec![0; p.kind().arity];
    for c in 0..p.parts() {
        assign[v] = c;
        let ok = by_last[v].iter().all(|e| {
            for (x, &u) in parts.iter_mut().zip(e.iter()) {
                *x = assign[u];
            }
            p.is_edge(&parts)
        });
        if ok && extend(v + 1, assign, by_last, p) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_blowup, catalog, gt_pattern};
    use crate::graph::{contains, named_graph, ContainMode};

    #[test]
    fn turan_pattern_homs() {
        let t = catalog::turan();
        assert!(pattern_hom_exists(&named_graph("K4-").unwrap(), &t).unwrap());
        assert!(!pattern_hom_exists(&named_graph("K4").unwrap(), &t).unwrap());
        assert!(pattern_hom_exists(&named_graph("edge").unwrap(), &catalog::single_edge()).unwrap());
        assert!(!pattern_hom_exists(&named_graph("K4-").unwrap(), &catalog::single_edge()).unwrap());
    }

    #[test]
    fn agrees_with_containment_in_a_large_blowup() {
        // g has a homomorphism into the pattern iff it is a subgraph of the
        // blow-up with |g| vertices per part.
        let p = gt_pattern(5).unwrap();
        let big = build_blowup(&p, 4 * 5, 1).unwrap();
        for name in ["K4", "K4-", "K5", "K5-", "C5", "F32", "H6"] {
            let g = named_graph(name).unwrap();
            if g.order() <= 5 {
                assert_eq!(pattern_hom_exists(&g, &p).unwrap(), contains(&big, &g, ContainMode::Subgraph), "{name}");
            }
        }
    }
}
