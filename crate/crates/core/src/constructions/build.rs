use itertools::Itertools;

use super::{ConstructionError, Pattern};
use crate::graph::UniformGraph;

const MAX_BUILD_ORDER: usize = 200;

/// Part sizes for `n` vertices by largest remainder, ties to lower parts.
fn apportion(weights: &[f64], n: usize) -> Vec<usize> {
    let quotas: Vec<f64> = weights.iter().map(|w| w * n as f64).collect();
    let mut sizes: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut left = n.saturating_sub(sizes.iter().sum());
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        sizes[i] += 1;
        left -= 1;
    }
    sizes
}

/// A concrete `n`-vertex blow-up. Recursive parts hold a copy of the
/// construction down to `depth` levels; at the last level they are empty.
/// Vertices of part 1 come first, then part 2, and so on.
pub fn build_blowup(p: &Pattern, n: usize, depth: usize) -> Result<UniformGraph, ConstructionError> {
    if n > MAX_BUILD_ORDER {
        return Err(ConstructionError::CapExceeded { what: "blow-up order", cap: MAX_BUILD_ORDER, n });
    }
    if depth == 0 {
        return Err(ConstructionError::Parse("depth must be at least 1".into()));
    }
    let mut edges = Vec::new();
    build_into(p, &(0..n).collect::<Vec<_>>(), depth, &mut edges);
    Ok(UniformGraph::new(p.kind(), n, edges)?)
}

fn build_into(p: &Pattern, vertices: &[usize], depth: usize, out: &mut Vec<Vec<usize>>) {
    let sizes = apportion(&p.weights().as_f64(), vertices.len());
    let mut part_of = Vec::with_capacity(vertices.len());
    for (i, &s) in sizes.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(i, s));
    }
    let kind = p.kind();
    let mut parts = vec![0; kind.arity];
    let tuples: Box<dyn Iterator<Item = Vec<usize>>> = if kind.directed {
        Box::new((0..vertices.len()).permutations(2))
    } else {
        Box::new((0..vertices.len()).combinations(kind.arity))
    };
    for t in tuples {
        for (x, &v) in parts.iter_mut().zip(&t) {
            *x = part_of[v];
        }
        if parts.iter().all(|&x| x == parts[0]) && p.recursive().contains(&parts[0]) {
            continue;
        }
        if p.is_edge(&parts) {
            out.push(t.iter().map(|&v| vertices[v]).collect());
        }
    }
    if depth > 1 {
        let mut start = 0;
        for (i, &s) in sizes.iter().enumerate() {
            if p.recursive().contains(&i) && s > 0 {
                build_into(p, &vertices[start..start + s], depth - 1, out);
            }
            start += s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::catalog;
    use crate::graph::{contains, named_graph, ContainMode};

    #[test]
    fn apportionment() {
        assert_eq!(apportion(&[1.0 / 3.0; 3], 10), vec![4, 3, 3]);
        assert_eq!(apportion(&[0.75, 0.25], 10), vec![8, 2]);
        assert_eq!(apportion(&[0.5, 0.5, 0.0], 7), vec![4, 3, 0]);
        assert_eq!(apportion(&[1.0], 0), vec![0]);
    }

    #[test]
    fn turan_blowup_counts() {
        // Parts 3,3,3: 27 transversal edges plus 3 * 3 * C(3,2) edges of type 112.
        let g = build_blowup(&catalog::turan(), 9, 1).unwrap();
        assert_eq!(g.edge_count(), 27 + 27);
        assert!(!contains(&g, &named_graph("K4").unwrap(), ContainMode::Subgraph));
    }

    #[test]
    fn recursion_depth() {
        let p = catalog::single_edge().iterated().unwrap();
        assert_eq!(build_blowup(&p, 9, 1).unwrap().edge_count(), 27);
        assert_eq!(build_blowup(&p, 9, 2).unwrap().edge_count(), 27 + 3);
        assert_eq!(build_blowup(&p, 9, 5).unwrap().edge_count(), 27 + 3);
        assert!(build_blowup(&p, 201, 1).is_err());
        let d = build_blowup(&catalog::out_arc(), 4, 1).unwrap();
        assert_eq!(d.to_string(), "d4:13,14,23,24");
    }
}
