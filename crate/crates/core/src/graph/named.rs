use super::{enumerate_graphs, ForbiddenFamily, GraphError, GraphKind, UniformGraph, Universe};

const FANO_1: [[usize; 3]; 7] = [[1, 2, 4], [1, 3, 7], [1, 5, 6], [2, 3, 5], [2, 6, 7], [3, 4, 6], [4, 5, 7]];
const FANO_2: [[usize; 3]; 7] = [[6, 5, 3], [6, 4, 7], [6, 2, 1], [5, 4, 2], [5, 1, 7], [4, 3, 1], [3, 2, 7]];

fn one_based(order: usize, edges: &[[usize; 3]]) -> UniformGraph {
    let e: Vec<Vec<usize>> = edges.iter().map(|t| t.iter().map(|v| v - 1).collect()).collect();
    UniformGraph::new(GraphKind::TRIPLE, order, e).expect("static edge list")
}

/// Strong t-cycle: all cyclically consecutive triples.
fn strong_cycle(t: usize) -> UniformGraph {
    let edges: Vec<Vec<usize>> = (0..t).map(|i| vec![i, (i + 1) % t, (i + 2) % t]).collect();
    UniformGraph::new(GraphKind::TRIPLE, t, edges).expect("valid cycle")
}

fn out_star(k: usize) -> UniformGraph {
    UniformGraph::new(GraphKind::DIGRAPH, k, (1..k).map(|i| [0, i])).expect("valid star")
}

fn parse_size(s: &str) -> Option<usize> {
    s.parse().ok()
}

/// Look up a named graph or family.
///
/// Single graphs: `edge` (also `3.1`), `Kt`, `Kt-` (also `Kt^-`), `Ct` (strong
/// cycle), `F32`, `H6`, `H7`, `Sk` (directed out-star). Families: `m.k`, all
/// 3-graphs on m ≤ 6 vertices with exactly k edges, in canonical-key order.
pub fn named_family(name: &str) -> Result<Vec<UniformGraph>, GraphError> {
    let unknown = || GraphError::UnknownName(name.to_string());
    let n = name.trim();
    if let Some((m, k)) = n.split_once('.') {
        let m = parse_size(m).ok_or_else(unknown)?;
        let k = parse_size(k).ok_or_else(unknown)?;
        if m > 6 {
            return Err(GraphError::CapExceeded { what: "m.k families", cap: 6, n: m });
        }
        let all = enumerate_graphs(m, Universe::undirected(3), &ForbiddenFamily::empty())?;
        let out: Vec<UniformGraph> = all.into_iter().filter(|g| g.edge_count() == k).collect();
        if out.is_empty() {
            return Err(unknown());
        }
        return Ok(out);
    }
    let single = match n {
        "edge" | "E" => one_based(3, &[[1, 2, 3]]),
        "F32" | "F3,2" | "F_{3,2}" => one_based(5, &[[1, 2, 3], [1, 2, 4], [1, 2, 5], [3, 4, 5]]),
        "H6" => one_based(
            6,
            &[[1, 2, 3], [2, 3, 4], [3, 4, 5], [4, 5, 1], [5, 1, 2], [1, 3, 6], [3, 5, 6], [5, 2, 6], [2, 4, 6], [4, 1, 6]],
        ),
        "H7" => {
            let mut e = FANO_1.to_vec();
            e.extend_from_slice(&FANO_2);
            one_based(7, &e)
        }
        _ => {
            if let Some(rest) = n.strip_prefix('K') {
                let (t, minus) = match rest.strip_suffix("^-").or_else(|| rest.strip_suffix('-')) {
                    Some(t) => (t, true),
                    None => (rest, false),
                };
                let t = parse_size(t).ok_or_else(unknown)?;
                if t < 3 || (minus && t < 3) {
                    return Err(unknown());
                }
                let k = UniformGraph::complete(GraphKind::TRIPLE, t)?;
                if minus {
                    let edges: Vec<Vec<usize>> = k.edges().filter(|e| *e != [t - 3, t - 2, t - 1]).map(<[usize]>::to_vec).collect();
                    UniformGraph::new(GraphKind::TRIPLE, t, edges)?
                } else {
                    k
                }
            } else if let Some(t) = n.strip_prefix('C') {
                let t = parse_size(t).ok_or_else(unknown)?;
                if t < 3 {
                    return Err(unknown());
                }
                strong_cycle(t)
            } else if let Some(k) = n.strip_prefix('S') {
                let k = parse_size(k).ok_or_else(unknown)?;
                if k < 1 {
                    return Err(unknown());
                }
                out_star(k)
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(vec![single])
}

/// A single named graph; families with several members are rejected.
pub fn named_graph(name: &str) -> Result<UniformGraph, GraphError> {
    let mut family = named_family(name)?;
    if family.len() != 1 {
        return Err(GraphError::UnknownName(format!("{name} (family with {} members)", family.len())));
    }
    Ok(family.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::canonical_form;

    #[test]
    fn strong_four_cycle_is_k4() {
        let c4 = named_graph("C4").unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert_eq!(canonical_form(&c4).key, canonical_form(&named_graph("K4").unwrap()).key);
    }

    #[test]
    fn four_three_is_k4_minus() {
        let fam = named_family("4.3").unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(canonical_form(&fam[0]).key, canonical_form(&named_graph("K4-").unwrap()).key);
        assert_eq!(named_family("4.2").unwrap().len(), 1);
    }

    #[test]
    fn h7_is_six_regular_with_hexagon_links() {
        let h7 = named_graph("H7").unwrap();
        assert_eq!(h7.edge_count(), 14);
        for x in 0..7 {
            let link: Vec<(usize, usize)> = h7
                .edges()
                .filter(|e| e.contains(&x))
                .map(|e| {
                    let o: Vec<usize> = e.iter().copied().filter(|&v| v != x).collect();
                    (o[0], o[1])
                })
                .collect();
            assert_eq!(link.len(), 6);
            // A 2-regular graph on the six other vertices that is connected is a 6-cycle.
            let mut deg = [0; 7];
            for &(a, b) in &link {
                deg[a] += 1;
                deg[b] += 1;
            }
            assert!((0..7).filter(|&v| v != x).all(|v| deg[v] == 2));
            let mut seen = vec![false; 7];
            let start = (0..7).find(|&v| v != x).unwrap();
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                for &(a, b) in &link {
                    if a == v {
                        stack.push(b);
                    }
                    if b == v {
                        stack.push(a);
                    }
                }
            }
            assert_eq!(seen.iter().filter(|&&s| s).count(), 6);
        }
    }

    #[test]
    fn family_sizes() {
        let sizes: Vec<usize> = (0..=10).map(|k| named_family(&format!("5.{k}")).unwrap().len()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 4, 6, 6, 6, 4, 2, 1, 1]);
    }

    #[test]
    fn unknown_names() {
        assert!(named_graph("Q7").is_err());
        assert!(named_graph("5.6").is_err());
        assert!(named_family("4.9").is_err());
        assert!(named_family("7.3").is_err());
    }

    #[test]
    fn h6_and_stars() {
        assert_eq!(named_graph("H6").unwrap().edge_count(), 10);
        let s4 = named_graph("S4").unwrap();
        assert!(s4.is_directed());
        assert_eq!(s4.edge_count(), 3);
        assert_eq!(named_graph("K5-").unwrap().edge_count(), 9);
    }
}
