use super::{ConstructionError, Pattern, Weights};
use crate::graph::GraphKind;

/// Degenerate pattern `H_t` on `t` parts (0-based internally): `H_2` and
/// `H_3` are given directly, and `H_t` adds two parts to `H_{t-2}`, each
/// internally complete, joined by the edges of type `aab` and `abb`.
pub fn h_pattern(t: usize) -> Result<Pattern, ConstructionError> {
    if t < 2 {
        return Err(ConstructionError::Parse(format!("H_t needs t >= 2, got {t}")));
    }
    Pattern::new(GraphKind::TRIPLE, t, h_edges(t), [], Weights::balanced(t))
}

fn h_edges(t: usize) -> Vec<Vec<usize>> {
    match t {
        2 => vec![vec![0, 0, 0], vec![1, 1, 1], vec![0, 0, 1], vec![0, 1, 1]],
        3 => vec![vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2], vec![0, 0, 1], vec![1, 1, 2], vec![0, 2, 2]],
        _ => {
            let (a, b) = (t - 2, t - 1);
            let mut e = h_edges(t - 2);
            e.extend([vec![a, a, a], vec![b, b, b], vec![a, a, b], vec![a, b, b]]);
            e
        }
    }
}

/// `G_t`: the complement of the balanced blow-up of `H_{t-1}`, on `t - 1`
/// parts. Its blow-ups are `K_t`-free.
pub fn gt_pattern(t: usize) -> Result<Pattern, ConstructionError> {
    if t < 3 {
        return Err(ConstructionError::Parse(format!("G_t needs t >= 3, got {t}")));
    }
    h_pattern(t - 1)?.complement()
}
