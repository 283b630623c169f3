use rayon::prelude::*;

use super::blowup::{float_error, BlowupPlan};
use super::iterated::{check, Iterated};
use super::{ConstructionError, Dual, Pattern, Scalar};
use crate::graph::Target;

/// Best part weights found for a pattern and target.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub weights: Vec<f64>,
    pub value: f64,
    pub error: f64,
}

enum Objective<'a> {
    Plan(BlowupPlan),
    Iterated(&'a Pattern, &'a Target),
}

impl Objective<'_> {
    fn eval<T: Scalar>(&self, w: &[T]) -> Option<T> {
        match self {
            Objective::Plan(plan) => Some(plan.eval(w)),
            Objective::Iterated(p, t) => Iterated::new(p, w).target_density(t).ok(),
        }
    }

    fn value(&self, w: &[f64]) -> f64 {
        self.eval(w).unwrap_or(f64::NEG_INFINITY)
    }
}

const SEARCH_BUDGET: usize = 200_000;
const MAX_STEPS: usize = 1_000_000;

/// Maximises the target density over the weight simplex, keeping edges and
/// recursion fixed. Two parts: grid scan, then bisection on the exact
/// derivative. More parts: simplex grid, then a pairwise mass-moving
/// pattern search. Among maxima within `tol` of the best, the
/// lexicographically smallest weight vector wins.
pub fn optimize_weights(p: &Pattern, target: &Target, tol: f64) -> Result<Optimum, ConstructionError> {
    if !(tol >= 1e-12) {
        return Err(ConstructionError::Tolerance(tol));
    }
    if p.kind() != target.kind() {
        return Err(ConstructionError::KindMismatch(p.kind(), target.kind()));
    }
    let objective = if p.is_recursive() {
        check(p, target)?;
        Objective::Iterated(p, target)
    } else {
        Objective::Plan(BlowupPlan::new(p, target.order(), Some(target))?)
    };
    let k = p.parts();
    let mut candidates = match k {
        1 => vec![vec![1.0]],
        2 => two_parts(&objective),
        _ => many_parts(&objective, k)?,
    };
    let values: Vec<f64> = candidates.iter().map(|w| objective.value(w)).collect();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return Err(ConstructionError::Divergent);
    }
    let mut near: Vec<(Vec<f64>, f64)> =
        candidates.drain(..).zip(values).filter(|(_, v)| *v >= best - tol).collect();
    near.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite weights"));
    let (weights, value) = near.swap_remove(0);
    let terms = match &objective {
        Objective::Plan(plan) => plan.len(),
        Objective::Iterated(..) => 1 << 12,
    };
    Ok(Optimum { weights, value, error: float_error(terms, target.order()) })
}

fn two_parts(obj: &Objective) -> Vec<Vec<f64>> {
    const N: usize = 1000;
    let at = |t: f64| vec![t, 1.0 - t];
    let grid: Vec<f64> = (0..=N).into_par_iter().map(|i| obj.value(&at(i as f64 / N as f64))).collect();
    let mut peaks: Vec<usize> = (0..=N)
        .filter(|&i| grid[i].is_finite())
        .filter(|&i| (i == 0 || grid[i] >= grid[i - 1]) && (i == N || grid[i] >= grid[i + 1]))
        .collect();
    peaks.sort_by(|&a, &b| grid[b].partial_cmp(&grid[a]).unwrap().then(a.cmp(&b)));
    peaks.truncate(8);
    let deriv = |t: f64| obj.eval(&[Dual::variable(t), Dual::constant(1.0) - Dual::variable(t)]).map(|d| d.deriv);
    let mut out = Vec::new();
    for i in peaks {
        let lo0 = i.saturating_sub(1) as f64 / N as f64;
        let hi0 = (i + 1).min(N) as f64 / N as f64;
        let (dlo, dhi) = (deriv(lo0), deriv(hi0));
        let t = match (dlo, dhi) {
            (Some(a), Some(b)) if a > 0.0 && b < 0.0 => {
                let (mut lo, mut hi) = (lo0, hi0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    match deriv(mid) {
                        Some(d) if d > 0.0 => lo = mid,
                        Some(d) if d < 0.0 => hi = mid,
                        Some(_) => {
                            lo = mid;
                            hi = mid;
                        }
                        None => break,
                    }
                }
                0.5 * (lo + hi)
            }
            _ => {
                out.push(at(i as f64 / N as f64));
                golden(|t| obj.value(&at(t)), lo0, hi0)
            }
        };
        out.push(at(t));
    }
    out
}

fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..200 {
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    0.5 * (a + b)
}

fn simplex_points(n: usize, k: usize) -> Vec<Vec<usize>> {
    super::blowup::compositions(n, k)
}

fn many_parts(obj: &Objective, k: usize) -> Result<Vec<Vec<f64>>, ConstructionError> {
    let mut n = 1000usize;
    while n > 1 && crate::graph::binomial(n + k - 1, k - 1) as usize > SEARCH_BUDGET {
        n = n * 9 / 10;
    }
    let grid = simplex_points(n, k);
    let scale = 1.0 / n as f64;
    let values: Vec<f64> =
        grid.par_iter().map(|c| obj.value(&c.iter().map(|&x| x as f64 * scale).collect::<Vec<_>>())).collect();
    let mut order: Vec<usize> = (0..grid.len()).filter(|&i| values[i].is_finite()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap().then(a.cmp(&b)));
    order.truncate(6);
    let mut out = Vec::new();
    for i in order {
        let start: Vec<f64> = grid[i].iter().map(|&x| x as f64 * scale).collect();
        out.push(start.clone());
        out.push(pattern_search(obj, start, scale)?);
    }
    Ok(out)
}

fn pattern_search(obj: &Objective, mut w: Vec<f64>, mut step: f64) -> Result<Vec<f64>, ConstructionError> {
    let k = w.len();
    let mut best = obj.value(&w);
    let mut steps = 0;
    while step > 1e-14 {
        let mut improved = false;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let s = step.min(w[j]);
                if s <= 0.0 {
                    continue;
                }
                let mut trial = w.clone();
                trial[i] += s;
                trial[j] -= s;
                let v = obj.value(&trial);
                if v > best {
                    best = v;
                    w = trial;
                    improved = true;
                }
                steps += 1;
                if steps > MAX_STEPS {
                    return Err(ConstructionError::NonConvergence(MAX_STEPS));
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::catalog;
    use crate::graph::named_graph;

    #[test]
    fn one_one_two_peaks_at_two_thirds() {
        let t = Target::single(named_graph("edge").unwrap());
        let o = optimize_weights(&catalog::one_one_two(), &t, 1e-12).unwrap();
        assert!((o.weights[0] - 2.0 / 3.0).abs() < 1e-9, "{o:?}");
        assert!((o.value - 4.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn turan_prefers_balanced_parts() {
        let t = Target::single(named_graph("K4-").unwrap());
        let o = optimize_weights(&catalog::turan(), &t, 1e-12).unwrap();
        assert!((o.value - 16.0 / 27.0).abs() < 1e-9, "{o:?}");
        for w in &o.weights {
            assert!((w - 1.0 / 3.0).abs() < 1e-4);
        }
    }

    #[test]
    fn recursive_star_root() {
        // S3 maximiser solves 3x^2 - ... ; the optimum value is 2*sqrt(3) - 3.
        let p: Pattern = "parts=2; edges=12; recursive=1; directed=1".parse().unwrap();
        let t = Target::single(named_graph("S3").unwrap());
        let o = optimize_weights(&p, &t, 1e-12).unwrap();
        assert!((o.value - (2.0 * 3f64.sqrt() - 3.0)).abs() < 1e-12, "{o:?}");
    }

    #[test]
    fn tolerance_floor() {
        let t = Target::single(named_graph("edge").unwrap());
        assert!(matches!(optimize_weights(&catalog::one_one_two(), &t, 1e-13), Err(ConstructionError::Tolerance(_))));
    }
}
