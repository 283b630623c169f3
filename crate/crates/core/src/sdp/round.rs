//! Turning a floating solver solution into an exact certificate.
//!
//! Each block `Q̃` is factored as `Σ_k d_k l_k l_kᵀ` by pivoted LDLᵀ in
//! floating point. The entries of `l_k` and the pivots `d_k` are rounded to
//! rationals with bounded denominators, and the exact block is rebuilt from
//! the rounded factor, so it is positive semi-definite by construction.

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::Signed;

use super::{DensityProblem, SdpError, SolverSolution};
use crate::certify::{Certificate, Factor};
use crate::rational::best_rational;

/// Eigenvalues below this are treated as a solver failure rather than noise.
const NEGATIVE_TOLERANCE: f64 = -1e-6;

/// Pivots below this (relative to the largest diagonal entry) end the
/// factorisation; the remainder is dropped.
const PIVOT_TOLERANCE: f64 = 1e-10;

/// One rounded block together with the factor it was rebuilt from.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundedBlock {
    pub factor: Factor,
    pub q: Vec<Vec<BigRational>>,
}

fn min_eigenvalue(q: &[Vec<f64>]) -> f64 {
    let n = q.len();
    if n == 0 {
        return 0.0;
    }
    let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (q[i][j] + q[j][i]));
    m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Floating pivoted LDLᵀ: pairs `(d_k, l_k)` with `l_k[p_k] = 1`.
fn float_ldl(q: &[Vec<f64>]) -> Vec<(f64, Vec<f64>)> {
    let n = q.len();
    let mut a: Vec<Vec<f64>> = q.to_vec();
    let scale = (0..n).map(|i| a[i][i].abs()).fold(1.0, f64::max);
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    while !active.is_empty() {
        let (pos, &p) = active.iter().enumerate().max_by(|x, y| a[*x.1][*x.1].total_cmp(&a[*y.1][*y.1])).unwrap();
        let d = a[p][p];
        if d <= PIVOT_TOLERANCE * scale {
            break;
        }
        active.swap_remove(pos);
        let mut l = vec![0.0; n];
        l[p] = 1.0;
        for &i in &active {
            l[i] = a[i][p] / d;
        }
        for &i in &active {
            for &j in &active {
                a[i][j] -= d * l[i] * l[j];
            }
        }
        out.push((d, l));
    }
    out
}

/// Rounds one block. Errors if `q` is not square or is badly non-PSD.
pub fn round_block(q: &[Vec<f64>], denom_bound: u64, block: usize) -> Result<RoundedBlock, SdpError> {
    let n = q.len();
    if q.iter().any(|r| r.len() != n) {
        return Err(SdpError::Dimension(format!("block {} is not square", block + 1)));
    }
    let min = min_eigenvalue(q);
    if min < NEGATIVE_TOLERANCE {
        return Err(SdpError::NotPsd { block: block + 1, min_eigenvalue: min });
    }
    let mut weights = Vec::new();
    let mut rows = Vec::new();
    for (d, l) in float_ldl(q) {
        let w = best_rational(d, denom_bound);
        if !w.is_positive() {
            continue;
        }
        weights.push(w);
        rows.push(l.iter().map(|&x| best_rational(x, denom_bound)).collect::<Vec<_>>());
    }
    let factor = Factor { weights, rows };
    let q = factor.product(n);
    Ok(RoundedBlock { factor, q })
}

/// Exact certificate from a floating solution. The claimed bound is
/// recomputed exactly from the rounded blocks.
pub fn round_solution(problem: &DensityProblem, solution: &SolverSolution, denom_bound: u64) -> Result<Certificate, SdpError> {
    if denom_bound == 0 {
        return Err(SdpError::Spec("denominator bound must be at least 1".into()));
    }
    let sizes = problem.block_sizes();
    if solution.q.len() != sizes.len() {
        return Err(SdpError::Dimension(format!("solution has {} blocks, problem has {}", solution.q.len(), sizes.len())));
    }
    let mut blocks = Vec::with_capacity(sizes.len());
    for (i, (q, &n)) in solution.q.iter().zip(&sizes).enumerate() {
        if q.len() != n {
            return Err(SdpError::Dimension(format!("block {} has size {}, expected {n}", i + 1, q.len())));
        }
        blocks.push(round_block(q, denom_bound, i)?);
    }
    let (q, factors): (Vec<_>, Vec<_>) = blocks.into_iter().map(|b| (b.q, b.factor)).unzip();
    Ok(Certificate::new(problem, q, Some(factors)))
}
