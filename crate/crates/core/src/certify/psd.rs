use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{CertifyError, Factor};

fn check_symmetric(m: &[Vec<BigRational>]) -> Result<(), CertifyError> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(CertifyError::NotSquare);
    }
    for i in 0..n {
        for j in i + 1..n {
            if m[i][j] != m[j][i] {
                return Err(CertifyError::NonSymmetric(i, j));
            }
        }
    }
    Ok(())
}

/// Decides `M ⪰ 0` exactly by symmetric-pivoted LDLᵀ. Each step eliminates
/// the remaining index with the largest absolute diagonal entry; a negative
/// pivot, or a zero pivot with a nonzero off-diagonal entry, is a witness of
/// indefiniteness.
pub fn check_psd(m: &[Vec<BigRational>]) -> Result<bool, CertifyError> {
    check_symmetric(m)?;
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut active: Vec<usize> = (0..m.len()).collect();
    while !active.is_empty() {
        let (pos, &p) = active.iter().enumerate().max_by(|x, y| a[*x.1][*x.1].abs().cmp(&a[*y.1][*y.1].abs())).unwrap();
        let pivot = a[p][p].clone();
        if pivot.is_negative() {
            return Ok(false);
        }
        if pivot.is_zero() {
            // Every remaining diagonal entry is zero.
            return Ok(active.iter().all(|&i| active.iter().all(|&j| a[i][j].is_zero())));
        }
        active.swap_remove(pos);
        let col: Vec<BigRational> = active.iter().map(|&i| &a[i][p] / &pivot).collect();
        for (x, &i) in active.iter().enumerate() {
            if col[x].is_zero() {
                continue;
            }
            for &j in &active {
                let t = &col[x] * &a[p][j];
                a[i][j] -= t;
            }
        }
    }
    Ok(true)
}

/// `true` iff every weight is nonnegative and `M = Σ_k w_k r_k r_kᵀ`
/// exactly, which makes `M` positive semi-definite without factoring it.
pub fn check_factorisation(m: &[Vec<BigRational>], f: &Factor) -> Result<bool, CertifyError> {
    check_symmetric(m)?;
    let n = m.len();
    if f.weights.len() != f.rows.len() || f.rows.iter().any(|r| r.len() != n) {
        return Err(CertifyError::Malformed("factor dimensions do not match the matrix".into()));
    }
    if f.weights.iter().any(Signed::is_negative) {
        return Ok(false);
    }
    Ok(f.product(n) == m)
}
