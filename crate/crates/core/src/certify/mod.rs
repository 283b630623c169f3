//! Exact verification of semi-definite density certificates.
//!
//! Verification never trusts the producer: it rebuilds the problem, checks
//! the fingerprint, decides positive semi-definiteness over the rationals and
//! recomputes every constraint.

mod psd;

use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, parse_rational};
use crate::sdp::{DensityProblem, ForbiddenEntry, SdpError};

pub use psd::{check_factorisation, check_psd};

pub type Matrix = Vec<Vec<BigRational>>;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("matrix is not symmetric at ({0}, {1})")]
    NonSymmetric(usize, usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("certificate does not match the problem: {0}")]
    Fingerprint(String),
    #[error("bad rational {0:?} in certificate (expected p/q)")]
    BadRational(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Sdp(#[from] SdpError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeEntry {
    #[serde(rename = "type")]
    pub sigma: String,
    pub flags: Vec<String>,
}

/// `Q = Σ_k weights[k] · rows[k] rows[k]ᵀ` with nonnegative weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub weights: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// The on-disk certificate. Every number is an exact `p/q` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub order: usize,
    pub arity: usize,
    #[serde(default)]
    pub directed: bool,
    #[serde(default)]
    pub digons: bool,
    pub forbidden: Vec<ForbiddenEntry>,
    pub target: Vec<String>,
    /// Hex canonical keys of the admissible graphs, in constraint order.
    pub admissible_keys: Vec<String>,
    pub bound: String,
    pub types: Vec<TypeEntry>,
    pub q_matrices: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_factors: Option<Vec<FactorEntry>>,
}

/// Exact factor of one block: nonnegative weights and rational rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub weights: Vec<BigRational>,
    pub rows: Vec<Vec<BigRational>>,
}

impl Factor {
    /// `Σ_k w_k r_k r_kᵀ`.
    pub fn product(&self, n: usize) -> Matrix {
        let mut q = vec![vec![BigRational::zero(); n]; n];
        for (w, r) in self.weights.iter().zip(&self.rows) {
            for a in 0..n {
                if r[a].is_zero() {
                    continue;
                }
                let wa = w * &r[a];
                for b in 0..n {
                    if !r[b].is_zero() {
                        q[a][b] += &wa * &r[b];
                    }
                }
            }
        }
        q
    }
}

fn fmt_matrix(m: &Matrix) -> Vec<Vec<String>> {
    m.iter().map(|row| row.iter().map(format_rational).collect()).collect()
}

fn parse_exact(s: &str) -> Result<BigRational, CertifyError> {
    // Only p/q or integers; decimals would silently lose exactness.
    if s.contains(['.', 'e', 'E']) {
        return Err(CertifyError::BadRational(s.to_string()));
    }
    parse_rational(s).ok_or_else(|| CertifyError::BadRational(s.to_string()))
}

fn parse_matrix(m: &[Vec<String>]) -> Result<Matrix, CertifyError> {
    m.iter().map(|row| row.iter().map(|x| parse_exact(x)).collect()).collect()
}

impl Certificate {
    /// Builds a certificate for `problem` with the given blocks. The claimed
    /// bound is the exact value the blocks achieve.
    pub fn new(problem: &DensityProblem, q: Vec<Matrix>, factors: Option<Vec<Factor>>) -> Certificate {
        let (bound, _) = evaluate(problem, &q);
        let spec = &problem.spec;
        Certificate {
            order: spec.order,
            arity: spec.arity,
            directed: spec.directed,
            digons: spec.digons,
            forbidden: spec.forbidden.clone(),
            target: spec.target.clone(),
            admissible_keys: problem.graphs.iter().map(|c| c.key.to_hex()).collect(),
            bound: format_rational(&bound),
            types: type_entries(problem),
            q_matrices: q.iter().map(fmt_matrix).collect(),
            r_factors: factors.map(|fs| {
                fs.iter()
                    .map(|f| FactorEntry { weights: f.weights.iter().map(format_rational).collect(), rows: fmt_matrix(&f.rows) })
                    .collect()
            }),
        }
    }

    /// The problem description this certificate claims to be about.
    pub fn problem_spec(&self) -> crate::sdp::ProblemSpec {
        crate::sdp::ProblemSpec {
            order: self.order,
            arity: self.arity,
            directed: self.directed,
            digons: self.digons,
            forbidden: self.forbidden.clone(),
            target: self.target.clone(),
        }
    }

    pub fn claimed_bound(&self) -> Result<BigRational, CertifyError> {
        parse_exact(&self.bound)
    }

    pub fn matrices(&self) -> Result<Vec<Matrix>, CertifyError> {
        self.q_matrices.iter().map(|m| parse_matrix(m)).collect()
    }

    pub fn factors(&self) -> Result<Option<Vec<Factor>>, CertifyError> {
        let Some(fs) = &self.r_factors else { return Ok(None) };
        fs.iter()
            .map(|f| {
                let weights = f.weights.iter().map(|w| parse_exact(w)).collect::<Result<Vec<_>, _>>()?;
                let rows = parse_matrix(&f.rows)?;
                if weights.len() != rows.len() {
                    return Err(CertifyError::Malformed("factor weights and rows differ in number".into()));
                }
                Ok(Factor { weights, rows })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Certificate, CertifyError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), CertifyError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Certificate, CertifyError> {
        Certificate::from_json(&std::fs::read_to_string(path)?)
    }

    /// Errors unless the certificate was made for exactly this problem.
    pub fn check_fingerprint(&self, problem: &DensityProblem) -> Result<(), CertifyError> {
        let mismatch = |what: &str| Err(CertifyError::Fingerprint(what.to_string()));
        if self.problem_spec() != problem.spec {
            return mismatch("order, family or target differ");
        }
        if self.admissible_keys.len() != problem.graphs.len()
            || self.admissible_keys.iter().zip(&problem.graphs).any(|(k, c)| *k != c.key.to_hex())
        {
            return mismatch("admissible graphs differ");
        }
        if self.types != type_entries(problem) {
            return mismatch("types or flags differ");
        }
        if self.q_matrices.len() != problem.blocks.len() {
            return mismatch("number of blocks differs");
        }
        for (i, (m, b)) in self.q_matrices.iter().zip(&problem.blocks).enumerate() {
            if m.len() != b.size() || m.iter().any(|row| row.len() != b.size()) {
                return Err(CertifyError::Fingerprint(format!("block {} should be {}x{}", i + 1, b.size(), b.size())));
            }
        }
        if let Some(fs) = &self.r_factors {
            if fs.len() != problem.blocks.len() {
                return mismatch("number of factor blocks differs");
            }
            for (f, b) in fs.iter().zip(&problem.blocks) {
                if f.rows.iter().any(|r| r.len() != b.size()) {
                    return mismatch("factor row length differs from block size");
                }
            }
        }
        Ok(())
    }
}

fn type_entries(problem: &DensityProblem) -> Vec<TypeEntry> {
    problem
        .blocks
        .iter()
        .map(|b| TypeEntry { sigma: b.flags.sigma.graph.to_string(), flags: b.flags.flags.iter().map(|f| f.to_string()).collect() })
        .collect()
}

/// Exact `max_i (d_i + Σ_σ ⟨Q_σ, D_{σ,i}⟩)` and the first index attaining it.
pub fn evaluate(problem: &DensityProblem, q: &[Matrix]) -> (BigRational, usize) {
    let values: Vec<BigRational> = (0..problem.graphs.len()).into_par_iter().map(|i| problem.constraint_value(i, q)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    (values[best].clone(), best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub valid: bool,
    pub claimed_bound: BigRational,
    /// Exact maximum over the constraints.
    pub certified_bound: BigRational,
    /// Index (in the problem's graph order) of a constraint attaining it.
    pub worst_graph: usize,
    /// Why the certificate is invalid.
    pub failure: Option<String>,
}

/// Checks `cert` against `problem` in exact arithmetic.
pub fn verify(cert: &Certificate, problem: &DensityProblem) -> Result<Verdict, CertifyError> {
    cert.check_fingerprint(problem)?;
    let claimed = cert.claimed_bound()?;
    let q = cert.matrices()?;
    let factors = cert.factors()?;
    let mut failure = None;
    for (bi, m) in q.iter().enumerate() {
        let ok = match &factors {
            Some(fs) => match check_factorisation(m, &fs[bi]) {
                Ok(true) => None,
                Ok(false) => Some(format!("block {} is not positive semi-definite: it differs from its stored factorisation", bi + 1)),
                Err(e) => Some(format!("block {}: {e}", bi + 1)),
            },
            None => match check_psd(m) {
                Ok(true) => None,
                Ok(false) => Some(format!("block {} is not positive semi-definite", bi + 1)),
                Err(e) => Some(format!("block {}: {e}", bi + 1)),
            },
        };
        if ok.is_some() {
            failure = ok;
            break;
        }
    }
    let (certified, worst) = if problem.graphs.is_empty() { (BigRational::zero(), 0) } else { evaluate(problem, &q) };
    if failure.is_none() && certified > claimed {
        failure = Some(format!(
            "constraint {} evaluates to {} which exceeds the claimed bound {}",
            worst + 1,
            format_rational(&certified),
            format_rational(&claimed)
        ));
    }
    if failure.is_none() && (claimed.is_negative() || claimed > BigRational::one()) {
        failure = Some(format!("claimed bound {} lies outside [0, 1]", format_rational(&claimed)));
    }
    Ok(Verdict { valid: failure.is_none(), claimed_bound: claimed, certified_bound: certified, worst_graph: worst, failure })
}

/// The zero certificate: every block zero, bound `max_i d_i`.
pub fn zero_certificate(problem: &DensityProblem) -> Certificate {
    let q = problem.blocks.iter().map(|b| vec![vec![BigRational::zero(); b.size()]; b.size()]).collect();
    Certificate::new(problem, q, None)
}
