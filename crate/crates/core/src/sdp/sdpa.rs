//! Sparse SDPA text format.
//!
//! The problem is written in the primal form `max tr(C·Y)` subject to
//! `tr(A_i·Y) = a_i`, `Y ⪰ 0`, with
//! `Y = diag(Q_σ1, ..., Q_σt, diag(s_1, ..., s_k, b))`. Constraint `i` reads
//! `b - Σ_σ ⟨D_{σ,i}, Q_σ⟩ - s_i = d_i` and the objective is `-b`. Each row is
//! multiplied by the least common multiple of its denominators, so every
//! coefficient in the file is an integer and the file is exact.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{DensityProblem, SdpError};

/// A parsed SDPA file.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpaProblem {
    /// Negative sizes denote diagonal blocks.
    pub block_sizes: Vec<i64>,
    pub rhs: Vec<BigRational>,
    /// `(matrix, block, row, col, value)`, all 1-based, `matrix = 0` is `C`.
    pub entries: Vec<(usize, usize, usize, usize, BigRational)>,
}

impl SdpaProblem {
    pub fn constraint_count(&self) -> usize {
        self.rhs.len()
    }
}

fn row_scale(problem: &DensityProblem, i: usize) -> BigInt {
    let mut l = problem.d[i].denom().clone();
    for b in &problem.blocks {
        if !b.entries[i].is_empty() {
            l = l.lcm(&BigInt::from(b.denom));
        }
    }
    l
}

/// The problem as SDPA text.
pub fn write_problem(problem: &DensityProblem) -> String {
    let k = problem.graphs.len();
    let t = problem.blocks.len();
    let mut out = String::new();
    let spec = &problem.spec;
    let _ = writeln!(
        out,
        "* order {} arity {} directed {} forbidden [{}] target [{}]",
        spec.order,
        spec.arity,
        spec.directed,
        spec.forbidden.iter().map(|f| format!("{} {:?}", f.graph, f.mode)).collect::<Vec<_>>().join(", "),
        spec.target.join(", ")
    );
    let _ = writeln!(out, "* blocks: one per type, sorted by (size, key); last block holds slacks and the bound");
    let _ = writeln!(out, "{k}");
    let _ = writeln!(out, "{}", t + 1);
    let sizes: Vec<String> =
        problem.blocks.iter().map(|b| b.size().to_string()).chain(std::iter::once(format!("-{}", k + 1))).collect();
    let _ = writeln!(out, "{}", sizes.join(" "));
    let scales: Vec<BigInt> = (0..k).map(|i| row_scale(problem, i)).collect();
    let rhs: Vec<String> =
        problem.d.iter().zip(&scales).map(|(d, l)| (d * BigRational::from_integer(l.clone())).to_integer().to_string()).collect();
    let _ = writeln!(out, "{}", rhs.join(" "));
    let _ = writeln!(out, "0 {} {} {} -1", t + 1, k + 1, k + 1);
    for i in 0..k {
        let l = &scales[i];
        for (bi, block) in problem.blocks.iter().enumerate() {
            let per = l / BigInt::from(block.denom);
            for &(a, b, c) in &block.entries[i] {
                let v = -(&per * BigInt::from(c));
                let _ = writeln!(out, "{} {} {} {} {}", i + 1, bi + 1, a + 1, b + 1, v);
            }
        }
        let _ = writeln!(out, "{} {} {} {} {}", i + 1, t + 1, i + 1, i + 1, -l);
        let _ = writeln!(out, "{} {} {} {} {}", i + 1, t + 1, k + 1, k + 1, l);
    }
    out
}

pub fn export_problem(problem: &DensityProblem, path: &Path) -> Result<(), SdpError> {
    std::fs::write(path, write_problem(problem))?;
    Ok(())
}

fn parse_number(tok: &str) -> Option<BigRational> {
    if let Some(r) = crate::rational::parse_rational(tok) {
        return Some(r);
    }
    // Exact decimal, e.g. "-0.25" or "1e-3".
    let x: f64 = tok.parse().ok()?;
    crate::rational::from_f64(x)
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('*') && !l.starts_with('"'))
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || c == ',' || c == '{' || c == '}' || c == '(' || c == ')').filter(|t| !t.is_empty())
}

pub fn parse_sdpa(text: &str) -> Result<SdpaProblem, SdpError> {
    let bad = |m: &str| SdpError::Malformed(m.to_string());
    let mut lines = data_lines(text);
    let m: usize = lines.next().and_then(|l| tokens(l).next()?.parse().ok()).ok_or_else(|| bad("constraint count"))?;
    let nblocks: usize = lines.next().and_then(|l| tokens(l).next()?.parse().ok()).ok_or_else(|| bad("block count"))?;
    let block_sizes: Vec<i64> = lines
        .next()
        .ok_or_else(|| bad("block sizes"))?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad("block size")))
        .collect::<Result<_, _>>()?;
    if block_sizes.len() != nblocks {
        return Err(bad("block size count"));
    }
    let rhs: Vec<BigRational> = tokens(lines.next().ok_or_else(|| bad("objective vector"))?)
        .map(|t| parse_number(t).ok_or_else(|| bad("objective entry")))
        .collect::<Result<_, _>>()?;
    if rhs.len() != m {
        return Err(bad("objective vector length"));
    }
    let mut entries = Vec::new();
    for line in lines {
        let t: Vec<&str> = tokens(line).collect();
        if t.len() != 5 {
            return Err(bad(&format!("entry line {line:?}")));
        }
        let idx: Vec<usize> = t[..4].iter().map(|x| x.parse().map_err(|_| bad("entry index"))).collect::<Result<_, _>>()?;
        let v = parse_number(t[4]).ok_or_else(|| bad("entry value"))?;
        if idx[0] > m || idx[1] == 0 || idx[1] > nblocks {
            return Err(SdpError::Dimension(format!("entry {line:?} out of range")));
        }
        let size = block_sizes[idx[1] - 1].unsigned_abs() as usize;
        if idx[2] == 0 || idx[3] == 0 || idx[2] > size || idx[3] > size {
            return Err(SdpError::Dimension(format!("entry {line:?} outside block of size {size}")));
        }
        entries.push((idx[0], idx[1], idx[2], idx[3], v));
    }
    Ok(SdpaProblem { block_sizes, rhs, entries })
}

/// Floating solution read back from the solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSolution {
    pub bound: f64,
    /// One dense symmetric matrix per type block.
    pub q: Vec<Vec<Vec<f64>>>,
}

/// Parses a solution in the CSDP layout: the dual vector on the first line,
/// then `matrix block row col value` lines where matrix 1 is the dual slack
/// and matrix 2 the primal `Y`.
pub fn parse_solution(problem: &DensityProblem, text: &str) -> Result<SolverSolution, SdpError> {
    let bad = |m: &str| SdpError::Malformed(m.to_string());
    let k = problem.graphs.len();
    let sizes = problem.block_sizes();
    let mut lines = data_lines(text);
    let y: Vec<f64> =
        tokens(lines.next().ok_or_else(|| bad("empty solution"))?).map(|t| t.parse().map_err(|_| bad("dual entry"))).collect::<Result<_, _>>()?;
    if y.len() != k {
        return Err(SdpError::Dimension(format!("dual vector has {} entries, expected {k}", y.len())));
    }
    let mut q: Vec<Vec<Vec<f64>>> = sizes.iter().map(|&n| vec![vec![0.0; n]; n]).collect();
    let mut bound = None;
    for line in lines {
        let t: Vec<&str> = tokens(line).collect();
        if t.len() != 5 {
            return Err(bad(&format!("entry line {line:?}")));
        }
        let idx: Vec<usize> = t[..4].iter().map(|x| x.parse().map_err(|_| bad("entry index"))).collect::<Result<_, _>>()?;
        let v: f64 = t[4].parse().map_err(|_| bad("entry value"))?;
        let (mat, blk, i, j) = (idx[0], idx[1], idx[2], idx[3]);
        if !(1..=2).contains(&mat) || blk == 0 || blk > sizes.len() + 1 || i == 0 || j == 0 {
            return Err(SdpError::Dimension(format!("entry {line:?} out of range")));
        }
        let size = if blk <= sizes.len() { sizes[blk - 1] } else { k + 1 };
        if i > size || j > size {
            return Err(SdpError::Dimension(format!("entry {line:?} outside block {blk} of size {size}")));
        }
        if mat != 2 {
            continue;
        }
        if blk <= sizes.len() {
            q[blk - 1][i - 1][j - 1] = v;
            q[blk - 1][j - 1][i - 1] = v;
        } else if i == k + 1 && j == k + 1 {
            bound = Some(v);
        }
    }
    Ok(SolverSolution { bound: bound.ok_or_else(|| bad("solution has no bound entry"))?, q })
}

pub fn import_solution(problem: &DensityProblem, path: &Path) -> Result<SolverSolution, SdpError> {
    parse_solution(problem, &std::fs::read_to_string(path)?)
}

impl SdpaProblem {
    /// Row `i` (0-based) divided back by its scale, for checking round trips:
    /// returns `(d_i, per-block D entries, slack coefficient)` with `b`'s
    /// coefficient normalised to one.
    pub fn normalised_row(&self, i: usize) -> Option<(BigRational, Vec<(usize, usize, usize, BigRational)>)> {
        let k = self.constraint_count();
        let last = self.block_sizes.len();
        let scale = self
            .entries
            .iter()
            .find(|e| e.0 == i + 1 && e.1 == last && e.2 == k + 1 && e.3 == k + 1)
            .map(|e| e.4.clone())?;
        if scale.is_zero() {
            return None;
        }
        let d = &self.rhs[i] / &scale;
        let mut out = Vec::new();
        for e in self.entries.iter().filter(|e| e.0 == i + 1 && e.1 != last) {
            out.push((e.1 - 1, e.2 - 1, e.3 - 1, -(&e.4 / &scale)));
        }
        let slack = self.entries.iter().find(|e| e.0 == i + 1 && e.1 == last && e.2 == i + 1)?;
        if slack.4 != -scale.clone() * BigRational::one() {
            return None;
        }
        Some((d, out))
    }
}
