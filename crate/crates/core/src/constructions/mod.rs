//! Blow-up patterns and the densities they produce.

mod arrangement;
mod blowup;
mod build;
pub mod closed_form;
mod geometric;
mod gt;
mod hom;
mod iterated;
mod optimize;
mod pattern;
mod scalar;

use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::graph::{GraphError, GraphKind};

pub use arrangement::{Arrangement, Point};
pub use blowup::{blowup_density, blowup_distribution};
pub use build::build_blowup;
pub use geometric::{geometric_exact, geometric_graph, geometric_sample, parity_distribution, ClassEstimate, GeometricSample};
pub use gt::{gt_pattern, h_pattern};
pub use hom::pattern_hom_exists;
pub use iterated::iterated_density;
pub use optimize::{optimize_weights, Optimum};
pub use pattern::{catalog, Pattern, Weights};
pub use scalar::{Dual, Scalar};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("pattern parse error: {0}")]
    Parse(String),
    #[error("edge {0:?} does not have {1} parts")]
    EdgeArity(Vec<usize>, usize),
    #[error("part {0} does not exist")]
    BadPart(usize),
    #[error("directed pattern has a loop on part {0}")]
    DirectedLoop(usize),
    #[error("recursive part {0} also carries a loop edge")]
    LoopOnRecursive(usize),
    #[error("{0} weights given for {1} parts")]
    WeightCount(usize, usize),
    #[error("weights must be nonnegative")]
    NegativeWeight,
    #[error("weights sum to {0}, not 1")]
    WeightSum(f64),
    #[error("pattern has recursive parts; use the iterated evaluator")]
    RecursivePattern,
    #[error("pattern has no recursive part")]
    NotRecursive,
    #[error("iterated density diverges: recursive weights leave no mass outside the recursion")]
    Divergent,
    #[error("pattern is a {0} pattern but the target is a {1}")]
    KindMismatch(GraphKind, GraphKind),
    #[error("{what} is capped at {cap}, got {n}")]
    CapExceeded { what: &'static str, cap: usize, n: usize },
    #[error("tolerance {0} is below the supported 1e-12")]
    Tolerance(f64),
    #[error("optimiser did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error("could not place points in general position after {0} attempts")]
    Degenerate(usize),
}

/// A density, exact when all weights are rational.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityValue {
    Exact(BigRational),
    Float { value: f64, error: f64 },
}

impl DensityValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            DensityValue::Exact(x) => crate::rational::to_f64(x),
            DensityValue::Float { value, .. } => *value,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            DensityValue::Exact(x) => Some(x),
            DensityValue::Float { .. } => None,
        }
    }
}

impl fmt::Display for DensityValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityValue::Exact(x) => write!(f, "{}", crate::rational::format_rational(x)),
            DensityValue::Float { value, error } => write!(f, "{}", crate::rational::format_float(*value, *error)),
        }
    }
}
