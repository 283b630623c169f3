use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Arrangement, ConstructionError};
use crate::graph::{binomial, induced_profile, CanonicalKey, Classifier, GraphKind, UniformGraph};

const MAX_SAMPLE_ORDER: usize = 12;

/// Exact distribution of the induced 3-graph on `h` points in convex position
/// when every face carries an independent fair parity bit and a triple is an
/// edge iff its triangle holds an odd number of set faces.
///
/// The triple parities are a GF(2)-linear image of the face bits, so the
/// outcome is uniform over the column span of the face/triple incidence
/// matrix; enumerating that span gives the same distribution as enumerating
/// all face assignments.
pub fn geometric_exact(h: usize) -> Result<BTreeMap<CanonicalKey, BigRational>, ConstructionError> {
    if !(4..=6).contains(&h) {
        return Err(ConstructionError::CapExceeded { what: "exact geometric order (4..=6)", cap: 6, n: h });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(h as u64);
    let arr = Arrangement::random(h, &mut rng)?;
    Ok(parity_distribution(&arr))
}

/// Distribution of induced 3-graphs for a given arrangement.
pub fn parity_distribution(arr: &Arrangement) -> BTreeMap<CanonicalKey, BigRational> {
    let h = arr.point_count();
    let incidence = arr.incidence();
    let mut columns = vec![0u128; arr.face_count()];
    for (t, faces) in incidence.iter().enumerate() {
        for &f in faces {
            columns[f] |= 1 << t;
        }
    }
    let basis = gf2_basis(&columns);
    let mut classifier = Classifier::new(GraphKind::TRIPLE, h);
    let mut counts: BTreeMap<CanonicalKey, u64> = BTreeMap::new();
    let mut mask = 0u128;
    // Gray code walk through the span.
    for step in 0u64..(1u64 << basis.len()) {
        if step > 0 {
            mask ^= basis[step.trailing_zeros() as usize];
        }
        *counts.entry(classifier.class_of_mask(mask).clone()).or_insert(0) += 1;
    }
    let total = BigInt::from(1u64 << basis.len());
    counts.into_iter().map(|(k, c)| (k, BigRational::new(BigInt::from(c), total.clone()))).collect()
}

fn gf2_basis(vectors: &[u128]) -> Vec<u128> {
    let mut basis: Vec<u128> = Vec::new();
    for &v in vectors {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// Mean and standard error of a per-trial statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassEstimate {
    pub mean: f64,
    pub std_error: f64,
}

impl ClassEstimate {
    fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std_error = if xs.len() > 1 {
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        ClassEstimate { mean, std_error }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricSample {
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    pub edge_density: ClassEstimate,
    pub four: BTreeMap<CanonicalKey, ClassEstimate>,
    pub five: BTreeMap<CanonicalKey, ClassEstimate>,
}

struct Trial {
    edge: f64,
    four: BTreeMap<CanonicalKey, f64>,
    five: BTreeMap<CanonicalKey, f64>,
}

/// One full construction on `n` points.
pub fn geometric_graph<R: Rng>(n: usize, rng: &mut R) -> Result<UniformGraph, ConstructionError> {
    let arr = Arrangement::random(n, rng)?;
    let bits: Vec<bool> = (0..arr.face_count()).map(|_| rng.gen()).collect();
    let slots = GraphKind::TRIPLE.slots(n);
    let edges: Vec<&Vec<usize>> = arr
        .incidence()
        .iter()
        .zip(&slots)
        .filter(|(faces, _)| faces.iter().filter(|&&f| bits[f]).count() % 2 == 1)
        .map(|(_, t)| t)
        .collect();
    Ok(UniformGraph::new(GraphKind::TRIPLE, n, edges)?)
}

fn run_trial(n: usize, seed: u64, trial: usize) -> Result<Trial, ConstructionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let g = geometric_graph(n, &mut rng)?;
    let profile = |h: usize| -> BTreeMap<CanonicalKey, f64> {
        let total = binomial(n, h) as f64;
        induced_profile(&g, h).into_iter().map(|(k, c)| (k, c as f64 / total)).collect()
    };
    Ok(Trial { edge: g.edge_count() as f64 / binomial(n, 3) as f64, four: profile(4), five: profile(5) })
}

/// Monte Carlo statistics of the construction on `n` points. Trial `i` uses
/// its own stream of a generator seeded with `seed`, so results do not depend
/// on scheduling.
pub fn geometric_sample(n: usize, trials: usize, seed: u64) -> Result<GeometricSample, ConstructionError> {
    if n > MAX_SAMPLE_ORDER {
        return Err(ConstructionError::CapExceeded { what: "geometric sample order", cap: MAX_SAMPLE_ORDER, n });
    }
    if n < 5 || trials == 0 {
        return Err(ConstructionError::Parse("geometric sampling needs n >= 5 and at least one trial".into()));
    }
    let runs: Vec<Trial> = (0..trials).into_par_iter().map(|t| run_trial(n, seed, t)).collect::<Result<_, _>>()?;
    let summarise = |pick: &dyn Fn(&Trial) -> &BTreeMap<CanonicalKey, f64>| {
        let mut keys: Vec<CanonicalKey> = runs.iter().flat_map(|r| pick(r).keys().cloned()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| {
                let xs: Vec<f64> = runs.iter().map(|r| pick(r).get(&k).copied().unwrap_or(0.0)).collect();
                (k, ClassEstimate::from_samples(&xs))
            })
            .collect::<BTreeMap<_, _>>()
    };
    let edges: Vec<f64> = runs.iter().map(|r| r.edge).collect();
    Ok(GeometricSample {
        order: n,
        trials,
        seed,
        edge_density: ClassEstimate::from_samples(&edges),
        four: summarise(&|r| &r.four),
        five: summarise(&|r| &r.five),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{canonical_form, named_family, named_graph};
    use crate::rational::ratio;
    use num_traits::{One, Zero};

    fn key(name: &str) -> CanonicalKey {
        canonical_form(&named_graph(name).unwrap()).key
    }

    /// Every face assignment, one by one.
    fn literal(arr: &Arrangement) -> BTreeMap<CanonicalKey, BigRational> {
        let h = arr.point_count();
        let inc = arr.incidence();
        let f = arr.face_count();
        let mut classifier = Classifier::new(GraphKind::TRIPLE, h);
        let mut counts: BTreeMap<CanonicalKey, u64> = BTreeMap::new();
        for bits in 0u64..(1 << f) {
            let mut mask = 0u128;
            for (t, faces) in inc.iter().enumerate() {
                if faces.iter().filter(|&&x| bits >> x & 1 == 1).count() % 2 == 1 {
                    mask |= 1 << t;
                }
            }
            *counts.entry(classifier.class_of_mask(mask).clone()).or_insert(0) += 1;
        }
        counts.into_iter().map(|(k, c)| (k, BigRational::new(c.into(), BigInt::from(1u64 << f)))).collect()
    }

    #[test]
    fn span_enumeration_matches_literal_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for h in [4, 5] {
            for _ in 0..3 {
                let arr = Arrangement::random(h, &mut rng).unwrap();
                assert_eq!(parity_distribution(&arr), literal(&arr));
            }
        }
    }

    #[test]
    fn four_points() {
        let d = geometric_exact(4).unwrap();
        let two = canonical_form(&named_family("4.2").unwrap()[0]).key;
        assert_eq!(d[&two], ratio(3, 4));
        assert_eq!(d[&key("K4")], ratio(1, 8));
        let empty = canonical_form(&UniformGraph::empty(GraphKind::TRIPLE, 4).unwrap()).key;
        assert_eq!(d[&empty], ratio(1, 8));
        assert_eq!(d.len(), 3);
    }

    #[test]
    fn five_points_and_normalisation() {
        let d5 = geometric_exact(5).unwrap();
        assert_eq!(d5[&key("C5")], ratio(3, 16));
        for h in 4..=6 {
            let d = geometric_exact(h).unwrap();
            assert!(d.values().sum::<BigRational>().is_one());
        }
    }

    #[test]
    fn marginals_agree() {
        // Summing the 5-point distribution over 4-subsets gives the 4-point one.
        let d4 = geometric_exact(4).unwrap();
        let d5 = geometric_exact(5).unwrap();
        let mut marginal: BTreeMap<CanonicalKey, BigRational> = BTreeMap::new();
        for (k, p) in &d5 {
            let g = k.to_graph();
            for (k4, c) in induced_profile(&g, 4) {
                *marginal.entry(k4).or_insert_with(BigRational::zero) += p * ratio(c as i64, 5);
            }
        }
        assert_eq!(marginal, d4);
    }

    #[test]
    fn edge_marginal_is_half() {
        for h in 4..=6 {
            let d = geometric_exact(h).unwrap();
            let e: BigRational = d.iter().map(|(k, p)| p * ratio(k.to_graph().edge_count() as i64, binomial(h, 3) as i64)).sum();
            assert_eq!(e, ratio(1, 2));
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = geometric_sample(7, 6, 42).unwrap();
        let b = geometric_sample(7, 6, 42).unwrap();
        assert_eq!(a, b);
        let total: f64 = a.four.values().map(|e| e.mean).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(geometric_sample(13, 1, 0).is_err());
    }
}
