use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use super::ConstructionError;

/// Denominator of the tangent half-angle parameters.
const PARAM_DEN: i64 = 1 << 10;
/// Parameters are drawn from `[-PARAM_RANGE, PARAM_RANGE]`, i.e. t in [-4, 4].
const PARAM_RANGE: i64 = 1 << 12;
const MAX_ATTEMPTS: usize = 100;
/// Lines are stored as u128 sign masks, so at most 128 chords.
pub const MAX_POINTS: usize = 16;

/// A point in the plane with exact coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub x: BigRational,
    pub y: BigRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Vertex {
    Corner(usize),
    Crossing(usize),
}

/// Points on the unit circle and the subdivision of their convex hull cut
/// out by all chords.
///
/// A point with parameter `t = a/b` sits at `((b²-a²), 2ab) / (b²+a²)`, which
/// keeps every coordinate rational. Faces are identified by their sign
/// vector with respect to the chord lines (bit `l` set when the face lies on
/// the positive side of line `l`). Every face is a convex polygon whose
/// corners are hull corners or chord crossings, so faces are discovered from
/// the four quadrants around each crossing and the wedges at each corner.
#[derive(Debug, Clone)]
pub struct Arrangement {
    params: Vec<i64>,
    points: Vec<[i128; 3]>,
    chords: Vec<(usize, usize)>,
    lines: Vec<[i128; 3]>,
    crossings: Vec<(usize, usize, [BigInt; 3])>,
    faces: Vec<u128>,
    face_vertices: Vec<Vec<Vertex>>,
}

fn cross(p: &[i128; 3], q: &[i128; 3]) -> [i128; 3] {
    [p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]]
}

fn dot_small(l: &[i128; 3], p: &[i128; 3]) -> i128 {
    l[0] * p[0] + l[1] * p[1] + l[2] * p[2]
}

fn dot_big(l: &[i128; 3], x: &[BigInt; 3]) -> BigInt {
    x.iter().zip(l).map(|(xi, &li)| xi * BigInt::from(li)).sum()
}

fn chord_index(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    // Chords enumerated as (0,1), (0,2), ..., (0,n-1), (1,2), ...
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

impl Arrangement {
    /// Random general-position configuration; degenerate draws are retried.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Result<Self, ConstructionError> {
        for _ in 0..MAX_ATTEMPTS {
            let mut params: Vec<i64> = Vec::with_capacity(n);
            while params.len() < n {
                let a = rng.gen_range(-PARAM_RANGE..=PARAM_RANGE);
                if !params.contains(&a) {
                    params.push(a);
                }
            }
            if let Ok(a) = Arrangement::from_params(params) {
                return Ok(a);
            }
        }
        Err(ConstructionError::Degenerate(MAX_ATTEMPTS))
    }

    /// Builds the arrangement for the given numerators `a` of `t = a/1024`.
    pub fn from_params(mut params: Vec<i64>) -> Result<Self, ConstructionError> {
        let n = params.len();
        if n > MAX_POINTS {
            return Err(ConstructionError::CapExceeded { what: "arrangement points", cap: MAX_POINTS, n });
        }
        params.sort_unstable();
        if params.windows(2).any(|w| w[0] == w[1]) || params.iter().any(|a| a.abs() > PARAM_RANGE) {
            return Err(ConstructionError::Degenerate(1));
        }
        let b = PARAM_DEN as i128;
        let points: Vec<[i128; 3]> = params
            .iter()
            .map(|&a| {
                let a = a as i128;
                [b * b - a * a, 2 * a * b, b * b + a * a]
            })
            .collect();
        let chords: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
        let lines: Vec<[i128; 3]> = chords.iter().map(|&(i, j)| cross(&points[i], &points[j])).collect();

        // Sign of every point against every line not through it.
        let side = |l: usize, p: usize| dot_small(&lines[l], &points[p]) > 0;

        let mut crossings = Vec::new();
        for (l1, &(a, b)) in chords.iter().enumerate() {
            for (l2, &(c, d)) in chords.iter().enumerate().skip(l1 + 1) {
                let interleaved = (a < c && c < b && b < d) || (c < a && a < d && d < b);
                if !interleaved {
                    continue;
                }
                let mut x = cross(&lines[l1], &lines[l2]).map(BigInt::from);
                if x[2].is_negative() {
                    x = x.map(|v| -v);
                }
                crossings.push((l1, l2, x));
            }
        }

        let mut face_ids: HashMap<u128, usize> = HashMap::new();
        let mut faces = Vec::new();
        let mut face_vertices: Vec<Vec<Vertex>> = Vec::new();
        let mut add = |sig: u128, v: Vertex, faces: &mut Vec<u128>, fv: &mut Vec<Vec<Vertex>>| {
            let id = *face_ids.entry(sig).or_insert_with(|| {
                faces.push(sig);
                fv.push(Vec::new());
                faces.len() - 1
            });
            fv[id].push(v);
        };

        for (ci, (l1, l2, x)) in crossings.iter().enumerate() {
            let mut base = 0u128;
            for (l, line) in lines.iter().enumerate() {
                if l == *l1 || l == *l2 {
                    continue;
                }
                let s = dot_big(line, x);
                if s.is_zero() {
                    return Err(ConstructionError::Degenerate(1));
                }
                if s.is_positive() {
                    base |= 1 << l;
                }
            }
            for (s1, s2) in [(false, false), (false, true), (true, false), (true, true)] {
                let mut sig = base;
                if s1 {
                    sig |= 1 << l1;
                }
                if s2 {
                    sig |= 1 << l2;
                }
                add(sig, Vertex::Crossing(ci), &mut faces, &mut face_vertices);
            }
        }

        for i in 0..n {
            let around: Vec<usize> = (1..n).map(|s| (i + s) % n).collect();
            let mut base = 0u128;
            for (l, &(a, b)) in chords.iter().enumerate() {
                if a != i && b != i && side(l, i) {
                    base |= 1 << l;
                }
            }
            for m in 0..around.len().saturating_sub(1) {
                let mut sig = base;
                for (pos, &j) in around.iter().enumerate() {
                    let l = chord_index(n, i, j);
                    let witness = if pos <= m { around[m + 1] } else { around[m] };
                    if side(l, witness) {
                        sig |= 1 << l;
                    }
                }
                add(sig, Vertex::Corner(i), &mut faces, &mut face_vertices);
            }
        }

        Ok(Arrangement { params, points, chords, lines, crossings, faces, face_vertices })
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    /// Tangent half-angle parameters, increasing (so in circular order).
    pub fn params(&self) -> Vec<BigRational> {
        self.params.iter().map(|&a| BigRational::new(BigInt::from(a), BigInt::from(PARAM_DEN))).collect()
    }

    pub fn points(&self) -> Vec<Point> {
        self.points.iter().map(affine_small).collect()
    }

    pub fn chords(&self) -> &[(usize, usize)] {
        &self.chords
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Bounded faces of the subdivision.
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len() + self.crossings.len()
    }

    /// Each crossing splits both of its chords once.
    pub fn edge_count(&self) -> usize {
        self.chords.len() + 2 * self.crossings.len()
    }

    /// V - E + F with the outer face counted.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64 + 1
    }

    /// Centroid of the face's corners, which lies in its interior.
    pub fn face_representative(&self, f: usize) -> Point {
        let vs = &self.face_vertices[f];
        let mut x = BigRational::zero();
        let mut y = BigRational::zero();
        for v in vs {
            let p = match *v {
                Vertex::Corner(i) => affine_small(&self.points[i]),
                Vertex::Crossing(c) => affine_big(&self.crossings[c].2),
            };
            x += p.x;
            y += p.y;
        }
        let k = BigRational::from_integer(BigInt::from(vs.len()));
        Point { x: x / &k, y: y / k }
    }

    /// Whether `p` lies strictly on the positive side of every line the face
    /// is positive for, and strictly negative for the rest.
    pub fn face_contains(&self, f: usize, p: &Point) -> bool {
        self.lines.iter().enumerate().all(|(l, line)| {
            let v = BigRational::from_integer(BigInt::from(line[0])) * &p.x
                + BigRational::from_integer(BigInt::from(line[1])) * &p.y
                + BigRational::from_integer(BigInt::from(line[2]));
            !v.is_zero() && v.is_positive() == (self.faces[f] >> l & 1 == 1)
        })
    }

    /// Sign mask and expected bits describing the interior of triangle `ijk`.
    fn triangle_test(&self, i: usize, j: usize, k: usize) -> (u128, u128) {
        let n = self.points.len();
        let mut mask = 0u128;
        let mut want = 0u128;
        for (a, b, opp) in [(i, j, k), (j, k, i), (i, k, j)] {
            let l = chord_index(n, a, b);
            mask |= 1 << l;
            if dot_small(&self.lines[l], &self.points[opp]) > 0 {
                want |= 1 << l;
            }
        }
        (mask, want)
    }

    /// Faces inside the triangle spanned by points `i, j, k`.
    pub fn faces_in_triangle(&self, i: usize, j: usize, k: usize) -> Vec<usize> {
        let (mask, want) = self.triangle_test(i, j, k);
        (0..self.faces.len()).filter(|&f| self.faces[f] & mask == want).collect()
    }

    /// For each triple (in colex slot order), the faces it contains.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let n = self.points.len();
        crate::graph::GraphKind::TRIPLE.slots(n).iter().map(|t| self.faces_in_triangle(t[0], t[1], t[2])).collect()
    }
}

fn affine_small(p: &[i128; 3]) -> Point {
    let z = BigInt::from(p[2]);
    Point { x: BigRational::new(BigInt::from(p[0]), z.clone()), y: BigRational::new(BigInt::from(p[1]), z) }
}

fn affine_big(p: &[BigInt; 3]) -> Point {
    Point { x: BigRational::new(p[0].clone(), p[2].clone()), y: BigRational::new(p[1].clone(), p[2].clone()) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::binomial;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chord_indexing() {
        let n = 7;
        let chords: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
        for (l, &(a, b)) in chords.iter().enumerate() {
            assert_eq!(chord_index(n, a, b), l);
            assert_eq!(chord_index(n, b, a), l);
        }
    }

    #[test]
    fn points_lie_on_the_circle() {
        let a = Arrangement::from_params(vec![-3000, -10, 500, 4000]).unwrap();
        for p in a.points() {
            assert_eq!(&p.x * &p.x + &p.y * &p.y, BigRational::from_integer(1.into()));
        }
    }

    #[test]
    fn face_counts_and_euler() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 3..=10 {
            let a = Arrangement::random(n, &mut rng).unwrap();
            let n64 = n as u64;
            assert_eq!(a.crossing_count() as u64, binomial(n, 4));
            assert_eq!(a.face_count() as u64, binomial(n, 4) + binomial(n - 1, 2), "n={n}");
            assert_eq!(a.euler_characteristic(), 2);
            assert_eq!(a.vertex_count() as u64, n64 + binomial(n, 4));
        }
    }

    #[test]
    fn representatives_lie_in_their_faces() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [4, 5, 6, 8] {
            let a = Arrangement::random(n, &mut rng).unwrap();
            for f in 0..a.face_count() {
                let p = a.face_representative(f);
                assert!(a.face_contains(f, &p));
                for g in 0..a.face_count() {
                    if g != f {
                        assert!(!a.face_contains(g, &p));
                    }
                }
            }
        }
    }

    #[test]
    fn triangle_incidence_is_consistent_with_points() {
        // A face is in triangle ijk iff its representative point is.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = Arrangement::random(6, &mut rng).unwrap();
        let pts = a.points();
        let orient = |p: &Point, q: &Point, r: &Point| (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x);
        for t in (0..6).combinations(3) {
            let inside = a.faces_in_triangle(t[0], t[1], t[2]);
            for f in 0..a.face_count() {
                let c = a.face_representative(f);
                let (p, q, r) = (&pts[t[0]], &pts[t[1]], &pts[t[2]]);
                let s = [orient(p, q, &c), orient(q, r, &c), orient(r, p, &c)];
                let geometric = s.iter().all(|v| v.is_positive()) || s.iter().all(|v| v.is_negative());
                assert_eq!(inside.contains(&f), geometric);
            }
            // Triangle area is partitioned: every triangle holds at least one face.
            assert!(!inside.is_empty());
        }
    }

    #[test]
    fn concurrent_diagonals_are_rejected() {
        // Parameters of a regular hexagon's vertices are tan(kπ/6 - π/2 ...) and
        // are irrational; instead use a symmetric set where the three long
        // diagonals meet at the origin.
        let a = Arrangement::from_params(vec![-2048, -512, 0, 512, 2048]);
        assert!(a.is_ok());
        let sym = Arrangement::from_params(vec![-4096, -1024, -256, 256, 1024, 4096]);
        // ±t pairs are reflections in the x-axis; with points t and -1/t
        // antipodal, the set {-4, -1, -1/4, 1/4, 1, 4} has antipodal pairs
        // (4, -1/4), (1, -1), (1/4, -4): three diameters through the origin.
        assert!(matches!(sym, Err(ConstructionError::Degenerate(_))));
    }
}
