//! Four-dimensional lattice polytopes: convex hull, polar duality, faces,
//! lattice points, normalized volume and the vertex sublattice.

mod faces;
mod hull;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{rank_exact, smith_diagonal, IntMatrix};

pub use faces::{face_lattice, Face, FacePair, ReflexivePair};

/// A point of the lattice ℤ⁴ (either M or N).
pub type Point = [i64; 4];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("polytope has no points")]
    Empty,
    #[error("points do not span four dimensions")]
    NotFullDimensional,
    #[error("origin is not an interior point")]
    OriginNotInterior,
    #[error("polar dual has non-integral vertices (polytope is not reflexive)")]
    NonIntegralDual,
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("coordinate overflow in exact arithmetic")]
    CoordinateOverflow,
}

/// Supporting inequality `⟨normal, x⟩ + offset ≥ 0` with a primitive normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Point,
    pub offset: i64,
}

impl Facet {
    pub fn eval(&self, x: &Point) -> i64 {
        dot(&self.normal, x) + self.offset
    }
}

pub fn dot(a: &Point, b: &Point) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

pub(crate) fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// Integer determinant of four points of ℤ⁴, as rows.
pub(crate) fn det4(rows: [&Point; 4]) -> i128 {
    let m: [[i128; 4]; 4] = rows.map(|r| r.map(i128::from));
    let mut total = 0i128;
    for c in 0..4 {
        let minor = |r: usize, k: usize| {
            let cols: Vec<usize> = (0..4).filter(|&x| x != c).collect();
            m[r][cols[k]]
        };
        let d3 = minor(1, 0) * (minor(2, 1) * minor(3, 2) - minor(2, 2) * minor(3, 1))
            - minor(1, 1) * (minor(2, 0) * minor(3, 2) - minor(2, 2) * minor(3, 0))
            + minor(1, 2) * (minor(2, 0) * minor(3, 1) - minor(2, 1) * minor(3, 0));
        let term = m[0][c] * d3;
        total += if c % 2 == 0 { term } else { -term };
    }
    total
}

pub(crate) fn affine_rank(points: &[Point]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let rows: Vec<[i64; 4]> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    rank_exact(&IntMatrix::from_rows(&rows))
}

/// Which vertex a pulling triangulation cones from at every level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PullOrder {
    /// Lexicographically smallest vertex first.
    First,
    /// Lexicographically largest vertex first.
    Last,
}

/// Full-dimensional lattice polytope in ℤ⁴ with its facets, faces and
/// lattice points.
///
/// Vertices are the extreme points of the input, sorted lexicographically.
/// Facets are sorted by `(normal, offset)`.
#[derive(Debug, Clone)]
pub struct LatticePolytope {
    vertices: Vec<Point>,
    facets: Vec<Facet>,
    facet_vertices: Vec<Vec<usize>>,
    faces: Vec<Face>,
    points: Vec<Point>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl LatticePolytope {
    /// Convex hull of `points`. Duplicates and non-extreme points are dropped.
    pub fn from_points(points: &[Point]) -> Result<Self, PolytopeError> {
        if points.is_empty() {
            return Err(PolytopeError::Empty);
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        if affine_rank(&pts) < 4 {
            return Err(PolytopeError::NotFullDimensional);
        }
        let facets = hull::facets(&pts)?;

        let vertices: Vec<Point> = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<[i64; 4]> =
                    facets.iter().filter(|f| f.eval(p) == 0).map(|f| f.normal).collect();
                tight.len() >= 4 && rank_exact(&IntMatrix::from_rows(&tight)) == 4
            })
            .collect();

        let facet_vertices: Vec<Vec<usize>> = facets
            .iter()
            .map(|f| (0..vertices.len()).filter(|&i| f.eval(&vertices[i]) == 0).collect())
            .collect();
        let faces = faces::enumerate(&vertices, &facet_vertices);
        let points = enumerate_lattice_points(&vertices, &facets);
        Ok(LatticePolytope { vertices, facets, facet_vertices, faces, points })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Vertex indices on each facet, parallel to [`facets`](Self::facets).
    pub fn facet_vertices(&self) -> &[Vec<usize>] {
        &self.facet_vertices
    }

    /// All nonempty proper faces, sorted by dimension then vertex indices.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, dim: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == dim)
    }

    /// All lattice points, sorted lexicographically.
    pub fn lattice_points(&self) -> &[Point] {
        &self.points
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.facets.iter().all(|f| f.eval(x) >= 0)
    }

    pub fn origin_is_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset > 0)
    }

    /// Origin interior and every facet at lattice distance one.
    pub fn is_reflexive(&self) -> bool {
        self.facets.iter().all(|f| f.offset == 1)
    }

    /// `{y : ⟨y, x⟩ ≥ −1 for all x in self}`.
    pub fn polar_dual(&self) -> Result<LatticePolytope, PolytopeError> {
        if !self.origin_is_interior() {
            return Err(PolytopeError::OriginNotInterior);
        }
        if !self.is_reflexive() {
            return Err(PolytopeError::NonIntegralDual);
        }
        let normals: Vec<Point> = self.facets.iter().map(|f| f.normal).collect();
        LatticePolytope::from_points(&normals)
    }

    /// Indices of facets tight at `x`.
    pub fn tight_facets(&self, x: &Point) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| self.facets[i].eval(x) == 0).collect()
    }

    /// Lattice points on the boundary.
    pub fn boundary_point_count(&self) -> usize {
        self.points.iter().filter(|p| self.facets.iter().any(|f| f.eval(p) == 0)).count()
    }

    /// Lattice points in the relative interior of each face, keyed by the
    /// face's facet set. Points interior to the polytope are keyed by `[]`.
    pub fn relative_interior_points(&self) -> HashMap<Vec<usize>, Vec<Point>> {
        let mut map: HashMap<Vec<usize>, Vec<Point>> = HashMap::new();
        for p in &self.points {
            map.entry(self.tight_facets(p)).or_default().push(*p);
        }
        map
    }

    /// Lattice points on a face (closed).
    pub fn points_on_face(&self, face: &Face) -> Vec<Point> {
        self.points
            .iter()
            .filter(|p| face.facets.iter().all(|&f| self.facets[f].eval(p) == 0))
            .copied()
            .collect()
    }

    /// Lattice points in the relative interior of a face.
    pub fn interior_points_of_face(&self, face: &Face) -> Vec<Point> {
        self.points.iter().filter(|p| self.tight_facets(p) == face.facets).copied().collect()
    }

    /// True if some facet contains a lattice point in its relative interior.
    pub fn has_facet_interior_point(&self) -> bool {
        self.points.iter().any(|p| self.tight_facets(p).len() == 1)
    }

    /// `4!` times the Euclidean volume, summed over cones from the origin on
    /// a pulling triangulation of the boundary.
    pub fn normalized_volume(&self) -> Result<u64, PolytopeError> {
        self.normalized_volume_with(PullOrder::First)
    }

    pub fn normalized_volume_with(&self, order: PullOrder) -> Result<u64, PolytopeError> {
        if !self.origin_is_interior() {
            return Err(PolytopeError::OriginNotInterior);
        }
        let origin = [0i64; 4];
        let mut total: i128 = 0;
        for facet in self.faces_of_dim(3) {
            for simplex in self.pulling_triangulation(facet, order) {
                let rows: Vec<Point> =
                    simplex.iter().map(|&v| sub(&self.vertices[v], &origin)).collect();
                total += det4([&rows[0], &rows[1], &rows[2], &rows[3]]).abs();
            }
        }
        u64::try_from(total).map_err(|_| PolytopeError::CoordinateOverflow)
    }

    /// Normalized volume by pulling the whole polytope from one of its own
    /// vertices; does not need the origin in the interior.
    pub fn normalized_volume_from_vertex(&self, order: PullOrder) -> u64 {
        let apex = match order {
            PullOrder::First => 0,
            PullOrder::Last => self.vertices.len() - 1,
        };
        let mut total: i128 = 0;
        for facet in self.faces_of_dim(3).filter(|f| !f.vertices.contains(&apex)) {
            for simplex in self.pulling_triangulation(facet, order) {
                let rows: Vec<Point> =
                    simplex.iter().map(|&v| sub(&self.vertices[v], &self.vertices[apex])).collect();
                total += det4([&rows[0], &rows[1], &rows[2], &rows[3]]).abs();
            }
        }
        total as u64
    }

    /// Pulling triangulation of a face into simplices (vertex index lists).
    pub fn pulling_triangulation(&self, face: &Face, order: PullOrder) -> Vec<Vec<usize>> {
        if face.dim == 0 {
            return vec![face.vertices.clone()];
        }
        let apex = match order {
            PullOrder::First => face.vertices[0],
            PullOrder::Last => *face.vertices.last().expect("face has vertices"),
        };
        let mut out = Vec::new();
        for sub_face in self.faces_of_dim(face.dim - 1) {
            if sub_face.vertices.contains(&apex)
                || !sub_face.vertices.iter().all(|v| face.vertices.contains(v))
            {
                continue;
            }
            for mut s in self.pulling_triangulation(sub_face, order) {
                s.insert(0, apex);
                out.push(s);
            }
        }
        out
    }

    /// Smith diagonal of the vertex-difference matrix `v_i − v_0`.
    pub fn vertex_difference_smith(&self) -> Vec<BigInt> {
        let rows: Vec<Point> = self.vertices[1..].iter().map(|v| sub(v, &self.vertices[0])).collect();
        smith_diagonal(&IntMatrix::from_rows(&rows))
    }

    /// First Smith invariant `d₁` of the vertex differences: the largest
    /// integer dividing every coordinate of every `v_i − v_0`.
    pub fn vertex_sublattice_index(&self) -> BigInt {
        self.vertex_difference_smith().into_iter().find(|d| !d.is_zero()).unwrap_or_else(BigInt::one)
    }
}

fn enumerate_lattice_points(vertices: &[Point], facets: &[Facet]) -> Vec<Point> {
    let mut lo = [i64::MAX; 4];
    let mut hi = [i64::MIN; 4];
    for v in vertices {
        for c in 0..4 {
            lo[c] = lo[c].min(v[c]);
            hi[c] = hi[c].max(v[c]);
        }
    }
    let mut out = Vec::new();
    for a in lo[0]..=hi[0] {
        for b in lo[1]..=hi[1] {
            for c in lo[2]..=hi[2] {
                for d in lo[3]..=hi[3] {
                    let p = [a, b, c, d];
                    if facets.iter().all(|f| f.eval(&p) >= 0) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Standard reference polytopes used in tests, benches and docs.
pub mod examples {
    use super::Point;

    /// Fan simplex of ℙ⁴: `conv{e₁, e₂, e₃, e₄, −e₁−e₂−e₃−e₄}`.
    pub fn p4_fan_simplex() -> Vec<Point> {
        vec![[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [-1, -1, -1, -1]]
    }

    /// Newton polytope of the quintic: `conv{5e_i − (1,1,1,1), −(1,1,1,1)}`.
    pub fn quintic_newton() -> Vec<Point> {
        vec![[4, -1, -1, -1], [-1, 4, -1, -1], [-1, -1, 4, -1], [-1, -1, -1, 4], [-1, -1, -1, -1]]
    }

    /// Cross-polytope `conv{±e_i}`.
    pub fn cross_polytope() -> Vec<Point> {
        let mut v = Vec::new();
        for i in 0..4 {
            let mut p = [0; 4];
            p[i] = 1;
            v.push(p);
            p[i] = -1;
            v.push(p);
        }
        v
    }
}
