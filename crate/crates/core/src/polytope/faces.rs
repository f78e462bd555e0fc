use std::collections::{BTreeSet, HashMap};

use super::{affine_rank, LatticePolytope, Point, PolytopeError};

/// A nonempty proper face, identified by its vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face {
    pub dim: usize,
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    /// Sorted indices of all facets containing the face.
    pub facets: Vec<usize>,
}

pub(crate) fn enumerate(vertices: &[Point], facet_vertices: &[Vec<usize>]) -> Vec<Face> {
    let mut seen: BTreeSet<Vec<usize>> = facet_vertices.iter().cloned().collect();
    let mut frontier: Vec<Vec<usize>> = seen.iter().cloned().collect();
    while let Some(set) = frontier.pop() {
        for fv in facet_vertices {
            let meet: Vec<usize> = set.iter().filter(|v| fv.contains(v)).copied().collect();
            if !meet.is_empty() && seen.insert(meet.clone()) {
                frontier.push(meet);
            }
        }
    }
    let mut faces: Vec<Face> = seen
        .into_iter()
        .map(|vs| {
            let pts: Vec<Point> = vs.iter().map(|&i| vertices[i]).collect();
            let facets =
                (0..facet_vertices.len()).filter(|&f| vs.iter().all(|v| facet_vertices[f].contains(v))).collect();
            Face { dim: affine_rank(&pts), vertices: vs, facets }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    faces
}

/// A face `θ` of a reflexive polytope together with its dual face `θ°`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePair {
    pub dim: usize,
    pub vertex_indices: Vec<usize>,
    /// Vertices of the polar dual saturating `⟨y, x⟩ = −1` on the face.
    pub dual_vertex_indices: Vec<usize>,
    pub lattice_points: Vec<Point>,
    /// Lattice points in the relative interior, `l*(θ)`.
    pub interior_count: usize,
}

impl FacePair {
    /// `l(θ)`.
    pub fn lattice_count(&self) -> usize {
        self.lattice_points.len()
    }

    pub fn dual_dim(&self) -> usize {
        3 - self.dim
    }
}

/// A reflexive polytope `Δ` with its polar dual `Δ°` and the face pairing
/// in both directions.
#[derive(Debug, Clone)]
pub struct ReflexivePair {
    pub delta: LatticePolytope,
    pub dual: LatticePolytope,
    delta_pairs: Vec<FacePair>,
    dual_pairs: Vec<FacePair>,
}

impl ReflexivePair {
    pub fn new(delta: LatticePolytope) -> Result<Self, PolytopeError> {
        if !delta.is_reflexive() {
            return Err(PolytopeError::NotReflexive);
        }
        let dual = delta.polar_dual()?;
        let delta_pairs = pairs(&delta, &dual);
        let dual_pairs = pairs(&dual, &delta);
        Ok(ReflexivePair { delta, dual, delta_pairs, dual_pairs })
    }

    /// Pair built from the dual side: `dual` is taken as `Δ°`.
    pub fn from_dual(dual: LatticePolytope) -> Result<Self, PolytopeError> {
        let mut pair = Self::new(dual)?;
        pair.swap();
        Ok(pair)
    }

    /// Exchanges the roles of `Δ` and `Δ°`.
    pub fn swap(&mut self) {
        std::mem::swap(&mut self.delta, &mut self.dual);
        std::mem::swap(&mut self.delta_pairs, &mut self.dual_pairs);
    }

    pub fn swapped(mut self) -> Self {
        self.swap();
        self
    }

    /// Faces of `Δ` with their duals in `Δ°`.
    pub fn delta_faces(&self) -> &[FacePair] {
        &self.delta_pairs
    }

    /// Faces of `Δ°` with their duals in `Δ`.
    pub fn dual_faces(&self) -> &[FacePair] {
        &self.dual_pairs
    }

    /// `l*` of the face of `Δ` with the given vertex set.
    pub fn delta_interior_count(&self, vertices: &[usize]) -> Option<usize> {
        self.delta_pairs.iter().find(|p| p.vertex_indices == vertices).map(|p| p.interior_count)
    }

    pub fn dual_interior_count(&self, vertices: &[usize]) -> Option<usize> {
        self.dual_pairs.iter().find(|p| p.vertex_indices == vertices).map(|p| p.interior_count)
    }
}

fn pairs(p: &LatticePolytope, dual: &LatticePolytope) -> Vec<FacePair> {
    // facet i of p <-> dual vertex equal to its normal (offsets are 1)
    let index_of: HashMap<Point, usize> =
        dual.vertices().iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let facet_to_dual: Vec<usize> = p.facets().iter().map(|f| index_of[&f.normal]).collect();
    let interiors = p.relative_interior_points();
    p.faces()
        .iter()
        .map(|face| {
            let mut dual_vertex_indices: Vec<usize> = face.facets.iter().map(|&f| facet_to_dual[f]).collect();
            dual_vertex_indices.sort_unstable();
            FacePair {
                dim: face.dim,
                vertex_indices: face.vertices.clone(),
                dual_vertex_indices,
                lattice_points: p.points_on_face(face),
                interior_count: interiors.get(&face.facets).map_or(0, Vec::len),
            }
        })
        .collect()
}

/// Every face of a reflexive `delta` with its dual face.
pub fn face_lattice(delta: &LatticePolytope) -> Result<Vec<FacePair>, PolytopeError> {
    Ok(ReflexivePair::new(delta.clone())?.delta_pairs)
}
