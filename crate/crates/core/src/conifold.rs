//! Conifold combinatorics of a reflexive pair: 2-face admissibility, the
//! conifold edges `P(Δ)`, the relation matrix `Λ(Δ)`, the smoothing
//! criterion and Hodge numbers before and after the transition.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{rank_exact, IntMatrix};
use crate::polytope::{sub, FacePair, LatticePolytope, Point, PolytopeError, ReflexivePair};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConifoldError {
    #[error("expected a 2-face, got a face of dimension {0}")]
    WrongDimension(usize),
    #[error("dual polytope has a 2-face that is neither a unimodular triangle nor a minimal parallelogram")]
    NotAdmissible,
    #[error("conifold hypersurface is not smoothable")]
    NotSmoothable,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Classification of a 2-face of `Δ°`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwoFaceClass {
    UnimodularTriangle,
    /// `v_i + v_j = v_s + v_r`; `plus = [i, j]` is the lexicographically
    /// smaller diagonal.
    MinimalParallelogram { plus: [usize; 2], minus: [usize; 2] },
    Other,
}

/// Normalized area of the triangle `(a, b, c)` in its own plane lattice:
/// the gcd of the 2×2 minors of `(b − a, c − a)`.
fn lattice_area(a: &Point, b: &Point, c: &Point) -> i64 {
    let u = sub(b, a);
    let w = sub(c, a);
    let mut g = 0i64;
    for i in 0..4 {
        for j in i + 1..4 {
            g = g.gcd(&(u[i] * w[j] - u[j] * w[i]));
        }
    }
    g
}

/// Classifies a 2-face of `poly` (vertex indices refer to `poly`).
pub fn classify_two_face(poly: &LatticePolytope, face: &FacePair) -> Result<TwoFaceClass, ConifoldError> {
    if face.dim != 2 {
        return Err(ConifoldError::WrongDimension(face.dim));
    }
    let idx = &face.vertex_indices;
    let v = |i: usize| poly.vertices()[i];
    match idx.len() {
        3 if lattice_area(&v(idx[0]), &v(idx[1]), &v(idx[2])) == 1 => Ok(TwoFaceClass::UnimodularTriangle),
        4 => {
            let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
            let pairings = [([a, b], [c, d]), ([a, c], [b, d]), ([a, d], [b, c])];
            let sum = |p: [usize; 2]| -> Point {
                let (x, y) = (v(p[0]), v(p[1]));
                [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]]
            };
            let found: Vec<_> = pairings.iter().filter(|(p, q)| sum(*p) == sum(*q)).collect();
            let [(p, q)] = found.as_slice() else {
                return Ok(TwoFaceClass::Other);
            };
            // p is a diagonal, so p[0], q[0], q[1] span a half-parallelogram
            let half = lattice_area(&v(p[0]), &v(q[0]), &v(q[1]));
            if half == 1 && face.lattice_points.len() == 4 {
                let (plus, minus) = if p < q { (*p, *q) } else { (*q, *p) };
                Ok(TwoFaceClass::MinimalParallelogram { plus, minus })
            } else {
                Ok(TwoFaceClass::Other)
            }
        }
        _ => Ok(TwoFaceClass::Other),
    }
}

/// True iff every 2-face of `Δ°` is a unimodular triangle or a minimal
/// parallelogram.
pub fn is_admissible(pair: &ReflexivePair) -> bool {
    pair.dual_faces()
        .iter()
        .filter(|f| f.dim == 2)
        .all(|f| !matches!(classify_two_face(&pair.dual, f), Ok(TwoFaceClass::Other) | Err(_)))
}

/// Admissibility of a reflexive `Δ°` given on its own.
pub fn admissibility(delta_dual: &LatticePolytope) -> Result<bool, ConifoldError> {
    let pair = ReflexivePair::from_dual(delta_dual.clone())?;
    Ok(is_admissible(&pair))
}

/// An edge `θ ⊂ Δ` whose dual 2-face is a minimal parallelogram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConifoldEdge {
    /// Vertex indices of the edge in `Δ`.
    pub edge: [usize; 2],
    /// Vertex indices of the parallelogram in `Δ°`.
    pub parallelogram: [usize; 4],
    /// `l(θ) − 1`: number of conifold points on this edge's curve.
    pub k_theta: usize,
    /// Relation `ρ_θ` over the vertices of `Δ°`.
    pub relation: Vec<i64>,
}

/// Conifold edges `P(Δ)` in the order of the 2-faces of `Δ°`.
pub fn conifold_edges(pair: &ReflexivePair) -> Result<Vec<ConifoldEdge>, ConifoldError> {
    let l = pair.dual.vertices().len();
    let mut edges = Vec::new();
    for face in pair.dual_faces().iter().filter(|f| f.dim == 2) {
        match classify_two_face(&pair.dual, face)? {
            TwoFaceClass::UnimodularTriangle => {}
            TwoFaceClass::Other => return Err(ConifoldError::NotAdmissible),
            TwoFaceClass::MinimalParallelogram { plus, minus } => {
                let edge_face = pair
                    .delta_faces()
                    .iter()
                    .find(|e| e.vertex_indices == face.dual_vertex_indices)
                    .expect("dual of a 2-face is an edge of Δ");
                let mut relation = vec![0i64; l];
                for i in plus {
                    relation[i] += 1;
                }
                for i in minus {
                    relation[i] -= 1;
                }
                let idx = &face.vertex_indices;
                edges.push(ConifoldEdge {
                    edge: [edge_face.vertex_indices[0], edge_face.vertex_indices[1]],
                    parallelogram: [idx[0], idx[1], idx[2], idx[3]],
                    k_theta: edge_face.lattice_count() - 1,
                    relation,
                });
            }
        }
    }
    Ok(edges)
}

/// The `p × l` matrix whose rows are the relations `ρ_θ`.
pub fn relation_matrix(edges: &[ConifoldEdge], l: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = edges.iter().map(|e| e.relation.clone()).collect();
    if rows.is_empty() {
        return IntMatrix::zeros(0, l);
    }
    IntMatrix::from_rows(&rows)
}

/// Smoothable iff removing any row with `k_θ = 1` keeps the rank of `Λ`.
/// Rows with `k_θ ≥ 2` repeat their class and impose no condition.
pub fn smoothing_criterion(lambda: &IntMatrix, k_theta: &[usize]) -> bool {
    assert_eq!(lambda.rows(), k_theta.len());
    let full = rank_exact(lambda);
    k_theta
        .iter()
        .enumerate()
        .filter(|(_, &k)| k == 1)
        .all(|(i, _)| rank_exact(&lambda.without_row(i)) == full)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgePair {
    pub h11: i64,
    pub h21: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeData {
    pub h11_resolved: i64,
    pub h21_resolved: i64,
    pub h11_smoothed: i64,
    pub h21_smoothed: i64,
}

impl HodgeData {
    pub fn smoothed(&self) -> HodgePair {
        HodgePair { h11: self.h11_smoothed, h21: self.h21_smoothed }
    }
}

/// `l(Q) − 5 − Σ_{facets} l*(θ) + Σ_{2-faces} l*(θ)·l*(θ*)` over the faces
/// `θ` of `Q` with dual faces `θ*` of the partner polytope.
fn hodge_term(q: &LatticePolytope, q_faces: &[FacePair], partner_faces: &[FacePair]) -> i64 {
    let mut h = q.lattice_points().len() as i64 - 5;
    for f in q_faces {
        match f.dim {
            3 => h -= f.interior_count as i64,
            2 => {
                let dual = partner_faces
                    .iter()
                    .find(|p| p.vertex_indices == f.dual_vertex_indices)
                    .map_or(0, |p| p.interior_count);
                h += (f.interior_count * dual) as i64;
            }
            _ => {}
        }
    }
    h
}

/// `(h¹¹, h²¹)` of the MPPC-resolved hypersurface in the toric variety of `Δ`.
pub fn hodge_resolved(pair: &ReflexivePair) -> HodgePair {
    HodgePair {
        h11: hodge_term(&pair.dual, pair.dual_faces(), pair.delta_faces()),
        h21: hodge_term(&pair.delta, pair.delta_faces(), pair.dual_faces()),
    }
}

pub fn hodge_smoothed(resolved: HodgePair, rk: usize, dp: usize) -> HodgeData {
    HodgeData {
        h11_resolved: resolved.h11,
        h21_resolved: resolved.h21,
        h11_smoothed: resolved.h11 - rk as i64,
        h21_smoothed: resolved.h21 + dp as i64 - rk as i64,
    }
}

/// Smoothed Hodge numbers, refusing when the criterion fails.
pub fn checked_hodge_smoothed(report: &ConifoldReport, resolved: HodgePair) -> Result<HodgeData, ConifoldError> {
    if !report.smoothable {
        return Err(ConifoldError::NotSmoothable);
    }
    Ok(hodge_smoothed(resolved, report.rk, report.dp))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConifoldReport {
    pub admissible: bool,
    pub edges: Vec<ConifoldEdge>,
    pub lambda: IntMatrix,
    pub rk: usize,
    pub dp: usize,
    pub smoothable: bool,
}

impl ConifoldReport {
    pub fn p(&self) -> usize {
        self.edges.len()
    }
}

/// Full conifold analysis of a reflexive pair.
pub fn analyze(pair: &ReflexivePair) -> Result<ConifoldReport, ConifoldError> {
    if !is_admissible(pair) {
        return Err(ConifoldError::NotAdmissible);
    }
    let edges = conifold_edges(pair)?;
    let lambda = relation_matrix(&edges, pair.dual.vertices().len());
    let rk = rank_exact(&lambda);
    let ks: Vec<usize> = edges.iter().map(|e| e.k_theta).collect();
    let smoothable = smoothing_criterion(&lambda, &ks);
    let dp = ks.iter().sum();
    Ok(ConifoldReport { admissible: true, edges, lambda, rk, dp, smoothable })
}
