//! Topological invariants of a one-parameter smoothing: `H³`, `c₂·H`, `c₃`
//! and the key used to group diffeomorphism types.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conifold::HodgeData;
use crate::polytope::{LatticePolytope, PolytopeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("{what} = {numerator}/{denominator} is not an integer")]
    NonIntegralInvariant { what: &'static str, numerator: String, denominator: String },
    #[error("multiplicity must be at least 1")]
    BadMultiplicity,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TopologyData {
    pub h_cubed: i64,
    pub c2_h: i64,
    pub c3: i64,
    pub ind: i64,
    pub multiplicity: i64,
}

fn exact(what: &'static str, num: &BigInt, den: &BigInt) -> Result<i64, TopologyError> {
    let (q, r) = num.div_rem(den);
    let fail = || TopologyError::NonIntegralInvariant {
        what,
        numerator: num.to_string(),
        denominator: den.to_string(),
    };
    if !r.is_zero() || !q.is_positive() {
        return Err(fail());
    }
    q.to_i64().ok_or_else(fail)
}

/// `(H³, c₂·H)` of the hyperplane class on the smoothing, with `Δ` the
/// Newton polytope and `m` the divisor multiplicity:
///
/// `H³ = Vol(Δ)/(m·Ind)³`, `c₂·H = (12·|∂Δ ∩ M| − 2·Vol(Δ))/(m·Ind)`.
///
/// `Ind` is the largest integer dividing every vertex difference of `Δ`.
pub fn intersection_numbers(delta: &LatticePolytope, multiplicity: i64) -> Result<(i64, i64), TopologyError> {
    if multiplicity < 1 {
        return Err(TopologyError::BadMultiplicity);
    }
    let vol = BigInt::from(delta.normalized_volume()?);
    let boundary = BigInt::from(delta.boundary_point_count());
    let scale = delta.vertex_sublattice_index() * multiplicity;
    let h3 = exact("H^3", &vol, &(&scale * &scale * &scale))?;
    let c2h = exact("c2.H", &(boundary * 12 - &vol * 2), &scale)?;
    Ok((h3, c2h))
}

pub fn euler_c3(h11: i64, h21: i64) -> i64 {
    2 * (h11 - h21)
}

/// Full record for a smoothing with the given Hodge numbers.
pub fn topology_data(delta: &LatticePolytope, multiplicity: i64, hodge: &HodgeData) -> Result<TopologyData, TopologyError> {
    let (h_cubed, c2_h) = intersection_numbers(delta, multiplicity)?;
    let ind = delta.vertex_sublattice_index().to_i64().expect("index fits in i64");
    Ok(TopologyData {
        h_cubed,
        c2_h,
        c3: euler_c3(hodge.h11_smoothed, hodge.h21_smoothed),
        ind,
        multiplicity,
    })
}

/// Grouping key `(h¹¹, h²¹, H³, c₂·H)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WallKey {
    pub h11: i64,
    pub h21: i64,
    pub h_cubed: i64,
    pub c2_h: i64,
}

pub fn wall_key(t: &TopologyData, h: &HodgeData) -> WallKey {
    WallKey { h11: h.h11_smoothed, h21: h.h21_smoothed, h_cubed: t.h_cubed, c2_h: t.c2_h }
}
