//! Facet enumeration by the double description method.
//!
//! The polytope `conv(P)` is homogenized to the cone generated by the vectors
//! `(1, p)`. Its facets are the extreme rays of the dual cone
//! `{h : h·(1, p) >= 0 for all p}`, which we build by adding one point
//! constraint at a time and combining adjacent rays.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Facet, Point, PolytopeError};
use crate::lattice::{determinant, rank_exact, IntMatrix};

const DIM: usize = 5;

#[derive(Clone)]
struct Ray {
    h: [BigInt; DIM],
    zeros: Bitset,
}

#[derive(Clone, PartialEq, Eq)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn new(n: usize) -> Self {
        Bitset(vec![0; n.div_ceil(64)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bitset) -> Bitset {
        Bitset(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn contains_all(&self, other: &Bitset) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

fn homogenize(p: &Point) -> [BigInt; DIM] {
    [BigInt::from(1), p[0].into(), p[1].into(), p[2].into(), p[3].into()]
}

fn dot(a: &[BigInt; DIM], b: &[BigInt; DIM]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(mut h: [BigInt; DIM]) -> [BigInt; DIM] {
    let g = h.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && g != BigInt::from(1) {
        for x in &mut h {
            *x = &*x / &g;
        }
    }
    h
}

/// Facets of `conv(points)`; `points` must be distinct and affinely span
/// four dimensions.
pub(crate) fn facets(points: &[Point]) -> Result<Vec<Facet>, PolytopeError> {
    let gens: Vec<[BigInt; DIM]> = points.iter().map(homogenize).collect();
    let n = gens.len();

    // Greedy choice of DIM linearly independent generators.
    let mut basis: Vec<usize> = Vec::with_capacity(DIM);
    for i in 0..n {
        let mut trial: Vec<usize> = basis.clone();
        trial.push(i);
        let m = IntMatrix::from_fn(trial.len(), DIM, |r, c| gens[trial[r]][c].clone());
        if rank_exact(&m) == trial.len() {
            basis = trial;
            if basis.len() == DIM {
                break;
            }
        }
    }
    if basis.len() < DIM {
        return Err(PolytopeError::NotFullDimensional);
    }

    let g0 = IntMatrix::from_fn(DIM, DIM, |r, c| gens[basis[r]][c].clone());
    let det = determinant(&g0);
    let sign = if det.is_negative() { BigInt::from(-1) } else { BigInt::from(1) };

    // Column j of adj(G0), signed so that G0·ray_j = |det|·e_j.
    let mut rays: Vec<Ray> = Vec::with_capacity(DIM);
    for j in 0..DIM {
        let mut h: [BigInt; DIM] = Default::default();
        for (i, hi) in h.iter_mut().enumerate() {
            let minor = IntMatrix::from_fn(DIM - 1, DIM - 1, |r, c| {
                let rr = if r < j { r } else { r + 1 };
                let cc = if c < i { c } else { c + 1 };
                g0[(rr, cc)].clone()
            });
            let cof = determinant(&minor);
            *hi = if (i + j) % 2 == 0 { cof } else { -cof } * &sign;
        }
        let mut zeros = Bitset::new(n);
        for (k, &b) in basis.iter().enumerate() {
            if k != j {
                zeros.insert(b);
            }
        }
        rays.push(Ray { h: primitive(h), zeros });
    }

    for (gi, g) in gens.iter().enumerate() {
        if basis.contains(&gi) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(&r.h, g)).collect();
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (k, v) in vals.iter().enumerate() {
            if v.is_positive() {
                pos.push(k);
            } else if v.is_negative() {
                neg.push(k);
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() < (DIM - 2) as u32 {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !r.zeros.contains_all(&common));
                if !adjacent {
                    continue;
                }
                let mut h: [BigInt; DIM] = Default::default();
                for (c, hc) in h.iter_mut().enumerate() {
                    *hc = &vals[p] * &rays[q].h[c] - &vals[q] * &rays[p].h[c];
                }
                let mut zeros = common;
                zeros.insert(gi);
                next.push(Ray { h: primitive(h), zeros });
            }
        }
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_zero() {
                r.zeros.insert(gi);
                next.push(r);
            } else if vals[k].is_positive() {
                next.push(r);
            }
        }
        rays = next;
    }

    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        let g = r.h[1..].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let to_i64 = |x: &BigInt| -> Result<i64, PolytopeError> {
            i64::try_from(&(x / &g)).map_err(|_| PolytopeError::CoordinateOverflow)
        };
        out.push(Facet {
            normal: [to_i64(&r.h[1])?, to_i64(&r.h[2])?, to_i64(&r.h[3])?, to_i64(&r.h[4])?],
            offset: to_i64(&r.h[0])?,
        });
    }
    out.sort();
    out.dedup();
    Ok(out)
}
