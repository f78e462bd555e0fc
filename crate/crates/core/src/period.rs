//! Principal period `Π₀(z) = Σ_k c_k z^k` with `c_k` the constant term of
//! the `k`-th power of a Laurent polynomial with unit coefficients.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::lattice::{smith_diagonal, IntMatrix};
use crate::polytope::{Facet, LatticePolytope, Point, PolytopeError};
use crate::series::RationalSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodError {
    #[error("support is empty")]
    Empty,
    #[error("support contains the constant monomial")]
    ZeroMonomial,
    #[error("monomial {0:?} appears twice")]
    Duplicate(Point),
}

/// Exponent vectors of a Laurent polynomial `Σ t^m` (all coefficients 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support {
    monomials: Vec<Point>,
}

impl Support {
    pub fn new(monomials: Vec<Point>) -> Result<Self, PeriodError> {
        if monomials.is_empty() {
            return Err(PeriodError::Empty);
        }
        let mut seen = std::collections::HashSet::new();
        for m in &monomials {
            if *m == [0; 4] {
                return Err(PeriodError::ZeroMonomial);
            }
            if !seen.insert(*m) {
                return Err(PeriodError::Duplicate(*m));
            }
        }
        Ok(Support { monomials })
    }

    pub fn monomials(&self) -> &[Point] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Lattice stride `g`: every `k` with `c_k ≠ 0` is a multiple of `g`,
    /// and `g` is the gcd of `Σ a_i` over all integer relations
    /// `Σ a_i m_i = 0`. `None` when the monomials admit no relation.
    pub fn stride(&self) -> Option<usize> {
        let rows: Vec<Point> = self.monomials.clone();
        let homogeneous: Vec<[i64; 5]> = rows.iter().map(|m| [1, m[0], m[1], m[2], m[3]]).collect();
        let plain = smith_diagonal(&IntMatrix::from_rows(&rows));
        let lifted = smith_diagonal(&IntMatrix::from_rows(&homogeneous));
        let rank = |d: &[BigInt]| d.iter().filter(|x| !x.is_zero()).count();
        if rank(&lifted) == rank(&plain) {
            // the all-ones column is a combination of the others: Σ a_i = 0
            // on every relation, so no nonzero power has a constant term
            return None;
        }
        let prod = |d: &[BigInt]| d.iter().filter(|x| !x.is_zero()).fold(BigInt::from(1), |a, x| a * x);
        let g = prod(&lifted) / prod(&plain);
        g.to_usize()
    }
}

/// The vertices of a polytope as a support.
pub fn support_from_polytope(p: &LatticePolytope) -> Support {
    Support::new(p.vertices().to_vec()).expect("polytope vertices are distinct; origin interior means it is no vertex")
}

/// Which partial exponents can still return to the origin.
enum Pruner {
    /// `−e ∈ r·conv(S)`.
    Facets(Vec<Facet>),
    /// Coordinatewise bounds of `r·conv(S)`.
    Bounds([i64; 4], [i64; 4]),
    /// The origin is not in `conv(S)`: no positive power has a constant term.
    Unreachable,
}

impl Pruner {
    fn new(s: &Support) -> Self {
        match LatticePolytope::from_points(s.monomials()) {
            Ok(p) if p.contains(&[0; 4]) => Pruner::Facets(p.facets().to_vec()),
            Ok(_) => Pruner::Unreachable,
            Err(PolytopeError::NotFullDimensional) => {
                let mut lo = [0i64; 4];
                let mut hi = [0i64; 4];
                for c in 0..4 {
                    lo[c] = s.monomials().iter().map(|m| m[c]).min().unwrap();
                    hi[c] = s.monomials().iter().map(|m| m[c]).max().unwrap();
                }
                if (0..4).any(|c| lo[c] > 0 || hi[c] < 0) {
                    Pruner::Unreachable
                } else {
                    Pruner::Bounds(lo, hi)
                }
            }
            Err(e) => unreachable!("support hull: {e}"),
        }
    }

    fn keep(&self, e: &Point, remaining: i64) -> bool {
        match self {
            Pruner::Facets(facets) => facets.iter().all(|f| {
                let ne: i64 = (0..4).map(|c| -f.normal[c] * e[c]).sum();
                ne + remaining * f.offset >= 0
            }),
            Pruner::Bounds(lo, hi) => {
                (0..4).all(|c| e[c] + remaining * lo[c] <= 0 && 0 <= e[c] + remaining * hi[c])
            }
            Pruner::Unreachable => false,
        }
    }
}

/// Fixed-width unsigned integers stored as `width` little-endian limbs.
struct Counts {
    width: usize,
    limbs: Vec<u64>,
}

impl Counts {
    fn new(width: usize) -> Self {
        Counts { width, limbs: Vec::new() }
    }

    fn push_zero(&mut self) -> usize {
        let i = self.limbs.len() / self.width;
        self.limbs.resize(self.limbs.len() + self.width, 0);
        i
    }

    fn get(&self, i: usize) -> &[u64] {
        &self.limbs[i * self.width..(i + 1) * self.width]
    }

    fn add_into(&mut self, i: usize, src: &[u64]) {
        let dst = &mut self.limbs[i * self.width..(i + 1) * self.width];
        let mut carry = false;
        for (d, s) in dst.iter_mut().zip(src) {
            let (v, c1) = d.overflowing_add(*s);
            let (v, c2) = v.overflowing_add(carry as u64);
            *d = v;
            carry = c1 || c2;
        }
        debug_assert!(!carry, "limb width is sized from the N^k bound");
    }

    fn to_biguint(limbs: &[u64]) -> BigUint {
        let words: Vec<u32> = limbs.iter().flat_map(|w| [*w as u32, (w >> 32) as u32]).collect();
        BigUint::from_slice(&words)
    }
}

const PACK_BIAS: i64 = 1 << 15;

/// Packs an exponent with coordinates in `(−2¹⁵, 2¹⁵)` into one word.
fn pack(e: &Point) -> u64 {
    e.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (((c + PACK_BIAS) as u64) << (16 * i)))
}

/// `c_0..c_order` in one sweep over `S, S², …, S^order`.
///
/// After `j` factors a term `t^e` is kept only if `−e` lies in
/// `(order − j)·conv(S)`, which every exponent contributing to some
/// `c_k`, `k ≤ order`, satisfies. Counts never exceed `|S|^order`, which
/// fixes the limb width.
pub fn period_coefficients(s: &Support, order: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::from(1u32)];
    if order == 0 {
        return out;
    }
    let reach = s.monomials().iter().flatten().map(|c| c.abs()).max().unwrap_or(0) * order as i64;
    assert!(reach < PACK_BIAS, "exponents up to {reach} exceed the packed key range");
    let pruner = Pruner::new(s);
    let bits = (s.len() as f64).log2() * order as f64;
    let width = (bits as usize + 2).div_ceil(64).max(1);

    let mut keys: Vec<Point> = vec![[0; 4]];
    let mut counts = Counts::new(width);
    let i = counts.push_zero();
    counts.limbs[i * width] = 1;
    let origin = pack(&[0; 4]);

    for j in 1..=order {
        let remaining = (order - j) as i64;
        let mut index: FxHashMap<u64, usize> = FxHashMap::default();
        let mut next_keys = Vec::new();
        let mut next = Counts::new(width);
        for (ki, e) in keys.iter().enumerate() {
            let src = counts.get(ki);
            for m in s.monomials() {
                let t = [e[0] + m[0], e[1] + m[1], e[2] + m[2], e[3] + m[3]];
                if !pruner.keep(&t, remaining) {
                    continue;
                }
                let slot = *index.entry(pack(&t)).or_insert_with(|| {
                    next_keys.push(t);
                    next.push_zero()
                });
                next.add_into(slot, src);
            }
        }
        out.push(match index.get(&origin) {
            Some(&i) => Counts::to_biguint(next.get(i)),
            None => BigUint::zero(),
        });
        keys = next_keys;
        counts = next;
    }
    out
}

/// Constant term of `(Σ_{m∈S} t^m)^k`.
pub fn constant_term_power(s: &Support, k: usize) -> BigUint {
    period_coefficients(s, k).pop().expect("at least c_0")
}

/// `Π₀(z) = Σ_{k≤order} c_k z^k`.
pub fn principal_period(s: &Support, order: usize) -> RationalSeries {
    RationalSeries::from_integers(period_coefficients(s, order).into_iter().map(BigInt::from))
}

/// Reference enumeration over multinomial exponent tuples; exponential in
/// `|S|` and meant only for cross-checks on small inputs.
pub fn constant_term_power_naive(s: &Support, k: usize) -> BigUint {
    fn rec(ms: &[Point], left: usize, acc: Point, denom: &BigUint, fact: &[BigUint], total: &mut BigUint) {
        match ms.split_first() {
            None => {
                if left == 0 && acc == [0; 4] {
                    *total += &fact[fact.len() - 1] / denom;
                }
            }
            Some((m, rest)) => {
                let upto = if rest.is_empty() { left..=left } else { 0..=left };
                for a in upto {
                    let ai = a as i64;
                    let next = [acc[0] + ai * m[0], acc[1] + ai * m[1], acc[2] + ai * m[2], acc[3] + ai * m[3]];
                    rec(rest, left - a, next, &(denom * &fact[a]), fact, total);
                }
            }
        }
    }
    let mut fact = vec![BigUint::from(1u32)];
    for i in 1..=k {
        let f = &fact[i - 1] * BigUint::from(i);
        fact.push(f);
    }
    let mut total = BigUint::zero();
    rec(s.monomials(), k, [0; 4], &BigUint::from(1u32), &fact, &mut total);
    total
}

/// `gcd` of `k ≥ 1` with `c_k ≠ 0` among the given coefficients.
pub fn observed_stride(coeffs: &[BigUint]) -> Option<usize> {
    let g = coeffs.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).fold(0usize, |g, (k, _)| g.gcd(&k));
    (g > 0).then_some(g)
}
