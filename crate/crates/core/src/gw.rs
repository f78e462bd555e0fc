//! Mirror map, Yukawa coupling and genus-0 instanton numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice::Rational;
use crate::pfops::{frobenius, DiffOperator, FrobeniusBasis, PfError};
use crate::series::{RationalSeries, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GwError {
    #[error("q^{degree} coefficient {value} of the Yukawa coupling is not an integer")]
    NonIntegralCoupling { degree: usize, value: String },
    #[error("instanton number n_{degree} = {numerator}/{denominator} is not an integer")]
    NonIntegralInstanton { degree: usize, numerator: String, denominator: String },
    #[error("Yukawa coupling starts with {found}, expected H^3 = {expected}")]
    WrongLeadingTerm { found: String, expected: i64 },
    #[error("theta^4 coefficient does not start with 1")]
    SingularNormalization,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Pf(#[from] PfError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorMap {
    /// `q(z) = z·exp(σ₁/σ₀)`.
    pub q_of_z: RationalSeries,
    /// Compositional inverse `z(q)`.
    pub z_of_q: RationalSeries,
}

pub fn mirror_map(fb: &FrobeniusBasis) -> Result<MirrorMap, GwError> {
    let n = fb.order();
    let ratio = fb.sigma[1].div(&fb.sigma[0])?;
    let q_of_z = RationalSeries::variable(n).mul(&ratio.exp()?);
    let z_of_q = q_of_z.reversion()?;
    Ok(MirrorMap { q_of_z, z_of_q })
}

/// `W(z)` with `θ log W = −C₃/(2C₄)` and `W(0) = H³`.
pub fn yukawa_z(op: &DiffOperator, h_cubed: i64, order: usize) -> Result<RationalSeries, GwError> {
    let c4 = RationalSeries::from_polynomial(&op.theta_polynomial(4), order);
    let c3 = RationalSeries::from_polynomial(&op.theta_polynomial(3), order);
    if !c4.coeff(0).is_one() {
        return Err(GwError::SingularNormalization);
    }
    let half = Rational::new(BigInt::from(-1), BigInt::from(2));
    let dlog = c3.div(&c4)?.scale(&half);
    let w = dlog.theta_inverse().exp()?;
    Ok(w.scale(&Rational::from_integer(h_cubed.into())))
}

/// `K(q) = W/(σ₀²·(θt)³)` re-expanded in `q`, with `θt = 1 + θ(σ₁/σ₀)`.
pub fn yukawa(
    op: &DiffOperator,
    h_cubed: i64,
    fb: &FrobeniusBasis,
    mm: &MirrorMap,
    order: usize,
) -> Result<RationalSeries, GwError> {
    let n = order.min(fb.order());
    let w = yukawa_z(op, h_cubed, n)?;
    let s0 = fb.sigma[0].truncate(n);
    let ratio = fb.sigma[1].truncate(n).div(&s0)?;
    let dt = RationalSeries::one(n).add(&ratio.theta());
    let denom = s0.mul(&s0).mul(&dt).mul(&dt).mul(&dt);
    let k_z = w.div(&denom)?;
    Ok(k_z.compose(&mm.z_of_q.truncate(n))?)
}

/// Inverts `K(q) = H³ + Σ_d n_d d³ q^d/(1 − q^d)` for `n_1..n_{n_max}`.
pub fn instanton_numbers(k: &RationalSeries, h_cubed: i64, n_max: usize) -> Result<Vec<BigInt>, GwError> {
    let lead = k.coeff(0);
    if *lead != Rational::from_integer(h_cubed.into()) {
        return Err(GwError::WrongLeadingTerm { found: lead.to_string(), expected: h_cubed });
    }
    let mut n: Vec<BigInt> = vec![BigInt::zero()];
    for m in 1..=n_max.min(k.order()) {
        let kappa = k.coeff(m);
        if !kappa.is_integer() {
            return Err(GwError::NonIntegralCoupling { degree: m, value: kappa.to_string() });
        }
        let mut rest = kappa.to_integer();
        for (d, nd) in n.iter().enumerate().take(m).skip(1) {
            if m % d == 0 {
                rest -= BigInt::from(d).pow(3) * nd;
            }
        }
        let cube = BigInt::from(m).pow(3);
        let (quot, rem) = rest.div_rem(&cube);
        if !rem.is_zero() {
            return Err(GwError::NonIntegralInstanton {
                degree: m,
                numerator: rest.to_string(),
                denominator: cube.to_string(),
            });
        }
        n.push(quot);
    }
    n.remove(0);
    Ok(n)
}

/// Everything the instanton computation produces for one operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GwData {
    pub mirror_map: MirrorMap,
    pub yukawa: RationalSeries,
    pub instantons: Vec<BigInt>,
}

/// Frobenius basis, mirror map, coupling and `n_1..n_{n_max}` in one go.
pub fn gw_pipeline(op: &DiffOperator, h_cubed: i64, n_max: usize) -> Result<GwData, GwError> {
    let fb = frobenius(op, n_max)?;
    let mm = mirror_map(&fb)?;
    let k = yukawa(op, h_cubed, &fb, &mm, n_max)?;
    let instantons = instanton_numbers(&k, h_cubed, n_max)?;
    Ok(GwData { mirror_map: mm, yukawa: k, instantons })
}
