//! Truncated power series with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series has zero constant term and cannot be inverted")]
    NotInvertible,
    #[error("exp needs a zero constant term")]
    ExpConstantTerm,
    #[error("log needs constant term 1")]
    LogConstantTerm,
    #[error("inner series of a composition must have zero constant term")]
    CompositionConstantTerm,
    #[error("reversion needs a series of the form z + O(z^2)")]
    NotReversible,
}

/// `Σ_{k=0}^{order} a_k z^k`, known exactly through `z^order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalSeries {
    coeffs: Vec<Rational>,
}

fn r(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl RationalSeries {
    /// Series from coefficients `a_0..a_order`; needs at least one entry.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least a_0");
        RationalSeries { coeffs }
    }

    pub fn from_integers<I: Into<BigInt>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        Self::new(coeffs.into_iter().map(|c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Rational::zero(); order + 1])
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// The series `z`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// Polynomial `Σ p_k z^k` truncated at `order`.
    pub fn from_polynomial(p: &[Rational], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in p.iter().enumerate().take(order + 1) {
            s.coeffs[k] = c.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    /// Integer coefficients, or `None` if any coefficient is fractional.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::new((0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = a0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for k in 1..=self.order() {
            let mut s = Rational::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &out[k - j];
            }
            out.push(-s * &inv0);
        }
        Ok(Self::new(out))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `θ = z d/dz`: `a_k ↦ k·a_k`.
    pub fn theta(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().map(|(k, c)| c * r(k as i64)).collect())
    }

    /// Inverse of `θ` on series without constant term: `a_k ↦ a_k/k`,
    /// constant term set to 0. The constant term of `self` is ignored.
    pub fn theta_inverse(&self) -> Self {
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        for (k, (o, c)) in out.iter_mut().zip(&self.coeffs).enumerate().skip(1) {
            *o = c / r(k as i64);
        }
        Self::new(out)
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpConstantTerm);
        }
        // θE = E·θf
        let df = self.theta();
        let mut e = vec![Rational::zero(); self.coeffs.len()];
        e[0] = Rational::one();
        for k in 1..e.len() {
            let mut s = Rational::zero();
            for j in 1..=k {
                s += &df.coeffs[j] * &e[k - j];
            }
            e[k] = s / r(k as i64);
        }
        Ok(Self::new(e))
    }

    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::LogConstantTerm);
        }
        Ok(self.theta().div(self)?.theta_inverse())
    }

    /// `self^e` for a rational exponent, via `exp(e·log)`; needs `a_0 = 1`.
    pub fn pow(&self, e: &Rational) -> Result<Self, SeriesError> {
        self.log()?.scale(e).exp()
    }

    /// `self(inner(z))`; `inner` must vanish at 0.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::CompositionConstantTerm);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        // Horner from the top coefficient
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse of `z + O(z²)` by Lagrange inversion:
    /// `[w^n] g = (1/n)·[z^{n−1}] (z/f(z))^n`.
    pub fn reversion(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() || self.order() == 0 || !self.coeffs[1].is_one() {
            return Err(SeriesError::NotReversible);
        }
        let n = self.order();
        // f/z, known through z^{n-1}
        let quotient = Self::new(self.coeffs[1..].to_vec());
        let h = quotient.inverse()?;
        let mut out = vec![Rational::zero(); n + 1];
        let mut power = Self::one(n - 1);
        for (m, slot) in out.iter_mut().enumerate().skip(1) {
            power = power.mul(&h);
            *slot = &power.coeffs[m - 1] / r(m as i64);
        }
        Ok(Self::new(out))
    }

    /// Gcd of the degrees `k ≥ 1` carrying a nonzero coefficient; `None`
    /// for a constant series.
    pub fn stride(&self) -> Option<usize> {
        let g = (1..self.coeffs.len()).filter(|&k| !self.coeffs[k].is_zero()).fold(0, |g, k| g.gcd(&k));
        (g > 0).then_some(g)
    }

    /// `Σ a_{gk} x^k` through `x^{⌊order/g⌋}`.
    pub fn decimate(&self, g: usize) -> Self {
        assert!(g >= 1);
        Self::new(self.coeffs.iter().step_by(g).cloned().collect())
    }

    /// `Σ a_k z^{gk}`: inverse of [`decimate`](Self::decimate).
    pub fn inflate(&self, g: usize) -> Self {
        assert!(g >= 1);
        let mut out = vec![Rational::zero(); self.order() * g + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k * g] = c.clone();
        }
        Self::new(out)
    }
}

/// `(1 + c·z)^e` for rational `e` by the generalized binomial series.
pub fn binomial_series(c: &Rational, e: &Rational, order: usize) -> RationalSeries {
    let mut out = Vec::with_capacity(order + 1);
    let mut term = Rational::one();
    out.push(term.clone());
    for k in 1..=order {
        term = term * (e - r(k as i64 - 1)) / r(k as i64) * c;
        out.push(term.clone());
    }
    RationalSeries::new(out)
}

/// Renders a rational as `p` or `p/q`.
pub fn rational_to_string(q: &Rational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = rational_to_string(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let var = if k == 1 { "z".to_string() } else { format!("z^{k}") };
            match k {
                0 => write!(f, "{mag}")?,
                _ if c.abs().is_one() => write!(f, "{var}")?,
                _ => write!(f, "{mag}*{var}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

impl fmt::Debug for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
