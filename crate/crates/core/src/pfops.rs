//! Fourth-order Picard–Fuchs operators
//! `θ⁴ + Σ_{n=1}^{d} zⁿ Σ_{i=0}^{4} c_{ni} θⁱ`: fitting from a period,
//! Frobenius solutions, Calabi–Yau checks and Möbius equivalence.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{nullity, solve_rational, IntMatrix, LatticeError, Rational};
use crate::series::{binomial_series, rational_to_string, RationalSeries};

/// Extra equations required beyond the `5d` unknowns of a degree-`d` fit.
pub const GUARD: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfError {
    #[error("no operator of degree <= {d_max} annihilates the series through order {order}")]
    NoOperatorFound { d_max: usize, order: usize },
    #[error("degree-{degree} fit has a {nullity}-dimensional solution space; extend the series")]
    AmbiguousFit { degree: usize, nullity: usize },
    #[error("series of order {order} is too short; at least {needed} coefficients are needed")]
    SeriesTooShort { order: usize, needed: usize },
    #[error("an operator of theta-order <= 3 and degree <= {degree} annihilates the series")]
    LowerOrderOperator { degree: usize },
    #[error("series is constant; nothing to fit")]
    ConstantSeries,
    #[error("z^0 part of the operator must be exactly theta^4")]
    NonMUMPoint,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Coefficient rows `c_{n0..n4}`, `n = 0..d`, with `c_{0·} = (0,0,0,0,1)`
/// and a nonzero last row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    rows: Vec<[Rational; 5]>,
}

fn theta4() -> [Rational; 5] {
    [q(0), q(0), q(0), q(0), q(1)]
}

impl DiffOperator {
    pub fn new(mut rows: Vec<[Rational; 5]>) -> Result<Self, PfError> {
        if rows.first() != Some(&theta4()) {
            return Err(PfError::NonMUMPoint);
        }
        while rows.len() > 1 && rows.last().unwrap().iter().all(Zero::is_zero) {
            rows.pop();
        }
        Ok(DiffOperator { rows })
    }

    pub fn from_integer_rows(rows: &[[i64; 5]]) -> Result<Self, PfError> {
        Self::new(rows.iter().map(|r| r.map(q)).collect())
    }

    pub fn degree(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[[Rational; 5]] {
        &self.rows
    }

    pub fn coeff(&self, n: usize, i: usize) -> Rational {
        self.rows.get(n).map_or_else(Rational::zero, |r| r[i].clone())
    }

    /// `C_i(z) = Σ_n c_{ni} zⁿ`.
    pub fn theta_polynomial(&self, i: usize) -> Vec<Rational> {
        self.rows.iter().map(|r| r[i].clone()).collect()
    }

    /// `P_n(t) = Σ_i c_{ni} tⁱ` at an integer.
    fn eval_row(&self, n: usize, t: i64) -> Rational {
        let t = q(t);
        let mut acc = Rational::zero();
        for c in self.rows[n].iter().rev() {
            acc = acc * &t + c;
        }
        acc
    }

    /// `C₃ = 2θC₄`, equivalently the Yukawa coupling is `H³/C₄`.
    pub fn has_reciprocal_yukawa(&self) -> bool {
        self.rows.iter().enumerate().all(|(n, r)| r[3] == &r[4] * q(2 * n as i64))
    }

    /// Fourth-order Calabi–Yau condition: writing the operator as
    /// `y'''' + a₃y''' + a₂y'' + a₁y' + a₀y`,
    /// `a₁ = a₂a₃/2 − a₃³/8 + a₂' − 3a₃a₃'/4 − a₃''/2`.
    pub fn is_calabi_yau(&self) -> bool {
        // θⁱ = Σ_k S(i,k) z^k D^k with Stirling numbers of the second kind
        const S: [[i64; 5]; 5] =
            [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 1, 1, 0, 0], [0, 1, 3, 1, 0], [0, 1, 7, 6, 1]];
        let b: Vec<Poly> = (0..5)
            .map(|k| {
                let mut p = Poly::zero();
                for (i, row) in S.iter().enumerate() {
                    if row[k] != 0 {
                        p = p.add(&Poly(self.theta_polynomial(i)).scale(&q(row[k])));
                    }
                }
                p.shift(k)
            })
            .collect();
        let (b1, b2, b3, bb) = (&b[1], &b[2], &b[3], &b[4]);
        let (d2, d3, db) = (b2.deriv(), b3.deriv(), bb.deriv());
        let (dd3, ddb) = (d3.deriv(), db.deriv());
        // condition multiplied by 8·B³
        let w3 = d3.mul(bb).sub(&b3.mul(&db));
        let lhs = b1.mul(bb).mul(bb).scale(&q(8));
        let rhs = b2
            .mul(b3)
            .mul(bb)
            .scale(&q(4))
            .sub(&b3.mul(b3).mul(b3))
            .add(&d2.mul(bb).sub(&b2.mul(&db)).mul(bb).scale(&q(8)))
            .sub(&b3.mul(&w3).scale(&q(6)))
            .sub(&dd3.mul(bb).sub(&b3.mul(&ddb)).mul(bb).scale(&q(4)))
            .add(&db.mul(&w3).scale(&q(8)));
        lhs.sub(&rhs).is_zero()
    }

    /// Canonical text: terms `c * z^n * T^i` ordered by `n`, then by
    /// descending `i`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, row) in self.rows.iter().enumerate() {
            for i in (0..5).rev() {
                let c = &row[i];
                if c.is_zero() {
                    continue;
                }
                let mut factors = Vec::new();
                let mag = c.abs();
                match n {
                    0 => {}
                    1 => factors.push("z".to_string()),
                    _ => factors.push(format!("z^{n}")),
                }
                match i {
                    0 => {}
                    1 => factors.push("T".to_string()),
                    _ => factors.push(format!("T^{i}")),
                }
                if !mag.is_one() || factors.is_empty() {
                    factors.insert(0, rational_to_string(&mag));
                }
                let body = factors.join(" * ");
                if out.is_empty() {
                    out = if c.is_negative() { format!("-{body}") } else { body };
                } else {
                    out.push_str(if c.is_negative() { " - " } else { " + " });
                    out.push_str(&body);
                }
            }
        }
        out
    }

    /// Parses a sum of terms `c * z^n * T^i` (`θ` or `theta` may replace
    /// `T`; factors in any order; like terms are added).
    pub fn parse(text: &str) -> Result<Self, PfError> {
        let rows = parse_terms(text)?;
        Self::new(rows)
    }

    /// Coefficient table as `"p/q"` strings, one row per power of `z`.
    pub fn to_table(&self) -> Vec<Vec<String>> {
        self.rows.iter().map(|r| r.iter().map(rational_to_string).collect()).collect()
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_terms(text: &str) -> Result<Vec<[Rational; 5]>, PfError> {
    let err = |pos: usize, msg: &str| PfError::Parse { pos, msg: msg.to_string() };
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut pos = 0usize;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].1.is_whitespace() {
            *pos += 1;
        }
    };
    let at = |pos: usize| bytes.get(pos).map_or(text.len(), |b| b.0);
    let read_int = |pos: &mut usize| -> Option<BigInt> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].1.is_ascii_digit() {
            *pos += 1;
        }
        (start < *pos).then(|| bytes[start..*pos].iter().map(|b| b.1).collect::<String>().parse().unwrap())
    };
    let read_exponent = |pos: &mut usize| -> Result<usize, PfError> {
        skip_ws(pos);
        if *pos < bytes.len() && bytes[*pos].1 == '^' {
            *pos += 1;
            skip_ws(pos);
            let p = at(*pos);
            let v = read_int(pos).ok_or_else(|| err(p, "expected exponent"))?;
            usize::try_from(v).map_err(|_| err(p, "exponent too large"))
        } else {
            Ok(1)
        }
    };

    let mut rows: Vec<[Rational; 5]> = Vec::new();
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            if first {
                return Err(err(text.len(), "empty operator"));
            }
            break;
        }
        let mut coeff = q(1);
        match bytes[pos].1 {
            '+' => pos += 1,
            '-' => {
                coeff = q(-1);
                pos += 1;
            }
            _ if !first => return Err(err(at(pos), "expected '+' or '-'")),
            _ => {}
        }
        first = false;
        let (mut n, mut i) = (0usize, 0usize);
        loop {
            skip_ws(&mut pos);
            let start = at(pos);
            let Some(&(_, ch)) = bytes.get(pos) else {
                return Err(err(start, "expected a factor"));
            };
            if ch.is_ascii_digit() {
                let num = read_int(&mut pos).unwrap();
                skip_ws(&mut pos);
                let mut value = Rational::from_integer(num);
                if pos < bytes.len() && bytes[pos].1 == '/' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let p = at(pos);
                    let den = read_int(&mut pos).ok_or_else(|| err(p, "expected denominator"))?;
                    if den.is_zero() {
                        return Err(err(p, "zero denominator"));
                    }
                    value /= Rational::from_integer(den);
                }
                coeff *= value;
            } else if ch == 'z' {
                pos += 1;
                n += read_exponent(&mut pos)?;
            } else if ch == 'T' || ch == 'θ' {
                pos += 1;
                i += read_exponent(&mut pos)?;
            } else if text[start..].starts_with("theta") {
                pos += 5;
                i += read_exponent(&mut pos)?;
            } else {
                return Err(err(start, "unexpected character"));
            }
            if i > 4 {
                return Err(err(start, "theta power above 4"));
            }
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos].1 == '*' {
                pos += 1;
            } else {
                break;
            }
        }
        if rows.len() <= n {
            rows.resize(n + 1, [q(0), q(0), q(0), q(0), q(0)]);
        }
        rows[n][i] += coeff;
    }
    Ok(rows)
}

/// Dense polynomial in `z` with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
struct Poly(Vec<Rational>);

impl Poly {
    fn zero() -> Self {
        Poly(Vec::new())
    }
    fn coef(&self, k: usize) -> Rational {
        self.0.get(k).cloned().unwrap_or_else(Rational::zero)
    }
    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|k| self.coef(k) + o.coef(k)).collect())
    }
    fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&q(-1)))
    }
    fn scale(&self, c: &Rational) -> Poly {
        Poly(self.0.iter().map(|x| x * c).collect())
    }
    fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }
    fn shift(&self, k: usize) -> Poly {
        let mut v = vec![Rational::zero(); k];
        v.extend(self.0.iter().cloned());
        Poly(v)
    }
    fn deriv(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| c * q(k as i64)).collect())
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

/// `op(s)`: the degree-`k` coefficient is `Σ_{n,i} c_{ni}(k−n)ⁱ s_{k−n}`.
pub fn apply(op: &DiffOperator, s: &RationalSeries) -> RationalSeries {
    let out = (0..=s.order())
        .map(|k| {
            let mut acc = Rational::zero();
            for n in 0..=op.degree().min(k) {
                let a = s.coeff(k - n);
                if !a.is_zero() {
                    acc += op.eval_row(n, (k - n) as i64) * a;
                }
            }
            acc
        })
        .collect();
    RationalSeries::new(out)
}

/// `op(Σ_m f_m·logᵐz)` with `θ(f·logᵐ) = θf·logᵐ + m·f·logᵐ⁻¹`; returns
/// the coefficient series of each power of `log z`.
pub fn apply_with_logs(op: &DiffOperator, parts: &[RationalSeries]) -> Vec<RationalSeries> {
    let order = parts.iter().map(RationalSeries::order).min().expect("at least one part");
    let theta = |f: &[RationalSeries]| -> Vec<RationalSeries> {
        (0..f.len())
            .map(|m| {
                let mut t = f[m].theta();
                if m + 1 < f.len() {
                    t = t.add(&f[m + 1].scale(&q(m as i64 + 1)));
                }
                t
            })
            .collect()
    };
    let mut total: Vec<RationalSeries> = vec![RationalSeries::zero(order); parts.len()];
    for n in 0..=op.degree() {
        let mut power: Vec<RationalSeries> = parts.iter().map(|p| p.truncate(order)).collect();
        let mut acc: Vec<RationalSeries> = vec![RationalSeries::zero(order); parts.len()];
        for i in 0..5 {
            let c = op.coeff(n, i);
            if !c.is_zero() {
                for (a, p) in acc.iter_mut().zip(&power) {
                    *a = a.add(&p.scale(&c));
                }
            }
            power = theta(&power);
        }
        for (t, a) in total.iter_mut().zip(&acc) {
            let mut shifted = vec![Rational::zero(); order + 1];
            for (k, s) in shifted.iter_mut().enumerate().skip(n) {
                *s = a.coeff(k - n).clone();
            }
            *t = t.add(&RationalSeries::new(shifted));
        }
    }
    total
}

/// Lcm-scaled integer row for a rational equation.
fn integer_row(entries: &[Rational], rhs: &Rational) -> (Vec<BigInt>, BigInt) {
    let l = entries.iter().chain(std::iter::once(rhs)).fold(BigInt::one(), |a, x| a.lcm(x.denom()));
    let lq = Rational::from_integer(l);
    let row = entries.iter().map(|x| (x * &lq).to_integer()).collect();
    (row, (rhs * &lq).to_integer())
}

/// Degree-`d` ansatz against `k = 1..N`: returns the operator, or `None`
/// if the system is inconsistent.
fn fit_degree(s: &RationalSeries, d: usize) -> Result<Option<DiffOperator>, PfError> {
    let n_eq = s.order();
    let unknowns = 5 * d;
    let mut mat = Vec::with_capacity(n_eq * unknowns);
    let mut rhs = Vec::with_capacity(n_eq);
    for k in 1..=n_eq {
        let mut entries = vec![Rational::zero(); unknowns];
        for n in 1..=d.min(k) {
            let a = s.coeff(k - n);
            let t = q((k - n) as i64);
            let mut p = a.clone();
            for i in 0..5 {
                entries[(n - 1) * 5 + i] = p.clone();
                p *= &t;
            }
        }
        let target = -(q(k as i64).pow(4) * s.coeff(k));
        let (row, b) = integer_row(&entries, &target);
        mat.extend(row);
        rhs.push(Rational::from_integer(b));
    }
    let a = IntMatrix::new(n_eq, unknowns, mat).expect("shape");
    match solve_rational(&a, &rhs) {
        Err(LatticeError::InconsistentSystem) => Ok(None),
        Err(e) => unreachable!("{e}"),
        Ok(sol) if !sol.unique => Err(PfError::AmbiguousFit { degree: d, nullity: sol.nullity }),
        Ok(sol) => {
            let mut rows = vec![theta4()];
            for n in 0..d {
                rows.push(std::array::from_fn(|i| sol.x[n * 5 + i].clone()));
            }
            Ok(Some(DiffOperator::new(rows)?))
        }
    }
}

/// Dimension of the space of operators `Σ_{n≤d, i≤3} c_{ni} zⁿθⁱ`
/// annihilating `s` through its order.
pub fn lower_order_nullity(s: &RationalSeries, d: usize) -> usize {
    let unknowns = 4 * (d + 1);
    let mut mat = Vec::new();
    for k in 0..=s.order() {
        let mut entries = vec![Rational::zero(); unknowns];
        for n in 0..=d.min(k) {
            let t = q((k - n) as i64);
            let mut p = s.coeff(k - n).clone();
            for i in 0..4 {
                entries[n * 4 + i] = p.clone();
                p *= &t;
            }
        }
        let (row, _) = integer_row(&entries, &Rational::zero());
        mat.extend(row);
    }
    nullity(&IntMatrix::new(s.order() + 1, unknowns, mat).expect("shape"))
}

/// Result of [`fit_operator_with_stride`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fit {
    /// Operator in `x = z^stride`.
    pub operator: DiffOperator,
    pub stride: usize,
    /// Coefficients of the decimated series used (all of them are checked).
    pub depth: usize,
}

/// Fits the smallest-degree operator annihilating `s`. A series in `z^g`
/// only is first rewritten in `x = z^g`, and the operator is in `x`.
pub fn fit_operator_with_stride(s: &RationalSeries, d_max: usize) -> Result<Fit, PfError> {
    let g = s.stride().ok_or(PfError::ConstantSeries)?;
    let x = s.decimate(g);
    let depth = x.order();
    let reachable = depth.saturating_sub(GUARD) / 5;
    if reachable == 0 {
        return Err(PfError::SeriesTooShort { order: depth, needed: 5 + GUARD });
    }
    for d in 1..=d_max.min(reachable) {
        if let Some(op) = fit_degree(&x, d)? {
            if lower_order_nullity(&x, d) > 0 {
                return Err(PfError::LowerOrderOperator { degree: d });
            }
            return Ok(Fit { operator: op, stride: g, depth });
        }
    }
    if d_max > reachable {
        return Err(PfError::SeriesTooShort { order: depth, needed: 5 * d_max + GUARD });
    }
    Err(PfError::NoOperatorFound { d_max, order: depth })
}

pub fn fit_operator(s: &RationalSeries, d_max: usize) -> Result<DiffOperator, PfError> {
    fit_operator_with_stride(s, d_max).map(|f| f.operator)
}

/// `σ₀..σ₃` with `ϖ_j = Σ_{i≤j} σ_i·log^{j−i}z/(j−i)!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusBasis {
    pub sigma: [RationalSeries; 4],
}

impl FrobeniusBasis {
    pub fn order(&self) -> usize {
        self.sigma[0].order()
    }

    /// Log-power parts of `ϖ_j`: entry `m` multiplies `logᵐz`.
    pub fn log_parts(&self, j: usize) -> Vec<RationalSeries> {
        let mut fact = q(1);
        (0..=j)
            .map(|m| {
                if m > 0 {
                    fact *= q(m as i64);
                }
                self.sigma[j - m].scale(&fact.recip())
            })
            .collect()
    }
}

/// Truncated polynomial in `ε` modulo `ε⁴`.
type Eps = [Rational; 4];

fn eps_mul(a: &Eps, b: &Eps) -> Eps {
    std::array::from_fn(|k| (0..=k).map(|j| &a[j] * &b[k - j]).sum())
}

fn eps_inv(a: &Eps) -> Eps {
    let inv0 = a[0].recip();
    let mut out: Eps = std::array::from_fn(|_| Rational::zero());
    out[0] = inv0.clone();
    for k in 1..4 {
        let s: Rational = (1..=k).map(|j| &a[j] * &out[k - j]).sum();
        out[k] = -s * &inv0;
    }
    out
}

/// `P_n(t + ε)` for the `n`-th row.
fn eps_eval(row: &[Rational; 5], t: i64) -> Eps {
    let base: Eps = [q(t), q(1), q(0), q(0)];
    let mut power: Eps = [q(1), q(0), q(0), q(0)];
    let mut acc: Eps = std::array::from_fn(|_| Rational::zero());
    for c in row {
        for k in 0..4 {
            acc[k] += c * &power[k];
        }
        power = eps_mul(&power, &base);
    }
    acc
}

/// Frobenius solutions from `z^ε Σ a_k(ε) z^k`:
/// `a_k = −Σ_{n≥1} P_n(k−n+ε)·a_{k−n} / (k+ε)⁴`, `σ_j = [ε^j]`.
pub fn frobenius(op: &DiffOperator, order: usize) -> Result<FrobeniusBasis, PfError> {
    if op.rows[0] != theta4() {
        return Err(PfError::NonMUMPoint);
    }
    let mut a: Vec<Eps> = vec![[q(1), q(0), q(0), q(0)]];
    for k in 1..=order {
        let mut acc: Eps = std::array::from_fn(|_| Rational::zero());
        for n in 1..=op.degree().min(k) {
            let p = eps_eval(&op.rows[n], (k - n) as i64);
            let term = eps_mul(&p, &a[k - n]);
            for j in 0..4 {
                acc[j] -= &term[j];
            }
        }
        let lead = eps_eval(&theta4(), k as i64);
        a.push(eps_mul(&acc, &eps_inv(&lead)));
    }
    let sigma = std::array::from_fn(|j| RationalSeries::new(a.iter().map(|e| e[j].clone()).collect()));
    Ok(FrobeniusBasis { sigma })
}

/// Candidate prefactor exponents `0, ±1/2, ±1, …, ±2`, smallest first.
pub fn default_exponents() -> Vec<Rational> {
    let mut out = vec![q(0)];
    for h in 1..=4 {
        let e = Rational::new(BigInt::from(h), BigInt::from(2));
        out.push(-e.clone());
        out.push(e);
    }
    out
}

/// First `e` among `exponents` with `(1+cx)^e·Π_a(x/(1+cx))` annihilated
/// by `b` through `order`.
pub fn mobius_equivalent(
    a: &DiffOperator,
    b: &DiffOperator,
    c: &Rational,
    exponents: &[Rational],
    order: usize,
) -> Option<Rational> {
    let pi = frobenius(a, order).ok()?.sigma[0].clone();
    let map = RationalSeries::variable(order).mul(&binomial_series(c, &q(-1), order));
    let pulled = pi.compose(&map).ok()?;
    exponents
        .iter()
        .find(|e| apply(b, &binomial_series(c, e, order).mul(&pulled)).is_zero())
        .cloned()
}
