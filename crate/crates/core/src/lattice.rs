//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Elimination is
//! fraction-free (Bareiss) with first-nonzero pivoting, so results are
//! reproducible across runs and platforms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number; always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix shape {rows}x{cols} does not match {len} entries")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },
    #[error("right-hand side has {got} entries, matrix has {rows} rows")]
    RhsLength { rows: usize, got: usize },
    #[error("linear system is inconsistent")]
    InconsistentSystem,
}

/// Dense row-major matrix of big integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LatticeError> {
        if entries.len() != rows * cols {
            return Err(LatticeError::ShapeMismatch { rows, cols, len: entries.len() });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from equally long rows of machine integers.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: rows.len(), cols, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes for product");
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &other[(k, j)]).sum()
        })
    }

    /// Copy of the matrix without row `skip`.
    pub fn without_row(&self, skip: usize) -> IntMatrix {
        let mut entries = Vec::with_capacity(self.entries.len().saturating_sub(self.cols));
        for i in (0..self.rows).filter(|&i| i != skip) {
            entries.extend_from_slice(self.row(i));
        }
        IntMatrix { rows: self.rows - 1, cols: self.cols, entries }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Fraction-free row echelon form in place. Returns the pivot columns.
///
/// After the call, row `r` for `r < pivots.len()` has its leading entry at
/// `pivots[r]`, and every entry equals a minor of the original matrix.
fn bareiss_echelon(m: &mut IntMatrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let piv = m[(r, c)].clone();
        for i in r + 1..m.rows {
            let lead = m[(i, c)].clone();
            for j in 0..m.cols {
                if j == c {
                    continue;
                }
                let v = (&piv * &m[(i, j)] - &lead * &m[(r, j)]) / &prev;
                m[(i, j)] = v;
            }
            m[(i, c)] = BigInt::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over the rationals.
pub fn rank_exact(m: &IntMatrix) -> usize {
    if m.is_empty() {
        return 0;
    }
    let mut work = m.clone();
    let ncols = work.cols;
    bareiss_echelon(&mut work, ncols).len()
}

/// Determinant of a square matrix by Bareiss elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut work = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !work[(i, k)].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            work.swap_rows(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&work[(k, k)] * &work[(i, j)] - &work[(i, k)] * &work[(k, j)]) / &prev;
                work[(i, j)] = v;
            }
        }
        prev = work[(k, k)].clone();
    }
    sign * prev
}

/// Diagonal of the Smith normal form: `min(rows, cols)` nonnegative entries,
/// each dividing the next, zeros last.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let n = a.rows.min(a.cols);
    for t in 0..n {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..a.rows {
                for j in t..a.cols {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                // trailing block is zero
                let mut diag: Vec<BigInt> = (0..n).map(|k| a[(k, k)].abs()).collect();
                diag[t..].iter_mut().for_each(|x| *x = BigInt::zero());
                return normalize_diagonal(diag);
            };
            a.swap_rows(t, bi);
            a.swap_cols(t, bj);

            let piv = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..a.rows {
                let q = a[(i, t)].div_floor(&piv);
                if !q.is_zero() {
                    for j in t..a.cols {
                        let v = &a[(i, j)] - &q * &a[(t, j)];
                        a[(i, j)] = v;
                    }
                }
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..a.cols {
                let q = a[(t, j)].div_floor(&piv);
                if !q.is_zero() {
                    for i in t..a.rows {
                        let v = &a[(i, j)] - &q * &a[(i, t)];
                        a[(i, j)] = v;
                    }
                }
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the whole trailing block; otherwise fold the
            // offending row into row t and go again.
            let offender = (t + 1..a.rows)
                .flat_map(|i| (t + 1..a.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&piv));
            match offender {
                Some((i, _)) => {
                    for j in t..a.cols {
                        let v = &a[(t, j)] + &a[(i, j)];
                        a[(t, j)] = v;
                    }
                }
                None => break,
            }
        }
    }
    normalize_diagonal((0..n).map(|k| a[(k, k)].abs()).collect())
}

fn normalize_diagonal(mut diag: Vec<BigInt>) -> Vec<BigInt> {
    // The elimination above already yields a divisibility chain on the
    // nonzero part; re-sorting keeps zeros at the tail.
    diag.sort_by(|x, y| match (x.is_zero(), y.is_zero()) {
        (true, true) => std::cmp::Ordering::Equal,
        (true, false) => std::cmp::Ordering::Greater,
        (false, true) => std::cmp::Ordering::Less,
        (false, false) => x.cmp(y),
    });
    diag
}

/// Result of [`solve_rational`].
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<Rational>,
    /// False when the system has free variables (they are set to zero).
    pub unique: bool,
    /// Dimension of the kernel of the coefficient matrix.
    pub nullity: usize,
}

/// Solves `a·x = b` exactly. Free variables are set to zero.
pub fn solve_rational(a: &IntMatrix, b: &[Rational]) -> Result<Solution, LatticeError> {
    if b.len() != a.rows {
        return Err(LatticeError::RhsLength { rows: a.rows, got: b.len() });
    }
    // Clear denominators of b.
    let scale = b.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let n = a.cols;
    let mut aug = IntMatrix::zeros(a.rows, n + 1);
    for i in 0..a.rows {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n)] = (&b[i] * Rational::from_integer(scale.clone())).to_integer();
    }
    let pivots = bareiss_echelon(&mut aug, n);
    let rank = pivots.len();
    if (rank..aug.rows).any(|i| !aug[(i, n)].is_zero()) {
        return Err(LatticeError::InconsistentSystem);
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = Rational::from_integer(aug[(r, n)].clone());
        for &c2 in &pivots[r + 1..] {
            if !x[c2].is_zero() {
                acc -= Rational::from_integer(aug[(r, c2)].clone()) * &x[c2];
            }
        }
        x[c] = acc / Rational::from_integer(aug[(r, c)].clone());
    }
    let inv_scale = Rational::new(BigInt::one(), scale);
    for v in &mut x {
        *v = &*v * &inv_scale;
    }
    Ok(Solution { x, unique: rank == n, nullity: n - rank })
}

/// Dimension of the rational kernel of `m` (columns minus rank).
pub fn nullity(m: &IntMatrix) -> usize {
    m.cols - rank_exact(m)
}
