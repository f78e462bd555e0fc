//! Input formats and the report record.
//!
//! Two text formats are understood:
//!
//! * vertex matrices: a header `r c` (further header tokens are ignored)
//!   followed by `r` rows of `c` integers; points are rows when `c = 4`,
//!   columns when only `r = 4`;
//! * Laurent polynomials such as `t1*t4/t3 + t2/(t1*t4) + t1^-3*t2`.
//!
//! Lines starting with `#` are comments. Comments of the form
//! `# role: dual` and `# multiplicity: 2` attach metadata to a file.

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::period::{PeriodError, Support};
use crate::polytope::{LatticePolytope, Point, PolytopeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: expected a header 'rows cols'")]
    MalformedHeader { line: usize },
    #[error("line {line}: {msg}")]
    MalformedRow { line: usize, msg: String },
    #[error("matrix is {rows}x{cols}; one dimension must be 4")]
    DimensionNotFour { rows: usize, cols: usize },
    #[error("syntax error at byte {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("monomial {0:?} appears twice")]
    DuplicateMonomial(Point),
    #[error("variable index {index} at byte {pos} is outside 1..4")]
    VariableIndexOutOfRange { pos: usize, index: u64 },
    #[error("the constant monomial cannot be part of a support")]
    ConstantMonomial,
    #[error("line {line}: bad directive: {msg}")]
    BadDirective { line: usize, msg: String },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// How to read a 4×4 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Auto,
    RowsArePoints,
    ColumnsArePoints,
}

/// Points of a vertex matrix, before any convex hull.
pub fn parse_vertex_points(text: &str, orientation: Orientation) -> Result<Vec<Point>, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(IoError::MalformedHeader { line: 1 })?;
    let mut tokens = header.split_whitespace().map(str::parse::<usize>);
    let (Some(Ok(r)), Some(Ok(c))) = (tokens.next(), tokens.next()) else {
        return Err(IoError::MalformedHeader { line: hline });
    };
    let mut matrix: Vec<Vec<i64>> = Vec::with_capacity(r);
    for (line, l) in lines.by_ref().take(r) {
        let row: Vec<i64> = l
            .split_whitespace()
            .map(|t| t.parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|e| IoError::MalformedRow { line, msg: e.to_string() })?;
        if row.len() != c {
            return Err(IoError::MalformedRow { line, msg: format!("expected {c} entries, found {}", row.len()) });
        }
        matrix.push(row);
    }
    if matrix.len() != r {
        return Err(IoError::MalformedRow { line: hline, msg: format!("expected {r} rows, found {}", matrix.len()) });
    }
    if let Some((line, _)) = lines.next() {
        return Err(IoError::MalformedRow { line, msg: "trailing data after the matrix".into() });
    }
    let rows_are_points = match orientation {
        Orientation::RowsArePoints => true,
        Orientation::ColumnsArePoints => false,
        Orientation::Auto => c == 4,
    };
    let need = if rows_are_points { c } else { r };
    if need != 4 || (orientation == Orientation::Auto && c != 4 && r != 4) {
        return Err(IoError::DimensionNotFour { rows: r, cols: c });
    }
    Ok(if rows_are_points {
        matrix.iter().map(|row| [row[0], row[1], row[2], row[3]]).collect()
    } else {
        (0..c).map(|j| [matrix[0][j], matrix[1][j], matrix[2][j], matrix[3][j]]).collect()
    })
}

pub fn parse_vertex_matrix(text: &str, orientation: Orientation) -> Result<LatticePolytope, IoError> {
    Ok(LatticePolytope::from_points(&parse_vertex_points(text, orientation)?)?)
}

/// Renders points as a `n 4` vertex matrix.
pub fn render_vertex_matrix(points: &[Point]) -> String {
    let mut out = format!("{} 4\n", points.len());
    for p in points {
        out.push_str(&format!("{} {} {} {}\n", p[0], p[1], p[2], p[3]));
    }
    out
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.text[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, IoError> {
        Err(IoError::SyntaxError { pos: self.pos, msg: msg.to_string() })
    }

    fn digits(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.text[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.text[start..self.pos].parse().ok()).flatten()
    }

    /// `t i ('^' signed)?`
    fn factor(&mut self, acc: &mut Point) -> Result<(), IoError> {
        if self.peek() != Some('t') {
            return self.err("expected a variable t1..t4");
        }
        self.bump();
        if self.text[self.pos..].starts_with('_') {
            self.pos += 1;
        }
        let at = self.pos;
        let Some(index) = self.digits() else {
            return self.err("expected a variable index");
        };
        if !(1..=4).contains(&index) {
            return Err(IoError::VariableIndexOutOfRange { pos: at, index });
        }
        let mut exp = 1i64;
        if self.peek() == Some('^') {
            self.bump();
            let braced = self.peek() == Some('{');
            if braced {
                self.bump();
            }
            let sign = match self.peek() {
                Some('-') => {
                    self.bump();
                    -1
                }
                Some('+') => {
                    self.bump();
                    1
                }
                _ => 1,
            };
            self.skip_ws();
            let Some(v) = self.digits() else {
                return self.err("expected an integer exponent");
            };
            exp = sign * v as i64;
            if braced {
                if self.peek() != Some('}') {
                    return self.err("expected '}'");
                }
                self.bump();
            }
            if self.peek() == Some('^') {
                return self.err("repeated exponent");
            }
        }
        acc[(index - 1) as usize] += exp;
        Ok(())
    }

    /// Product of factors, `1`, or a parenthesized product.
    fn group(&mut self) -> Result<Point, IoError> {
        let mut acc = [0i64; 4];
        let paren = self.peek() == Some('(');
        if paren {
            self.bump();
        }
        if self.peek() == Some('1') {
            self.bump();
            if self.text[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                return self.err("only the coefficient 1 is allowed");
            }
        } else {
            self.factor(&mut acc)?;
            loop {
                match self.peek() {
                    Some('*') => {
                        self.bump();
                        self.factor(&mut acc)?;
                    }
                    Some('t') => self.factor(&mut acc)?,
                    _ => break,
                }
            }
        }
        if paren {
            if self.peek() != Some(')') {
                return self.err("expected ')'");
            }
            self.bump();
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Point, IoError> {
        let mut e = self.group()?;
        if self.peek() == Some('/') {
            self.bump();
            let d = self.group()?;
            for c in 0..4 {
                e[c] -= d[c];
            }
        }
        Ok(e)
    }
}

/// Exponent vectors of a sum of monomials, in input order.
pub fn parse_laurent_exponents(text: &str) -> Result<Vec<Point>, IoError> {
    let mut lx = Lexer { text, pos: 0 };
    let mut out: Vec<Point> = Vec::new();
    loop {
        let e = lx.term()?;
        if out.contains(&e) {
            return Err(IoError::DuplicateMonomial(e));
        }
        out.push(e);
        match lx.peek() {
            None => break,
            Some('+') => lx.bump(),
            Some(_) => return lx.err("expected '+' or end of input"),
        }
    }
    Ok(out)
}

pub fn parse_laurent(text: &str) -> Result<Support, IoError> {
    let exps = parse_laurent_exponents(text)?;
    Support::new(exps).map_err(|e| match e {
        PeriodError::ZeroMonomial => IoError::ConstantMonomial,
        PeriodError::Duplicate(p) => IoError::DuplicateMonomial(p),
        PeriodError::Empty => IoError::SyntaxError { pos: 0, msg: "empty expression".into() },
    })
}

/// Renders a support as `t1*t4/(t2*t3) + …`.
pub fn render_laurent(points: &[Point]) -> String {
    fn product(e: &Point, sign: i64) -> (String, usize) {
        let mut parts = Vec::new();
        for (i, &x) in e.iter().enumerate() {
            let x = x * sign;
            if x == 1 {
                parts.push(format!("t{}", i + 1));
            } else if x > 1 {
                parts.push(format!("t{}^{}", i + 1, x));
            }
        }
        let n = parts.len();
        (parts.join("*"), n)
    }
    points
        .iter()
        .map(|e| {
            let (num, _) = product(e, 1);
            let (den, nd) = product(e, -1);
            let num = if num.is_empty() { "1".to_string() } else { num };
            match nd {
                0 => num,
                1 => format!("{num}/{den}"),
                _ => format!("{num}/({den})"),
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Which polytope of the reflexive pair an input describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// The Newton polytope `Δ` of the hypersurface.
    #[default]
    Delta,
    /// The dual `Δ°`, e.g. the support of a period.
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputKind {
    Vertices,
    Laurent,
}

/// A parsed input file with its directives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputFile {
    pub kind: InputKind,
    pub points: Vec<Point>,
    pub role: Option<Role>,
    pub multiplicity: Option<i64>,
}

/// Reads either format; a first content line starting with a digit marks a
/// vertex matrix.
pub fn parse_input(text: &str, orientation: Orientation) -> Result<InputFile, IoError> {
    let mut role = None;
    let mut multiplicity = None;
    for (i, line) in text.lines().enumerate() {
        let Some(comment) = line.trim().strip_prefix('#') else { continue };
        let Some((key, value)) = comment.split_once(':') else { continue };
        let value = value.trim();
        let bad = |msg: String| IoError::BadDirective { line: i + 1, msg };
        match key.trim() {
            "role" => {
                role = Some(match value {
                    "delta" => Role::Delta,
                    "dual" => Role::Dual,
                    other => return Err(bad(format!("unknown role '{other}'"))),
                })
            }
            "multiplicity" => {
                let m: i64 = value.parse().map_err(|_| bad(format!("bad multiplicity '{value}'")))?;
                if m < 1 {
                    return Err(bad("multiplicity must be at least 1".into()));
                }
                multiplicity = Some(m);
            }
            _ => {}
        }
    }
    let body: String = text
        .lines()
        .map(|l| if l.trim_start().starts_with('#') { "" } else { l })
        .collect::<Vec<_>>()
        .join("\n");
    let first = body.trim_start().chars().next();
    let (kind, points) = if first.is_some_and(|c| c.is_ascii_digit()) && !body.contains('t') {
        (InputKind::Vertices, parse_vertex_points(text, orientation)?)
    } else {
        (InputKind::Laurent, parse_laurent_exponents(&body)?)
    };
    Ok(InputFile { kind, points, role, multiplicity })
}

/// Per-input summary. Optional fields are present iff their stage ran.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct Report {
    pub source: String,
    pub role: Role,
    pub vertices: usize,
    pub dual_vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reflexive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dp: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rk: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hodge_resolved: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hodge_smoothed: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_cubed: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2_h: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c3: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ind: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facet_interior_point: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator_text: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stride: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instantons: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Big integers in reports are decimal strings.
pub fn integer_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(BigInt::to_string).collect()
}
