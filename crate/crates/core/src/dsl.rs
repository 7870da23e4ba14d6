//! A small expression language for center functions over the distance
//! symbols `d(i,j)` (1-based), with a parser, an evaluator and a compiler
//! that checks the reflection symmetry and estimates the degree numerically.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := number | 'd' '(' int ',' int ')' | 'sqrt' '(' expr ')'
//!         | 'pow' '(' expr ',' int ')' | '(' expr ')' | '-' factor
//! ```

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::center::{verify_homogeneity, CenterError, CenterFunction, Domain, Shape};
use crate::corpus::verification_corpus;
use crate::geom::{DistanceMatrix, Polygon};
use crate::tol;

/// Seed of the corpus used by [`compile`].
pub const VERIFICATION_SEED: u64 = 0x5EED;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DslError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index out of range at {pos}: d({i},{j}) with n = {n}")]
    IndexOutOfRange { pos: usize, i: usize, j: usize, n: usize },
    #[error("square root of negative value {0}")]
    NegativeSqrt(f64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("expression is not symmetric under reflection: {original} vs {reflected}")]
    SymmetryViolation { witness: Polygon, original: f64, reflected: f64 },
    #[error("no consistent homogeneity degree: {0}")]
    DegreeInconsistent(String),
    #[error("evaluation failed on verification polygon {index}: {source}")]
    Evaluation { index: usize, source: Box<DslError> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// 1-based vertex indices.
    D(usize, usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) if *v < 0.0 => write!(f, "-{}", -v),
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::D(i, j) => write!(f, "d({i},{j})"),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Sqrt(e) => write!(f, "sqrt({e})"),
            Expr::Pow(e, k) => write!(f, "pow({e},{k})"),
        }
    }
}

impl Expr {
    /// Rename every `d(i,j)` to `d(ρ^k(i), ρ^k(j))`.
    pub fn shift_indices(&self, k: usize, n: usize) -> Expr {
        let s = |i: usize| (i - 1 + k) % n + 1;
        self.map_symbols(&|i, j| (s(i), s(j)))
    }

    /// Rename every `d(i,j)` to `d(σ(i), σ(j))`.
    pub fn reflect_indices(&self, n: usize) -> Expr {
        let s = |i: usize| (n + 1 - i) % n + 1;
        self.map_symbols(&|i, j| (s(i), s(j)))
    }

    fn map_symbols(&self, f: &dyn Fn(usize, usize) -> (usize, usize)) -> Expr {
        match self {
            Expr::Num(v) => Expr::Num(*v),
            Expr::D(i, j) => {
                let (a, b) = f(*i, *j);
                Expr::D(a, b)
            }
            Expr::Neg(e) => Expr::Neg(Box::new(e.map_symbols(f))),
            Expr::Bin(op, a, b) => Expr::Bin(*op, Box::new(a.map_symbols(f)), Box::new(b.map_symbols(f))),
            Expr::Sqrt(e) => Expr::Sqrt(Box::new(e.map_symbols(f))),
            Expr::Pow(e, k) => Expr::Pow(Box::new(e.map_symbols(f)), *k),
        }
    }

    fn max_index(&self) -> usize {
        match self {
            Expr::Num(_) => 0,
            Expr::D(i, j) => (*i).max(*j),
            Expr::Neg(e) | Expr::Sqrt(e) | Expr::Pow(e, _) => e.max_index(),
            Expr::Bin(_, a, b) => a.max_index().max(b.max_index()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Op(char),
    End,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, DslError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            _ if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            ',' => out.push((start, Tok::Comma)),
            '+' | '-' | '*' | '/' => out.push((start, Tok::Op(c))),
            _ if c.is_ascii_digit() || c == '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j], b'+' | b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text
                    .parse()
                    .map_err(|_| DslError::Syntax { pos: start, msg: format!("bad number `{text}`") })?;
                let integral = text.bytes().all(|b| b.is_ascii_digit());
                out.push((start, Tok::Num(value, integral)));
                continue;
            }
            _ if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(DslError::Syntax { pos: start, msg: format!("unexpected character `{ch}`") });
            }
        }
        i += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), DslError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            self.next();
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.factor()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            self.next();
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn unsigned_int(&mut self) -> Result<usize, DslError> {
        match *self.peek() {
            Tok::Num(v, true) if v <= u32::MAX as f64 => {
                self.next();
                Ok(v as usize)
            }
            _ => self.fail("expected an integer"),
        }
    }

    fn signed_int(&mut self) -> Result<i32, DslError> {
        let negative = *self.peek() == Tok::Op('-');
        if negative {
            self.next();
        }
        let pos = self.pos();
        let v = self.unsigned_int()?;
        let v = i32::try_from(v).map_err(|_| DslError::Syntax { pos, msg: "exponent too large".into() })?;
        Ok(if negative { -v } else { v })
    }

    fn factor(&mut self) -> Result<Expr, DslError> {
        let pos = self.pos();
        match self.next() {
            Tok::Num(v, _) => Ok(Expr::Num(v)),
            Tok::Op('-') => Ok(Expr::Neg(Box::new(self.factor()?))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "d" => {
                    self.expect(Tok::LParen, "`(` after `d`")?;
                    let i = self.unsigned_int()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let j = self.unsigned_int()?;
                    self.expect(Tok::RParen, "`)`")?;
                    if i == 0 || j == 0 || i > self.n || j > self.n {
                        return Err(DslError::IndexOutOfRange { pos, i, j, n: self.n });
                    }
                    Ok(Expr::D(i, j))
                }
                "sqrt" => {
                    self.expect(Tok::LParen, "`(` after `sqrt`")?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::Sqrt(Box::new(e)))
                }
                "pow" => {
                    self.expect(Tok::LParen, "`(` after `pow`")?;
                    let e = self.expr()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let k = self.signed_int()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Expr::Pow(Box::new(e), k))
                }
                other => Err(DslError::Syntax { pos, msg: format!("unknown name `{other}`") }),
            },
            Tok::End => Err(DslError::Syntax { pos, msg: "unexpected end of input".into() }),
            other => Err(DslError::Syntax { pos, msg: format!("unexpected {other:?}") }),
        }
    }
}

pub fn parse(source: &str, n: usize) -> Result<Expr, DslError> {
    let mut p = Parser { toks: lex(source)?, at: 0, n };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("trailing input");
    }
    Ok(e)
}

/// Value together with a magnitude scale of the terms that produced it, used
/// to judge whether a radicand or denominator is zero up to round-off.
fn eval_scaled(e: &Expr, m: &DistanceMatrix) -> Result<(f64, f64), DslError> {
    let tau_g = tol::base();
    Ok(match e {
        Expr::Num(v) => (*v, v.abs()),
        Expr::D(i, j) => {
            let v = m.get(i - 1, j - 1);
            (v, v.abs())
        }
        Expr::Neg(a) => {
            let (v, s) = eval_scaled(a, m)?;
            (-v, s)
        }
        Expr::Bin(op, a, b) => {
            let (x, sx) = eval_scaled(a, m)?;
            let (y, sy) = eval_scaled(b, m)?;
            match op {
                BinOp::Add => (x + y, sx.max(sy)),
                BinOp::Sub => (x - y, sx.max(sy)),
                BinOp::Mul => (x * y, sx * sy),
                BinOp::Div => {
                    if y.abs() <= tau_g * sy {
                        return Err(DslError::DivisionByZero);
                    }
                    (x / y, sx / y.abs())
                }
            }
        }
        Expr::Sqrt(a) => {
            let (v, s) = eval_scaled(a, m)?;
            if v >= 0.0 {
                (v.sqrt(), s.sqrt())
            } else if -v <= tau_g * s {
                (0.0, s.sqrt())
            } else {
                return Err(DslError::NegativeSqrt(v));
            }
        }
        Expr::Pow(a, k) => {
            let (v, s) = eval_scaled(a, m)?;
            if *k < 0 && v.abs() <= tau_g * s {
                return Err(DslError::DivisionByZero);
            }
            let scale = if *k >= 0 { s.powi(*k) } else { v.abs().powi(*k) };
            (v.powi(*k), scale)
        }
    })
}

pub fn evaluate(e: &Expr, m: &DistanceMatrix) -> Result<f64, DslError> {
    if e.max_index() > m.n() {
        return Err(DslError::IndexOutOfRange { pos: 0, i: e.max_index(), j: e.max_index(), n: m.n() });
    }
    eval_scaled(e, m).map(|(v, _)| v)
}

/// A parsed expression that passed the symmetry check on the verification
/// corpus.
#[derive(Debug, Clone, Serialize)]
pub struct DslCenterFunction {
    pub n: usize,
    #[serde(serialize_with = "display")]
    pub expr: Expr,
    pub shape: Shape,
    pub verified_symmetry: bool,
    pub estimated_degree: Option<i32>,
    /// Verification polygons inside the domain.
    pub checked: usize,
}

fn display<S: serde::Serializer>(e: &Expr, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(e)
}

/// Check `g(d) = g(d∘σ)` on the verification polygons that fall in the
/// domain, then estimate the degree from those where `g ≠ 0`.
pub fn compile(expr: Expr, n: usize, shape: Shape) -> Result<DslCenterFunction, DslError> {
    let domain = Domain::sized(n, shape);
    let samples: Vec<Polygon> = verification_corpus(n, VERIFICATION_SEED)
        .into_iter()
        .filter(|p| domain.contains(p))
        .collect();
    let mut nonzero = Vec::new();
    for (index, p) in samples.iter().enumerate() {
        let d = p.distance_matrix();
        let wrap = |source| DslError::Evaluation { index, source: Box::new(source) };
        let (a, sa) = eval_scaled(&expr, &d).map_err(wrap)?;
        let (b, sb) = eval_scaled(&expr, &d.reflected()).map_err(wrap)?;
        if (a - b).abs() > tol::base() * sa.max(sb).max(a.abs()) {
            return Err(DslError::SymmetryViolation { witness: p.clone(), original: a, reflected: b });
        }
        if a != 0.0 {
            nonzero.push(p.clone());
        }
    }
    if nonzero.is_empty() {
        return Err(DslError::DegreeInconsistent("expression vanishes on every verification polygon".into()));
    }
    let probe = CenterFunction::new("dsl", None, domain, {
        let e = expr.clone();
        move |d| evaluate(&e, d).map_err(|err| CenterError::Evaluation(err.to_string()))
    });
    let degree = verify_homogeneity(&probe, &nonzero).map_err(|e| DslError::DegreeInconsistent(e.to_string()))?;
    Ok(DslCenterFunction {
        n,
        expr,
        shape,
        verified_symmetry: true,
        estimated_degree: Some(degree),
        checked: samples.len(),
    })
}

impl DslCenterFunction {
    pub fn center_function(&self, name: &str) -> CenterFunction {
        let e = self.expr.clone();
        CenterFunction::new(name, self.estimated_degree, Domain::sized(self.n, self.shape), move |d| {
            evaluate(&e, d).map_err(|err| CenterError::Evaluation(err.to_string()))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::center::{builtin, coordinate_map};
    use crate::corpus::reference_quad;
    use crate::geom::Point;

    pub const CROSSPOINT: &str = "sqrt(4*pow(d(3,4),2)*pow(d(2,4),2) - pow(pow(d(3,4),2)+pow(d(2,4),2)-pow(d(2,3),2),2)) + sqrt(4*pow(d(2,3),2)*pow(d(2,4),2) - pow(pow(d(2,3),2)+pow(d(2,4),2)-pow(d(3,4),2),2))";

    fn unit_square() -> DistanceMatrix {
        Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).distance_matrix()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse("1", 4).unwrap(), Expr::Num(1.0));
        assert_eq!(parse(" d( 1 , 3 ) ", 4).unwrap(), Expr::D(1, 3));
        assert_eq!(
            parse("-d(1,2)*2", 3).unwrap(),
            Expr::Bin(BinOp::Mul, Box::new(Expr::Neg(Box::new(Expr::D(1, 2)))), Box::new(Expr::Num(2.0)))
        );
        assert_eq!(parse("pow(d(1,2),-2)", 3).unwrap(), Expr::Pow(Box::new(Expr::D(1, 2)), -2));
        parse(CROSSPOINT, 4).unwrap();
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse("d(1,5)", 4), Err(DslError::IndexOutOfRange { i: 1, j: 5, n: 4, .. })));
        assert!(matches!(parse("d(0,1)", 4), Err(DslError::IndexOutOfRange { .. })));
        assert!(matches!(parse("1 +", 4), Err(DslError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("foo(1)", 4), Err(DslError::Syntax { pos: 0, .. })));
        assert!(matches!(parse("(1", 4), Err(DslError::Syntax { .. })));
        assert!(matches!(parse("1 2", 4), Err(DslError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("d(1.5,2)", 4), Err(DslError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("2 # 3", 4), Err(DslError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn print_parse_round_trip() {
        for src in ["1", "d(1,3)", "-(d(1,2) - 3.5)/pow(d(2,3),-1)", CROSSPOINT, "1e-3 * d(1,2)"] {
            let e = parse(src, 4).unwrap();
            assert_eq!(parse(&e.to_string(), 4).unwrap(), e, "{src}");
        }
    }

    #[test]
    fn evaluate_examples() {
        let sq = unit_square();
        assert_eq!(evaluate(&parse("1", 4).unwrap(), &sq).unwrap(), 1.0);
        assert!((evaluate(&parse("d(1,3)", 4).unwrap(), &sq).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(evaluate(&parse("1/(d(1,2)-d(2,3))", 4).unwrap(), &sq), Err(DslError::DivisionByZero));
        assert!(matches!(evaluate(&parse("sqrt(0-d(1,2))", 4).unwrap(), &sq), Err(DslError::NegativeSqrt(_))));

        let q = reference_quad().distance_matrix();
        let (d34, d24, d23) = (17.0_f64, 13.0_f64, 10.0_f64);
        let closed = (4.0 * d34 * d24 - (d34 + d24 - d23).powi(2)).sqrt()
            + (4.0 * d23 * d24 - (d23 + d24 - d34).powi(2)).sqrt();
        let got = evaluate(&parse(CROSSPOINT, 4).unwrap(), &q).unwrap();
        assert!((got - closed).abs() < 1e-12 * closed);
    }

    #[test]
    fn shifted_expression_matches_shifted_matrix() {
        let e = parse(CROSSPOINT, 4).unwrap();
        let d = reference_quad().distance_matrix();
        for k in 0..4 {
            let a = evaluate(&e, &d.shifted(k)).unwrap();
            let b = evaluate(&e.shift_indices(k, 4), &d).unwrap();
            assert!((a - b).abs() < 1e-12 * a.abs());
        }
        let a = evaluate(&e, &d.reflected()).unwrap();
        let b = evaluate(&e.reflect_indices(4), &d).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn compile_examples() {
        let f = compile(parse("d(1,3)", 4).unwrap(), 4, Shape::Any).unwrap();
        assert_eq!(f.estimated_degree, Some(1));
        assert!(f.verified_symmetry);

        match compile(parse("d(1,2)", 4).unwrap(), 4, Shape::Any) {
            Err(DslError::SymmetryViolation { witness, original, reflected }) => {
                assert_eq!(witness, reference_quad());
                assert!((original - 4.0).abs() < 1e-15 && (reflected - 5f64.sqrt()).abs() < 1e-15);
            }
            other => panic!("expected a violation, got {other:?}"),
        }

        let f = compile(parse(CROSSPOINT, 4).unwrap(), 4, Shape::ConvexNoThreeCollinear).unwrap();
        assert_eq!(f.estimated_degree, Some(2));
        let e = coordinate_map(&f.center_function("crosspoint"), &reference_quad()).unwrap();
        assert!(e.point.distance(Point::new(40.0 / 19.0, 24.0 / 19.0)) < 1e-12);
        let b = coordinate_map(&builtin("crosspoint").unwrap(), &reference_quad()).unwrap();
        assert!(e.point.distance(b.point) < 1e-12);

        assert!(matches!(compile(parse("0", 4).unwrap(), 4, Shape::Any), Err(DslError::DegreeInconsistent(_))));
        assert!(matches!(
            compile(parse("d(1,3) + 1", 4).unwrap(), 4, Shape::Any),
            Err(DslError::DegreeInconsistent(_))
        ));
    }

    #[test]
    fn dsl_centroid_is_the_builtin_centroid() {
        let f = compile(parse("1", 5).unwrap(), 5, Shape::Any).unwrap();
        assert_eq!(f.estimated_degree, Some(0));
        let g = f.center_function("one");
        let c = builtin("centroid").unwrap();
        for p in verification_corpus(5, 9) {
            let a = coordinate_map(&g, &p).unwrap();
            let b = coordinate_map(&c, &p).unwrap();
            assert_eq!(a.point, b.point);
        }
    }
}
