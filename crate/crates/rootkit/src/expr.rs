//! Expression parsing and second-order jet evaluation.
//!
//! Accepts a single-variable expression like `x^2 - 612` or `tanh(x)` and
//! evaluates it as a [`Jet2`], so callers get `f`, `f′`, and `f″` from one
//! text. Differentiation is second-order forward mode: every node propagates
//! `(u, u′, u″)` with the truncated Taylor rules `(uv)″ = u″v + 2u′v′ + uv″`
//! and `h(u)″ = h″(u)·u′² + h′(u)·u″`.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := unary ('^' factor)?
//! unary  := '-' unary | atom
//! atom   := number | 'x' | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! Functions are `log`, `exp`, `sin`, `cos`, `tanh`, `sqrt`; `pi` and `e` are
//! constants. Numbers are decimal literals with an optional exponent. The
//! Unicode minus sign is accepted as `-`. Note that per the grammar, unary
//! minus binds tighter than `^`: `-x^2` is `(-x)^2`.
//!
//! Exponents must be constant: `x^x` is rejected at parse time. (Constant
//! arithmetic like `x^(3-1)` is folded and accepted.)
//!
//! ```
//! use rootkit::expr::{parse, eval_jet};
//!
//! let ast = parse("x^2 - 612").unwrap();
//! let j = eval_jet(&ast, 10.0).unwrap();
//! assert_eq!((j.value, j.d1, j.d2), (-512.0, 20.0, 2.0));
//! ```

use crate::kernels::Jet2;
use std::fmt;

/// Built-in unary functions (plus negation).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Log,
    Exp,
    Sin,
    Cos,
    Tanh,
    Sqrt,
}

impl UnaryOp {
    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Log => "log",
            UnaryOp::Exp => "exp",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Tanh => "tanh",
            UnaryOp::Sqrt => "sqrt",
        }
    }
}

/// Binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

/// Parsed expression tree. Immutable once built; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Const(f64),
    Var,
    Unary(UnaryOp, Box<ExprAst>),
    Binary(BinOp, Box<ExprAst>, Box<ExprAst>),
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Const(c) => write!(f, "{c}"),
            ExprAst::Var => f.write_str("x"),
            ExprAst::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            ExprAst::Unary(op, a) => write!(f, "{}({a})", op.name()),
            ExprAst::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

/// Why parsing stopped, with the byte offset where it happened.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    MalformedNumber(String),
    UnknownFunction(String),
    /// A token that cannot start or continue an expression here.
    UnexpectedToken(String),
    UnexpectedEnd,
    UnclosedParen,
    NonConstantExponent,
    TooDeep,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: ", self.offset)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::MalformedNumber(s) => write!(f, "malformed number {s:?}"),
            ParseErrorKind::UnknownFunction(s) => write!(
                f,
                "unknown function {s:?} (expected log, exp, sin, cos, tanh, or sqrt)"
            ),
            ParseErrorKind::UnexpectedToken(s) => write!(f, "unexpected {s}"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UnclosedParen => write!(f, "unclosed parenthesis"),
            ParseErrorKind::NonConstantExponent => {
                write!(f, "exponent must be a constant (general u^v is not supported)")
            }
            ParseErrorKind::TooDeep => write!(f, "expression nests too deeply"),
        }
    }
}

impl std::error::Error for ParseError {}

/// Evaluation failure: a domain violation or a non-finite intermediate,
/// naming the subexpression where it happened.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub kind: EvalErrorKind,
    /// Rendering of the offending subexpression.
    pub subexpr: String,
    /// The point being evaluated.
    pub x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    LogDomain,
    SqrtDomain,
    DivByZero,
    PowDomain,
    NonFinite,
    NonConstantExponent,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            EvalErrorKind::LogDomain => "log of a non-positive value",
            EvalErrorKind::SqrtDomain => "sqrt of a non-positive value",
            EvalErrorKind::DivByZero => "division by zero",
            EvalErrorKind::PowDomain => "power with a negative base and non-integer exponent",
            EvalErrorKind::NonFinite => "non-finite result",
            EvalErrorKind::NonConstantExponent => "non-constant exponent",
        };
        write!(f, "{} in {} at x = {:e}", what, self.subexpr, self.x)
    }
}

impl std::error::Error for EvalError {}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(at, c)) = it.peek() {
        let tok = match c {
            _ if c.is_whitespace() => {
                it.next();
                continue;
            }
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                let end = scan_number(src, at);
                let text = &src[at..end];
                let val: f64 = text.parse().map_err(|_| ParseError {
                    offset: at,
                    kind: ParseErrorKind::MalformedNumber(text.to_string()),
                })?;
                // 1e999 parses to inf; treat it as malformed rather than
                // letting an infinity into the tree
                if !val.is_finite() {
                    return Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::MalformedNumber(text.to_string()),
                    });
                }
                while it.peek().is_some_and(|&(i, _)| i < end) {
                    it.next();
                }
                out.push((at, Tok::Num(val)));
                continue;
            }
            _ if c.is_ascii_alphabetic() => {
                let mut end = at;
                while let Some(&(i, d)) = it.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = i + d.len_utf8();
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((at, Tok::Ident(src[at..end].to_string())));
                continue;
            }
            other => {
                return Err(ParseError {
                    offset: at,
                    kind: ParseErrorKind::UnexpectedChar(other),
                })
            }
        };
        it.next();
        out.push((at, tok));
    }
    Ok(out)
}

/// Scans `digits ('.' digits)? ([eE] [+-]? digits)?` starting at `start`,
/// returning the end byte offset. Never consumes a trailing '.' or 'e' that
/// is not followed by what it needs.
fn scan_number(src: &str, start: usize) -> usize {
    let b = src.as_bytes();
    let mut i = start;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    if i < b.len() && b[i] == b'.' && i + 1 < b.len() && b[i + 1].is_ascii_digit() {
        i += 1;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            i = j;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
        }
    }
    i
}

// ---------------------------------------------------------------------------
// Parser

/// Recursion guard: inputs are untrusted (CLI flag, fuzzing), so nesting is
/// capped instead of riding the call stack to an abort.
const MAX_DEPTH: usize = 200;

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_offset: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end_offset, |&(at, _)| at)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { offset: self.here(), kind }
    }

    fn expr(&mut self, depth: usize) -> Result<ExprAst, ParseError> {
        if depth > MAX_DEPTH {
            return Err(self.err(ParseErrorKind::TooDeep));
        }
        let mut lhs = self.term(depth + 1)?;
        while let Some(&(_, ref t)) = self.peek() {
            let op = match t {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.next();
            let rhs = self.term(depth + 1)?;
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self, depth: usize) -> Result<ExprAst, ParseError> {
        if depth > MAX_DEPTH {
            return Err(self.err(ParseErrorKind::TooDeep));
        }
        let mut lhs = self.factor(depth + 1)?;
        while let Some(&(_, ref t)) = self.peek() {
            let op = match t {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.next();
            let rhs = self.factor(depth + 1)?;
            lhs = ExprAst::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self, depth: usize) -> Result<ExprAst, ParseError> {
        if depth > MAX_DEPTH {
            return Err(self.err(ParseErrorKind::TooDeep));
        }
        let base = self.unary(depth + 1)?;
        if matches!(self.peek(), Some((_, Tok::Caret))) {
            let caret_at = self.here();
            self.next();
            let exp = self.factor(depth + 1)?;
            let k = fold_const(&exp).ok_or(ParseError {
                offset: caret_at,
                kind: ParseErrorKind::NonConstantExponent,
            })?;
            return Ok(ExprAst::Binary(
                BinOp::Pow,
                Box::new(base),
                Box::new(ExprAst::Const(k)),
            ));
        }
        Ok(base)
    }

    fn unary(&mut self, depth: usize) -> Result<ExprAst, ParseError> {
        if depth > MAX_DEPTH {
            return Err(self.err(ParseErrorKind::TooDeep));
        }
        if let Some(&(_, Tok::Minus)) = self.peek() {
            self.next();
            let inner = self.unary(depth + 1)?;
            return Ok(ExprAst::Unary(UnaryOp::Neg, Box::new(inner)));
        }
        self.atom(depth + 1)
    }

    fn atom(&mut self, depth: usize) -> Result<ExprAst, ParseError> {
        if depth > MAX_DEPTH {
            return Err(self.err(ParseErrorKind::TooDeep));
        }
        let (at, tok) = match self.next() {
            Some(t) => t,
            None => {
                return Err(ParseError {
                    offset: self.end_offset,
                    kind: ParseErrorKind::UnexpectedEnd,
                })
            }
        };
        match tok {
            Tok::Num(v) => Ok(ExprAst::Const(v)),
            Tok::LParen => {
                let inner = self.expr(depth + 1)?;
                match self.next() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    Some((at, t)) => Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::UnexpectedToken(t.describe()),
                    }),
                    None => Err(ParseError {
                        offset: self.end_offset,
                        kind: ParseErrorKind::UnclosedParen,
                    }),
                }
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(ExprAst::Var),
                "pi" => Ok(ExprAst::Const(std::f64::consts::PI)),
                "e" => Ok(ExprAst::Const(std::f64::consts::E)),
                _ => {
                    let op = match name.as_str() {
                        "log" => UnaryOp::Log,
                        "exp" => UnaryOp::Exp,
                        "sin" => UnaryOp::Sin,
                        "cos" => UnaryOp::Cos,
                        "tanh" => UnaryOp::Tanh,
                        "sqrt" => UnaryOp::Sqrt,
                        _ => {
                            return Err(ParseError {
                                offset: at,
                                kind: ParseErrorKind::UnknownFunction(name),
                            })
                        }
                    };
                    match self.next() {
                        Some((_, Tok::LParen)) => {}
                        Some((at, t)) => {
                            return Err(ParseError {
                                offset: at,
                                kind: ParseErrorKind::UnexpectedToken(t.describe()),
                            })
                        }
                        None => {
                            return Err(ParseError {
                                offset: self.end_offset,
                                kind: ParseErrorKind::UnexpectedEnd,
                            })
                        }
                    }
                    let arg = self.expr(depth + 1)?;
                    match self.next() {
                        Some((_, Tok::RParen)) => Ok(ExprAst::Unary(op, Box::new(arg))),
                        Some((at, t)) => Err(ParseError {
                            offset: at,
                            kind: ParseErrorKind::UnexpectedToken(t.describe()),
                        }),
                        None => Err(ParseError {
                            offset: self.end_offset,
                            kind: ParseErrorKind::UnclosedParen,
                        }),
                    }
                }
            },
            t => Err(ParseError { offset: at, kind: ParseErrorKind::UnexpectedToken(t.describe()) }),
        }
    }
}

/// Folds an expression of constants to its value; `None` if it mentions `x`
/// or a function.
fn fold_const(ast: &ExprAst) -> Option<f64> {
    match ast {
        ExprAst::Const(c) => Some(*c),
        ExprAst::Unary(UnaryOp::Neg, inner) => fold_const(inner).map(|v| -v),
        ExprAst::Binary(op, a, b) => {
            let (a, b) = (fold_const(a)?, fold_const(b)?);
            Some(match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
                BinOp::Pow => a.powf(b),
            })
        }
        _ => None,
    }
}

/// Parses `text` into an [`ExprAst`].
///
/// Total over arbitrary input: every string yields either a tree or a
/// positioned [`ParseError`]. Trailing input after a complete expression is
/// an error.
pub fn parse(text: &str) -> Result<ExprAst, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end_offset: text.len() };
    let ast = p.expr(0)?;
    if let Some((at, t)) = p.next() {
        return Err(ParseError { offset: at, kind: ParseErrorKind::UnexpectedToken(t.describe()) });
    }
    Ok(ast)
}

// ---------------------------------------------------------------------------
// Evaluation

fn eval_err(kind: EvalErrorKind, node: &ExprAst, x: f64) -> EvalError {
    EvalError { kind, subexpr: node.to_string(), x }
}

fn jet_node(node: &ExprAst, x: f64) -> Result<(f64, f64, f64), EvalError> {
    let out = match node {
        ExprAst::Const(c) => (*c, 0.0, 0.0),
        ExprAst::Var => (x, 1.0, 0.0),
        ExprAst::Unary(op, a) => {
            let (u0, u1, u2) = jet_node(a, x)?;
            match op {
                UnaryOp::Neg => (-u0, -u1, -u2),
                UnaryOp::Log => {
                    if u0 <= 0.0 {
                        return Err(eval_err(EvalErrorKind::LogDomain, node, x));
                    }
                    let d1 = u1 / u0;
                    (u0.ln(), d1, (u2 - u1 * d1) / u0)
                }
                UnaryOp::Exp => {
                    let e = u0.exp();
                    (e, e * u1, e * (u1 * u1 + u2))
                }
                UnaryOp::Sin => {
                    let (s, c) = u0.sin_cos();
                    (s, c * u1, -s * u1 * u1 + c * u2)
                }
                UnaryOp::Cos => {
                    let (s, c) = u0.sin_cos();
                    (c, -s * u1, -c * u1 * u1 - s * u2)
                }
                UnaryOp::Tanh => {
                    // sech^2 = 1 - tanh^2 keeps this finite at large |u|
                    let t = u0.tanh();
                    let s = 1.0 - t * t;
                    (t, s * u1, -2.0 * t * s * u1 * u1 + s * u2)
                }
                UnaryOp::Sqrt => {
                    if u0 <= 0.0 {
                        return Err(eval_err(EvalErrorKind::SqrtDomain, node, x));
                    }
                    let r = u0.sqrt();
                    let h1 = 0.5 / r;
                    (r, h1 * u1, -0.25 / (u0 * r) * u1 * u1 + h1 * u2)
                }
            }
        }
        ExprAst::Binary(op, a, b) => {
            match op {
                BinOp::Pow => {
                    let k = match **b {
                        ExprAst::Const(k) => k,
                        _ => return Err(eval_err(EvalErrorKind::NonConstantExponent, node, x)),
                    };
                    let (u0, u1, u2) = jet_node(a, x)?;
                    if u0 < 0.0 && k.fract() != 0.0 {
                        return Err(eval_err(EvalErrorKind::PowDomain, node, x));
                    }
                    if k == 0.0 {
                        (1.0, 0.0, 0.0)
                    } else if k == 1.0 {
                        (u0, u1, u2)
                    } else {
                        let p1 = k * u0.powf(k - 1.0);
                        let p2 = k * (k - 1.0) * u0.powf(k - 2.0);
                        (u0.powf(k), p1 * u1, p2 * u1 * u1 + p1 * u2)
                    }
                }
                _ => {
                    let (u0, u1, u2) = jet_node(a, x)?;
                    let (v0, v1, v2) = jet_node(b, x)?;
                    match op {
                        BinOp::Add => (u0 + v0, u1 + v1, u2 + v2),
                        BinOp::Sub => (u0 - v0, u1 - v1, u2 - v2),
                        BinOp::Mul => {
                            (u0 * v0, u1 * v0 + u0 * v1, u2 * v0 + 2.0 * u1 * v1 + u0 * v2)
                        }
                        BinOp::Div => {
                            if v0 == 0.0 {
                                return Err(eval_err(EvalErrorKind::DivByZero, node, x));
                            }
                            let w0 = u0 / v0;
                            let w1 = (u1 - w0 * v1) / v0;
                            let w2 = (u2 - 2.0 * w1 * v1 - w0 * v2) / v0;
                            (w0, w1, w2)
                        }
                        BinOp::Pow => unreachable!(),
                    }
                }
            }
        }
    };
    if out.0.is_finite() && out.1.is_finite() && out.2.is_finite() {
        Ok(out)
    } else {
        Err(eval_err(EvalErrorKind::NonFinite, node, x))
    }
}

/// Evaluates the expression and its first two derivatives at `x`.
pub fn eval_jet(ast: &ExprAst, x: f64) -> Result<Jet2, EvalError> {
    let (v, d1, d2) = jet_node(ast, x)?;
    // jet_node already guarantees finiteness
    Ok(Jet2 { value: v, d1, d2 })
}

/// Plain value-only evaluation, for cross-checking [`eval_jet`].
pub fn eval(ast: &ExprAst, x: f64) -> Result<f64, EvalError> {
    let v = match ast {
        ExprAst::Const(c) => *c,
        ExprAst::Var => x,
        ExprAst::Unary(op, a) => {
            let u = eval(a, x)?;
            match op {
                UnaryOp::Neg => -u,
                UnaryOp::Log => {
                    if u <= 0.0 {
                        return Err(eval_err(EvalErrorKind::LogDomain, ast, x));
                    }
                    u.ln()
                }
                UnaryOp::Exp => u.exp(),
                UnaryOp::Sin => u.sin(),
                UnaryOp::Cos => u.cos(),
                UnaryOp::Tanh => u.tanh(),
                UnaryOp::Sqrt => {
                    if u <= 0.0 {
                        return Err(eval_err(EvalErrorKind::SqrtDomain, ast, x));
                    }
                    u.sqrt()
                }
            }
        }
        ExprAst::Binary(op, a, b) => {
            let u = eval(a, x)?;
            let v = eval(b, x)?;
            match op {
                BinOp::Add => u + v,
                BinOp::Sub => u - v,
                BinOp::Mul => u * v,
                BinOp::Div => {
                    if v == 0.0 {
                        return Err(eval_err(EvalErrorKind::DivByZero, ast, x));
                    }
                    u / v
                }
                BinOp::Pow => {
                    if u < 0.0 && v.fract() != 0.0 {
                        return Err(eval_err(EvalErrorKind::PowDomain, ast, x));
                    }
                    u.powf(v)
                }
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(eval_err(EvalErrorKind::NonFinite, ast, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_shapes() {
        use ExprAst::*;
        assert_eq!(
            parse("x^2 - 612").unwrap(),
            Binary(
                BinOp::Sub,
                Box::new(Binary(BinOp::Pow, Box::new(Var), Box::new(Const(2.0)))),
                Box::new(Const(612.0)),
            )
        );
        assert_eq!(parse("tanh(x)").unwrap(), Unary(UnaryOp::Tanh, Box::new(Var)));
        // per the grammar, unary minus binds tighter than '^'
        assert_eq!(
            parse("-x^2").unwrap(),
            Binary(
                BinOp::Pow,
                Box::new(Unary(UnaryOp::Neg, Box::new(Var))),
                Box::new(Const(2.0)),
            )
        );
    }

    #[test]
    fn parse_evaluates_right() {
        // (input, x, expected value)
        let table: &[(&str, f64, f64)] = &[
            ("2+3*4", 0.0, 14.0),
            ("2*3^2", 0.0, 18.0),
            ("-2^2", 0.0, 4.0), // (-2)^2 under this grammar
            ("2-3-4", 0.0, -5.0),
            ("2/4/4", 0.0, 0.125),
            ("x^2^3", 2.0, 256.0), // right-associative: x^(2^3)
            ("x^(3-1)", 5.0, 25.0),
            ("x^-2", 2.0, 0.25),
            ("pi", 0.0, std::f64::consts::PI),
            ("2*e", 0.0, 2.0 * std::f64::consts::E),
            ("sqrt(x)*sqrt(x)", 9.0, 9.0),
            ("x*(x*x-2)+2", 0.125, 0.125 * (0.125 * 0.125 - 2.0) + 2.0),
            ("  x  +  1 ", 1.0, 2.0),
            ("1.5e2 + x", 0.0, 150.0),
            ("\u{2212}x", 3.0, -3.0), // unicode minus accepted
        ];
        for &(src, x, want) in table {
            let ast = parse(src).unwrap_or_else(|e| panic!("{src:?}: {e}"));
            let got = eval(&ast, x).unwrap_or_else(|e| panic!("{src:?}: {e}"));
            assert_eq!(got, want, "{src} at x={x}");
        }
        // not exact in floats, but very close
        let ast = parse("exp(log(x))").unwrap();
        assert!((eval(&ast, 7.0).unwrap() - 7.0).abs() < 1e-14);
        let ast = parse("sin(x)^2 + cos(x)^2").unwrap();
        assert!((eval(&ast, 0.7).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parse_errors_are_positioned() {
        use ParseErrorKind::*;
        let table: &[(&str, usize)] = &[
            ("x^^2", 2),
            ("x^", 2),
            ("", 0),
            ("(x+1", 4),
            ("x y", 2),
            ("1..2", 1),
            ("@x", 0),
            ("bogus(x)", 0),
            ("x^x", 1),
            ("x+*3", 2),
        ];
        for &(src, at) in table {
            let e = parse(src).unwrap_err();
            assert_eq!(e.offset, at, "{src:?} gave {e}");
        }
        assert!(matches!(parse("x^x").unwrap_err().kind, NonConstantExponent));
        assert!(matches!(parse("sinh(x)").unwrap_err().kind, UnknownFunction(_)));
        assert!(matches!(parse("1e999999").unwrap_err().kind, MalformedNumber(_)));
        assert!(matches!(parse("(((x))").unwrap_err().kind, UnclosedParen));
    }

    #[test]
    fn deep_nesting_errors_instead_of_overflowing() {
        let mut src = String::new();
        for _ in 0..30_000 {
            src.push('(');
        }
        src.push('x');
        let e = parse(&src).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::TooDeep), "{e}");
        let minus = "-".repeat(30_000) + "x";
        assert!(matches!(parse(&minus).unwrap_err().kind, ParseErrorKind::TooDeep));
    }

    #[test]
    fn jet_frozen_examples() {
        let j = eval_jet(&parse("x^2 - 612").unwrap(), 10.0).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (-512.0, 20.0, 2.0));

        let j = eval_jet(&parse("log(x)").unwrap(), 5.0).unwrap();
        assert!((j.value - 1.6094379124341003).abs() < 1e-15);
        assert_eq!(j.d1, 0.2);
        assert!((j.d2 - -0.04).abs() < 1e-17);

        let j = eval_jet(&parse("x").unwrap(), -7.25).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (-7.25, 1.0, 0.0));

        // tanh at large argument must not overflow through cosh
        let j = eval_jet(&parse("tanh(x)").unwrap(), 300.0).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (1.0, 0.0, -0.0));
    }

    #[test]
    fn jet_chain_and_product_rules() {
        // d/dx sin(x^2) = 2x cos(x^2); second derivative = 2cos(x^2) - 4x^2 sin(x^2)
        let x = 0.83;
        let j = eval_jet(&parse("sin(x^2)").unwrap(), x).unwrap();
        let (s, c) = (x * x).sin_cos();
        assert!((j.value - s).abs() < 1e-15);
        assert!((j.d1 - 2.0 * x * c).abs() < 1e-15);
        assert!((j.d2 - (2.0 * c - 4.0 * x * x * s)).abs() < 1e-14);

        // product rule with a quotient: f = x * exp(x) / (1 + x)
        let j = eval_jet(&parse("x*exp(x)/(1+x)").unwrap(), 0.5).unwrap();
        let e = 0.5f64.exp();
        let f = 0.5 * e / 1.5;
        let d1 = e * (0.25 + 1.0 + 0.5) / (1.5 * 1.5); // ((x^2+x+1)/(1+x)^2) e^x
        assert!((j.value - f).abs() < 1e-15);
        assert!((j.d1 - d1).abs() < 1e-14);
    }

    #[test]
    fn eval_domain_errors_name_the_subexpression() {
        let table: &[(&str, f64, EvalErrorKind)] = &[
            ("log(x)", -1.0, EvalErrorKind::LogDomain),
            ("log(x)", 0.0, EvalErrorKind::LogDomain),
            ("sqrt(x-4)", 1.0, EvalErrorKind::SqrtDomain),
            ("1/(x-2)", 2.0, EvalErrorKind::DivByZero),
            ("x^0.5", -3.0, EvalErrorKind::PowDomain),
            ("exp(x)", 1000.0, EvalErrorKind::NonFinite),
        ];
        for &(src, x, kind) in table {
            let ast = parse(src).unwrap();
            let e = eval_jet(&ast, x).unwrap_err();
            assert_eq!(e.kind, kind, "{src} at {x}: {e}");
            assert!(!e.subexpr.is_empty());
            let e2 = eval(&ast, x).unwrap_err();
            assert_eq!(e2.kind, kind, "plain eval disagrees for {src}");
        }
        // the error message points at the inner node, not the whole tree
        let e = eval_jet(&parse("1 + 2*log(x-5)").unwrap(), 1.0).unwrap_err();
        assert_eq!(e.subexpr, "log((x - 5))");
    }

    #[test]
    fn pow_corner_cases() {
        // x^0 is constant 1 even at x = 0
        let j = eval_jet(&parse("x^0").unwrap(), 0.0).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (1.0, 0.0, 0.0));
        // x^1 is the identity jet
        let j = eval_jet(&parse("x^1").unwrap(), 3.5).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (3.5, 1.0, 0.0));
        // x^2 at 0: value 0, d1 0, d2 2
        let j = eval_jet(&parse("x^2").unwrap(), 0.0).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (0.0, 0.0, 2.0));
        // negative base, integer exponent is fine
        let j = eval_jet(&parse("x^3").unwrap(), -2.0).unwrap();
        assert_eq!((j.value, j.d1, j.d2), (-8.0, 12.0, -12.0));
        // fractional power has a singular derivative at 0
        assert!(eval_jet(&parse("x^1.5").unwrap(), 0.0).is_err());
    }

    #[test]
    fn display_round_trips_through_parse() {
        for src in ["x^2 - 612", "tanh(x)", "x*(x*x-2)+2", "-x^2", "1/(1+x)", "sqrt(x+2)"] {
            let ast = parse(src).unwrap();
            let rendered = ast.to_string();
            let reparsed = parse(&rendered)
                .unwrap_or_else(|e| panic!("display of {src:?} gave {rendered:?}: {e}"));
            assert_eq!(reparsed, ast, "{src:?} -> {rendered:?}");
        }
    }
}
