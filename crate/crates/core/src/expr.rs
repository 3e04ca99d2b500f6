//! Closed-form utility expressions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' number)?
//! atom   := number | identifier | '(' expr ')' | '-' atom
//! ```
//!
//! `^` binds tighter than `*`, which binds tighter than `+`/`-`. A leading
//! minus belongs to its atom, so `-x^2` is `(-x)^2`. There is no division;
//! write reciprocals as decimal literals (`0.125*y^4`).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum UtilityExpr {
    Const(f64),
    Var(String),
    Add(Box<UtilityExpr>, Box<UtilityExpr>),
    Sub(Box<UtilityExpr>, Box<UtilityExpr>),
    /// Product of two or more factors.
    Mul(Vec<UtilityExpr>),
    Neg(Box<UtilityExpr>),
    /// Base raised to a literal exponent.
    Pow(Box<UtilityExpr>, f64),
}

impl UtilityExpr {
    /// Names of all variables referenced by the expression.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Self::Const(_) => {}
            Self::Var(v) => {
                out.insert(v.clone());
            }
            Self::Add(a, b) | Self::Sub(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Self::Mul(fs) => fs.iter().for_each(|f| f.collect_vars(out)),
            Self::Neg(a) | Self::Pow(a, _) => a.collect_vars(out),
        }
    }

    /// Resolves variable names to positions in `names`.
    pub fn compile(&self, names: &[impl AsRef<str>]) -> Result<CompiledExpr> {
        let lookup = |v: &str| {
            names
                .iter()
                .position(|n| n.as_ref() == v)
                .ok_or_else(|| Error::UndeclaredVariable { name: v.to_string() })
        };
        Ok(CompiledExpr(self.lower(&lookup)?))
    }

    fn lower(&self, lookup: &impl Fn(&str) -> Result<usize>) -> Result<Node> {
        Ok(match self {
            Self::Const(c) => Node::Const(*c),
            Self::Var(v) => Node::Var(lookup(v)?),
            Self::Add(a, b) => Node::Add(Box::new(a.lower(lookup)?), Box::new(b.lower(lookup)?)),
            Self::Sub(a, b) => Node::Sub(Box::new(a.lower(lookup)?), Box::new(b.lower(lookup)?)),
            Self::Mul(fs) => Node::Mul(fs.iter().map(|f| f.lower(lookup)).collect::<Result<_>>()?),
            Self::Neg(a) => Node::Neg(Box::new(a.lower(lookup)?)),
            Self::Pow(a, e) => Node::Pow(Box::new(a.lower(lookup)?), *e),
        })
    }

    fn eval_with(&self, get: &impl Fn(&str) -> Result<f64>) -> Result<f64> {
        Ok(match self {
            Self::Const(c) => *c,
            Self::Var(v) => get(v)?,
            Self::Add(a, b) => a.eval_with(get)? + b.eval_with(get)?,
            Self::Sub(a, b) => a.eval_with(get)? - b.eval_with(get)?,
            Self::Mul(fs) => {
                let mut acc = 1.0;
                for f in fs {
                    acc *= f.eval_with(get)?;
                }
                acc
            }
            Self::Neg(a) => -a.eval_with(get)?,
            Self::Pow(a, e) => power(a.eval_with(get)?, *e)?,
        })
    }

    fn fmt_expr(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Add(a, b) => {
                a.fmt_expr(f)?;
                f.write_str(" + ")?;
                b.fmt_term(f)
            }
            Self::Sub(a, b) => {
                a.fmt_expr(f)?;
                f.write_str(" - ")?;
                b.fmt_term(f)
            }
            _ => self.fmt_term(f),
        }
    }

    fn fmt_term(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mul(fs) => {
                for (k, x) in fs.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    x.fmt_factor(f)?;
                }
                Ok(())
            }
            Self::Add(..) | Self::Sub(..) => self.fmt_parens(f),
            _ => self.fmt_factor(f),
        }
    }

    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Pow(base, e) => {
                base.fmt_atom(f)?;
                write!(f, "^{e}")
            }
            _ => self.fmt_atom(f),
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Const(c) if *c >= 0.0 => write!(f, "{c}"),
            Self::Var(v) => f.write_str(v),
            Self::Neg(a) => {
                f.write_str("-")?;
                a.fmt_atom(f)
            }
            _ => self.fmt_parens(f),
        }
    }

    fn fmt_parens(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        match self {
            Self::Const(c) => write!(f, "{c}")?,
            _ => self.fmt_expr(f)?,
        }
        f.write_str(")")
    }
}

impl fmt::Display for UtilityExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_expr(f)
    }
}

fn power(base: f64, exponent: f64) -> Result<f64> {
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        Ok(base.powi(exponent as i32))
    } else if base < 0.0 {
        Err(Error::NegativeBase { base, exponent })
    } else {
        Ok(base.powf(exponent))
    }
}

/// Expression with variables resolved to profile positions.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledExpr(Node);

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Const(f64),
    Var(usize),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Vec<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, f64),
}

impl Node {
    fn eval(&self, values: &[f64]) -> Result<f64> {
        Ok(match self {
            Node::Const(c) => *c,
            Node::Var(i) => values[*i],
            Node::Add(a, b) => a.eval(values)? + b.eval(values)?,
            Node::Sub(a, b) => a.eval(values)? - b.eval(values)?,
            Node::Mul(fs) => {
                let mut acc = 1.0;
                for f in fs {
                    acc *= f.eval(values)?;
                }
                acc
            }
            Node::Neg(a) => -a.eval(values)?,
            Node::Pow(a, e) => power(a.eval(values)?, *e)?,
        })
    }
}

impl CompiledExpr {
    /// Evaluates with `values[k]` bound to the k-th declared name.
    pub fn eval(&self, values: &[f64]) -> Result<f64> {
        let v = self.0.eval(values)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteResult)
        }
    }
}

/// Evaluates an expression under named bindings.
pub fn eval_utility(expr: &UtilityExpr, bindings: &HashMap<String, f64>) -> Result<f64> {
    let v = expr.eval_with(&|name: &str| {
        bindings
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnboundVariable(name.to_string()))
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteResult)
    }
}

pub fn parse_utility(source: &str) -> Result<UtilityExpr> {
    let mut p = Parser { src: source.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { offset: self.pos, message: message.into() }
    }

    fn expr(&mut self) -> Result<UtilityExpr> {
        let mut lhs = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = Box::new(self.term()?);
            lhs = if op == b'+' {
                UtilityExpr::Add(Box::new(lhs), rhs)
            } else {
                UtilityExpr::Sub(Box::new(lhs), rhs)
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<UtilityExpr> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            UtilityExpr::Mul(factors)
        })
    }

    fn factor(&mut self) -> Result<UtilityExpr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(c) if c.is_ascii_digit() || c == b'.' => {
                    let e = self.number()?;
                    return Ok(UtilityExpr::Pow(Box::new(base), e));
                }
                _ => return Err(self.error("exponent must be a numeric literal")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<UtilityExpr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(UtilityExpr::Neg(Box::new(self.atom()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(UtilityExpr::Const(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(UtilityExpr::Var(name.to_string()))
            }
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.src.get(p.pos).is_some_and(u8::is_ascii_digit) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // Not an exponent; leave `e` for the caller to reject.
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>().map_err(|_| Error::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })
    }
}
