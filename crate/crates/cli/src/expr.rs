//! Vector expressions in scenario files.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := factor ('/' rational)*
//! factor  := rational '*' factor | '-' factor | primary
//! primary := name | name '(' expr (',' expr)* ')' | '[' coords ']' | '(' expr ')'
//! ```
//!
//! Functions: `R(n, x)` reflection, `phi(A, B, x)` Bertini involution,
//! `proj(h, x)` projection onto `h`'s orthogonal complement, `canon(x)`
//! primitive integral multiple, `dual(v, b1, ..., bk)` the vector of the
//! span of the `b`s pairing to 1 with `v` (one of the `b`s) and to 0 with
//! the others.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use packlab::{ExactScalar, LatticeVector, LorentzSpace, Matrix};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Name(String),
    Literal(LatticeVector),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Scale(BigRational, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(BigInt),
    Literal(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Number(s.parse().map_err(|_| format!("bad number {s}"))?));
        } else if c == '[' {
            let start = i;
            while i < chars.len() && chars[i] != ']' {
                i += 1;
            }
            if i == chars.len() {
                return Err("unclosed `[`".into());
            }
            i += 1;
            out.push(Token::Literal(chars[start..i].iter().collect()));
        } else if "+-*/(),".contains(c) {
            out.push(Token::Sym(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn rational(&mut self) -> Result<BigRational, String> {
        let Some(Token::Number(n)) = self.next() else {
            return Err("expected a number".into());
        };
        if self.peek() == Some(&Token::Sym('/')) {
            if let Some(Token::Number(d)) = self.tokens.get(self.pos + 1).cloned() {
                if d == BigInt::from(0) {
                    return Err("division by zero".into());
                }
                self.pos += 2;
                return Ok(BigRational::new(n, d));
            }
        }
        Ok(BigRational::from_integer(n))
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut e = self.factor()?;
        while self.eat('/') {
            let r = self.rational()?;
            if r == BigRational::from_integer(0.into()) {
                return Err("division by zero".into());
            }
            e = Expr::Scale(r.recip(), Box::new(e));
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr, String> {
        match self.peek() {
            Some(Token::Number(_)) => {
                let r = self.rational()?;
                self.expect('*')?;
                Ok(Expr::Scale(r, Box::new(self.factor()?)))
            }
            Some(Token::Sym('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Expr, String> {
        match self.next() {
            Some(Token::Ident(name)) => {
                if !self.eat('(') {
                    return Ok(Expr::Name(name));
                }
                let mut args = vec![self.expr()?];
                while self.eat(',') {
                    args.push(self.expr()?);
                }
                self.expect(')')?;
                Ok(Expr::Call(name, args))
            }
            Some(Token::Literal(text)) => LatticeVector::parse(&text)
                .map(Expr::Literal)
                .map_err(|e| e.to_string()),
            Some(Token::Sym('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(t) => Err(format!("unexpected {t:?}")),
            None => Err("unexpected end".into()),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, CliError> {
    let err = |msg: String| CliError::Expr {
        text: text.to_string(),
        msg,
    };
    let tokens = tokenize(text).map_err(err)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr().map_err(err)?;
    if p.pos != p.tokens.len() {
        return Err(err("trailing input".into()));
    }
    Ok(e)
}

/// Splits at `sep` outside brackets and parentheses.
pub fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts
}

/// Named vectors of a Lorentz space.
pub struct Env<'a> {
    pub space: &'a LorentzSpace,
    pub names: &'a BTreeMap<String, LatticeVector>,
}

impl Env<'_> {
    pub fn eval_str(&self, text: &str) -> Result<LatticeVector, CliError> {
        self.eval(&parse(text)?).map_err(|e| match e {
            CliError::Expr { msg, .. } => CliError::Expr {
                text: text.to_string(),
                msg,
            },
            other => other,
        })
    }

    pub fn eval(&self, e: &Expr) -> Result<LatticeVector, CliError> {
        let v = match e {
            Expr::Name(n) => self
                .names
                .get(n)
                .cloned()
                .ok_or_else(|| CliError::UnknownName(n.clone()))?,
            Expr::Literal(v) => v.clone(),
            Expr::Add(a, b) => self.same_dim(&self.eval(a)?, &self.eval(b)?, |x, y| x + y)?,
            Expr::Sub(a, b) => self.same_dim(&self.eval(a)?, &self.eval(b)?, |x, y| x - y)?,
            Expr::Neg(a) => -&self.eval(a)?,
            Expr::Scale(r, a) => self.eval(a)?.scale_rational(r),
            Expr::Call(f, args) => self.call(f, args)?,
        };
        self.space.check_dim(&v)?;
        Ok(v)
    }

    fn same_dim(
        &self,
        a: &LatticeVector,
        b: &LatticeVector,
        f: impl Fn(&LatticeVector, &LatticeVector) -> LatticeVector,
    ) -> Result<LatticeVector, CliError> {
        self.space.check_dim(a)?;
        self.space.check_dim(b)?;
        Ok(f(a, b))
    }

    fn call(&self, f: &str, args: &[Expr]) -> Result<LatticeVector, CliError> {
        let v: Vec<LatticeVector> = args.iter().map(|a| self.eval(a)).collect::<Result<_, _>>()?;
        let arity = |n: usize| {
            if v.len() == n {
                Ok(())
            } else {
                Err(CliError::Expr {
                    text: f.to_string(),
                    msg: format!("expects {n} arguments"),
                })
            }
        };
        let sp = self.space;
        match f {
            "R" => {
                arity(2)?;
                Ok(sp.reflect(&v[0], &v[1])?)
            }
            "phi" => {
                arity(3)?;
                Ok(sp.bertini(&v[0], &v[1], &v[2])?)
            }
            "proj" => {
                arity(2)?;
                let hh = sp.norm(&v[0]);
                if hh.is_zero() {
                    return Err(CliError::Expr {
                        text: f.to_string(),
                        msg: "null direction".into(),
                    });
                }
                let c = -sp.product(&v[1], &v[0]).checked_div(&hh)?;
                Ok(v[1].add_scaled(&c, &v[0]))
            }
            "canon" => {
                arity(1)?;
                Ok(v[0].canonicalize()?)
            }
            "dual" => {
                if v.len() < 2 {
                    return Err(CliError::Expr {
                        text: f.to_string(),
                        msg: "expects a vector and a basis".into(),
                    });
                }
                dual(sp, &v[0], &v[1..])
            }
            _ => Err(CliError::Expr {
                text: f.to_string(),
                msg: "unknown function".into(),
            }),
        }
    }
}

/// The vector of `span(basis)` with product 1 against `target` and 0
/// against the other basis vectors.
pub fn dual(space: &LorentzSpace, target: &LatticeVector, basis: &[LatticeVector]) -> Result<LatticeVector, CliError> {
    let k = basis.iter().position(|b| b == target).ok_or_else(|| CliError::Expr {
        text: "dual".into(),
        msg: "first argument must be one of the basis vectors".into(),
    })?;
    let g = space.gram_of(basis)?;
    let rhs: Vec<ExactScalar> = (0..basis.len())
        .map(|i| {
            if i == k {
                ExactScalar::one()
            } else {
                ExactScalar::zero()
            }
        })
        .collect();
    let c = g.solve(&rhs)?;
    Ok(packlab::lorentz::combine(basis, &c))
}

/// Integrality of a linear map restricted to the lattice spanned by
/// `basis`: every image must have integral coordinates in `basis`.
pub fn preserves_lattice(
    space: &LorentzSpace,
    basis: &[LatticeVector],
    f: impl Fn(&LatticeVector) -> Result<LatticeVector, packlab::LorentzError>,
) -> Result<Matrix, CliError> {
    let cols = basis
        .iter()
        .map(|b| Ok(space.coordinates_in(basis, &f(b)?)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let rows = (0..basis.len())
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    Ok(Matrix::from_rows(rows)?)
}
