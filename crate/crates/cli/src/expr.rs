//! Small expression grammar for scalars, twist elements and compact matrix
//! notation: integers, `pi` (the uniformizer), `t` (t-adic alias), `xi`
//! (ring generator), `+ - * / ^` and parentheses. Matrices are `I`,
//! `diag(...)` or bracketed rows.

use valrank_core::chain::{GaloisRing, GrElem};
use valrank_core::matrix::Matrix;
use valrank_core::scalar::{Backend, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(i64),
    Pi,
    T,
    Xi,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' => {
                let mut v: i64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(digit) = d.to_digit(10) {
                        v = v
                            .checked_mul(10)
                            .and_then(|x| x.checked_add(digit as i64))
                            .ok_or("integer literal overflows")?;
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Int(v));
            }
            'a'..='z' | 'A'..='Z' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(name));
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' => {
                chars.next();
                out.push(Token::Minus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '/' => {
                chars.next();
                out.push(Token::Slash);
            }
            '^' => {
                chars.next();
                out.push(Token::Caret);
            }
            '(' => {
                chars.next();
                out.push(Token::LParen);
            }
            ')' => {
                chars.next();
                out.push(Token::RParen);
            }
            other => return Err(format!("unexpected character '{other}'")),
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
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = self.term()?;
        while let Some(op) = self.peek().cloned() {
            match op {
                Token::Plus => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Token::Minus => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut lhs = self.factor()?;
        while let Some(op) = self.peek().cloned() {
            match op {
                Token::Star => {
                    self.next();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Token::Slash => {
                    self.next();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, String> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.next();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let mut base = self.atom()?;
        while matches!(self.peek(), Some(Token::Caret)) {
            self.next();
            let negative = if matches!(self.peek(), Some(Token::Minus)) {
                self.next();
                true
            } else {
                false
            };
            match self.next() {
                Some(Token::Int(e)) => {
                    base = Expr::Pow(Box::new(base), if negative { -e } else { e });
                }
                _ => return Err("exponent must be an integer".into()),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        match self.next() {
            Some(Token::Int(v)) => Ok(Expr::Int(v)),
            Some(Token::Ident(name)) => match name.as_str() {
                "pi" => Ok(Expr::Pi),
                "t" => Ok(Expr::T),
                "xi" => Ok(Expr::Xi),
                other => Err(format!("unknown symbol '{other}'")),
            },
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err("missing closing parenthesis".into()),
                }
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

pub fn parse_expr(input: &str) -> Result<Expr, String> {
    let tokens = tokenize(input)?;
    let mut parser = Parser { tokens, pos: 0 };
    let e = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(format!("trailing input in expression '{input}'"));
    }
    Ok(e)
}

/// Evaluates an expression to an exact scalar of the chosen backend.
pub fn eval_scalar(expr: &Expr, backend: Backend) -> Result<Scalar, String> {
    Ok(match expr {
        Expr::Int(v) => Scalar::from_int(backend, *v),
        Expr::Pi => Scalar::uniformizer_pow(backend, 1),
        Expr::T => match backend {
            Backend::Tadic => Scalar::uniformizer_pow(backend, 1),
            Backend::Padic { .. } => {
                return Err("'t' is only defined for the t-adic backend".into())
            }
        },
        Expr::Xi => return Err("'xi' is not a scalar of the valued field".into()),
        Expr::Neg(a) => eval_scalar(a, backend)?.neg(),
        Expr::Add(a, b) => eval_scalar(a, backend)?.add(&eval_scalar(b, backend)?),
        Expr::Sub(a, b) => eval_scalar(a, backend)?.sub(&eval_scalar(b, backend)?),
        Expr::Mul(a, b) => eval_scalar(a, backend)?.mul(&eval_scalar(b, backend)?),
        Expr::Div(a, b) => eval_scalar(a, backend)?
            .div(&eval_scalar(b, backend)?)
            .map_err(|e| e.to_string())?,
        Expr::Pow(a, e) => {
            let base = eval_scalar(a, backend)?;
            if *e < 0 {
                let mut acc = Scalar::one(backend);
                for _ in 0..e.unsigned_abs() {
                    acc = acc.div(&base).map_err(|x| x.to_string())?;
                }
                acc
            } else {
                let mut acc = Scalar::one(backend);
                for _ in 0..*e {
                    acc = acc.mul(&base);
                }
                acc
            }
        }
    })
}

/// Evaluates an expression inside a Galois ring; `pi` is p, `xi` the
/// distinguished generator. Division is not defined in the ring grammar.
pub fn eval_ring(expr: &Expr, ring: &GaloisRing) -> Result<GrElem, String> {
    Ok(match expr {
        Expr::Int(v) => ring.from_i64(*v),
        Expr::Pi => ring.from_u64(ring.p()),
        Expr::T => return Err("'t' is not an element of a chain ring".into()),
        Expr::Xi => ring.xi(),
        Expr::Neg(a) => ring.neg(&eval_ring(a, ring)?),
        Expr::Add(a, b) => ring.add(&eval_ring(a, ring)?, &eval_ring(b, ring)?),
        Expr::Sub(a, b) => ring.sub(&eval_ring(a, ring)?, &eval_ring(b, ring)?),
        Expr::Mul(a, b) => ring.mul(&eval_ring(a, ring)?, &eval_ring(b, ring)?),
        Expr::Div(_, _) => return Err("division is not part of the ring grammar".into()),
        Expr::Pow(a, e) => {
            if *e < 0 {
                return Err("negative powers are not part of the ring grammar".into());
            }
            ring.pow(&eval_ring(a, ring)?, *e as u64)
        }
    })
}

pub fn parse_scalar(input: &str, backend: Backend) -> Result<Scalar, String> {
    eval_scalar(&parse_expr(input)?, backend)
}

pub fn parse_ring_elem(input: &str, ring: &GaloisRing) -> Result<GrElem, String> {
    eval_ring(&parse_expr(input)?, ring)
}

/// Splits on a separator at bracket depth zero.
pub fn split_top_level(input: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in input.chars() {
        match c {
            '(' | '[' => {
                depth += 1;
                current.push(c);
            }
            ')' | ']' => {
                depth -= 1;
                current.push(c);
            }
            c if c == sep && depth == 0 => {
                out.push(current.trim().to_string());
                current = String::new();
            }
            _ => current.push(c),
        }
    }
    if !current.trim().is_empty() {
        out.push(current.trim().to_string());
    }
    out
}

/// Parses `I`, `diag(e1,...,ed)` or `[[e,...],[...]]` into a matrix.
pub fn parse_matrix(input: &str, backend: Backend, d: Option<usize>) -> Result<Matrix, String> {
    let input = input.trim();
    if input == "I" {
        let d = d.ok_or("the identity shorthand 'I' needs --d")?;
        return Ok(Matrix::identity(backend, d));
    }
    if let Some(rest) = input
        .strip_prefix("diag(")
        .and_then(|s| s.strip_suffix(')'))
    {
        let entries = split_top_level(rest, ',');
        if entries.is_empty() {
            return Err("empty diagonal".into());
        }
        let diag: Vec<Scalar> = entries
            .iter()
            .map(|e| parse_scalar(e, backend))
            .collect::<Result<_, _>>()?;
        return Matrix::diagonal(backend, &diag).map_err(|e| e.to_string());
    }
    if let Some(rest) = input.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        let rows = split_top_level(rest, ',');
        let mut parsed_rows: Vec<Vec<Scalar>> = Vec::new();
        for row in rows {
            let row = row.trim();
            let inner = row
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| format!("matrix row '{row}' must be bracketed"))?;
            parsed_rows.push(
                split_top_level(inner, ',')
                    .iter()
                    .map(|e| parse_scalar(e, backend))
                    .collect::<Result<_, _>>()?,
            );
        }
        let rows_n = parsed_rows.len();
        let cols_n = parsed_rows.first().map(|r| r.len()).unwrap_or(0);
        if rows_n == 0 || cols_n == 0 || parsed_rows.iter().any(|r| r.len() != cols_n) {
            return Err("matrix rows must be nonempty and of equal length".into());
        }
        let entries: Vec<Scalar> = parsed_rows.into_iter().flatten().collect();
        return Matrix::new(backend, rows_n, cols_n, entries).map_err(|e| e.to_string());
    }
    Err(format!("cannot parse matrix '{input}'"))
}
