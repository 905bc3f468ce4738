//! The operator expression language.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' nat)? | '-' factor
//! atom     := rational | 'u' ('_' nat)? | 'd' | '(' expr ')'
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! `u_j` is the j-th x-derivative of `u` and `d` is `∂_x`. Products are
//! operator compositions, so `d*u` denotes `u ∂ + u_1`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::Algebra;
use crate::diffpoly::DiffPoly;
use crate::error::ParseError;
use crate::psdo::PsdoSymbol;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorExpr {
    Num(Rational),
    /// `u_j`
    Jet(usize),
    /// `d`
    D,
    Add(Box<OperatorExpr>, Box<OperatorExpr>),
    Sub(Box<OperatorExpr>, Box<OperatorExpr>),
    Mul(Box<OperatorExpr>, Box<OperatorExpr>),
    Neg(Box<OperatorExpr>),
    Pow(Box<OperatorExpr>, u32),
}

impl OperatorExpr {
    /// The denoted differential operator.
    pub fn to_symbol(&self) -> PsdoSymbol {
        use OperatorExpr::*;
        match self {
            Num(r) => PsdoSymbol::multiplication(DiffPoly::constant(r.clone())),
            Jet(j) => PsdoSymbol::multiplication(DiffPoly::jet(*j)),
            D => PsdoSymbol::xi(1),
            Add(a, b) => a.to_symbol().add(&b.to_symbol()),
            Sub(a, b) => a.to_symbol().sub(&b.to_symbol()),
            Mul(a, b) => a.to_symbol().mul(&b.to_symbol()),
            Neg(a) => a.to_symbol().neg(),
            Pow(a, k) => crate::algebra::power(&a.to_symbol(), *k as usize),
        }
    }

    /// The denoted polynomial; fails if `d` occurs.
    pub fn to_diffpoly(&self) -> Result<DiffPoly, ParseError> {
        use OperatorExpr::*;
        Ok(match self {
            Num(r) => DiffPoly::constant(r.clone()),
            Jet(j) => DiffPoly::jet(*j),
            D => return Err(ParseError::OperatorInPolynomial),
            Add(a, b) => a.to_diffpoly()?.add(&b.to_diffpoly()?),
            Sub(a, b) => a.to_diffpoly()?.sub(&b.to_diffpoly()?),
            Mul(a, b) => a.to_diffpoly()?.mul(&b.to_diffpoly()?),
            Neg(a) => a.to_diffpoly()?.neg(),
            Pow(a, k) => crate::algebra::power(&a.to_diffpoly()?, *k as usize),
        })
    }
}

/// Parses and elaborates in one step.
pub fn parse_operator(text: &str) -> Result<PsdoSymbol, ParseError> {
    Ok(parse_expr(text)?.to_symbol())
}

pub fn parse_expr(text: &str) -> Result<OperatorExpr, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(e),
        _ => Err(p.error("unexpected input after expression")),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => {
                    return Err(ParseError::Syntax {
                        line: l0,
                        column: c0,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        col += i - start;
        out.push(Token {
            tok,
            line: l0,
            column: c0,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: &str) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError::Syntax {
            line: t.line,
            column: t.column,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    lhs = OperatorExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = OperatorExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.next();
            lhs = OperatorExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<OperatorExpr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(OperatorExpr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.next();
            let k = self.nat("exponent")?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            return Ok(OperatorExpr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn nat(&mut self, what: &str) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            _ => Err(self.error(&format!("expected a natural number {what}"))),
        }
    }

    fn atom(&mut self) -> Result<OperatorExpr, ParseError> {
        let t = self.tokens[self.pos].clone();
        match t.tok {
            Tok::Int(n) => {
                self.next();
                if *self.peek() == Tok::Slash {
                    self.next();
                    let d = self.nat("denominator")?;
                    if d.is_zero() {
                        return Err(ParseError::Syntax {
                            line: t.line,
                            column: t.column,
                            message: "zero denominator".into(),
                        });
                    }
                    return Ok(OperatorExpr::Num(Rational::new(n, d)));
                }
                Ok(OperatorExpr::Num(Rational::from_integer(n)))
            }
            Tok::Ident(name) => {
                self.next();
                resolve(&name).ok_or(ParseError::UnboundIdentifier {
                    name,
                    line: t.line,
                    column: t.column,
                })
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("expected `)`"));
                }
                self.next();
                Ok(e)
            }
            Tok::Eof => Err(self.error("unexpected end of input")),
            _ => Err(self.error("expected a number, `u`, `u_k`, `d` or `(`")),
        }
    }
}

fn resolve(name: &str) -> Option<OperatorExpr> {
    match name {
        "d" => Some(OperatorExpr::D),
        "u" => Some(OperatorExpr::Jet(0)),
        _ => {
            let digits = name.strip_prefix("u_")?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            digits.parse().ok().map(OperatorExpr::Jet)
        }
    }
}
