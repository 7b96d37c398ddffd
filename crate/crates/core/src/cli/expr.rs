//! Recursive-descent parser for rational-function expressions.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("+" | "-") unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | name | "(" expr ")"
//! ```
//!
//! `p/q` literals are ordinary division. Unary minus binds looser than `^`,
//! so `-x^2` is `-(x^2)`. There is no implicit multiplication.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::scalar::Scalar;

/// Exponents above this are rejected rather than expanded.
pub const MAX_EXPONENT: u32 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    Expected { wanted: &'static str, found: String },
    UnknownVariable(String),
    ZeroDenominator,
    BadExponent(String),
}

/// A parse failure at a 0-based character offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: ", self.pos + 1)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character '{c}'"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of expression"),
            ParseErrorKind::Expected { wanted, found } => write!(f, "expected {wanted}, found {found}"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable '{v}'"),
            ParseErrorKind::ZeroDenominator => write!(f, "zero denominator"),
            ParseErrorKind::BadExponent(e) => write!(
                f,
                "exponent must be an integer in 0..={MAX_EXPONENT}, found {e}"
            ),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Op(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(k) => format!("'{k}'"),
            Tok::Name(s) => format!("'{s}'"),
            Tok::Op(c) => format!("'{c}'"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Name(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError {
                pos: i,
                kind: ParseErrorKind::UnexpectedChar(c),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn n(&self) -> usize {
        self.names.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, wanted: &'static str) -> Result<T, ParseError> {
        let kind = match self.peek() {
            None => ParseErrorKind::UnexpectedEnd,
            Some(t) => ParseErrorKind::Expected {
                wanted,
                found: t.describe(),
            },
        };
        Err(ParseError {
            pos: self.pos(),
            kind,
        })
    }

    fn expr(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.at += 1;
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(ParseError {
                        pos,
                        kind: ParseErrorKind::ZeroDenominator,
                    });
                }
                acc = &acc / &d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ParseError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.at += 1;
                let e = u32::try_from(&k)
                    .ok()
                    .filter(|&e| e <= MAX_EXPONENT)
                    .ok_or(ParseError {
                        pos,
                        kind: ParseErrorKind::BadExponent(k.to_string()),
                    })?;
                Ok(base.pow(e))
            }
            Some(t) => Err(ParseError {
                pos,
                kind: ParseErrorKind::BadExponent(t.describe()),
            }),
            None => self.fail("an exponent"),
        }
    }

    fn atom(&mut self) -> Result<Scalar, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.at += 1;
                Ok(Scalar::from_rational(BigRational::from_integer(k), self.n()))
            }
            Some(Tok::Name(v)) => {
                self.at += 1;
                match self.names.iter().position(|s| *s == v) {
                    Some(i) => Ok(Scalar::coordinate(i, self.n())),
                    None => Err(ParseError {
                        pos,
                        kind: ParseErrorKind::UnknownVariable(v),
                    }),
                }
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.fail("')'");
                }
                Ok(inner)
            }
            _ => self.fail("a number, a variable or '('"),
        }
    }
}

/// Parses `text` as an element of `ℚ(names)`.
pub fn parse_expression(text: &str, names: &[String]) -> Result<Scalar, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.chars().count(),
        names,
    };
    let s = p.expr()?;
    if p.peek().is_some() {
        return p.fail("an operator or end of expression");
    }
    Ok(s)
}
