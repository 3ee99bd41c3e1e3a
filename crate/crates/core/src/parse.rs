//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*      '/' takes an integer literal
//! unary   := '-' unary | power
//! power   := primary (('^' | '**') INT)?
//! primary := INT | 'x' INT | 'i' | '(' expr ')'
//! ```
//!
//! `i` is only legal over ℤ[i] and `/` only over ℚ. Implicit multiplication
//! is rejected.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::SparsePoly;
use crate::ring::{RingId, Scalar};

pub const DEFAULT_MAX_EXPONENT: u32 = 64;

const MAX_NESTING: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Int(BigInt),
    Var(usize),
    Imaginary,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Int(v) => format!("integer `{v}`"),
            TokenKind::Var(k) => format!("variable `x{k}`"),
            TokenKind::Imaginary => "`i`".to_string(),
            TokenKind::Plus => "`+`".to_string(),
            TokenKind::Minus => "`-`".to_string(),
            TokenKind::Star => "`*`".to_string(),
            TokenKind::Slash => "`/`".to_string(),
            TokenKind::Caret => "`^`".to_string(),
            TokenKind::LParen => "`(`".to_string(),
            TokenKind::RParen => "`)`".to_string(),
            TokenKind::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Byte offset of the first character.
    pub position: usize,
}

/// Parse failure at a byte offset into the input (`input.len()` for
/// end of input).
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub message: String,
    pub position: usize,
    pub expected: Vec<&'static str>,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            message: message.into(),
            position,
            expected: Vec::new(),
        }
    }

    fn expecting(mut self, expected: &[&'static str]) -> Self {
        self.expected = expected.to_vec();
        self
    }

    /// 1-based column, as printed to users.
    pub fn column(&self) -> usize {
        self.position + 1
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "position {}: {}", self.column(), self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    pub max_exponent: u32,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            max_exponent: DEFAULT_MAX_EXPONENT,
        }
    }
}

pub fn tokenize(input: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let b = bytes[pos];
        let start = pos;
        let kind = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                pos += 1;
                continue;
            }
            b'0'..=b'9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let digits = &input[start..pos];
                TokenKind::Int(digits.parse().expect("ascii digits"))
            }
            b'x' => {
                pos += 1;
                let digits_start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if digits_start == pos {
                    return Err(
                        ParseError::new(pos, "variable `x` needs an index").expecting(&["digit"])
                    );
                }
                // Indices too large for usize are out of range anyway.
                let index = input[digits_start..pos].parse().unwrap_or(usize::MAX);
                TokenKind::Var(index)
            }
            b'i' => {
                pos += 1;
                TokenKind::Imaginary
            }
            b'+' => {
                pos += 1;
                TokenKind::Plus
            }
            b'-' => {
                pos += 1;
                TokenKind::Minus
            }
            b'*' => {
                if bytes.get(pos + 1) == Some(&b'*') {
                    pos += 2;
                    TokenKind::Caret
                } else {
                    pos += 1;
                    TokenKind::Star
                }
            }
            b'/' => {
                pos += 1;
                TokenKind::Slash
            }
            b'^' => {
                pos += 1;
                TokenKind::Caret
            }
            b'(' => {
                pos += 1;
                TokenKind::LParen
            }
            b')' => {
                pos += 1;
                TokenKind::RParen
            }
            _ => {
                let ch = input[start..].chars().next().expect("in bounds");
                return Err(ParseError::new(
                    start,
                    format!("unexpected character `{ch}`"),
                ));
            }
        };
        tokens.push(Token {
            kind,
            position: start,
        });
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        position: input.len(),
    });
    Ok(tokens)
}

pub fn parse_poly<R: Scalar>(input: &str, nvars: usize) -> Result<SparsePoly<R>, ParseError> {
    parse_poly_with(input, nvars, ParseOptions::default())
}

pub fn parse_poly_with<R: Scalar>(
    input: &str,
    nvars: usize,
    options: ParseOptions,
) -> Result<SparsePoly<R>, ParseError> {
    let tokens = tokenize(input)?;
    let mut parser = Parser {
        tokens,
        cursor: 0,
        depth: 0,
        nvars,
        options,
        _ring: std::marker::PhantomData::<R>,
    };
    let p = parser.expr()?;
    let tok = parser.peek();
    if tok.kind != TokenKind::Eof {
        let msg = match tok.kind {
            TokenKind::RParen => "unmatched `)`".to_string(),
            _ => format!(
                "unexpected {} (implicit multiplication is not allowed)",
                tok.kind.describe()
            ),
        };
        return Err(ParseError::new(tok.position, msg).expecting(&[
            "`+`",
            "`-`",
            "`*`",
            "end of input",
        ]));
    }
    Ok(p)
}

struct Parser<R> {
    tokens: Vec<Token>,
    cursor: usize,
    depth: usize,
    nvars: usize,
    options: ParseOptions,
    _ring: std::marker::PhantomData<R>,
}

impl<R: Scalar> Parser<R> {
    fn peek(&self) -> &Token {
        &self.tokens[self.cursor]
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.cursor].clone();
        if tok.kind != TokenKind::Eof {
            self.cursor += 1;
        }
        tok
    }

    fn expr(&mut self) -> Result<SparsePoly<R>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                TokenKind::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SparsePoly<R>, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().kind {
                TokenKind::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                TokenKind::Slash => {
                    let slash = self.bump();
                    if R::RING != RingId::Rationals {
                        return Err(ParseError::new(
                            slash.position,
                            format!("`/` is only allowed over Q, not {}", R::RING),
                        ));
                    }
                    let den = self.bump();
                    let TokenKind::Int(d) = den.kind else {
                        return Err(ParseError::new(
                            den.position,
                            "denominator must be an integer literal",
                        )
                        .expecting(&["integer"]));
                    };
                    if d.is_zero() {
                        return Err(ParseError::new(den.position, "division by zero"));
                    }
                    let inv = R::one()
                        .exact_div(&R::from_bigint(d))
                        .expect("nonzero divisor")
                        .expect("field division");
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<SparsePoly<R>, ParseError> {
        if self.peek().kind == TokenKind::Minus {
            let minus = self.bump();
            self.enter(minus.position)?;
            let inner = self.unary();
            self.depth -= 1;
            return Ok(-&inner?);
        }
        self.power()
    }

    fn enter(&mut self, position: usize) -> Result<(), ParseError> {
        if self.depth >= MAX_NESTING {
            return Err(ParseError::new(position, "expression nested too deeply"));
        }
        self.depth += 1;
        Ok(())
    }

    fn power(&mut self) -> Result<SparsePoly<R>, ParseError> {
        let base = self.primary()?;
        if self.peek().kind != TokenKind::Caret {
            return Ok(base);
        }
        self.bump();
        let tok = self.bump();
        let exp = match tok.kind {
            TokenKind::Int(e) => e,
            TokenKind::Minus => {
                return Err(ParseError::new(tok.position, "negative exponent"));
            }
            _ => {
                return Err(ParseError::new(
                    tok.position,
                    "exponent must be a nonnegative integer literal",
                )
                .expecting(&["integer"]));
            }
        };
        if self.peek().kind == TokenKind::Caret {
            return Err(ParseError::new(
                self.peek().position,
                "exponent must be a nonnegative integer literal",
            ));
        }
        let cap = self.options.max_exponent;
        let exp = u32::try_from(&exp)
            .ok()
            .filter(|e| *e <= cap)
            .ok_or_else(|| {
                ParseError::new(
                    tok.position,
                    format!("exponent {exp} exceeds the cap of {cap}"),
                )
            })?;
        Ok(base.pow(exp))
    }

    fn primary(&mut self) -> Result<SparsePoly<R>, ParseError> {
        let tok = self.bump();
        match tok.kind {
            TokenKind::Int(v) => Ok(SparsePoly::constant(self.nvars, R::from_bigint(v))),
            TokenKind::Var(k) => SparsePoly::var(self.nvars, k).map_err(|_| {
                let msg = if self.nvars == 0 {
                    format!("unknown variable `x{k}` (no variables declared)")
                } else {
                    format!("unknown variable `x{k}` (expected x1..x{})", self.nvars)
                };
                ParseError::new(tok.position, msg)
            }),
            TokenKind::Imaginary => match R::imaginary_unit() {
                Some(unit) => Ok(SparsePoly::constant(self.nvars, unit)),
                None => Err(ParseError::new(
                    tok.position,
                    format!("`i` is only allowed over Z[i], not {}", R::RING),
                )),
            },
            TokenKind::LParen => {
                self.enter(tok.position)?;
                let inner = self.expr();
                self.depth -= 1;
                let inner = inner?;
                let close = self.bump();
                if close.kind != TokenKind::RParen {
                    return Err(ParseError::new(
                        close.position,
                        format!("expected `)`, found {}", close.kind.describe()),
                    )
                    .expecting(&["`)`"]));
                }
                Ok(inner)
            }
            other => Err(ParseError::new(
                tok.position,
                format!("expected an operand, found {}", other.describe()),
            )
            .expecting(&["integer", "variable", "`(`", "`-`"])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::GaussianInteger;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type P = SparsePoly<BigInt>;

    fn z(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn x(n: usize, i: usize) -> P {
        P::var(n, i).unwrap()
    }

    #[test]
    fn parses_worked_example() {
        let p: P = parse_poly("9*x1*x2*x3 + 3*(x1*x2 + x2*x3 + x3*x1) + x1 + x2 + x3", 3).unwrap();
        let m = p.to_multilinear().unwrap();
        assert_eq!(m.coeff(0b111), z(9));
        assert_eq!(m.coeff(0b101), z(3));
        assert_eq!(m.coeff(0b100), z(1));
        assert_eq!(p.num_terms(), 7);
    }

    #[test]
    fn parses_alternating_sum() {
        let p: P = parse_poly("x1 - x2 + x3", 3).unwrap();
        assert_eq!(p, &(&x(3, 1) - &x(3, 2)) + &x(3, 3));
    }

    #[test]
    fn imaginary_unit_requires_gaussian_ring() {
        let err = parse_poly::<BigInt>("x1 + i*x2", 2).unwrap_err();
        assert_eq!(err.position, 5);
        assert!(err.message.contains("Z[i]"));
        let p = parse_poly::<GaussianInteger>("x1 + i*x2", 2).unwrap();
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn division_only_over_rationals() {
        let err = parse_poly::<BigInt>("x1/3", 1).unwrap_err();
        assert_eq!(err.position, 2);
        let p = parse_poly::<BigRational>("x1/3 - 1/3", 1).unwrap();
        assert_eq!(p.to_string(), "1/3*x1 - 1/3");
        let err = parse_poly::<BigRational>("x1/x1", 1).unwrap_err();
        assert_eq!(err.position, 3);
        let err = parse_poly::<BigRational>("x1/0", 1).unwrap_err();
        assert!(err.message.contains("zero"));
    }

    #[test]
    fn error_positions() {
        let err = parse_poly::<BigInt>("x1 +", 3).unwrap_err();
        assert_eq!(err.position, 4);
        assert_eq!(err.column(), 5);
        let err = parse_poly::<BigInt>("x4", 3).unwrap_err();
        assert_eq!(err.position, 0);
        assert!(err.message.contains("unknown variable"));
        let err = parse_poly::<BigInt>("2x1", 3).unwrap_err();
        assert_eq!(err.position, 1);
        assert!(err.message.contains("implicit"));
        let err = parse_poly::<BigInt>("x1^-1", 1).unwrap_err();
        assert_eq!(err.position, 3);
        assert!(err.message.contains("negative"));
        let err = parse_poly::<BigInt>("x1^x1", 1).unwrap_err();
        assert_eq!(err.position, 3);
        let err = parse_poly::<BigInt>("x1^2^3", 1).unwrap_err();
        assert_eq!(err.position, 4);
        let err = parse_poly::<BigInt>("x1^65", 1).unwrap_err();
        assert!(err.message.contains("cap"));
        let err = parse_poly::<BigInt>("x1^2147483648", 1).unwrap_err();
        assert!(err.message.contains("cap"));
        let err = parse_poly::<BigInt>("(x1 + 1", 1).unwrap_err();
        assert_eq!(err.position, 7);
        let err = parse_poly::<BigInt>("x1)", 1).unwrap_err();
        assert_eq!(err.position, 2);
        let err = parse_poly::<BigInt>("x1 # 2", 1).unwrap_err();
        assert_eq!(err.position, 3);
        let err = parse_poly::<BigInt>("x", 1).unwrap_err();
        assert_eq!(err.position, 1);
        let err = parse_poly::<BigInt>("", 1).unwrap_err();
        assert_eq!(err.position, 0);
    }

    #[test]
    fn precedence_and_synonyms() {
        // ^ binds tighter than unary minus
        let p: P = parse_poly("-x1^2", 1).unwrap();
        assert_eq!(p, -&(&x(1, 1) * &x(1, 1)));
        let q: P = parse_poly("x1**2", 1).unwrap();
        assert_eq!(q, &x(1, 1) * &x(1, 1));
        let r: P = parse_poly("2*-x1 - -3", 1).unwrap();
        assert_eq!(r.to_string(), "-2*x1 + 3");
        let s: P = parse_poly("  ( x1+1 )^2 ", 1).unwrap();
        assert_eq!(s.to_string(), "x1^2 + 2*x1 + 1");
        let opts = ParseOptions { max_exponent: 200 };
        assert!(parse_poly_with::<BigInt>("x1^100", 1, opts).is_ok());
    }

    #[test]
    fn deep_nesting_is_an_error() {
        let input = format!("{}x1{}", "(".repeat(10_000), ")".repeat(10_000));
        let err = parse_poly::<BigInt>(&input, 1).unwrap_err();
        assert!(err.message.contains("nested"));
        assert!(parse_poly::<BigInt>(&"-".repeat(10_000), 1).is_err());
        let ok = format!("{}x1{}", "(".repeat(50), ")".repeat(50));
        assert!(parse_poly::<BigInt>(&ok, 1).is_ok());
    }

    #[test]
    fn tokens_have_increasing_positions() {
        let toks = tokenize("x1**2 + (3*i) / 4").unwrap();
        assert!(toks.windows(2).all(|w| w[0].position < w[1].position));
        assert_eq!(toks[1].kind, TokenKind::Caret);
    }

    fn sparse(nvars: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64, i64)>> {
        proptest::collection::vec(
            (
                proptest::collection::vec(0u32..3, nvars),
                -20i64..20,
                -5i64..5,
            ),
            0..6,
        )
    }

    proptest! {
        #[test]
        fn render_round_trips_integers(terms in sparse(3)) {
            let p = P::from_terms(3, terms.into_iter().map(|(e, c, _)| (e, z(c)))).unwrap();
            prop_assert_eq!(parse_poly::<BigInt>(&p.to_string(), 3).unwrap(), p);
        }

        #[test]
        fn render_round_trips_rationals(terms in sparse(2), den in 1i64..7) {
            let p = SparsePoly::<BigRational>::from_terms(
                2,
                terms.into_iter().map(|(e, c, _)| (e, BigRational::new(z(c), z(den)))),
            ).unwrap();
            prop_assert_eq!(parse_poly::<BigRational>(&p.to_string(), 2).unwrap(), p);
        }

        #[test]
        fn render_round_trips_gaussian(terms in sparse(3)) {
            let p = SparsePoly::<GaussianInteger>::from_terms(
                3,
                terms.into_iter().map(|(e, a, b)| (e, GaussianInteger::new(a, b))),
            ).unwrap();
            prop_assert_eq!(parse_poly::<GaussianInteger>(&p.to_string(), 3).unwrap(), p);
        }

        #[test]
        fn parser_is_total(input in "[x0-9i+\\-*/^() #]{0,24}") {
            let len = input.len();
            match parse_poly::<BigRational>(&input, 3) {
                Ok(_) => {}
                Err(e) => prop_assert!(e.position <= len),
            }
            let _ = parse_poly::<GaussianInteger>(&input, 2);
            let _ = parse_poly::<BigInt>(&input, 0);
        }
    }
}
