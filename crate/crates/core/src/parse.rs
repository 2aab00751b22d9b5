//! Text syntax for rings, elements, and maps.
//!
//! Ring specs: `Q`, `Z/7`, and polynomial suffixes `Q[t01,t10,t11]` or
//! `Z/5[a][b]`, nested as needed. Elements use integer literals, variables,
//! `+ - * / ^`, parentheses, `[a, b]` coordinate vectors for algebra
//! elements, and an optional `mod n` suffix for residues. Maps are
//! comma-separated component lists in the variables `x0, x1, ...`.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::polymap::{Poly, PolyError, PolyMap};
use crate::rings::{Ring, RingElement, RingError, RingSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected token {0} at byte {1}")]
    UnexpectedToken(String, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown name {0}")]
    UnknownName(String),
    #[error("division by a non-invertible element: {0}")]
    DivisionByNonUnit(String),
    #[error("exponent must be a non-negative integer")]
    BadExponent,
    #[error("modulus suffix {0} does not match the ring")]
    WrongModulus(String),
    #[error("vector syntax needs a structure-constant algebra")]
    VectorOutsideAlgebra,
    #[error("map variables must look like x0, x1, ...; found {0}")]
    BadMapVariable(String),
    #[error("empty input")]
    Empty,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

// ---------------------------------------------------------------------------
// Ring specs
// ---------------------------------------------------------------------------

/// Parses a ring description such as `Q`, `Z/7`, or `Q[t01,t10,t11]`.
pub fn parse_ring(src: &str) -> Result<Ring, ParseError> {
    let s = src.trim();
    let (mut ring, mut rest) = if let Some(after) = s.strip_prefix("Z/") {
        let end = after
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(after.len());
        if end == 0 {
            return Err(ParseError::UnexpectedToken("Z/".into(), 0));
        }
        let n: u64 = after[..end]
            .parse()
            .map_err(|_| ParseError::UnexpectedToken(after[..end].into(), 2))?;
        (Ring::integers_mod(n)?, &after[end..])
    } else if let Some(rest) = s.strip_prefix('Q') {
        (Ring::rationals(), rest)
    } else {
        return Err(ParseError::UnexpectedToken(s.chars().take(8).collect(), 0));
    };
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('[')
            .ok_or_else(|| ParseError::UnexpectedToken(rest.chars().take(8).collect(), 0))?;
        let close = inner
            .find(']')
            .ok_or(ParseError::UnexpectedEnd)?;
        let names: Vec<String> = inner[..close]
            .split(',')
            .map(|v| v.trim().to_string())
            .collect();
        ring = Ring::polynomial_named(&ring, names)?;
        rest = &inner[close + 1..];
    }
    Ok(ring)
}

/// Renders a ring back into the spec grammar.
pub fn ring_to_string(ring: &Ring) -> String {
    fn go(spec: &RingSpec, out: &mut String) {
        match spec {
            RingSpec::Rationals => out.push('Q'),
            RingSpec::IntegersMod(n) => {
                out.push_str("Z/");
                out.push_str(&n.to_string());
            }
            RingSpec::PolynomialRing { base, vars } => {
                go(base, out);
                out.push('[');
                out.push_str(&vars.join(","));
                out.push(']');
            }
            RingSpec::StructureConstantAlgebra { base, rank, .. } => {
                go(base, out);
                out.push_str(&format!("<algebra of rank {rank}>"));
            }
        }
    }
    let mut out = String::new();
    go(ring.spec(), &mut out);
    out
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Mod,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Int(n) => write!(f, "{n}"),
            Token::Name(s) => write!(f, "{s}"),
            Token::Plus => write!(f, "+"),
            Token::Minus => write!(f, "-"),
            Token::Star => write!(f, "*"),
            Token::Slash => write!(f, "/"),
            Token::Caret => write!(f, "^"),
            Token::LParen => write!(f, "("),
            Token::RParen => write!(f, ")"),
            Token::LBracket => write!(f, "["),
            Token::RBracket => write!(f, "]"),
            Token::Comma => write!(f, ","),
            Token::Mod => write!(f, "mod"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, i));
                i += 1;
            }
            '[' => {
                out.push((Token::LBracket, i));
                i += 1;
            }
            ']' => {
                out.push((Token::RBracket, i));
                i += 1;
            }
            ',' => {
                out.push((Token::Comma, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((Token::Int(n), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                let word = &src[start..i];
                if word == "mod" {
                    out.push((Token::Mod, start));
                } else {
                    out.push((Token::Name(word.to_string()), start));
                }
            }
            other => return Err(ParseError::UnexpectedChar(other, i)),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    ring: &'a Ring,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn bump(&mut self) -> Result<&'a (Token, usize), ParseError> {
        let t = self.tokens.get(self.pos).ok_or(ParseError::UnexpectedEnd)?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: &Token) -> Result<(), ParseError> {
        let (t, at) = self.bump()?;
        if t == want {
            Ok(())
        } else {
            Err(ParseError::UnexpectedToken(t.to_string(), *at))
        }
    }

    // sum := product (('+' | '-') product)* ('mod' int)?
    fn sum(&mut self) -> Result<RingElement, ParseError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    acc = &acc + &rhs;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    acc = &acc - &rhs;
                }
                Some(Token::Mod) => {
                    self.pos += 1;
                    let (t, at) = self.bump()?;
                    let n = match t {
                        Token::Int(n) => n.clone(),
                        other => {
                            return Err(ParseError::UnexpectedToken(other.to_string(), *at))
                        }
                    };
                    match self.ring.spec() {
                        RingSpec::IntegersMod(m) if BigInt::from(m.clone()) == n => {}
                        _ => return Err(ParseError::WrongModulus(n.to_string())),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    // product := factor (('*' | '/') factor)*
    fn product(&mut self) -> Result<RingElement, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = &acc * &rhs;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    let inv = rhs
                        .invert()
                        .ok_or_else(|| ParseError::DivisionByNonUnit(rhs.to_string()))?;
                    acc = &acc * &inv;
                }
                _ => return Ok(acc),
            }
        }
    }

    // factor := '-' factor | atom ('^' int)*
    fn factor(&mut self) -> Result<RingElement, ParseError> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(-&inner);
        }
        let mut acc = self.atom()?;
        while matches!(self.peek(), Some(Token::Caret)) {
            self.pos += 1;
            let (t, at) = self.bump()?;
            let e: u32 = match t {
                Token::Int(n) => u32::try_from(n.clone()).map_err(|_| ParseError::BadExponent)?,
                other => return Err(ParseError::UnexpectedToken(other.to_string(), *at)),
            };
            acc = acc.pow(e);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<RingElement, ParseError> {
        let (t, at) = self.bump()?;
        match t {
            Token::Int(n) => Ok(self.ring.from_bigint(n)),
            Token::Name(name) => resolve_name(self.ring, name),
            Token::LParen => {
                let inner = self.sum()?;
                self.expect(&Token::RParen)?;
                Ok(inner)
            }
            Token::LBracket => {
                let base = match self.ring.spec() {
                    RingSpec::StructureConstantAlgebra { .. } => {
                        self.ring.base().expect("algebra")
                    }
                    _ => return Err(ParseError::VectorOutsideAlgebra),
                };
                let mut coords = Vec::new();
                loop {
                    let mut inner = Parser { tokens: self.tokens, pos: self.pos, ring: &base };
                    let c = inner.sum()?;
                    self.pos = inner.pos;
                    coords.push(c);
                    let (t, at) = self.bump()?;
                    match t {
                        Token::Comma => continue,
                        Token::RBracket => break,
                        other => {
                            return Err(ParseError::UnexpectedToken(other.to_string(), *at))
                        }
                    }
                }
                Ok(self.ring.from_coords(&coords)?)
            }
            other => Err(ParseError::UnexpectedToken(other.to_string(), *at)),
        }
    }
}

/// Looks a name up as a variable of the ring or, recursively, of a base
/// ring, embedding the result upward.
fn resolve_name(ring: &Ring, name: &str) -> Result<RingElement, ParseError> {
    if let RingSpec::PolynomialRing { vars, .. } = ring.spec() {
        if vars.iter().any(|v| v == name) {
            return Ok(ring.var(name).expect("listed variable"));
        }
    }
    if let Some(base) = ring.base() {
        let inner = resolve_name(&base, name)?;
        return Ok(ring.embed(&inner)?);
    }
    Err(ParseError::UnknownName(name.to_string()))
}

/// Parses an element of the given ring.
pub fn parse_element(ring: &Ring, src: &str) -> Result<RingElement, ParseError> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser { tokens: &tokens, pos: 0, ring };
    let value = parser.sum()?;
    if parser.pos != tokens.len() {
        let (t, at) = &tokens[parser.pos];
        return Err(ParseError::UnexpectedToken(t.to_string(), *at));
    }
    Ok(value)
}

/// Splits on top-level commas (outside parentheses and brackets).
fn split_components(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in src.chars() {
        match c {
            '(' | '[' => {
                depth += 1;
                current.push(c);
            }
            ')' | ']' => {
                depth -= 1;
                current.push(c);
            }
            ',' if depth == 0 => {
                out.push(current.trim().to_string());
                current = String::new();
            }
            _ => current.push(c),
        }
    }
    out.push(current.trim().to_string());
    out
}

/// Parses a polynomial map over a coefficient ring. Components are separated
/// by top-level commas; variables must be named `x0, x1, ...` and the domain
/// rank is inferred from the highest index used (overridable by
/// `min_rank`).
pub fn parse_map(
    coeff: &Ring,
    src: &str,
    min_rank: Option<usize>,
) -> Result<PolyMap, ParseError> {
    let trimmed = src.trim();
    let trimmed = trimmed
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .filter(|s| balanced(s))
        .unwrap_or(trimmed);
    if trimmed.is_empty() {
        return Err(ParseError::Empty);
    }
    let parts = split_components(trimmed);
    // Infer the rank from the variable names.
    let mut rank = min_rank.unwrap_or(0);
    for part in &parts {
        for (token, _) in tokenize(part)? {
            if let Token::Name(name) = token {
                let idx: usize = name
                    .strip_prefix('x')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| ParseError::BadMapVariable(name.clone()))?;
                rank = rank.max(idx + 1);
            }
        }
    }
    let rank = rank.max(1);
    let vars: Vec<String> = (0..rank).map(|i| format!("x{i}")).collect();
    let ring = Ring::polynomial_named(coeff, vars)?;
    let components: Vec<Poly> = parts
        .iter()
        .map(|part| {
            let e = parse_element(&ring, part)?;
            Ok(Poly::from_element(e)?)
        })
        .collect::<Result<_, ParseError>>()?;
    Ok(PolyMap::new(&ring, components)?)
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_grammar_round_trips() {
        for src in ["Q", "Z/7", "Q[t01,t10,t11]", "Z/5[a][b]"] {
            let ring = parse_ring(src).unwrap();
            assert_eq!(ring_to_string(&ring), src);
        }
        assert!(parse_ring("Z/1").is_err());
        assert!(parse_ring("R").is_err());
    }

    #[test]
    fn rational_elements() {
        let q = Ring::rationals();
        assert_eq!(parse_element(&q, "3/2").unwrap().to_string(), "3/2");
        assert_eq!(parse_element(&q, "-7").unwrap(), q.from_i64(-7));
        assert_eq!(parse_element(&q, "2/4").unwrap().to_string(), "1/2");
        assert!(parse_element(&q, "1/0").is_err());
    }

    #[test]
    fn residue_elements() {
        let z6 = Ring::integers_mod(6).unwrap();
        assert_eq!(parse_element(&z6, "5 mod 6").unwrap(), z6.from_i64(5));
        assert_eq!(parse_element(&z6, "11").unwrap(), z6.from_i64(5));
        assert!(matches!(
            parse_element(&z6, "5 mod 7"),
            Err(ParseError::WrongModulus(_))
        ));
    }

    #[test]
    fn polynomial_elements() {
        let r = parse_ring("Q[t01,t10]").unwrap();
        let e = parse_element(&r, "2*t01*t10 + 1").unwrap();
        assert_eq!(e.to_string(), "2*t01*t10 + 1");
        let nested = parse_ring("Q[a][x]").unwrap();
        let e = parse_element(&nested, "a*x + 3").unwrap();
        assert_eq!(parse_element(&nested, &e.to_string()).unwrap(), e);
    }

    #[test]
    fn print_parse_round_trip_samples() {
        use crate::sampling::{random_element, Rng};
        let mut rng = Rng::new(2024);
        let rings = [
            Ring::rationals(),
            Ring::integers_mod(6).unwrap(),
            Ring::integers_mod(7).unwrap(),
            parse_ring("Q[t]").unwrap(),
            parse_ring("Z/5[a,b]").unwrap(),
        ];
        for ring in &rings {
            for _ in 0..25 {
                let e = random_element(&mut rng, ring, 9);
                let printed = e.to_string();
                let reparsed = parse_element(ring, &printed)
                    .unwrap_or_else(|err| panic!("{printed}: {err}"));
                assert_eq!(reparsed, e, "ring {}", ring_to_string(ring));
            }
        }
    }

    #[test]
    fn algebra_vectors_round_trip() {
        use crate::scalarext::{ExtensionRing, TimeAssignment};
        let z3 = Ring::integers_mod(3).unwrap();
        let ext =
            ExtensionRing::build(&z3, 1, TimeAssignment::constant(1, &z3.one())).unwrap();
        let ring = ext.algebra().clone();
        let e = ext
            .from_coords(&[z3.from_i64(2), z3.from_i64(1)])
            .unwrap();
        assert_eq!(e.to_string(), "[2, 1]");
        assert_eq!(parse_element(&ring, "[2, 1]").unwrap(), e);
        // Arithmetic inside the brackets and on whole vectors parses too.
        assert_eq!(parse_element(&ring, "[5, 1 + 3]").unwrap().to_string(), "[2, 1]");
        let sum = parse_element(&ring, "[1, 0] + [1, 1]").unwrap();
        assert_eq!(sum.to_string(), "[2, 1]");
    }

    #[test]
    fn map_parsing_infers_rank() {
        let q = Ring::rationals();
        let f = parse_map(&q, "x0^2 + x1, x0*x1", None).unwrap();
        assert_eq!(f.domain_rank(), 2);
        assert_eq!(f.codomain_rank(), 2);
        let g = parse_map(&q, "(x0^2)", None).unwrap();
        assert_eq!(g.domain_rank(), 1);
        let err = parse_map(&q, "y^2", None).unwrap_err();
        assert!(matches!(err, ParseError::BadMapVariable(_)));
        // Constant components are fine as long as some rank is given.
        let c = parse_map(&q, "7", Some(2)).unwrap();
        assert_eq!(c.domain_rank(), 2);
    }
}
