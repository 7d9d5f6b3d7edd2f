//! Expression language for differential functions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' exponent)?
//! exponent:= '-'? INT | '(' '-'? INT ')'
//! primary := INT | NAME | '(' expr ')'
//! ```
//!
//! Names: `x`, `u`, `u1`, `u2`, ... when `p = q = 1`; in general `x1..xP`,
//! `u` or `u[a]`, optionally followed by `_(c1,...,cP)`.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{Monomial, Rational, RationalExpr};
use crate::jetspace::{JetSpace, JetVar, MultiIndex};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

/// One-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub const START: Pos = Pos { line: 1, column: 1 };
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Name(s) => write!(f, "{s}"),
            Tok::Plus => f.write_str("+"),
            Tok::Minus => f.write_str("-"),
            Tok::Star => f.write_str("*"),
            Tok::Slash => f.write_str("/"),
            Tok::Caret => f.write_str("^"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str, origin: Pos) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let pos_of = |k: usize| Pos {
        line: origin.line,
        column: origin.column + k,
    };
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        let start = k;
        let tok = match ch {
            c if c.is_whitespace() => {
                k += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let digits: String = chars[start..k].iter().collect();
                out.push((Tok::Int(digits.parse().expect("ascii digits")), pos_of(start)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                    k += 1;
                }
                if chars[start..k] == ['u'] {
                    k = lex_jet_suffix(&chars, k).map_err(|at| ParseError::at(pos_of(at), "malformed jet coordinate"))?;
                }
                out.push((Tok::Name(chars[start..k].iter().collect()), pos_of(start)));
                continue;
            }
            other => {
                return Err(ParseError::at(pos_of(k), format!("unexpected character '{other}'")));
            }
        };
        out.push((tok, pos_of(start)));
        k += 1;
    }
    out.push((Tok::End, pos_of(chars.len())));
    Ok(out)
}

/// Consumes an optional `[a]` and an optional `_(c1,...)` after `u`.
fn lex_jet_suffix(chars: &[char], mut k: usize) -> Result<usize, usize> {
    let digits = |k: &mut usize| {
        let s = *k;
        while *k < chars.len() && chars[*k].is_ascii_digit() {
            *k += 1;
        }
        *k > s
    };
    if chars.get(k) == Some(&'[') {
        k += 1;
        if !digits(&mut k) || chars.get(k) != Some(&']') {
            return Err(k);
        }
        k += 1;
    }
    if chars.get(k) == Some(&'_') {
        k += 1;
        if chars.get(k) != Some(&'(') {
            return Err(k);
        }
        k += 1;
        loop {
            if !digits(&mut k) {
                return Err(k);
            }
            match chars.get(k) {
                Some(',') => k += 1,
                Some(')') => {
                    k += 1;
                    break;
                }
                _ => return Err(k),
            }
        }
    }
    Ok(k)
}

/// Resolves a coordinate name in `space`, ignoring the order bound.
pub fn resolve_name(name: &str, space: &JetSpace) -> Option<JetVar> {
    let (p, q) = (space.p, space.q);
    let small = |s: &str| -> Option<usize> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    };
    if let Some(rest) = name.strip_prefix('x') {
        if rest.is_empty() {
            return (p == 1).then_some(JetVar::Independent(0));
        }
        let i = small(rest)?;
        return (1..=p).contains(&i).then_some(JetVar::Independent(i - 1));
    }
    let rest = name.strip_prefix('u')?;
    if p == 1 && q == 1 {
        if rest.is_empty() {
            return Some(JetVar::u(0));
        }
        if let Some(k) = small(rest) {
            return Some(JetVar::u(k as u32));
        }
    }
    let (component, rest) = match rest.strip_prefix('[') {
        Some(r) => {
            let close = r.find(']')?;
            let a = small(&r[..close])?;
            if !(1..=q).contains(&a) {
                return None;
            }
            (a - 1, &r[close + 1..])
        }
        None if q == 1 => (0, rest),
        None => return None,
    };
    if rest.is_empty() {
        return Some(JetVar::dependent(component, MultiIndex::zero(p)));
    }
    let inner = rest.strip_prefix("_(")?.strip_suffix(')')?;
    let counts: Option<Vec<u32>> = inner.split(',').map(|c| small(c).map(|v| v as u32)).collect();
    let counts = counts?;
    (counts.len() == p).then(|| JetVar::dependent(component, MultiIndex::from_counts(counts)))
}

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    space: &'a JetSpace,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let (tok, pos) = self.bump();
        if tok == want {
            Ok(())
        } else {
            Err(ParseError::at(pos, format!("expected '{want}', found '{tok}'")))
        }
    }

    fn expr(&mut self) -> Result<RationalExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalExpr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    let pos = self.bump().1;
                    let rhs = self.unary()?;
                    acc = acc
                        .div(&rhs)
                        .map_err(|_| ParseError::at(pos, "division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalExpr, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalExpr, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let pos = self.bump().1;
        let exponent = self.exponent()?;
        if *self.peek() == Tok::Caret {
            return Err(ParseError::at(self.pos(), "chained '^' is ambiguous; add parentheses"));
        }
        base.pow_int(exponent)
            .map_err(|_| ParseError::at(pos, "negative power of zero"))
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let parens = *self.peek() == Tok::LParen;
        if parens {
            self.bump();
        }
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let (tok, pos) = self.bump();
        let Tok::Int(n) = tok else {
            return Err(ParseError::at(pos, "exponent must be an integer literal"));
        };
        let n: i64 = i64::try_from(&n)
            .ok()
            .filter(|v| *v <= u32::MAX as i64)
            .ok_or_else(|| ParseError::at(pos, "exponent too large"))?;
        if parens {
            self.expect(Tok::RParen)?;
        }
        Ok(if negative { -n } else { n })
    }

    fn primary(&mut self) -> Result<RationalExpr, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => Ok(RationalExpr::constant(Rational::from_integer(n))),
            Tok::Name(name) => {
                let var = resolve_name(&name, self.space)
                    .ok_or_else(|| ParseError::at(pos, format!("unknown identifier '{name}'")))?;
                if var.order() > self.space.n {
                    return Err(ParseError::at(
                        pos,
                        format!(
                            "'{name}' has order {} which exceeds the jet space order {}",
                            var.order(),
                            self.space.n
                        ),
                    ));
                }
                Ok(RationalExpr::var(var))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(ParseError::at(pos, format!("unexpected '{other}'"))),
        }
    }
}

/// Parses `text` as a differential function on `space`.
pub fn parse_expr(text: &str, space: &JetSpace) -> Result<RationalExpr, ParseError> {
    parse_expr_at(text, space, Pos::START)
}

/// As [`parse_expr`], reporting positions relative to `origin`.
pub fn parse_expr_at(text: &str, space: &JetSpace, origin: Pos) -> Result<RationalExpr, ParseError> {
    let toks = lex(text, origin)?;
    let mut parser = Parser { toks, at: 0, space };
    if *parser.peek() == Tok::End {
        return Err(ParseError::at(parser.pos(), "empty expression"));
    }
    let e = parser.expr()?;
    match parser.peek() {
        Tok::End => Ok(e),
        other => Err(ParseError::at(parser.pos(), format!("unexpected '{other}'"))),
    }
}

/// Parses a monomial with unit coefficient, such as `u1^4` or `1`.
pub fn parse_monomial(text: &str, space: &JetSpace) -> Result<Monomial, ParseError> {
    let e = parse_expr(text, space)?;
    let not_monomial = || ParseError::at(Pos::START, format!("'{text}' is not a monomial with coefficient 1"));
    if !e.is_polynomial() {
        return Err(not_monomial());
    }
    match e.numerator().as_term() {
        Some((m, c)) if num_traits::One::is_one(c) => Ok(m.clone()),
        _ => Err(not_monomial()),
    }
}
