//! Sequence expressions in the variable `n`.
//!
//! ```text
//! expr     := term (("+"|"-") term)* ;
//! term     := factor (("*"|"/") factor)* ;
//! factor   := atom ("^" sint)? ;
//! atom     := rational | "n" | "(" expr ")"
//!           | "case" "(" uint ";" expr ("," expr)* ")" | "(-1)^n" ;
//! rational := sint ("/" uint)? ;  sint := ["-"] digits ;  uint := digits ;
//! ```
//!
//! A rational literal is greedy, so `1/2` is the constant one half while
//! `1/n` divides. `(-1)^n` is sugar for `case(2; 1, -1)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hyper::Germ;
use crate::poly::RatFn;
use crate::rational::{self, lcm_u64, Rational};

/// Largest accepted `|k|` in `e^k`.
pub const MAX_EXPONENT: i64 = 1000;
/// Largest accepted `case` modulus.
pub const MAX_CASE_MODULUS: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn join(self, other: SourceSpan) -> SourceSpan {
        SourceSpan {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SeqExpr {
    RationalConst(Rational),
    IndexVar,
    Add(Box<SeqExpr>, Box<SeqExpr>),
    Sub(Box<SeqExpr>, Box<SeqExpr>),
    Mul(Box<SeqExpr>, Box<SeqExpr>),
    Div(Box<SeqExpr>, Box<SeqExpr>),
    IntPow(Box<SeqExpr>, i64),
    /// Branch `r` applies when `n ≡ r (mod modulus)`.
    CaseMod(u64, Vec<SeqExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(u8),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Num(text[start..i].parse().expect("digits"))
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(text[start..i].to_string())
        } else if b"+-*/^();,".contains(&c) {
            i += 1;
            Tok::Sym(c)
        } else {
            let ch = text[i..].chars().next().unwrap();
            return Err(Error::Syntax {
                message: format!("unexpected character `{ch}`"),
                span: SourceSpan {
                    start,
                    end: start + ch.len_utf8(),
                },
            });
        };
        out.push(Token {
            tok,
            span: SourceSpan { start, end: i },
        });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    len: usize,
    _text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn span_here(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map(|t| t.span)
            .unwrap_or(SourceSpan {
                start: self.len,
                end: self.len,
            })
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos - 1].span
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            message: message.into(),
            span: self.span_here(),
        })
    }

    fn eat_sym(&mut self, s: u8) -> bool {
        if self.peek() == Some(&Tok::Sym(s)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: u8) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(format!("expected `{}`", s as char))
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Num(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => self.error("expected digits"),
        }
    }

    fn sint(&mut self) -> Result<BigInt> {
        let neg = self.eat_sym(b'-');
        let v = self.uint()?;
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<SeqExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_sym(b'+') {
                lhs = SeqExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_sym(b'-') {
                lhs = SeqExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<SeqExpr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat_sym(b'*') {
                lhs = SeqExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat_sym(b'/') {
                lhs = SeqExpr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<SeqExpr> {
        let base = self.atom()?;
        if self.eat_sym(b'^') {
            let start = self.span_here();
            let k = self.sint()?;
            let span = start.join(self.prev_span());
            let k = i64::try_from(&k)
                .ok()
                .filter(|k| k.abs() <= MAX_EXPONENT)
                .ok_or_else(|| Error::ExponentTooLarge {
                    exponent: i64::try_from(&k).unwrap_or(i64::MAX),
                    span,
                })?;
            return Ok(SeqExpr::IntPow(Box::new(base), k));
        }
        Ok(base)
    }

    fn is_minus_one_pow_n(&self) -> bool {
        self.peek() == Some(&Tok::Sym(b'('))
            && self.peek_at(1) == Some(&Tok::Sym(b'-'))
            && self.peek_at(2) == Some(&Tok::Num(BigInt::one()))
            && self.peek_at(3) == Some(&Tok::Sym(b')'))
            && self.peek_at(4) == Some(&Tok::Sym(b'^'))
            && self.peek_at(5) == Some(&Tok::Ident("n".into()))
    }

    fn atom(&mut self) -> Result<SeqExpr> {
        if self.is_minus_one_pow_n() {
            self.pos += 6;
            return Ok(SeqExpr::CaseMod(
                2,
                vec![
                    SeqExpr::RationalConst(rational::int(1)),
                    SeqExpr::RationalConst(rational::int(-1)),
                ],
            ));
        }
        match self.peek().cloned() {
            Some(Tok::Num(_)) | Some(Tok::Sym(b'-')) => {
                let num = self.sint()?;
                let den = if self.peek() == Some(&Tok::Sym(b'/'))
                    && matches!(self.peek_at(1), Some(Tok::Num(_)))
                {
                    self.pos += 1;
                    let d = self.uint()?;
                    if d.is_zero() {
                        return Err(Error::Syntax {
                            message: "zero denominator in rational literal".into(),
                            span: self.prev_span(),
                        });
                    }
                    d
                } else {
                    BigInt::one()
                };
                Ok(SeqExpr::RationalConst(Rational::new(num, den)))
            }
            Some(Tok::Sym(b'(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(b')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) if name == "n" => {
                self.pos += 1;
                Ok(SeqExpr::IndexVar)
            }
            Some(Tok::Ident(name)) if name == "case" => {
                let start = self.span_here();
                self.pos += 1;
                self.expect_sym(b'(')?;
                let m_span = self.span_here();
                let m = self.uint()?;
                self.expect_sym(b';')?;
                let mut branches = vec![self.expr()?];
                while self.eat_sym(b',') {
                    branches.push(self.expr()?);
                }
                self.expect_sym(b')')?;
                let span = start.join(self.prev_span());
                let m = u64::try_from(&m).unwrap_or(u64::MAX);
                if m < 2 {
                    return Err(Error::ZeroModulus {
                        modulus: m,
                        span: m_span,
                    });
                }
                if m > MAX_CASE_MODULUS || branches.len() as u64 != m {
                    return Err(Error::BranchCountMismatch {
                        modulus: m,
                        found: branches.len(),
                        span,
                    });
                }
                Ok(SeqExpr::CaseMod(m, branches))
            }
            Some(Tok::Ident(name)) => self.error(format!("unknown identifier `{name}`")),
            Some(_) => self.error("expected a number, `n`, `case` or `(`"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses a sequence expression.
pub fn parse(text: &str) -> Result<SeqExpr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        len: text.len(),
        _text: text,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

/// `to_germ(parse(text))`.
pub fn parse_germ(text: &str) -> Result<Germ> {
    to_germ(&parse(text)?)
}

impl SeqExpr {
    /// Exact value at index `n`; `None` where a division by zero occurs.
    pub fn eval(&self, n: u64) -> Option<Rational> {
        use SeqExpr::*;
        Some(match self {
            RationalConst(c) => c.clone(),
            IndexVar => rational::nat(n),
            Add(a, b) => a.eval(n)? + b.eval(n)?,
            Sub(a, b) => a.eval(n)? - b.eval(n)?,
            Mul(a, b) => a.eval(n)? * b.eval(n)?,
            Div(a, b) => {
                let d = b.eval(n)?;
                if d.is_zero() {
                    return None;
                }
                a.eval(n)? / d
            }
            IntPow(b, k) => {
                let v = b.eval(n)?;
                if *k < 0 && v.is_zero() {
                    return None;
                }
                v.pow(*k as i32)
            }
            CaseMod(m, branches) => branches[(n % m) as usize].eval(n)?,
        })
    }

    fn prec(&self) -> u8 {
        use SeqExpr::*;
        match self {
            Add(..) | Sub(..) => 0,
            Mul(..) | Div(..) => 1,
            IntPow(..) => 2,
            RationalConst(..) | IndexVar | CaseMod(..) => 3,
        }
    }
}

/// Canonical germ of the sequence `⟨e(n)⟩`.
pub fn to_germ(e: &SeqExpr) -> Result<Germ> {
    use SeqExpr::*;
    Ok(match e {
        RationalConst(c) => Germ::constant(c.clone()),
        IndexVar => Germ::index(),
        Add(a, b) => &to_germ(a)? + &to_germ(b)?,
        Sub(a, b) => &to_germ(a)? - &to_germ(b)?,
        Mul(a, b) => &to_germ(a)? * &to_germ(b)?,
        Div(a, b) => to_germ(a)?.checked_div(&to_germ(b)?)?,
        IntPow(b, k) => {
            if k.abs() > MAX_EXPONENT {
                return Err(Error::ExponentTooLarge {
                    exponent: *k,
                    span: SourceSpan::default(),
                });
            }
            to_germ(b)?.pow(*k)?
        }
        CaseMod(m, branches) => {
            let germs = branches.iter().map(to_germ).collect::<Result<Vec<_>>>()?;
            let modulus = germs.iter().fold(*m, |acc, g| lcm_u64(acc, g.modulus()));
            let threshold = germs.iter().map(Germ::threshold).max().unwrap_or(0);
            let pieces: Vec<RatFn> = (0..modulus)
                .map(|r| germs[(r % m) as usize].piece(r).clone())
                .collect();
            Germ::from_pieces(pieces).with_threshold_at_least(threshold)
        }
    })
}

fn write_at(e: &SeqExpr, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.prec() < min_prec {
        write!(f, "(")?;
        write_expr(e, f)?;
        write!(f, ")")
    } else {
        write_expr(e, f)
    }
}

/// A divisor that starts with a digit or sign would fuse with a preceding
/// rational literal, so it is always parenthesized.
fn needs_guard_after_slash(e: &SeqExpr) -> bool {
    match e {
        SeqExpr::RationalConst(_) => true,
        SeqExpr::IntPow(b, _) => matches!(**b, SeqExpr::RationalConst(_)),
        _ => false,
    }
}

fn write_expr(e: &SeqExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    use SeqExpr::*;
    match e {
        RationalConst(c) => f.write_str(&rational::format(c)),
        IndexVar => f.write_str("n"),
        Add(a, b) | Sub(a, b) => {
            write_at(a, 0, f)?;
            f.write_str(if matches!(e, Add(..)) { " + " } else { " - " })?;
            write_at(b, 1, f)
        }
        Mul(a, b) => {
            write_at(a, 1, f)?;
            f.write_str("*")?;
            write_at(b, 2, f)
        }
        Div(a, b) => {
            write_at(a, 1, f)?;
            f.write_str("/")?;
            if needs_guard_after_slash(b) {
                write!(f, "(")?;
                write_expr(b, f)?;
                write!(f, ")")
            } else {
                write_at(b, 2, f)
            }
        }
        IntPow(b, k) => {
            write_at(b, 3, f)?;
            write!(f, "^{k}")
        }
        CaseMod(m, branches) => {
            write!(f, "case({m}; ")?;
            for (i, b) in branches.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_expr(b, f)?;
            }
            f.write_str(")")
        }
    }
}

impl fmt::Display for SeqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, f)
    }
}

/// Canonical text; `parse(&format(e)) == e`.
pub fn format(e: &SeqExpr) -> String {
    e.to_string()
}

/// Least common multiple of all `case` moduli in the tree.
pub fn case_lcm(e: &SeqExpr) -> u64 {
    use SeqExpr::*;
    match e {
        RationalConst(_) | IndexVar => 1,
        Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => case_lcm(a).lcm(&case_lcm(b)),
        IntPow(b, _) => case_lcm(b),
        CaseMod(m, bs) => bs.iter().fold(*m, |acc, b| acc.lcm(&case_lcm(b))),
    }
}
