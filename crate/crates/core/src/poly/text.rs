//! Reader for the `c*v1^e1*...*vk^ek` text format written by `Display`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::rational::Rational;
use super::registry::VarRegistry;
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.err("expected an integer"));
        }
        digits.parse().map_err(|_| self.err("integer out of range"))
    }

    fn exponent(&mut self) -> Result<u32> {
        let e = self.integer()?;
        u32::try_from(e).map_err(|_| self.err("exponent out of range"))
    }
}

/// Parses `text` against the variables of `registry`.
pub fn parse_polynomial(text: &str, registry: &Arc<VarRegistry>) -> Result<Polynomial> {
    let mut cur = Cursor { src: text, pos: 0 };
    let mut out = Polynomial::zero(registry);
    let mut first = true;
    loop {
        cur.skip_ws();
        if cur.peek().is_none() {
            if first {
                return Err(cur.err("empty polynomial"));
            }
            break;
        }
        let negative = if cur.eat('-') {
            true
        } else if cur.eat('+') || first {
            false
        } else {
            return Err(cur.err("expected `+` or `-`"));
        };
        first = false;
        let (m, c) = parse_term(&mut cur, registry)?;
        out.add_term(m, if negative { -c } else { c });
    }
    Ok(out)
}

fn parse_term(cur: &mut Cursor<'_>, registry: &Arc<VarRegistry>) -> Result<(Monomial, Rational)> {
    let mut coeff = Rational::one();
    let mut powers = Vec::new();
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = cur.integer()?;
                let value = if cur.eat('/') {
                    let den = cur.integer()?;
                    if den.is_zero() {
                        return Err(cur.err("zero denominator"));
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                coeff *= value;
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                let v = registry.var(name)?;
                let e = if cur.eat('^') { cur.exponent()? } else { 1 };
                powers.push((v, e));
            }
            _ => return Err(cur.err("expected a number or a variable")),
        }
        if !cur.eat('*') {
            break;
        }
    }
    Ok((Monomial::from_powers(powers), coeff))
}

impl Polynomial {
    pub fn parse(text: &str, registry: &Arc<VarRegistry>) -> Result<Self> {
        parse_polynomial(text, registry)
    }
}
