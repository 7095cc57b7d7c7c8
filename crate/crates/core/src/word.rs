//! Words over `a, A, b, B` with optional exponents.
//!
//! ```text
//! word := term*
//! term := gen exp?
//! gen  := "a" | "A" | "b" | "B"          (capitals are inverses)
//! exp  := "^" (integer | "{" nadic "}")
//! ```
//!
//! Exponents in braces may be any rational in `Z[1/n]` (`3/2^1`, `5/8`, `-3`),
//! but only `a` and `A` accept non-integer exponents.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::numeric::NAdic;

enum Exponent {
    Int(BigInt),
    NAdic(NAdic, usize),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    n: u32,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn err(&self, pos: usize, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        if matches!(self.peek(), Some('-' | '+')) {
            self.bump();
        }
        let digits_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == digits_start {
            return Err(self.err(self.pos, "expected an integer exponent"));
        }
        Ok(self.src[start..self.pos].parse().expect("validated digits"))
    }

    fn exponent(&mut self) -> Result<Option<Exponent>> {
        if self.peek() != Some('^') {
            return Ok(None);
        }
        self.bump();
        if self.peek() == Some('{') {
            self.bump();
            let start = self.pos;
            let close = self.src[start..]
                .find('}')
                .ok_or_else(|| self.err(start, "unclosed '{'"))?;
            let body = &self.src[start..start + close];
            self.pos = start + close + 1;
            let value = NAdic::parse(body, self.n).map_err(|e| match e {
                Error::Syntax { pos, msg } => self.err(start + pos, msg),
                Error::NotInZ1n { value, n } => Error::NotInZ1n { value, n },
                other => other,
            })?;
            return Ok(Some(Exponent::NAdic(value, start)));
        }
        Ok(Some(Exponent::Int(self.integer()?)))
    }

    fn term(&mut self) -> Result<GroupElement> {
        let pos = self.pos;
        let gen = self.bump().expect("caller checked");
        let (is_a, sign) = match gen {
            'a' => (true, 1),
            'A' => (true, -1),
            'b' => (false, 1),
            'B' => (false, -1),
            other => return Err(self.err(pos, format!("unexpected character {other:?}"))),
        };
        let exp = self.exponent()?;
        let n = self.n;
        if is_a {
            let r = match exp {
                None => NAdic::one(n),
                Some(Exponent::Int(e)) => NAdic::from_int(e, n),
                Some(Exponent::NAdic(r, _)) => r,
            };
            let r = if sign < 0 { -r } else { r };
            Ok(GroupElement::translation(r))
        } else {
            let e = match exp {
                None => 1i64,
                Some(Exponent::Int(e)) => e
                    .to_i64()
                    .ok_or_else(|| self.err(pos, "exponent of b out of range"))?,
                Some(Exponent::NAdic(r, at)) => {
                    if !r.is_integer() {
                        return Err(self.err(at, "exponents of b must be integers"));
                    }
                    r.mantissa()
                        .to_i64()
                        .ok_or_else(|| self.err(at, "exponent of b out of range"))?
                }
            };
            Ok(GroupElement::new(NAdic::zero(n), sign * e))
        }
    }
}

/// Multiplies the terms of `text` left to right.
pub fn parse(text: &str, n: u32) -> Result<GroupElement> {
    let mut p = Parser { src: text, pos: 0, n };
    let mut acc = GroupElement::identity(n);
    loop {
        p.skip_ws();
        if p.peek().is_none() {
            return Ok(acc);
        }
        let t = p.term()?;
        acc = acc.mul(&t);
    }
}
