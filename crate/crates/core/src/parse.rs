//! Recursive-descent parser for rational functions over F_p.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor | factor)*     juxtaposition only before 'x' or '('
//! factor := int | 'x' ['^' int] | '(' expr ')'
//! ```
//!
//! Integers are reduced mod p, whitespace is ignored, and `/` binds tighter
//! than `+`, so `1/x+1/x^2` is a sum of two fractions.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

const MAX_EXPONENT: u64 = 1 << 16;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: FieldSpec,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            expected: expected.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(&c) = self.src.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            v = v.saturating_mul(10).saturating_add((c - b'0') as u64);
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("integer");
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    if d.is_zero() {
                        return Err(Error::ZeroDenominator);
                    }
                    acc = acc.checked_div(&d)?;
                }
                Some(b'x') | Some(b'(') => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc> {
        let f = self.field;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let k = if self.eat(b'^') {
                    let at = self.pos;
                    let k = self.int()?;
                    if k > MAX_EXPONENT {
                        self.pos = at;
                        return self.err("exponent at most 65536");
                    }
                    k as usize
                } else {
                    1
                };
                Ok(RatFunc::from_poly(Poly::x_pow(f, k)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.int()?;
                Ok(RatFunc::constant(f, (v % f.p() as u64) as u32))
            }
            _ => self.err("integer, 'x' or '('"),
        }
    }
}

/// Parses `text` as an element of `F_p(x)`.
pub fn parse_ratfunc(field: FieldSpec, text: &str) -> Result<RatFunc> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        field,
    };
    let r = p.expr()?;
    if p.peek().is_some() {
        return p.err("end of input");
    }
    Ok(r)
}

/// Parses a polynomial (an expression whose value has denominator 1).
pub fn parse_poly(field: FieldSpec, text: &str) -> Result<Poly> {
    let r = parse_ratfunc(field, text)?;
    if !r.is_poly() {
        return Err(Error::Parse {
            offset: 0,
            expected: "a polynomial".into(),
        });
    }
    Ok(r.num().clone())
}

/// Canonical text form; `parse_ratfunc(format_ratfunc(f)) == f`.
pub fn format_ratfunc(f: &RatFunc) -> String {
    f.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::LaurentTail;

    fn f3() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    #[test]
    fn laurent_sum() {
        let r = parse_ratfunc(f3(), "1/x+1/x^2+1/x^4").unwrap();
        let expect = RatFunc::new(
            Poly::from_coeffs(f3(), [1, 0, 1, 1]),
            Poly::x_pow(f3(), 4),
        )
        .unwrap();
        assert_eq!(r, expect);
        // re-expanding the tail gives back the digits
        assert_eq!(r.tail().unwrap(), LaurentTail::new(f3(), [1, 1, 0, 1]));
    }

    #[test]
    fn zero_and_zero_denominator() {
        assert_eq!(parse_ratfunc(f3(), "0").unwrap(), RatFunc::zero(f3()));
        assert_eq!(parse_ratfunc(f3(), "x^2/0"), Err(Error::ZeroDenominator));
        assert_eq!(parse_ratfunc(f3(), "x^2/3"), Err(Error::ZeroDenominator));
    }

    #[test]
    fn coefficient_forms() {
        let a = parse_ratfunc(f3(), "2*x^2 + 2x + 4").unwrap();
        let b = parse_ratfunc(f3(), "2x^2+2*x+1").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_ratfunc(f3(), "-1").unwrap(), RatFunc::constant(f3(), 2));
        assert_eq!(
            parse_ratfunc(f3(), "(x+1)/(x^2+1)").unwrap().to_string(),
            "(x+1)/(x^2+1)"
        );
        // x^2 + 2 = (x + 1)(x + 2) over F_3
        assert_eq!(
            parse_ratfunc(f3(), "(x+1)/(x^2+2)").unwrap().to_string(),
            "1/(x+2)"
        );
    }

    #[test]
    fn error_offsets() {
        match parse_ratfunc(f3(), "x + * 2") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_ratfunc(f3(), "(x+1") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_ratfunc(f3(), "").is_err());
        assert!(parse_ratfunc(f3(), "x y").is_err());
    }
}
