//! Reader for the plain-text polynomial notation used by the template data
//! files and the pretty-printer: `3*a_0_1_1^2 - I*(x0 + x1)/2 + 7/3*u6`.
//!
//! Variables are `a_j_k_l`, `eta_j_k_l`, or a family letter followed by an
//! index (`e5`, `u3`, `a0`). `I` is the imaginary unit.

use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::poly::Polynomial;
use crate::variable::{Family, MomentIndex, Variable};

pub fn parse_polynomial(src: &str) -> Result<Polynomial> {
    let mut p = Parser { src, pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a single variable name.
pub fn parse_variable(name: &str) -> Result<Variable> {
    variable_from_ident(name).ok_or_else(|| Error::Parse { offset: 0, message: format!("unknown variable `{name}`") })
}

fn variable_from_ident(id: &str) -> Option<Variable> {
    let triple = |rest: &str| -> Option<MomentIndex> {
        let mut it = rest.split('_').map(|s| s.parse::<u32>().ok());
        let idx = MomentIndex::new(it.next()??, it.next()??, it.next()??);
        it.next().is_none().then_some(idx)
    };
    if let Some(rest) = id.strip_prefix("eta_") {
        return triple(rest).map(Variable::Eta);
    }
    if let Some(rest) = id.strip_prefix("a_") {
        return triple(rest).map(Variable::Moment);
    }
    let mut chars = id.chars();
    let family = Family::from_letter(chars.next()?)?;
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some(Variable::Template(family, digits.parse().ok()?))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { offset: self.pos, message: String::from(msg) }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
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

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.integer()?;
                if d.is_zero() {
                    return Err(self.error("division by zero"));
                }
                acc = acc.scale(&GaussianRational::real(BigRational::new(1.into(), d)));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.error("exponent out of range"))?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        self.src[start..self.pos].parse().map_err(|_| self.error("bad integer"))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Polynomial::constant(GaussianRational::real(BigRational::from_integer(n))))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let id = &self.src[start..self.pos];
                if id == "I" {
                    return Ok(Polynomial::constant(GaussianRational::i()));
                }
                variable_from_ident(id).map(Polynomial::var).ok_or(Error::Parse {
                    offset: start,
                    message: format!("unknown variable `{id}`"),
                })
            }
            _ => Err(self.error("expected a number, variable, or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variables() {
        assert_eq!(parse_variable("a_2_0_0").unwrap(), Variable::moment(2, 0, 0));
        assert_eq!(parse_variable("eta_0_1_2").unwrap(), Variable::eta(0, 1, 2));
        assert_eq!(parse_variable("u6").unwrap(), Variable::template(Family::U, 6));
        assert_eq!(parse_variable("a3").unwrap(), Variable::template(Family::A, 3));
        assert!(parse_variable("q1").is_err());
        assert!(parse_variable("a_1_2").is_err());
        assert!(parse_variable("e").is_err());
    }

    #[test]
    fn fractions_and_units() {
        let p = parse_polynomial("-(I/3)*(a_0_0_2 + a_0_2_0 - 2*a_2_0_0)").unwrap();
        let q = parse_polynomial("-1/3*I*a_0_0_2 - 1/3*I*a_0_2_0 + 2/3*I*a_2_0_0").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_polynomial("a_0_0_2 + * 3") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 10),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial("x0 + zz").is_err());
        assert!(parse_polynomial("(x0").is_err());
        assert!(parse_polynomial("x0/0").is_err());
    }
}
