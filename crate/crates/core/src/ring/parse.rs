//! Minimal infix grammar for exact coefficients:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := integer | name | '(' expr ')'
//! ```
//!
//! Floating-point literals are rejected.

use std::sync::Arc;

use num_bigint::BigInt;

use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::registry::VarRegistry;
use super::Rat;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
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
            if i < chars.len() && (chars[i] == '.' || chars[i] == 'e' || chars[i] == 'E') {
                return Err(Error::Parse(format!(
                    "floating-point literal in `{src}`; use an exact fraction"
                )));
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Int(digits.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{src}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    reg: &'a Arc<VarRegistry>,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in `{}`", self.src))
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|_| self.err("division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let Some(Tok::Int(e)) = self.peek().cloned() else {
            return Err(self.err("expected integer exponent"));
        };
        self.pos += 1;
        let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
        let mut acc = RatFunc::one(self.reg);
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        if neg {
            acc = acc.inv().map_err(|_| self.err("zero to a negative power"))?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(RatFunc::constant(self.reg, Rat::from_integer(n)))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                Ok(RatFunc::from_poly(Poly::named(self.reg, &name)?))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing `)`"));
                }
                Ok(e)
            }
            _ => Err(self.err("expected a number, a name or `(`")),
        }
    }
}

/// Parses a rational function over `reg`.
pub fn parse_ratfunc(src: &str, reg: &Arc<VarRegistry>) -> Result<RatFunc> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        reg,
        src,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Parses a polynomial over `reg`; division is only allowed by constants.
pub fn parse_poly(src: &str, reg: &Arc<VarRegistry>) -> Result<Poly> {
    parse_ratfunc(src, reg)?
        .as_poly()
        .ok_or_else(|| Error::Parse(format!("`{src}` is not a polynomial")))
}

/// Parses an exact rational such as `-3/4` or `5`.
pub fn parse_rat(src: &str) -> Result<Rat> {
    let empty = Arc::new(VarRegistry::new());
    parse_ratfunc(src, &empty)?
        .as_constant()
        .ok_or_else(|| Error::Parse(format!("`{src}` is not a rational constant")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rat("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rat("2^3 - 1").unwrap(), rat(7, 1));
        assert!(parse_rat("1.5").is_err());
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn parses_polynomials_in_parameters() {
        let reg = VarRegistry::for_algebra(0, &["lambda2", "eps"]).unwrap();
        let p = parse_poly("(k - 2 + lambda2)", &reg);
        assert!(matches!(p, Err(Error::UnknownVariable(_))));
        let p = parse_poly("2*(lambda2 + 1)^2 - eps/3", &reg).unwrap();
        assert_eq!(p.to_string(), "2*lambda2^2 + 4*lambda2 - 1/3*eps + 2");
        assert!(parse_poly("1/lambda2", &reg).is_err());
        assert!(parse_ratfunc("1/lambda2", &reg).is_ok());
        assert!(parse_poly("lambda2 +", &reg).is_err());
    }
}
