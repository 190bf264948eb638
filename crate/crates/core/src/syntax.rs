//! Text syntax for polynomials and forms used in scenario files.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := rational | 'x'N ['^'N] | 't' ['^'N] | 'dx'N ('^' 'dx'N)* | '(' expr ')'
//! ```
//!
//! Juxtaposed factors multiply as forms, so `x1*dx2^dx1` is `-x1 dx1^dx2`.
//! Printing (`Display` on [`Poly`] and [`Form`]) emits exactly this grammar.

use num::{BigInt, One};

use crate::coefficients::{Monomial, Poly, Rational};
use crate::error::{Error, Result};
use crate::forms::{Blade, Chart, Form};

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    chart: Chart,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            input: self.src.to_string(),
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn starts_with(&mut self, s: &str) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(s)
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(self.src[start..self.pos].parse().expect("ascii digits"))
    }

    fn small(&mut self) -> Result<usize> {
        let n = self.digits()?;
        match usize::try_from(n) {
            Ok(v) if v < 1 << 15 => Ok(v),
            _ => self.err("integer too large"),
        }
    }

    fn expr(&mut self) -> Result<Form> {
        let mut acc = Form::zero(self.chart);
        let mut negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let t = self.term()?;
            if negate {
                acc -= &t;
            } else {
                acc += &t;
            }
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Form> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = acc.wedge(&f);
        }
        Ok(acc)
    }

    fn var_index(&mut self) -> Result<usize> {
        let i = self.small()?;
        if i == 0 || i > self.chart.dim() {
            return self.err(format!("index {i} outside 1..={}", self.chart.dim()));
        }
        Ok(i - 1)
    }

    fn exponent(&mut self) -> Result<u16> {
        if self.peek() == Some(b'^') && !self.src[self.pos + 1..].trim_start().starts_with('d') {
            self.pos += 1;
            self.skip_ws();
            return Ok(self.small()? as u16);
        }
        Ok(1)
    }

    fn factor(&mut self) -> Result<Form> {
        let nvars = self.chart.nvars();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                let d = if self.eat(b'/') {
                    self.skip_ws();
                    self.digits()?
                } else {
                    BigInt::one()
                };
                if d == BigInt::from(0) {
                    return self.err("zero denominator");
                }
                Ok(Form::constant(self.chart, Rational::new(n, d)))
            }
            Some(b'd') if self.starts_with("dx") => {
                let mut idx = Vec::new();
                loop {
                    self.pos += 2;
                    idx.push(self.var_index()?);
                    let save = self.pos;
                    if self.eat(b'^') && self.starts_with("dx") {
                        continue;
                    }
                    self.pos = save;
                    break;
                }
                let mut f = Form::one(self.chart);
                for i in idx {
                    f = f.wedge(&Form::dx(self.chart, i)?);
                }
                Ok(f)
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.var_index()?;
                let e = self.exponent()?;
                let mut exps = vec![0u16; nvars];
                exps[i] = e;
                Ok(Form::scalar(
                    self.chart,
                    Poly::term(Rational::one(), Monomial::from_exponents(&exps)),
                ))
            }
            Some(b't') => {
                self.pos += 1;
                let e = self.exponent()?;
                let mut exps = vec![0u16; nvars];
                exps[nvars - 1] = e;
                Ok(Form::scalar(
                    self.chart,
                    Poly::term(Rational::one(), Monomial::from_exponents(&exps)),
                ))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a form on the given chart.
pub fn parse_form(chart: Chart, src: &str) -> Result<Form> {
    let mut p = Parser {
        src,
        bytes: src.as_bytes(),
        pos: 0,
        chart,
    };
    let f = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(f)
}

/// Parses a polynomial in `x1..xm, t`; rejects any `dx` factor.
pub fn parse_poly(chart: Chart, src: &str) -> Result<Poly> {
    let f = parse_form(chart, src)?;
    if f.is_zero() {
        return Ok(Poly::zero(chart.nvars()));
    }
    if f.degree() != Some(0) {
        return Err(Error::Parse {
            input: src.to_string(),
            pos: 0,
            msg: "polynomial contains dx factors".into(),
        });
    }
    Ok(f.coefficient(Blade::EMPTY).cloned().expect("degree-0 term"))
}
