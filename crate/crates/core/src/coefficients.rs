//! Exact rationals and sparse multivariate polynomials in the chart variables
//! `x1..xm` plus the family parameter `t`, which is always the last variable.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent vector of a monomial. Ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over the rationals with a fixed number of variables.
///
/// No zero coefficient is ever stored, so structural equality is exact
/// polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    /// The variable with 0-based index `i` (the last index is `t`).
    pub fn var(nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::VariableIndex { index: i, nvars });
        }
        let mut m = Monomial::one(nvars);
        m.0[i] = 1;
        Ok(Self::term(c_one(), m))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let nvars = m.0.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial length mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_vars(other)?;
        let mut out = Poly::zero(self.nvars);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Partial derivative in the variable with 0-based index `i`.
    pub fn partial(&self, i: usize) -> Result<Poly> {
        if i >= self.nvars {
            return Err(Error::VariableIndex {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] -= 1;
            out.add_term(dm, c * int(i64::from(e)));
        }
        Ok(out)
    }

    fn t_index(&self) -> usize {
        self.nvars - 1
    }

    pub fn partial_t(&self) -> Poly {
        self.partial(self.t_index()).expect("t is always present")
    }

    /// Exact definite integral over `t` in `[0, 1]`.
    pub fn integrate_t01(&self) -> Poly {
        let ti = self.t_index();
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[ti];
            let mut im = m.clone();
            im.0[ti] = 0;
            out.add_term(im, c / int(i64::from(e) + 1));
        }
        out
    }

    /// Substitute `t = t0`.
    pub fn eval_t(&self, t0: &Rational) -> Poly {
        let ti = self.t_index();
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[ti];
            let mut im = m.clone();
            im.0[ti] = 0;
            out.add_term(im, c * num::pow::pow(t0.clone(), usize::from(e)));
        }
        out
    }

    pub fn t_degree(&self) -> u16 {
        let ti = self.t_index();
        self.terms.keys().map(|m| m.0[ti]).max().unwrap_or(0)
    }
}

fn c_one() -> Rational {
    Rational::one()
}

/// Exact product; fails when the variable counts differ.
pub fn poly_mul(p: &Poly, q: &Poly) -> Result<Poly> {
    p.checked_mul(q)
}

/// Partial derivative by 1-based variable index, `m + 1` being `t`.
pub fn poly_partial(p: &Poly, i: usize) -> Result<Poly> {
    if i == 0 {
        return Err(Error::VariableIndex {
            index: i,
            nvars: p.nvars(),
        });
    }
    p.partial(i - 1)
}

pub fn poly_integrate_t01(p: &Poly) -> Poly {
    p.integrate_t01()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial variable count mismatch")
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "polynomial variable count mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "polynomial variable count mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial variable count mismatch")
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// Writes `x1^a*x2*t^c` for a monomial; empty for the constant monomial.
pub(crate) fn fmt_monomial(m: &Monomial, out: &mut String) {
    let n = m.0.len();
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        if i + 1 == n {
            out.push('t');
        } else {
            out.push_str(&format!("x{}", i + 1));
        }
        if e > 1 {
            out.push_str(&format!("^{e}"));
        }
    }
}

/// Appends one signed term `c*mono*suffix` in canonical syntax.
pub(crate) fn fmt_term(out: &mut String, c: &Rational, m: &Monomial, suffix: &str) {
    let neg = c.is_negative();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let abs = c.abs();
    let mut mono = String::new();
    fmt_monomial(m, &mut mono);
    let mut parts: Vec<String> = Vec::new();
    if !abs.is_one() || (mono.is_empty() && suffix.is_empty()) {
        parts.push(abs.to_string());
    }
    if !mono.is_empty() {
        parts.push(mono);
    }
    if !suffix.is_empty() {
        parts.push(suffix.to_string());
    }
    out.push_str(&parts.join("*"));
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (m, c) in self.terms.iter().rev() {
            fmt_term(&mut s, c, m, "");
        }
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(nvars: usize, i: usize) -> Poly {
        Poly::var(nvars, i).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let one = Poly::one(3);
        let p = &x(3, 0) + &one;
        let q = &x(3, 0) - &one;
        let expect = &(&x(3, 0) * &x(3, 0)) - &one;
        assert_eq!(poly_mul(&p, &q).unwrap(), expect);
        assert_eq!(poly_mul(&p, &one).unwrap(), p);
    }

    #[test]
    fn monomial_product() {
        // (2 x1 x2)(3 x2 t) = 6 x1 x2^2 t with m = 2
        let a = (&x(3, 0) * &x(3, 1)).scale(&int(2));
        let b = (&x(3, 1) * &x(3, 2)).scale(&int(3));
        let p = poly_mul(&a, &b).unwrap();
        assert_eq!(p.to_string(), "6*x1*x2^2*t");
    }

    #[test]
    fn mismatched_variable_count() {
        assert_eq!(
            poly_mul(&Poly::one(2), &Poly::one(3)),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn partial_derivatives() {
        let x1 = x(3, 0);
        let x2 = x(3, 1);
        let t = x(3, 2);
        let p = &(&x1 * &x1) * &x2;
        assert_eq!(poly_partial(&p, 1).unwrap(), (&x1 * &x2).scale(&int(2)));
        let q = &(&t * &t) + &x1;
        assert_eq!(poly_partial(&q, 3).unwrap(), t.scale(&int(2)));
        assert!(poly_partial(&Poly::constant(3, int(5)), 2).unwrap().is_zero());
        assert!(poly_partial(&q, 4).is_err());
        assert!(poly_partial(&q, 0).is_err());
    }

    #[test]
    fn integrate_over_unit_interval() {
        let x1 = x(3, 0);
        let x2 = x(3, 1);
        let t = x(3, 2);
        assert_eq!(poly_integrate_t01(&t), Poly::constant(3, rat(1, 2)));
        assert_eq!(poly_integrate_t01(&x1), x1);
        let p = &(&t * &t).scale(&int(3)) + &(&x2 * &t).scale(&int(2));
        assert_eq!(poly_integrate_t01(&p), &Poly::one(3) + &x2);
    }

    #[test]
    fn display_is_graded_descending() {
        let x1 = x(3, 0);
        let p = &(&(&x1 * &x1).scale(&rat(-3, 2)) + &x(3, 1)) - &Poly::one(3);
        assert_eq!(p.to_string(), "-3/2*x1^2 + x2 - 1");
    }
}
