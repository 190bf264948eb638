//! Truncated power series over the rationals.
//!
//! A [`Series`] of order `n` keeps the coefficients of `z^0 ..= z^n` and
//! works modulo `z^{n+1}`.

use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::coefficients::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rational>,
}

fn from_usize(n: usize) -> Rational {
    Rational::from_integer(n.into())
}

impl Series {
    /// Series of the given order from leading coefficients; missing ones are zero
    /// and extra ones are dropped.
    pub fn new(order: usize, coeffs: &[Rational]) -> Self {
        let mut c = vec![Rational::zero(); order + 1];
        for (slot, v) in c.iter_mut().zip(coeffs) {
            *slot = v.clone();
        }
        Series { coeffs: c }
    }

    pub fn zero(order: usize) -> Self {
        Series::new(order, &[])
    }

    pub fn one(order: usize) -> Self {
        Series::new(order, &[Rational::one()])
    }

    /// The series `z`.
    pub fn z(order: usize) -> Self {
        Series::new(order, &[Rational::zero(), Rational::one()])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Keeps the first `order + 1` coefficients.
    pub fn truncate(&self, order: usize) -> Series {
        Series::new(order, &self.coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn check_order(&self, other: &Series) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        Ok(Series {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_mul(&self, other: &Series) -> Result<Series> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Series { coeffs: out })
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Series> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::ConstantTerm {
                expected: "nonzero",
                found: "0".into(),
            });
        }
        let n = self.order();
        let inv0 = a0.recip();
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut s = Rational::zero();
            for i in 1..=k {
                s += &self.coeffs[i] * &out[k - i];
            }
            out[k] = -(s * &inv0);
        }
        Ok(Series { coeffs: out })
    }

    pub fn checked_div(&self, other: &Series) -> Result<Series> {
        self.checked_mul(&other.inverse()?)
    }

    /// `f(g(z))`; `g` must have zero constant term.
    pub fn compose(&self, g: &Series) -> Result<Series> {
        self.check_order(g)?;
        if !g.coeffs[0].is_zero() {
            return Err(Error::ConstantTerm {
                expected: "0",
                found: g.coeffs[0].to_string(),
            });
        }
        let n = self.order();
        let mut out = Series::zero(n);
        let mut power = Series::one(n);
        for k in 0..=n {
            if !self.coeffs[k].is_zero() {
                out = out.checked_add(&power.scale(&self.coeffs[k]))?;
            }
            if k < n {
                power = power.checked_mul(g)?;
            }
        }
        Ok(out)
    }

    /// `f(z) / z`, dropping one order; needs zero constant term.
    pub fn div_z(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ConstantTerm {
                expected: "0",
                found: self.coeffs[0].to_string(),
            });
        }
        if self.order() == 0 {
            return Ok(Series::zero(0));
        }
        Ok(Series {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Natural logarithm; needs constant term 1.
    pub fn ln(&self) -> Result<Series> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTerm {
                expected: "1",
                found: self.coeffs[0].to_string(),
            });
        }
        let mut u = self.clone();
        u.coeffs[0] = Rational::zero();
        ln1p_series(self.order()).compose(&u)
    }

    /// Exponential; needs constant term 0.
    pub fn exp(&self) -> Result<Series> {
        exp_series(self.order()).compose(self)
    }
}

/// `exp(z) = Σ z^k / k!`.
pub fn exp_series(order: usize) -> Series {
    let mut c = Vec::with_capacity(order + 1);
    let mut f = Rational::one();
    for k in 0..=order {
        if k > 0 {
            f /= from_usize(k);
        }
        c.push(f.clone());
    }
    Series { coeffs: c }
}

/// `ln(1 + z) = Σ_{k≥1} (-1)^{k+1} z^k / k`.
pub fn ln1p_series(order: usize) -> Series {
    let mut c = vec![Rational::zero(); order + 1];
    for (k, slot) in c.iter_mut().enumerate().skip(1) {
        let v = from_usize(k).recip();
        *slot = if k % 2 == 1 { v } else { -v };
    }
    Series { coeffs: c }
}

/// `sinh(z) = Σ z^{2k+1} / (2k+1)!`.
pub fn sinh_series(order: usize) -> Series {
    let e = exp_series(order);
    let mut c = vec![Rational::zero(); order + 1];
    for k in (1..=order).step_by(2) {
        c[k] = e.coeffs[k].clone();
    }
    Series { coeffs: c }
}

/// `g(z) = ½ ln((z/2) / sinh(z/2))`, the generating series of the Â-genus.
pub fn a_hat_log_series(order: usize) -> Result<Series> {
    let half_z = Series::z(order + 1).scale(&Rational::new(1.into(), 2.into()));
    let s = sinh_series(order + 1).compose(&half_z)?;
    // sinh(z/2) / (z/2)
    let ratio = s.div_z()?.scale(&Rational::from_integer(2.into()));
    let log = ratio.inverse()?.ln()?;
    Ok(log.scale(&Rational::new(1.into(), 2.into())))
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.checked_add(rhs).expect("series order mismatch")
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.checked_add(&-rhs).expect("series order mismatch")
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.checked_mul(rhs).expect("series order mismatch")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{int, rat};

    #[test]
    fn exp_times_exp_neg_is_one() {
        for n in [0, 1, 5, 9] {
            let e = Series::z(n).exp().unwrap();
            let f = (-&Series::z(n)).exp().unwrap();
            assert_eq!(&e * &f, Series::one(n));
        }
    }

    #[test]
    fn ln1p_coefficients() {
        let l = (&Series::one(4) + &Series::z(4)).ln().unwrap();
        assert_eq!(l.coeffs(), &[int(0), int(1), rat(-1, 2), rat(1, 3), rat(-1, 4)]);
    }

    #[test]
    fn sinh_over_z_has_unit_constant() {
        let q = sinh_series(6).div_z().unwrap();
        assert_eq!(q.coeff(0), int(1));
        assert_eq!(q.coeff(2), rat(1, 6));
    }

    #[test]
    fn ln_exp_round_trip() {
        let g = Series::new(6, &[int(0), rat(1, 2), int(-3), rat(2, 7)]);
        assert_eq!(g.exp().unwrap().ln().unwrap(), g);
    }

    #[test]
    fn rejects_bad_constant_terms() {
        assert!(Series::z(3).inverse().is_err());
        assert!(Series::new(3, &[int(2)]).ln().is_err());
        assert!(Series::one(3).exp().is_err());
    }

    #[test]
    fn a_hat_log_low_order() {
        let g = a_hat_log_series(4).unwrap();
        assert_eq!(g.coeffs(), &[int(0), int(0), rat(-1, 48), int(0), rat(1, 5760)]);
    }
}
