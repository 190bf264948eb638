//! Scalar differential forms on the polynomial chart `R^m`.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num::Zero;

use crate::coefficients::{fmt_term, Poly, Rational};
use crate::error::{Error, Result};

pub const MAX_DIM: usize = 16;

/// Chart dimension `m`; polynomials on the chart carry `m + 1` variables (the last is `t`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    dim: usize,
}

impl Chart {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::ChartDimension(dim));
        }
        Ok(Chart { dim })
    }

    pub fn dim(self) -> usize {
        self.dim
    }

    pub fn nvars(self) -> usize {
        self.dim + 1
    }

    pub fn check(self, other: Chart) -> Result<()> {
        if self != other {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

/// Strictly increasing multi-index of `dx` generators, stored as a bit set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Blade(u32);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn from_bits(bits: u32) -> Self {
        Blade(bits)
    }

    /// Blade for the given 0-based generator indices, returned with the sign
    /// of the permutation that sorts them; `None` when an index repeats.
    pub fn from_indices(indices: &[usize]) -> Option<(Blade, i32)> {
        let mut acc = Blade::EMPTY;
        let mut sign = 1;
        for &i in indices {
            let g = Blade(1 << i);
            sign *= acc.wedge_sign(g)?;
            acc = Blade(acc.0 | g.0);
        }
        Some((acc, sign))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 & (1 << i) != 0)
    }

    /// Sign of `self ∧ other` relative to the sorted union, or `None` when they overlap.
    pub fn wedge_sign(self, other: Blade) -> Option<i32> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            inversions += (self.0 >> (j + 1)).count_ones();
        }
        Some(if inversions % 2 == 0 { 1 } else { -1 })
    }

    pub fn union(self, other: Blade) -> Blade {
        Blade(self.0 | other.0)
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.indices().map(|i| format!("dx{}", i + 1)).collect();
        f.write_str(&s.join("^"))
    }
}

/// A (possibly mixed-degree) differential form with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    chart: Chart,
    terms: BTreeMap<Blade, Poly>,
}

impl Form {
    pub fn zero(chart: Chart) -> Self {
        Form {
            chart,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(chart: Chart, p: Poly) -> Self {
        Self::term(chart, Blade::EMPTY, p)
    }

    pub fn constant(chart: Chart, c: Rational) -> Self {
        Self::scalar(chart, Poly::constant(chart.nvars(), c))
    }

    pub fn one(chart: Chart) -> Self {
        Self::scalar(chart, Poly::one(chart.nvars()))
    }

    /// `p dx_I`; the blade must lie inside the chart.
    pub fn term(chart: Chart, blade: Blade, p: Poly) -> Self {
        assert_eq!(p.nvars(), chart.nvars(), "coefficient variable count mismatch");
        assert!(blade.bits() >> chart.dim() == 0, "blade outside chart");
        let mut f = Self::zero(chart);
        f.add_term(blade, p);
        f
    }

    /// The 1-form `dx_{i+1}`.
    pub fn dx(chart: Chart, i: usize) -> Result<Self> {
        if i >= chart.dim() {
            return Err(Error::VariableIndex {
                index: i,
                nvars: chart.dim(),
            });
        }
        Ok(Self::term(chart, Blade(1 << i), Poly::one(chart.nvars())))
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Blade, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, blade: Blade) -> Option<&Poly> {
        self.terms.get(&blade)
    }

    /// Number of (monomial, blade) terms.
    pub fn term_count(&self) -> usize {
        self.terms.values().map(Poly::len).sum()
    }

    pub(crate) fn add_term(&mut self, blade: Blade, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            Entry::Vacant(v) => {
                v.insert(p);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &p;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Homogeneous degree, or `None` for zero or mixed-degree forms.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|b| b.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|b| b.degree()).min()
    }

    pub fn degree_part(&self, k: usize) -> Form {
        self.filter(|b| b.degree() == k)
    }

    pub fn filter(&self, keep: impl Fn(Blade) -> bool) -> Form {
        Form {
            chart: self.chart,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(**b))
                .map(|(b, p)| (*b, p.clone()))
                .collect(),
        }
    }

    /// Nonzero homogeneous components, indexed by degree.
    pub fn homogeneous_parts(&self) -> Vec<(usize, Form)> {
        (0..=self.chart.dim())
            .map(|k| (k, self.degree_part(k)))
            .filter(|(_, f)| !f.is_zero())
            .collect()
    }

    pub fn checked_wedge(&self, other: &Form) -> Result<Form> {
        self.chart.check(other.chart)?;
        let mut out = Form::zero(self.chart);
        for (ba, pa) in &self.terms {
            for (bb, pb) in &other.terms {
                if let Some(s) = ba.wedge_sign(*bb) {
                    let p = pa * pb;
                    out.add_term(ba.union(*bb), if s < 0 { -p } else { p });
                }
            }
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Form) -> Form {
        self.checked_wedge(other).expect("chart dimension mismatch")
    }

    /// Exterior derivative; `t` is a parameter and is never differentiated.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(self.chart);
        for (b, p) in &self.terms {
            for i in 0..self.chart.dim() {
                if b.contains(i) {
                    continue;
                }
                let dp = p.partial(i).expect("chart variable");
                if dp.is_zero() {
                    continue;
                }
                let below = (b.bits() & ((1u32 << i) - 1)).count_ones();
                let nb = b.union(Blade(1 << i));
                out.add_term(nb, if below % 2 == 0 { dp } else { -dp });
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Form {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn scale_poly(&self, q: &Poly) -> Form {
        self.map_coeffs(|p| p * q)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Form {
        let mut out = Form::zero(self.chart);
        for (b, p) in &self.terms {
            out.add_term(*b, f(p));
        }
        out
    }

    /// `(-1)^deg` applied termwise.
    pub fn grade_involution(&self) -> Form {
        Form {
            chart: self.chart,
            terms: self
                .terms
                .iter()
                .map(|(b, p)| (*b, if b.degree() % 2 == 1 { -p } else { p.clone() }))
                .collect(),
        }
    }

    pub fn partial_t(&self) -> Form {
        self.map_coeffs(Poly::partial_t)
    }

    pub fn integrate_t01(&self) -> Form {
        self.map_coeffs(Poly::integrate_t01)
    }

    pub fn eval_t(&self, t0: &Rational) -> Form {
        self.map_coeffs(|p| p.eval_t(t0))
    }

    /// Constant 0-form coefficient, if the form is a pure constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        let p = self.terms.get(&Blade::EMPTY)?;
        (self.terms.len() == 1 && p.is_constant()).then(|| p.constant_term())
    }
}

/// Graded-commutative wedge product; fails on chart mismatch.
pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    a.checked_wedge(b)
}

pub fn exterior_d(a: &Form) -> Form {
    a.d()
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        assert_eq!(self.chart, rhs.chart, "chart dimension mismatch");
        for (b, p) in &rhs.terms {
            self.add_term(*b, p.clone());
        }
    }
}

impl SubAssign<&Form> for Form {
    fn sub_assign(&mut self, rhs: &Form) {
        assert_eq!(self.chart, rhs.chart, "chart dimension mismatch");
        for (b, p) in &rhs.terms {
            self.add_term(*b, -p);
        }
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Form {
    type Output = Form;
    fn add(mut self, rhs: Form) -> Form {
        self += &rhs;
        self
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(mut self, rhs: Form) -> Form {
        self -= &rhs;
        self
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.map_coeffs(|p| -p)
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (b, p) in &self.terms {
            let suffix = b.to_string();
            for (m, c) in p.terms().rev() {
                fmt_term(&mut s, c, m, &suffix);
            }
        }
        f.write_str(&s)
    }
}

/// A closed 2-form. Nondegeneracy is available as a query but never required.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticForm(Form);

impl SymplecticForm {
    pub fn new(omega: Form) -> Result<Self> {
        if !omega.is_zero() && omega.degree() != Some(2) {
            return Err(Error::NotTwoForm);
        }
        let d = omega.d();
        if !d.is_zero() {
            return Err(Error::NotClosed(d.to_string()));
        }
        Ok(SymplecticForm(omega))
    }

    /// `dx1∧dx2 + dx3∧dx4 + ...` on an even-dimensional chart.
    pub fn standard(chart: Chart) -> Result<Self> {
        if chart.dim() % 2 != 0 {
            return Err(Error::OddDimension(chart.dim()));
        }
        let mut omega = Form::zero(chart);
        for i in 0..chart.dim() / 2 {
            let b = Blade((1 << (2 * i)) | (1 << (2 * i + 1)));
            omega.add_term(b, Poly::one(chart.nvars()));
        }
        Ok(SymplecticForm(omega))
    }

    pub fn zero(chart: Chart) -> Self {
        SymplecticForm(Form::zero(chart))
    }

    pub fn form(&self) -> &Form {
        &self.0
    }

    pub fn chart(&self) -> Chart {
        self.0.chart()
    }

    /// True when the top power `omega^(m/2)` is nonzero somewhere.
    pub fn is_nondegenerate(&self) -> bool {
        let m = self.chart().dim();
        if m % 2 != 0 {
            return false;
        }
        let mut p = Form::one(self.chart());
        for _ in 0..m / 2 {
            p = p.wedge(&self.0);
        }
        !p.is_zero()
    }
}

/// Standard symplectic form on `R^{2n}`.
pub fn standard_symplectic(n: usize) -> Result<SymplecticForm> {
    SymplecticForm::standard(Chart::new(2 * n)?)
}
