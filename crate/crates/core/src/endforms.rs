//! End(E)-valued forms on a Z2-graded superbundle `E = E+ ⊕ E-`.
//!
//! An [`EndForm`] is a sparse sum of terms `p dx_I ⊗ E_ab`, where `E_ab` is the
//! elementary endomorphism sending basis section `b` to `a`. Basis indices
//! `0..r_plus` are even and `r_plus..r_plus + r_minus` are odd. The total degree
//! of a term is `|I| + parity(a) + parity(b)`, and composition follows
//!
//! ```text
//! (β ⊗ K)(α ⊗ L) = (-1)^{|K||α|} (β ∧ α) ⊗ KL
//! ```
//!
//! so moving an odd endomorphism past an odd form flips the sign.

use std::cell::Cell;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use crate::coefficients::{Poly, Rational};
use crate::error::{Error, Result};
use crate::forms::{Blade, Chart, Form};

/// Ranks of the even and odd parts of the superbundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SuperBundle {
    r_plus: usize,
    r_minus: usize,
}

impl SuperBundle {
    pub fn new(r_plus: usize, r_minus: usize) -> Result<Self> {
        if r_plus + r_minus == 0 || r_plus + r_minus > 16 {
            return Err(Error::InvalidRanks(r_plus, r_minus));
        }
        Ok(SuperBundle { r_plus, r_minus })
    }

    pub fn r_plus(self) -> usize {
        self.r_plus
    }

    pub fn r_minus(self) -> usize {
        self.r_minus
    }

    pub fn rank(self) -> usize {
        self.r_plus + self.r_minus
    }

    /// Parity (0 or 1) of the 0-based basis index.
    pub fn parity(self, i: usize) -> usize {
        usize::from(i >= self.r_plus)
    }

    pub fn check(self, other: SuperBundle) -> Result<()> {
        if self != other {
            return Err(Error::BundleMismatch(
                self.r_plus,
                self.r_minus,
                other.r_plus,
                other.r_minus,
            ));
        }
        Ok(())
    }

    pub fn check_index(self, i: usize) -> Result<()> {
        if i >= self.rank() {
            return Err(Error::BasisIndex {
                index: i,
                rank: self.rank(),
            });
        }
        Ok(())
    }
}

/// Parity of a homogeneous element or of a selection of terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct EndKey {
    pub row: usize,
    pub col: usize,
    pub blade: Blade,
}

thread_local! {
    static DROP_KOSZUL_SIGN: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with [`end_mul`] deliberately dropping its Koszul sign on the
/// current thread. Used to check that the verification suite detects a
/// wrong sign convention; the operator-level oracle is unaffected.
pub fn with_mutated_sign<R>(f: impl FnOnce() -> R) -> R {
    struct Reset(bool);
    impl Drop for Reset {
        fn drop(&mut self) {
            DROP_KOSZUL_SIGN.with(|c| c.set(self.0));
        }
    }
    let prev = DROP_KOSZUL_SIGN.with(|c| c.replace(true));
    let _reset = Reset(prev);
    f()
}

fn sign_mutated() -> bool {
    DROP_KOSZUL_SIGN.with(Cell::get)
}

/// An End(E)-valued differential form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndForm {
    bundle: SuperBundle,
    chart: Chart,
    terms: BTreeMap<EndKey, Poly>,
}

impl EndForm {
    pub fn zero(bundle: SuperBundle, chart: Chart) -> Self {
        EndForm {
            bundle,
            chart,
            terms: BTreeMap::new(),
        }
    }

    /// `Σ_i 1 ⊗ E_ii`.
    pub fn identity(bundle: SuperBundle, chart: Chart) -> Self {
        Self::scalar(bundle, &Form::one(chart))
    }

    /// `α ⊗ 1`.
    pub fn scalar(bundle: SuperBundle, alpha: &Form) -> Self {
        let mut out = Self::zero(bundle, alpha.chart());
        for i in 0..bundle.rank() {
            out.add_form(i, i, alpha);
        }
        out
    }

    /// `α ⊗ E_{row,col}` with 0-based indices.
    pub fn entry(bundle: SuperBundle, row: usize, col: usize, alpha: &Form) -> Result<Self> {
        bundle.check_index(row)?;
        bundle.check_index(col)?;
        let mut out = Self::zero(bundle, alpha.chart());
        out.add_form(row, col, alpha);
        Ok(out)
    }

    /// Builds from `(row, col, form)` triples; repeated keys are summed.
    pub fn from_entries<'a>(
        bundle: SuperBundle,
        chart: Chart,
        entries: impl IntoIterator<Item = (usize, usize, &'a Form)>,
    ) -> Result<Self> {
        let mut out = Self::zero(bundle, chart);
        for (r, c, f) in entries {
            bundle.check_index(r)?;
            bundle.check_index(c)?;
            chart.check(f.chart())?;
            out.add_form(r, c, f);
        }
        Ok(out)
    }

    pub fn bundle(&self) -> SuperBundle {
        self.bundle
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of (monomial, blade, row, col) terms.
    pub fn term_count(&self) -> usize {
        self.terms.values().map(Poly::len).sum()
    }

    pub(crate) fn add_term(&mut self, key: EndKey, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    fn add_form(&mut self, row: usize, col: usize, alpha: &Form) {
        for (b, p) in alpha.terms() {
            self.add_term(
                EndKey {
                    row,
                    col,
                    blade: *b,
                },
                p.clone(),
            );
        }
    }

    /// The scalar form in entry `(row, col)`.
    pub fn form_at(&self, row: usize, col: usize) -> Form {
        let mut f = Form::zero(self.chart);
        for (k, p) in self.row_range(row) {
            if k.col == col {
                f.add_term(k.blade, p.clone());
            }
        }
        f
    }

    /// Nonzero entries as `(row, col, form)` in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, Form)> {
        let mut out: Vec<(usize, usize, Form)> = Vec::new();
        for (k, p) in &self.terms {
            match out.last_mut() {
                Some((r, c, f)) if *r == k.row && *c == k.col => f.add_term(k.blade, p.clone()),
                _ => {
                    let mut f = Form::zero(self.chart);
                    f.add_term(k.blade, p.clone());
                    out.push((k.row, k.col, f));
                }
            }
        }
        out
    }

    /// Highest power of `t` among the coefficients.
    pub fn t_degree(&self) -> u16 {
        self.terms.values().map(Poly::t_degree).max().unwrap_or(0)
    }

    /// True when every term is a 0-form.
    pub fn is_zero_form(&self) -> bool {
        self.terms.keys().all(|k| k.blade.degree() == 0)
    }

    fn row_range(&self, row: usize) -> impl Iterator<Item = (&EndKey, &Poly)> {
        let lo = EndKey {
            row,
            col: 0,
            blade: Blade::EMPTY,
        };
        self.terms.range(lo..).take_while(move |(k, _)| k.row == row)
    }

    pub(crate) fn key_parity(&self, k: &EndKey) -> usize {
        (k.blade.degree() + self.bundle.parity(k.row) + self.bundle.parity(k.col)) % 2
    }

    fn endo_parity(&self, row: usize, col: usize) -> usize {
        (self.bundle.parity(row) + self.bundle.parity(col)) % 2
    }

    /// Terms of the given total-degree parity.
    pub fn parity_part(&self, parity: Parity) -> EndForm {
        let want = match parity {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        self.filter(|k| self.key_parity(k) == want)
    }

    pub(crate) fn filter(&self, keep: impl Fn(&EndKey) -> bool) -> EndForm {
        EndForm {
            bundle: self.bundle,
            chart: self.chart,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, p)| (*k, p.clone()))
                .collect(),
        }
    }

    /// Homogeneous total parity, or `None` for zero or mixed elements.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|k| self.key_parity(k));
        let first = it.next()?;
        it.all(|p| p == first).then_some(Parity::of(first))
    }

    pub fn is_parity(&self, p: Parity) -> bool {
        self.is_zero() || self.parity() == Some(p)
    }

    /// Terms of exterior degree exactly `k`.
    pub fn form_degree_part(&self, k: usize) -> EndForm {
        self.filter(|key| key.blade.degree() == k)
    }

    /// Largest exterior degree present.
    pub fn max_form_degree(&self) -> Option<usize> {
        self.terms.keys().map(|k| k.blade.degree()).max()
    }

    /// True when every entry is an even endomorphism (block diagonal).
    pub fn is_block_diagonal(&self) -> bool {
        self.terms.keys().all(|k| self.endo_parity(k.row, k.col) == 0)
    }

    /// The grading involution: even part minus odd part.
    pub fn grade_involution(&self) -> EndForm {
        let mut out = self.clone();
        for (k, p) in out.terms.iter_mut() {
            if (k.blade.degree() + self.bundle.parity(k.row) + self.bundle.parity(k.col)) % 2 == 1 {
                *p = -&*p;
            }
        }
        out
    }

    fn check(&self, other: &EndForm) -> Result<()> {
        self.bundle.check(other.bundle)?;
        self.chart.check(other.chart)
    }

    /// Composition with the Koszul sign; fails on bundle or chart mismatch.
    pub fn checked_mul(&self, other: &EndForm) -> Result<EndForm> {
        self.check(other)?;
        let drop_sign = sign_mutated();
        let mut out = EndForm::zero(self.bundle, self.chart);
        for (ks, ps) in &self.terms {
            let k_par = self.endo_parity(ks.row, ks.col);
            for (kt, pt) in other.row_range(ks.col) {
                let Some(mut sign) = ks.blade.wedge_sign(kt.blade) else {
                    continue;
                };
                if !drop_sign && k_par == 1 && kt.blade.degree() % 2 == 1 {
                    sign = -sign;
                }
                let p = ps * pt;
                out.add_term(
                    EndKey {
                        row: ks.row,
                        col: kt.col,
                        blade: ks.blade.union(kt.blade),
                    },
                    if sign < 0 { -p } else { p },
                );
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &EndForm) -> EndForm {
        self.checked_mul(other).expect("bundle or chart mismatch")
    }

    /// `(α ⊗ 1) ∘ self`, i.e. `α ∧ self` entrywise.
    pub fn wedge_left(&self, alpha: &Form) -> EndForm {
        EndForm::scalar(self.bundle, alpha).mul(self)
    }

    /// Entrywise exterior derivative, which is `[d, ·]` on End(E)-valued forms.
    pub fn d(&self) -> EndForm {
        let mut out = EndForm::zero(self.bundle, self.chart);
        for (r, c, f) in self.entries() {
            out.add_form(r, c, &f.d());
        }
        out
    }

    /// `Σ_i (-1)^{parity(i)} self_ii`.
    pub fn supertrace(&self) -> Form {
        let mut out = Form::zero(self.chart);
        for (k, p) in &self.terms {
            if k.row != k.col {
                continue;
            }
            if self.bundle.parity(k.row) == 0 {
                out.add_term(k.blade, p.clone());
            } else {
                out.add_term(k.blade, -p);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> EndForm {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> EndForm {
        let mut out = EndForm::zero(self.bundle, self.chart);
        for (k, p) in &self.terms {
            out.add_term(*k, f(p));
        }
        out
    }

    pub fn partial_t(&self) -> EndForm {
        self.map_coeffs(Poly::partial_t)
    }

    pub fn eval_t(&self, t0: &Rational) -> EndForm {
        self.map_coeffs(|p| p.eval_t(t0))
    }

    /// Multiplies every coefficient by the polynomial `q` (e.g. `t` or `1 - t`).
    pub fn scale_poly(&self, q: &Poly) -> EndForm {
        self.map_coeffs(|p| p * q)
    }

    /// True when some term has exterior degree 0.
    pub fn has_zero_form_part(&self) -> bool {
        self.terms.keys().any(|k| k.blade.degree() == 0)
    }

    /// First term of exterior degree 0, rendered for error messages.
    pub fn describe_zero_form_term(&self) -> Option<String> {
        let (k, p) = self.terms.iter().find(|(k, _)| k.blade.degree() == 0)?;
        Some(format!("({})⊗E{}{}", p, k.row + 1, k.col + 1))
    }
}

/// Composition in Ω(M, End(E)).
pub fn end_mul(s: &EndForm, t: &EndForm) -> Result<EndForm> {
    s.checked_mul(t)
}

pub fn supertrace(s: &EndForm) -> Form {
    s.supertrace()
}

impl AddAssign<&EndForm> for EndForm {
    fn add_assign(&mut self, rhs: &EndForm) {
        self.check(rhs).expect("bundle or chart mismatch");
        for (k, p) in &rhs.terms {
            self.add_term(*k, p.clone());
        }
    }
}

impl SubAssign<&EndForm> for EndForm {
    fn sub_assign(&mut self, rhs: &EndForm) {
        self.check(rhs).expect("bundle or chart mismatch");
        for (k, p) in &rhs.terms {
            self.add_term(*k, -p);
        }
    }
}

impl Add for &EndForm {
    type Output = EndForm;
    fn add(self, rhs: &EndForm) -> EndForm {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &EndForm {
    type Output = EndForm;
    fn sub(self, rhs: &EndForm) -> EndForm {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for EndForm {
    type Output = EndForm;
    fn add(mut self, rhs: EndForm) -> EndForm {
        self += &rhs;
        self
    }
}

impl Sub for EndForm {
    type Output = EndForm;
    fn sub(mut self, rhs: EndForm) -> EndForm {
        self -= &rhs;
        self
    }
}

impl Neg for &EndForm {
    type Output = EndForm;
    fn neg(self) -> EndForm {
        self.map_coeffs(|p| -p)
    }
}

impl Neg for EndForm {
    type Output = EndForm;
    fn neg(self) -> EndForm {
        -&self
    }
}

impl fmt::Display for EndForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .entries()
            .into_iter()
            .map(|(r, c, form)| format!("E{}{}: {}", r + 1, c + 1, form))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// Which shape of connection form is admitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConnMode {
    /// Any total-degree-odd θ.
    General,
    /// θ is a block-diagonal 1-form, so `A` maps `Ω^i(M,E)` into `Ω^{i+1}(M,E)`.
    Koszul,
}

/// A superconnection `A = d + θ` with θ odd in total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperConn {
    theta: EndForm,
    mode: ConnMode,
}

impl SuperConn {
    pub fn new(theta: EndForm) -> Result<Self> {
        if !theta.is_parity(Parity::Odd) {
            return Err(Error::Parity {
                what: "connection form θ".into(),
                expected: "odd",
            });
        }
        Ok(SuperConn {
            theta,
            mode: ConnMode::General,
        })
    }

    /// Koszul mode: θ must be a block-diagonal 1-form.
    pub fn koszul(theta: EndForm) -> Result<Self> {
        let ok = theta.is_block_diagonal() && theta.terms.keys().all(|k| k.blade.degree() == 1);
        if !ok {
            return Err(Error::Precondition(
                "Koszul connection form must be a block-diagonal 1-form".into(),
            ));
        }
        Ok(SuperConn {
            theta,
            mode: ConnMode::Koszul,
        })
    }

    pub fn with_mode(theta: EndForm, mode: ConnMode) -> Result<Self> {
        match mode {
            ConnMode::General => Self::new(theta),
            ConnMode::Koszul => Self::koszul(theta),
        }
    }

    /// The trivial connection `A = d`.
    pub fn trivial(bundle: SuperBundle, chart: Chart) -> Self {
        SuperConn {
            theta: EndForm::zero(bundle, chart),
            mode: ConnMode::Koszul,
        }
    }

    pub fn theta(&self) -> &EndForm {
        &self.theta
    }

    pub fn mode(&self) -> ConnMode {
        self.mode
    }

    pub fn bundle(&self) -> SuperBundle {
        self.theta.bundle
    }

    pub fn chart(&self) -> Chart {
        self.theta.chart
    }

    /// `[A, g] = dg + θg - (-1)^{|g|} gθ`, applied to each parity piece of `g`.
    pub fn bracket(&self, g: &EndForm) -> Result<EndForm> {
        self.theta.check(g)?;
        let even = g.parity_part(Parity::Even);
        let odd = g.parity_part(Parity::Odd);
        let mut out = g.d();
        out += &self.theta.mul(g);
        out -= &even.mul(&self.theta);
        out += &odd.mul(&self.theta);
        Ok(out)
    }

    /// `F = A² = dθ + θθ`.
    pub fn curvature(&self) -> EndForm {
        let mut f = self.theta.d();
        f += &self.theta.mul(&self.theta);
        f
    }
}

pub fn covariant_bracket(a: &SuperConn, g: &EndForm) -> Result<EndForm> {
    a.bracket(g)
}

pub fn curvature(a: &SuperConn) -> EndForm {
    a.curvature()
}

impl EndForm {
    /// Total parity of a single `(row, col, blade)` slot in this bundle.
    pub fn slot_parity(bundle: SuperBundle, row: usize, col: usize, form_degree: usize) -> Parity {
        Parity::of(form_degree + bundle.parity(row) + bundle.parity(col))
    }
}
