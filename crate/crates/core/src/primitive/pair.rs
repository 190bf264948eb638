//! Pairs of forms `(α, β) ∈ Ω ⊕ Ω` and pairs of End(E)-valued forms.

use std::ops::{Add, Sub};

use crate::coefficients::Rational;
use crate::endforms::{EndForm, Parity};
use crate::error::{Error, Result};
use crate::forms::{Chart, Form, SymplecticForm};

/// A pair of scalar forms, the chain-level object of the primitive complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarPair {
    pub first: Form,
    pub second: Form,
}

impl ScalarPair {
    pub fn new(first: Form, second: Form) -> Result<Self> {
        first.chart().check(second.chart())?;
        Ok(ScalarPair { first, second })
    }

    pub fn zero(chart: Chart) -> Self {
        ScalarPair {
            first: Form::zero(chart),
            second: Form::zero(chart),
        }
    }

    /// `(1, 0)`, the unit of [`pair_product`].
    pub fn unit(chart: Chart) -> Self {
        ScalarPair {
            first: Form::one(chart),
            second: Form::zero(chart),
        }
    }

    pub fn chart(&self) -> Chart {
        self.first.chart()
    }

    pub fn is_zero(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }

    pub fn term_count(&self) -> usize {
        self.first.term_count() + self.second.term_count()
    }

    /// True when the pair lies in `Ω^i ⊕ Ω^{i-1}` (zero components allowed).
    pub fn is_graded(&self, i: usize) -> bool {
        let ok = |f: &Form, k: Option<usize>| match k {
            Some(k) => f.is_zero() || f.degree() == Some(k),
            None => f.is_zero(),
        };
        ok(&self.first, Some(i)) && ok(&self.second, i.checked_sub(1))
    }

    pub fn scale(&self, c: &Rational) -> ScalarPair {
        ScalarPair {
            first: self.first.scale(c),
            second: self.second.scale(c),
        }
    }

    pub fn partial_t(&self) -> ScalarPair {
        ScalarPair {
            first: self.first.partial_t(),
            second: self.second.partial_t(),
        }
    }

    pub fn integrate_t01(&self) -> ScalarPair {
        ScalarPair {
            first: self.first.integrate_t01(),
            second: self.second.integrate_t01(),
        }
    }

    pub fn eval_t(&self, t0: &Rational) -> ScalarPair {
        ScalarPair {
            first: self.first.eval_t(t0),
            second: self.second.eval_t(t0),
        }
    }
}

impl Add for &ScalarPair {
    type Output = ScalarPair;
    fn add(self, rhs: &ScalarPair) -> ScalarPair {
        ScalarPair {
            first: &self.first + &rhs.first,
            second: &self.second + &rhs.second,
        }
    }
}

impl Sub for &ScalarPair {
    type Output = ScalarPair;
    fn sub(self, rhs: &ScalarPair) -> ScalarPair {
        ScalarPair {
            first: &self.first - &rhs.first,
            second: &self.second - &rhs.second,
        }
    }
}

/// `∂(α, β) = (dα + ω∧β, -dβ)`.
pub fn boundary_partial(p: &ScalarPair, omega: &SymplecticForm) -> Result<ScalarPair> {
    p.chart().check(omega.chart())?;
    Ok(ScalarPair {
        first: &p.first.d() + &omega.form().wedge(&p.second),
        second: -p.second.d(),
    })
}

/// `(α1, β1)·(α2, β2) = (α1∧α2, β1∧α2 + (-1)^{|α1|} α1∧β2)`, extended
/// bilinearly over the homogeneous pieces of `α1`.
pub fn pair_product(p: &ScalarPair, q: &ScalarPair) -> Result<ScalarPair> {
    p.chart().check(q.chart())?;
    let first = p.first.wedge(&q.first);
    let mut second = p.second.wedge(&q.first);
    second += &p.first.grade_involution().wedge(&q.second);
    Ok(ScalarPair { first, second })
}

/// Which component of an [`EndPair`] is even in total degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grading {
    EvenFirst,
    OddFirst,
}

impl Grading {
    pub fn flip(self) -> Grading {
        match self {
            Grading::EvenFirst => Grading::OddFirst,
            Grading::OddFirst => Grading::EvenFirst,
        }
    }

    fn parities(self) -> (Parity, Parity) {
        match self {
            Grading::EvenFirst => (Parity::Even, Parity::Odd),
            Grading::OddFirst => (Parity::Odd, Parity::Even),
        }
    }
}

/// A pair `(D, D̃)` of End(E)-valued forms, identified with the operator
/// `(α, β) ↦ (Dα, D̃α + D₁β⁺ - D₂β⁻ - D₃β⁺ + D₄β⁻)` on pairs of E-valued forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndPair {
    first: EndForm,
    second: EndForm,
    grading: Option<Grading>,
}

impl EndPair {
    /// Builds a pair, validating the grading when one is asserted.
    pub fn new(first: EndForm, second: EndForm, grading: Option<Grading>) -> Result<Self> {
        first.bundle().check(second.bundle())?;
        first.chart().check(second.chart())?;
        if let Some(g) = grading {
            let (p1, p2) = g.parities();
            if !first.is_parity(p1) {
                return Err(Error::Parity {
                    what: "first component of the pair".into(),
                    expected: p1.name(),
                });
            }
            if !second.is_parity(p2) {
                return Err(Error::Parity {
                    what: "second component of the pair".into(),
                    expected: p2.name(),
                });
            }
        }
        Ok(EndPair {
            first,
            second,
            grading,
        })
    }

    pub(crate) fn graded_unchecked(first: EndForm, second: EndForm, grading: Grading) -> Self {
        EndPair {
            first,
            second,
            grading: Some(grading),
        }
    }

    pub fn first(&self) -> &EndForm {
        &self.first
    }

    pub fn second(&self) -> &EndForm {
        &self.second
    }

    pub fn grading(&self) -> Option<Grading> {
        self.grading
    }

    /// Checks that the stored components really have the asserted grading.
    pub fn grading_holds(&self) -> bool {
        match self.grading {
            None => true,
            Some(g) => {
                let (p1, p2) = g.parities();
                self.first.is_parity(p1) && self.second.is_parity(p2)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }

    pub fn term_count(&self) -> usize {
        self.first.term_count() + self.second.term_count()
    }

    pub fn into_parts(self) -> (EndForm, EndForm) {
        (self.first, self.second)
    }
}

/// `Str(γ, δ) = (Str γ, Str δ)`.
pub fn str_bold(p: &EndPair) -> ScalarPair {
    ScalarPair {
        first: p.first.supertrace(),
        second: p.second.supertrace(),
    }
}
