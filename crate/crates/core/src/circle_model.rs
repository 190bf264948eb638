//! The formal circle-bundle model: an odd generator `θ` with `dθ = ω` and
//! `θ∧θ = 0`, in which a pair `(α, β)` becomes `α + θ∧β`.

use crate::endforms::{EndForm, Parity};
use crate::error::Result;
use crate::forms::{Chart, Form, SymplecticForm};
use crate::oracle::{apply_endform, EPair, EValuedForm};
use crate::primitive::{PrimSuperConn, ScalarPair};

/// `base + θ∧fiber`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaForm {
    pub base: Form,
    pub fiber: Form,
}

impl ThetaForm {
    pub fn new(base: Form, fiber: Form) -> Result<Self> {
        base.chart().check(fiber.chart())?;
        Ok(ThetaForm { base, fiber })
    }

    pub fn zero(chart: Chart) -> Self {
        ThetaForm {
            base: Form::zero(chart),
            fiber: Form::zero(chart),
        }
    }

    /// The generator `θ` itself.
    pub fn theta(chart: Chart) -> Self {
        ThetaForm {
            base: Form::zero(chart),
            fiber: Form::one(chart),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.fiber.is_zero()
    }

    /// `(a + θ∧b)(c + θ∧e) = ac + θ∧(bc + (-1)^{|a|} a e)`.
    pub fn wedge(&self, other: &ThetaForm) -> ThetaForm {
        let base = self.base.wedge(&other.base);
        let mut fiber = self.fiber.wedge(&other.base);
        fiber += &self.base.grade_involution().wedge(&other.fiber);
        ThetaForm { base, fiber }
    }
}

/// `ι(α, β) = α + θ∧β`.
pub fn iota(p: &ScalarPair) -> ThetaForm {
    ThetaForm {
        base: p.first.clone(),
        fiber: p.second.clone(),
    }
}

pub fn iota_inverse(x: &ThetaForm) -> ScalarPair {
    ScalarPair {
        first: x.base.clone(),
        second: x.fiber.clone(),
    }
}

/// `d(α + θ∧β) = dα + ω∧β - θ∧dβ`, using `dθ = ω`.
pub fn d_s(x: &ThetaForm, omega: &SymplecticForm) -> Result<ThetaForm> {
    x.base.chart().check(omega.chart())?;
    Ok(ThetaForm {
        base: &x.base.d() + &omega.form().wedge(&x.fiber),
        fiber: -x.fiber.d(),
    })
}

/// `base + θ∧fiber` with E-valued parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaEForm {
    pub base: EValuedForm,
    pub fiber: EValuedForm,
}

pub fn iota_e(p: &EPair) -> ThetaEForm {
    ThetaEForm {
        base: p.first.clone(),
        fiber: p.second.clone(),
    }
}

pub fn iota_e_inverse(x: &ThetaEForm) -> EPair {
    EPair {
        first: x.base.clone(),
        second: x.fiber.clone(),
    }
}

/// `s(base + θ∧fiber) = s(base) + θ∧(s_even - s_odd)(fiber)`: `s` moves past `θ`.
fn apply_endform_ext(s: &EndForm, x: &ThetaEForm) -> Result<ThetaEForm> {
    let even = apply_endform(&s.parity_part(Parity::Even), &x.fiber)?;
    let odd = apply_endform(&s.parity_part(Parity::Odd), &x.fiber)?;
    Ok(ThetaEForm {
        base: apply_endform(s, &x.base)?,
        fiber: &even - &odd,
    })
}

/// `d` on π*E-valued forms.
fn d_ext(x: &ThetaEForm, omega: &SymplecticForm) -> ThetaEForm {
    ThetaEForm {
        base: &x.base.d() + &x.fiber.wedge_left(omega.form()),
        fiber: -&x.fiber.d(),
    }
}

/// `θ ∧ (base + θ∧fiber) = θ∧base`.
fn theta_wedge(x: &ThetaEForm) -> ThetaEForm {
    ThetaEForm {
        base: EValuedForm::zero(x.base.bundle(), x.base.chart()),
        fiber: x.base.clone(),
    }
}

/// `(A + θB)` acting on `base + θ∧fiber`.
pub fn apply_circle_superconn(p: &PrimSuperConn, x: &ThetaEForm) -> Result<ThetaEForm> {
    let dx = d_ext(x, p.omega());
    let tx = apply_endform_ext(p.theta(), x)?;
    let bx = theta_wedge(&apply_endform_ext(p.b(), x)?);
    Ok(ThetaEForm {
        base: &(&dx.base + &tx.base) + &bx.base,
        fiber: &(&dx.fiber + &tx.fiber) + &bx.fiber,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endforms::SuperBundle;
    use crate::oracle::{apply_endpair, apply_prim, random_epair};
    use crate::primitive::{boundary_partial, prim_square};
    use crate::random::{self, Bounds, ThetaShape};
    use crate::syntax::parse_form;

    #[test]
    fn d_s_squares_to_zero_and_intertwines() {
        let c = Chart::new(4).unwrap();
        let omega = SymplecticForm::standard(c).unwrap();
        let mut r = random::rng(4);
        let b = Bounds::default();
        for _ in 0..20 {
            let p = ScalarPair::new(random::form(&mut r, c, &b), random::form(&mut r, c, &b)).unwrap();
            let x = iota(&p);
            assert!(d_s(&d_s(&x, &omega).unwrap(), &omega).unwrap().is_zero());
            assert_eq!(d_s(&x, &omega).unwrap(), iota(&boundary_partial(&p, &omega).unwrap()));
        }
        let x = ThetaForm::new(parse_form(c, "x1*dx2").unwrap(), Form::zero(c)).unwrap();
        assert_eq!(d_s(&x, &omega).unwrap().base, parse_form(c, "dx1^dx2").unwrap());
    }

    #[test]
    fn d_theta_is_omega() {
        let c = Chart::new(2).unwrap();
        let omega = SymplecticForm::standard(c).unwrap();
        let dt = d_s(&ThetaForm::theta(c), &omega).unwrap();
        assert_eq!(dt.base, omega.form().clone());
        assert!(dt.fiber.is_zero());
        let t = ThetaForm::theta(c);
        assert!(t.wedge(&t).is_zero());
    }

    #[test]
    fn circle_operator_matches_pairs() {
        let c = Chart::new(2).unwrap();
        let e = SuperBundle::new(1, 1).unwrap();
        let omega = SymplecticForm::standard(c).unwrap();
        let b = Bounds::default();
        let mut r = random::rng(21);
        for _ in 0..10 {
            let p = random::prim_superconn(&mut r, e, c, &omega, ThetaShape::General, &b).unwrap();
            let x = random_epair(&mut r, e, c, &b);
            let y = apply_circle_superconn(&p, &iota_e(&x)).unwrap();
            assert_eq!(y, iota_e(&apply_prim(&p, &x).unwrap()));
            let yy = apply_circle_superconn(&p, &y).unwrap();
            assert_eq!(iota_e_inverse(&yy), apply_endpair(&prim_square(&p), &x).unwrap());
        }
    }
}
