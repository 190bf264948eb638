//! Polynomial-in-`t` families of primitive superconnections and transgression.

use num::Zero;

use crate::coefficients::{Poly, Rational};
use crate::endforms::{ConnMode, EndForm, Parity, SuperConn};
use crate::error::{Error, Result};
use crate::forms::SymplecticForm;

use super::conn::{eval_poly_at_square, PrimSuperConn};
use super::pair::{boundary_partial, str_bold, EndPair, Grading, ScalarPair};

/// `𝔸_t` with `θ_t`, `B_t` polynomial in the last chart variable `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimFamily {
    theta_t: EndForm,
    b_t: EndForm,
    omega: SymplecticForm,
    mode: ConnMode,
}

impl PrimFamily {
    pub fn new(theta_t: EndForm, b_t: EndForm, omega: SymplecticForm, mode: ConnMode) -> Result<Self> {
        let fam = PrimFamily {
            theta_t,
            b_t,
            omega,
            mode,
        };
        fam.symbolic()?;
        Ok(fam)
    }

    /// `t𝔸₁ + (1-t)𝔸₀`; the endpoints must not depend on `t`.
    pub fn affine(p0: &PrimSuperConn, p1: &PrimSuperConn) -> Result<Self> {
        p0.bundle().check(p1.bundle())?;
        p0.chart().check(p1.chart())?;
        if p0.omega() != p1.omega() {
            return Err(Error::SymplecticMismatch);
        }
        for p in [p0, p1] {
            if p.theta().t_degree() > 0 || p.b().t_degree() > 0 {
                return Err(Error::Precondition(
                    "endpoints of an affine family must not depend on t".into(),
                ));
            }
        }
        let nvars = p0.chart().nvars();
        let t = Poly::var(nvars, nvars - 1)?;
        let one_minus_t = &Poly::one(nvars) - &t;
        let lerp = |a: &EndForm, b: &EndForm| {
            let mut out = a.scale_poly(&one_minus_t);
            out += &b.scale_poly(&t);
            out
        };
        let mode = match (p0.conn().mode(), p1.conn().mode()) {
            (ConnMode::Koszul, ConnMode::Koszul) => ConnMode::Koszul,
            _ => ConnMode::General,
        };
        PrimFamily::new(
            lerp(p0.theta(), p1.theta()),
            lerp(p0.b(), p1.b()),
            p0.omega().clone(),
            mode,
        )
    }

    /// The family as one primitive superconnection with `t`-dependent coefficients.
    pub fn symbolic(&self) -> Result<PrimSuperConn> {
        PrimSuperConn::new(
            SuperConn::with_mode(self.theta_t.clone(), self.mode)?,
            self.b_t.clone(),
            self.omega.clone(),
        )
    }

    pub fn theta_t(&self) -> &EndForm {
        &self.theta_t
    }

    pub fn b_t(&self) -> &EndForm {
        &self.b_t
    }

    pub fn omega(&self) -> &SymplecticForm {
        &self.omega
    }

    pub fn mode(&self) -> ConnMode {
        self.mode
    }
}

/// Substitutes `t = t₀`.
pub fn family_at(fam: &PrimFamily, t0: &Rational) -> Result<PrimSuperConn> {
    PrimSuperConn::new(
        SuperConn::with_mode(fam.theta_t.eval_t(t0), fam.mode)?,
        fam.b_t.eval_t(t0),
        fam.omega.clone(),
    )
}

/// `d𝔸_t/dt`, identified with `(dθ_t/dt, dB_t/dt)`.
pub fn family_velocity(fam: &PrimFamily) -> EndPair {
    let td = fam.theta_t.partial_t();
    let bd = fam.b_t.partial_t();
    debug_assert!(td.is_parity(Parity::Odd) && bd.is_parity(Parity::Even));
    EndPair::graded_unchecked(td, bd, Grading::OddFirst)
}

/// `(d𝔸_t/dt) f'(𝔸_t²) = Σ_k k f_k (θ̇ X^{k-1}, Ḃ X^{k-1} - θ̇ S_{k-1})`.
pub fn velocity_times_fprime(fam: &PrimFamily, f: &[Rational]) -> Result<EndPair> {
    let p = fam.symbolic()?;
    let vel = family_velocity(fam);
    let (td, bd) = (vel.first(), vel.second());
    let mut first = EndForm::zero(p.bundle(), p.chart());
    let mut second = EndForm::zero(p.bundle(), p.chart());
    let Some(last) = f.iter().rposition(|c| !c.is_zero()) else {
        return Ok(EndPair::graded_unchecked(first, second, Grading::OddFirst));
    };
    if last == 0 {
        return Ok(EndPair::graded_unchecked(first, second, Grading::OddFirst));
    }
    let mut it = p.powers();
    for k in 1..=last {
        let c = &f[k] * Rational::from_integer(k.into());
        if !c.is_zero() {
            let tx = td.mul(it.xk());
            first += &tx.scale(&c);
            let mut s = bd.mul(it.xk());
            s -= &td.mul(it.sk());
            second += &s.scale(&c);
        }
        if it.exhausted() {
            break;
        }
        it.advance();
    }
    Ok(EndPair::graded_unchecked(first, second, Grading::OddFirst))
}

/// `d/dt Str f(𝔸_t²) - ∂ Str((d𝔸_t/dt) f'(𝔸_t²))`, kept as a polynomial in `t`.
pub fn transgression_residual(fam: &PrimFamily, f: &[Rational]) -> Result<ScalarPair> {
    let p = fam.symbolic()?;
    let lhs = str_bold(&eval_poly_at_square(f, &p)).partial_t();
    let rhs = boundary_partial(&str_bold(&velocity_times_fprime(fam, f)?), &fam.omega)?;
    Ok(&lhs - &rhs)
}

/// Both sides of `Str f(𝔸₁²) - Str f(𝔸₀²) = ∂ ∫₀¹ Str((𝔸₁ - 𝔸₀) f'(𝔸_t²)) dt`.
pub fn transgress_between(
    f: &[Rational],
    p0: &PrimSuperConn,
    p1: &PrimSuperConn,
) -> Result<(ScalarPair, ScalarPair)> {
    let fam = PrimFamily::affine(p0, p1)?;
    let lhs = &str_bold(&eval_poly_at_square(f, p1)) - &str_bold(&eval_poly_at_square(f, p0));
    let integrand = str_bold(&velocity_times_fprime(&fam, f)?);
    let rhs = boundary_partial(&integrand.integrate_t01(), &fam.omega)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{int, rat};
    use crate::endforms::SuperBundle;
    use crate::forms::Chart;
    use crate::primitive::conn::prim_square;
    use crate::syntax::parse_form;

    fn conn(c: Chart, e: SuperBundle, theta: &[(usize, usize, &str)], b: &[(usize, usize, &str)]) -> PrimSuperConn {
        let entries = |xs: &[(usize, usize, &str)]| {
            let forms: Vec<_> = xs.iter().map(|(r, c2, s)| (*r, *c2, parse_form(c, s).unwrap())).collect();
            EndForm::from_entries(e, c, forms.iter().map(|(r, c2, f)| (*r, *c2, f))).unwrap()
        };
        PrimSuperConn::new(
            SuperConn::new(entries(theta)).unwrap(),
            entries(b),
            SymplecticForm::standard(c).unwrap(),
        )
        .unwrap()
    }

    fn endpoints() -> (PrimSuperConn, PrimSuperConn) {
        let c = Chart::new(2).unwrap();
        let e = SuperBundle::new(1, 1).unwrap();
        let p0 = conn(c, e, &[(0, 0, "x1*dx2"), (1, 0, "x2")], &[(0, 0, "x1"), (1, 1, "1")]);
        let p1 = conn(
            c,
            e,
            &[(0, 1, "x1^2 + 1"), (1, 1, "dx1 - x2*dx2")],
            &[(0, 1, "dx2"), (1, 1, "x1*x2")],
        );
        (p0, p1)
    }

    #[test]
    fn affine_endpoints_and_midpoint() {
        let (p0, p1) = endpoints();
        let fam = PrimFamily::affine(&p0, &p1).unwrap();
        assert_eq!(family_at(&fam, &int(0)).unwrap(), p0);
        let at1 = family_at(&fam, &int(1)).unwrap();
        assert_eq!(at1.theta(), p1.theta());
        assert_eq!(at1.b(), p1.b());
        let mid = family_at(&fam, &rat(1, 2)).unwrap();
        let half = rat(1, 2);
        assert_eq!(mid.b(), &(&p0.b().scale(&half) + &p1.b().scale(&half)));
        let vel = family_velocity(&fam);
        assert_eq!(vel.first(), &(p1.theta() - p0.theta()));
        assert_eq!(vel.second(), &(p1.b() - p0.b()));
    }

    #[test]
    fn linear_f_gives_velocity() {
        let (p0, p1) = endpoints();
        let fam = PrimFamily::affine(&p0, &p1).unwrap();
        let v = velocity_times_fprime(&fam, &[int(5), int(1)]).unwrap();
        assert_eq!(v, family_velocity(&fam));
    }

    #[test]
    fn transgression_vanishes() {
        let (p0, p1) = endpoints();
        let fam = PrimFamily::affine(&p0, &p1).unwrap();
        for f in [vec![int(0), int(1)], vec![int(1), int(-1), rat(1, 2), rat(-1, 6)]] {
            assert!(transgression_residual(&fam, &f).unwrap().is_zero());
            let (lhs, rhs) = transgress_between(&f, &p0, &p1).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn same_endpoints_give_zero() {
        let (p0, _) = endpoints();
        let (lhs, rhs) = transgress_between(&[int(0), int(0), int(1)], &p0, &p0).unwrap();
        assert!(lhs.is_zero() && rhs.is_zero());
        let fam = PrimFamily::affine(&p0, &p0).unwrap();
        assert!(family_velocity(&fam).is_zero());
        assert_eq!(prim_square(&family_at(&fam, &rat(1, 3)).unwrap()), prim_square(&p0));
    }

    #[test]
    fn mismatched_omega_rejected() {
        let (p0, _) = endpoints();
        let c = p0.chart();
        let p1 = PrimSuperConn::new(
            p0.conn().clone(),
            p0.b().clone(),
            SymplecticForm::zero(c),
        )
        .unwrap();
        assert!(matches!(
            transgress_between(&[int(1)], &p0, &p1),
            Err(Error::SymplecticMismatch)
        ));
    }
}
