//! Primitive superconnections `𝔸 = (A, B, ω)` and their even powers.

use num::Zero;

use crate::coefficients::Rational;
use crate::endforms::{EndForm, Parity, SuperBundle, SuperConn};
use crate::error::{Error, Result};
use crate::forms::{Chart, SymplecticForm};

use super::pair::{boundary_partial, str_bold, EndPair, Grading, ScalarPair};

/// The operator `(α, β) ↦ (Aα + ω∧β, Bα - Aβ)` on pairs of E-valued forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimSuperConn {
    conn: SuperConn,
    b: EndForm,
    omega: SymplecticForm,
}

impl PrimSuperConn {
    pub fn new(conn: SuperConn, b: EndForm, omega: SymplecticForm) -> Result<Self> {
        conn.bundle().check(b.bundle())?;
        conn.chart().check(b.chart())?;
        conn.chart().check(omega.chart())?;
        if !b.is_parity(Parity::Even) {
            return Err(Error::Parity {
                what: "B".into(),
                expected: "even",
            });
        }
        Ok(PrimSuperConn { conn, b, omega })
    }

    pub fn conn(&self) -> &SuperConn {
        &self.conn
    }

    pub fn theta(&self) -> &EndForm {
        self.conn.theta()
    }

    pub fn b(&self) -> &EndForm {
        &self.b
    }

    pub fn omega(&self) -> &SymplecticForm {
        &self.omega
    }

    pub fn bundle(&self) -> SuperBundle {
        self.conn.bundle()
    }

    pub fn chart(&self) -> Chart {
        self.conn.chart()
    }

    /// `X = F + ω∧B`.
    pub fn x(&self) -> EndForm {
        let mut x = self.conn.curvature();
        x += &self.b.wedge_left(self.omega.form());
        x
    }

    /// `G = BA - AB = -[A, B]`.
    pub fn g(&self) -> EndForm {
        -self.conn.bracket(&self.b).expect("validated at construction")
    }

    /// Iterator over `(X^k, S_k)` for `k = 0, 1, 2, ...`.
    pub fn powers(&self) -> SquarePowers {
        SquarePowers::new(self.x(), self.g())
    }
}

/// Successive even powers `𝔸^{2k} = (X^k, S_k)` with
/// `S_{k+1} = S_k X + X^k G` and `S_0 = 0`.
pub struct SquarePowers {
    x: EndForm,
    g: EndForm,
    xk: EndForm,
    sk: EndForm,
    k: usize,
}

impl SquarePowers {
    pub fn new(x: EndForm, g: EndForm) -> Self {
        let id = EndForm::identity(x.bundle(), x.chart());
        let zero = EndForm::zero(x.bundle(), x.chart());
        SquarePowers {
            x,
            g,
            xk: id,
            sk: zero,
            k: 0,
        }
    }

    /// Current exponent `k`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn xk(&self) -> &EndForm {
        &self.xk
    }

    pub fn sk(&self) -> &EndForm {
        &self.sk
    }

    /// True once both components vanish, after which every later power is zero.
    pub fn exhausted(&self) -> bool {
        self.xk.is_zero() && self.sk.is_zero()
    }

    pub fn advance(&mut self) {
        let mut s = self.sk.mul(&self.x);
        s += &self.xk.mul(&self.g);
        self.sk = s;
        self.xk = self.xk.mul(&self.x);
        self.k += 1;
    }

    pub fn pair(&self) -> EndPair {
        EndPair::graded_unchecked(self.xk.clone(), self.sk.clone(), Grading::EvenFirst)
    }
}

/// `𝔸² = (F + ω∧B, G)`.
pub fn prim_square(p: &PrimSuperConn) -> EndPair {
    EndPair::graded_unchecked(p.x(), p.g(), Grading::EvenFirst)
}

/// `𝔸^{2k} = ((F+ωB)^k, Σ_i (F+ωB)^i G (F+ωB)^{k-1-i})`.
pub fn prim_power(p: &PrimSuperConn, k: usize) -> Result<EndPair> {
    if k == 0 {
        return Err(Error::Precondition("prim_power needs k >= 1".into()));
    }
    let mut it = p.powers();
    while it.k() < k {
        it.advance();
    }
    Ok(it.pair())
}

/// `⟦𝔸, (α, β)⟧ = ([A, α] + ω∧β, Bα - αB - [A, β])`.
pub fn prim_bracket(p: &PrimSuperConn, q: &EndPair) -> Result<EndPair> {
    p.bundle().check(q.first().bundle())?;
    p.chart().check(q.first().chart())?;
    let mut first = p.conn.bracket(q.first())?;
    first += &q.second().wedge_left(p.omega.form());
    let mut second = p.b.mul(q.first());
    second -= &q.first().mul(&p.b);
    second -= &p.conn.bracket(q.second())?;
    Ok(match q.grading() {
        Some(g) => EndPair::graded_unchecked(first, second, g.flip()),
        None => EndPair::new(first, second, None)?,
    })
}

/// `⟦𝔸, 𝔸^{2k}⟧`, which should vanish identically.
pub fn bianchi_residual(p: &PrimSuperConn, k: usize) -> Result<EndPair> {
    prim_bracket(p, &prim_power(p, k)?)
}

/// `f(𝔸²) = Σ_k f_k 𝔸^{2k}` with `f = [f_0, f_1, ...]`.
pub fn eval_poly_at_square(f: &[Rational], p: &PrimSuperConn) -> EndPair {
    let (bundle, chart) = (p.bundle(), p.chart());
    let mut first = EndForm::zero(bundle, chart);
    let mut second = EndForm::zero(bundle, chart);
    let last = match f.iter().rposition(|c| !c.is_zero()) {
        Some(i) => i,
        None => return EndPair::graded_unchecked(first, second, Grading::EvenFirst),
    };
    let mut it = p.powers();
    loop {
        let c = &f[it.k()];
        if !c.is_zero() {
            first += &it.xk().scale(c);
            second += &it.sk().scale(c);
        }
        if it.k() == last || it.exhausted() {
            break;
        }
        it.advance();
    }
    EndPair::graded_unchecked(first, second, Grading::EvenFirst)
}

/// `∂ Str f(𝔸²)`, which should vanish identically.
pub fn closedness_residual(f: &[Rational], p: &PrimSuperConn) -> Result<ScalarPair> {
    boundary_partial(&str_bold(&eval_poly_at_square(f, p)), &p.omega)
}

/// Coefficients of `f'` for `f = [f_0, f_1, ...]`.
pub fn derivative_coeffs(f: &[Rational]) -> Vec<Rational> {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rational::from_integer(k.into()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{int, rat};
    use crate::forms::Form;
    use crate::syntax::parse_form;

    fn rank10(m: usize, b: &str) -> PrimSuperConn {
        let c = Chart::new(m).unwrap();
        let e = SuperBundle::new(1, 0).unwrap();
        let b = EndForm::entry(e, 0, 0, &parse_form(c, b).unwrap()).unwrap();
        PrimSuperConn::new(SuperConn::trivial(e, c), b, SymplecticForm::standard(c).unwrap())
            .unwrap()
    }

    fn e11(p: &EndForm) -> Form {
        p.form_at(0, 0)
    }

    #[test]
    fn square_of_rank_one_scalar_b() {
        let p = rank10(2, "x1^2 + x2");
        let sq = prim_square(&p);
        let c = p.chart();
        assert_eq!(e11(sq.first()), parse_form(c, "(x1^2 + x2)*dx1^dx2").unwrap());
        assert_eq!(e11(sq.second()), parse_form(c, "-2*x1*dx1 - dx2").unwrap());
    }

    #[test]
    fn rank_one_power_closed_form() {
        let p = rank10(4, "x1*x3 + 1");
        let c = p.chart();
        let b = parse_form(c, "x1*x3 + 1").unwrap();
        let omega = p.omega().form().clone();
        for k in 1..=3 {
            let pk = prim_power(&p, k).unwrap();
            let mut bk = Form::one(c);
            let mut wk = Form::one(c);
            for _ in 0..k - 1 {
                bk = bk.wedge(&b);
                wk = wk.wedge(&omega);
            }
            let second = bk.wedge(&wk).wedge(&b.d()).scale(&int(-(k as i64)));
            let first = bk.wedge(&b).wedge(&wk.wedge(&omega));
            assert_eq!(e11(pk.first()), first, "k = {k}");
            assert_eq!(e11(pk.second()), second, "k = {k}");
            assert!(pk.grading_holds());
        }
    }

    #[test]
    fn bianchi_on_a_fixed_example() {
        let c = Chart::new(2).unwrap();
        let e = SuperBundle::new(1, 1).unwrap();
        let theta = EndForm::from_entries(
            e,
            c,
            [
                (0, 0, &parse_form(c, "x2*dx1").unwrap()),
                (0, 1, &parse_form(c, "x1").unwrap()),
                (1, 0, &parse_form(c, "x1*x2 + 1").unwrap()),
                (1, 1, &parse_form(c, "dx2").unwrap()),
            ],
        )
        .unwrap();
        let b = EndForm::from_entries(
            e,
            c,
            [
                (0, 0, &parse_form(c, "x1^2").unwrap()),
                (0, 1, &parse_form(c, "x2*dx1").unwrap()),
                (1, 1, &parse_form(c, "3/2 + dx1^dx2").unwrap()),
            ],
        )
        .unwrap();
        let p = PrimSuperConn::new(
            SuperConn::new(theta).unwrap(),
            b,
            SymplecticForm::standard(c).unwrap(),
        )
        .unwrap();
        for k in 1..=3 {
            assert!(bianchi_residual(&p, k).unwrap().is_zero(), "k = {k}");
        }
        let f = [rat(1, 3), int(-2), int(1), rat(5, 7)];
        assert!(closedness_residual(&f, &p).unwrap().is_zero());
    }

    #[test]
    fn bracket_of_identity_is_zero_and_grading_flips() {
        let p = rank10(2, "x1");
        let (e, c) = (p.bundle(), p.chart());
        let q = EndPair::new(EndForm::identity(e, c), EndForm::zero(e, c), Some(Grading::EvenFirst))
            .unwrap();
        let r = prim_bracket(&p, &q).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.grading(), Some(Grading::OddFirst));
    }

    #[test]
    fn b_must_be_even() {
        let c = Chart::new(2).unwrap();
        let e = SuperBundle::new(1, 0).unwrap();
        let b = EndForm::entry(e, 0, 0, &parse_form(c, "dx1").unwrap()).unwrap();
        let r = PrimSuperConn::new(SuperConn::trivial(e, c), b, SymplecticForm::standard(c).unwrap());
        assert!(matches!(r, Err(Error::Parity { .. })));
    }

    #[test]
    fn poly_evaluation_special_cases() {
        let p = rank10(2, "x2");
        let one = eval_poly_at_square(&[int(3)], &p);
        assert_eq!(e11(one.first()), Form::constant(p.chart(), int(3)));
        assert!(one.second().is_zero());
        assert_eq!(eval_poly_at_square(&[int(0), int(1)], &p), prim_square(&p));
        assert_eq!(derivative_coeffs(&[int(4), int(1), int(3)]), vec![int(1), int(6)]);
    }
}
