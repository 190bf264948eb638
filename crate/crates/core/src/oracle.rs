//! Operator-level ground truth.
//!
//! End(E)-valued forms, superconnections and primitive superconnections are
//! applied here directly to E-valued forms, using only the action rule
//! `(α⊗L)(β⊗v) = (-1)^{|L||β|} (α∧β)⊗L(v)`. Nothing in this module calls
//! [`crate::endforms::end_mul`], so it can be used to check the closed formulas.

use std::ops::{Add, Neg, Sub};

use rand::Rng;

use crate::endforms::{EndForm, Parity, SuperBundle, SuperConn};
use crate::error::{Error, Result};
use crate::forms::{Chart, Form};
use crate::primitive::{prim_power, EndPair, PrimSuperConn};
use crate::random::{self, Bounds};

/// An E-valued form `Σ_i α_i ⊗ e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EValuedForm {
    bundle: SuperBundle,
    chart: Chart,
    comps: Vec<Form>,
}

impl EValuedForm {
    pub fn zero(bundle: SuperBundle, chart: Chart) -> Self {
        EValuedForm {
            bundle,
            chart,
            comps: vec![Form::zero(chart); bundle.rank()],
        }
    }

    pub fn new(bundle: SuperBundle, chart: Chart, comps: Vec<Form>) -> Result<Self> {
        if comps.len() != bundle.rank() {
            return Err(Error::DimensionMismatch {
                left: comps.len(),
                right: bundle.rank(),
            });
        }
        for c in &comps {
            chart.check(c.chart())?;
        }
        Ok(EValuedForm {
            bundle,
            chart,
            comps,
        })
    }

    /// The constant section `e_i`.
    pub fn basis(bundle: SuperBundle, chart: Chart, i: usize) -> Result<Self> {
        bundle.check_index(i)?;
        let mut v = EValuedForm::zero(bundle, chart);
        v.comps[i] = Form::one(chart);
        Ok(v)
    }

    pub fn bundle(&self) -> SuperBundle {
        self.bundle
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn comps(&self) -> &[Form] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Form {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Form::is_zero)
    }

    fn check(&self, other: &EValuedForm) -> Result<()> {
        self.bundle.check(other.bundle)?;
        self.chart.check(other.chart)
    }

    fn map(&self, f: impl Fn(usize, &Form) -> Form) -> EValuedForm {
        EValuedForm {
            bundle: self.bundle,
            chart: self.chart,
            comps: self.comps.iter().enumerate().map(|(i, c)| f(i, c)).collect(),
        }
    }

    /// Terms of the given total parity (form degree plus section parity).
    pub fn parity_part(&self, p: Parity) -> EValuedForm {
        let want = match p {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        self.map(|i, c| c.filter(|bl| (bl.degree() + self.bundle.parity(i)) % 2 == want))
    }

    /// `β ∧ v`, componentwise.
    pub fn wedge_left(&self, beta: &Form) -> EValuedForm {
        self.map(|_, c| beta.wedge(c))
    }

    /// Componentwise exterior derivative.
    pub fn d(&self) -> EValuedForm {
        self.map(|_, c| c.d())
    }
}

impl Add for &EValuedForm {
    type Output = EValuedForm;
    fn add(self, rhs: &EValuedForm) -> EValuedForm {
        self.check(rhs).expect("mismatched E-valued forms");
        self.map(|i, c| c + &rhs.comps[i])
    }
}

impl Sub for &EValuedForm {
    type Output = EValuedForm;
    fn sub(self, rhs: &EValuedForm) -> EValuedForm {
        self.check(rhs).expect("mismatched E-valued forms");
        self.map(|i, c| c - &rhs.comps[i])
    }
}

impl Neg for &EValuedForm {
    type Output = EValuedForm;
    fn neg(self) -> EValuedForm {
        self.map(|_, c| -c)
    }
}

/// An element of `Ω(M,E) ⊕ Ω(M,E)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EPair {
    pub first: EValuedForm,
    pub second: EValuedForm,
}

impl EPair {
    pub fn new(first: EValuedForm, second: EValuedForm) -> Result<Self> {
        first.check(&second)?;
        Ok(EPair { first, second })
    }

    pub fn zero(bundle: SuperBundle, chart: Chart) -> Self {
        EPair {
            first: EValuedForm::zero(bundle, chart),
            second: EValuedForm::zero(bundle, chart),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }
}

/// `s(v)` with the Koszul sign between each endomorphism and the form part of `v`.
pub fn apply_endform(s: &EndForm, v: &EValuedForm) -> Result<EValuedForm> {
    s.bundle().check(v.bundle)?;
    s.chart().check(v.chart)?;
    let bundle = v.bundle;
    let mut out = EValuedForm::zero(bundle, v.chart);
    for (a, b, alpha) in s.entries() {
        let src = &v.comps[b];
        if src.is_zero() {
            continue;
        }
        let l_odd = (bundle.parity(a) + bundle.parity(b)) % 2 == 1;
        let moved = if l_odd { src.grade_involution() } else { src.clone() };
        out.comps[a] += &alpha.wedge(&moved);
    }
    Ok(out)
}

/// `A v = dv + θ(v)`.
pub fn apply_conn(a: &SuperConn, v: &EValuedForm) -> Result<EValuedForm> {
    Ok(&v.d() + &apply_endform(a.theta(), v)?)
}

/// `𝔸(α, β) = (Aα + ω∧β, Bα - Aβ)`.
pub fn apply_prim(p: &PrimSuperConn, x: &EPair) -> Result<EPair> {
    let first = &apply_conn(p.conn(), &x.first)? + &x.second.wedge_left(p.omega().form());
    let second = &apply_endform(p.b(), &x.first)? - &apply_conn(p.conn(), &x.second)?;
    EPair::new(first, second)
}

/// `(α, β) ↦ (Dα, D̃α + D₁β⁺ - D₂β⁻ - D₃β⁺ + D₄β⁻)`, with the blocks of `D`
/// taken with respect to total parity.
pub fn apply_endpair(q: &EndPair, x: &EPair) -> Result<EPair> {
    let d = q.first();
    let first = apply_endform(d, &x.first)?;
    let plus = apply_endform(d, &x.second.parity_part(Parity::Even))?;
    let minus = apply_endform(d, &x.second.parity_part(Parity::Odd))?;
    let d1 = plus.parity_part(Parity::Even);
    let d3 = plus.parity_part(Parity::Odd);
    let d2 = minus.parity_part(Parity::Even);
    let d4 = minus.parity_part(Parity::Odd);
    let mut second = apply_endform(q.second(), &x.first)?;
    second = &second + &d1;
    second = &second - &d2;
    second = &second - &d3;
    second = &second + &d4;
    EPair::new(first, second)
}

/// `𝔸^n` applied as an operator.
pub fn apply_prim_n(p: &PrimSuperConn, x: &EPair, n: usize) -> Result<EPair> {
    let mut y = x.clone();
    for _ in 0..n {
        y = apply_prim(p, &y)?;
    }
    Ok(y)
}

/// A random E-valued form with mixed degrees.
pub fn random_evalued<R: Rng>(rng: &mut R, bundle: SuperBundle, chart: Chart, b: &Bounds) -> EValuedForm {
    let comps = (0..bundle.rank())
        .map(|_| {
            if rng.gen_bool(0.3) {
                Form::zero(chart)
            } else {
                random::form(rng, chart, b)
            }
        })
        .collect();
    EValuedForm {
        bundle,
        chart,
        comps,
    }
}

pub fn random_epair<R: Rng>(rng: &mut R, bundle: SuperBundle, chart: Chart, b: &Bounds) -> EPair {
    EPair {
        first: random_evalued(rng, bundle, chart, b),
        second: random_evalued(rng, bundle, chart, b),
    }
}

/// Number of random `(β, α)` probes used by [`identify_operator`].
pub const DEFAULT_PROBES: usize = 8;

/// Checks `T(β∧α) = β∧T₁α⁺ + (-1)^{|β|}β∧T₂α⁻ + (-1)^{|β|}β∧T₃α⁺ + β∧T₄α⁻`
/// for a homogeneous scalar form `β`.
fn supercommutes(
    t: &dyn Fn(&EValuedForm) -> Result<EValuedForm>,
    beta: &Form,
    alpha: &EValuedForm,
) -> Result<bool> {
    let odd_beta = beta.degree().unwrap_or(0) % 2 == 1;
    let lhs = t(&alpha.wedge_left(beta))?;
    let mut rhs = EValuedForm::zero(alpha.bundle, alpha.chart);
    for p_in in [Parity::Even, Parity::Odd] {
        let image = t(&alpha.parity_part(p_in))?;
        for p_out in [Parity::Even, Parity::Odd] {
            let piece = image.parity_part(p_out).wedge_left(beta);
            if odd_beta && p_in != p_out {
                rhs = &rhs - &piece;
            } else {
                rhs = &rhs + &piece;
            }
        }
    }
    Ok(lhs == rhs)
}

/// Recovers the pair `(D, D̃)` that a linear operator on `Ω(M,E) ⊕ Ω(M,E)` is
/// identified with, after checking that it is of the identifiable shape.
pub fn identify_operator(
    op: &dyn Fn(&EPair) -> Result<EPair>,
    bundle: SuperBundle,
    chart: Chart,
    probes: usize,
    seed: u64,
) -> Result<EndPair> {
    let zero = EValuedForm::zero(bundle, chart);
    let mut d_cols = Vec::new();
    let mut dt_cols = Vec::new();
    for c in 0..bundle.rank() {
        let e = EValuedForm::basis(bundle, chart, c)?;
        let y = op(&EPair::new(e, zero.clone())?)?;
        d_cols.push(y.first);
        dt_cols.push(y.second);
    }
    let assemble = |cols: &[EValuedForm]| -> Result<EndForm> {
        let mut out = EndForm::zero(bundle, chart);
        for (c, col) in cols.iter().enumerate() {
            for (a, f) in col.comps.iter().enumerate() {
                if !f.is_zero() {
                    out += &EndForm::entry(bundle, a, c, f)?;
                }
            }
        }
        Ok(out)
    };
    let cand = EndPair::new(assemble(&d_cols)?, assemble(&dt_cols)?, None)?;

    let mut rng = random::rng(seed);
    let b = Bounds::default();
    let pieces: [(&str, Box<dyn Fn(&EValuedForm) -> Result<EValuedForm>>); 3] = [
        ("D", Box::new(|v| Ok(op(&EPair::new(v.clone(), zero.clone())?)?.first))),
        ("D̃", Box::new(|v| Ok(op(&EPair::new(v.clone(), zero.clone())?)?.second))),
        ("second slot", Box::new(|v| Ok(op(&EPair::new(zero.clone(), v.clone())?)?.second))),
    ];
    for i in 0..probes {
        let deg = rng.gen_range(0..=chart.dim().min(2));
        let mut beta = Form::term(chart, random::blade(&mut rng, chart, deg), random::nonconstant_poly(&mut rng, chart, 1));
        if rng.gen_bool(0.5) {
            beta += &random::form_of_degree(&mut rng, chart, deg, &b);
        }
        let alpha = random_evalued(&mut rng, bundle, chart, &b);
        for (name, t) in &pieces {
            if !supercommutes(t.as_ref(), &beta, &alpha)? {
                return Err(Error::NotIdentifiable(format!(
                    "{name} does not supercommute with forms (probe {i}, β = {beta})"
                )));
            }
        }
    }
    for i in 0..probes {
        let x = random_epair(&mut rng, bundle, chart, &b);
        if op(&x)? != apply_endpair(&cand, &x)? {
            return Err(Error::NotIdentifiable(format!(
                "reconstruction from basis sections disagrees on random pair {i}"
            )));
        }
    }
    Ok(cand)
}

/// Compares `𝔸^{2k}` as an operator with the action of [`prim_power`] on
/// `samples` random pairs.
pub fn power_equivalence(p: &PrimSuperConn, k: usize, samples: usize, seed: u64) -> Result<bool> {
    let target = prim_power(p, k)?;
    let mut rng = random::rng(seed);
    let b = Bounds::default();
    for _ in 0..samples {
        let x = random_epair(&mut rng, p.bundle(), p.chart(), &b);
        if apply_prim_n(p, &x, 2 * k)? != apply_endpair(&target, &x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Identifies `𝔸^{2k}` from the operator alone and compares with [`prim_power`].
pub fn identified_power_matches(p: &PrimSuperConn, k: usize, probes: usize, seed: u64) -> Result<bool> {
    let op = |x: &EPair| apply_prim_n(p, x, 2 * k);
    let found = identify_operator(&op, p.bundle(), p.chart(), probes, seed)?;
    let target = prim_power(p, k)?;
    Ok(found.first() == target.first() && found.second() == target.second())
}
