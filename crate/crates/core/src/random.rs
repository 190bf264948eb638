//! Seeded random generators for polynomials, forms and End(E)-valued forms.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coefficients::{Monomial, Poly, Rational};
use crate::endforms::{EndForm, Parity, SuperBundle, SuperConn};
use crate::error::{Error, Result};
use crate::forms::{Blade, Chart, Form, SymplecticForm};
use crate::primitive::PrimSuperConn;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for generated objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_poly_deg: u32,
    pub max_form_deg: usize,
    pub max_terms: usize,
}

impl Bounds {
    pub fn new(max_poly_deg: u32, max_form_deg: usize, max_terms: usize) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::InvalidBounds("max_terms must be at least 1".into()));
        }
        if max_poly_deg > 8 {
            return Err(Error::InvalidBounds(format!(
                "polynomial degree {max_poly_deg} is above the supported limit 8"
            )));
        }
        Ok(Bounds {
            max_poly_deg,
            max_form_deg,
            max_terms,
        })
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_poly_deg: 2,
            max_form_deg: 2,
            max_terms: 2,
        }
    }
}

/// A small nonzero rational, mostly integers.
pub fn coeff<R: Rng>(rng: &mut R) -> Rational {
    let mut n: i64 = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        n = -n;
    }
    let d: i64 = if rng.gen_bool(0.25) { rng.gen_range(2..=3) } else { 1 };
    Rational::new(n.into(), d.into())
}

/// A monomial in `x1..xm` (never `t`) of total degree at most `max_deg`.
pub fn monomial<R: Rng>(rng: &mut R, chart: Chart, max_deg: u32) -> Monomial {
    let mut exps = vec![0u16; chart.nvars()];
    let deg = rng.gen_range(0..=max_deg);
    for _ in 0..deg {
        exps[rng.gen_range(0..chart.dim())] += 1;
    }
    Monomial::from_exponents(&exps)
}

pub fn poly<R: Rng>(rng: &mut R, chart: Chart, max_deg: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(chart.nvars());
    for _ in 0..terms {
        p += &Poly::term(coeff(rng), monomial(rng, chart, max_deg));
    }
    p
}

/// A polynomial with at least one nonconstant monomial (when `max_deg > 0`).
pub fn nonconstant_poly<R: Rng>(rng: &mut R, chart: Chart, max_deg: u32) -> Poly {
    loop {
        let mut exps = vec![0u16; chart.nvars()];
        exps[rng.gen_range(0..chart.dim())] = 1;
        let p = &poly(rng, chart, max_deg, 1) + &Poly::term(coeff(rng), Monomial::from_exponents(&exps));
        if max_deg == 0 || !p.is_constant() {
            return p;
        }
    }
}

pub fn blade<R: Rng>(rng: &mut R, chart: Chart, deg: usize) -> Blade {
    let deg = deg.min(chart.dim());
    let idx = sample(rng, chart.dim(), deg).into_vec();
    Blade::from_indices(&idx).expect("distinct indices").0
}

/// A homogeneous form of the given degree with up to `b.max_terms` terms.
pub fn form_of_degree<R: Rng>(rng: &mut R, chart: Chart, deg: usize, b: &Bounds) -> Form {
    let mut f = Form::zero(chart);
    let n = rng.gen_range(1..=b.max_terms);
    for _ in 0..n {
        let bl = blade(rng, chart, deg);
        f += &Form::term(chart, bl, poly(rng, chart, b.max_poly_deg, 1));
    }
    f
}

/// A form with terms of random degrees up to `b.max_form_deg`.
pub fn form<R: Rng>(rng: &mut R, chart: Chart, b: &Bounds) -> Form {
    let mut f = Form::zero(chart);
    let n = rng.gen_range(1..=b.max_terms);
    let top = b.max_form_deg.min(chart.dim());
    for _ in 0..n {
        let deg = rng.gen_range(0..=top);
        let bl = blade(rng, chart, deg);
        f += &Form::term(chart, bl, poly(rng, chart, b.max_poly_deg, 1));
    }
    f
}

/// Slots `(row, col, form degree)` of the requested total parity.
fn slots(bundle: SuperBundle, chart: Chart, parity: Parity, degrees: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for r in 0..bundle.rank() {
        for c in 0..bundle.rank() {
            for &d in degrees {
                if d <= chart.dim() && EndForm::slot_parity(bundle, r, c, d) == parity {
                    out.push((r, c, d));
                }
            }
        }
    }
    out
}

/// A homogeneous End(E)-valued form with terms drawn from the admitted slots.
pub fn endform_in_slots<R: Rng>(
    rng: &mut R,
    bundle: SuperBundle,
    chart: Chart,
    slots: &[(usize, usize, usize)],
    b: &Bounds,
) -> EndForm {
    let mut out = EndForm::zero(bundle, chart);
    if slots.is_empty() {
        return out;
    }
    let n = rng.gen_range(1..=b.max_terms);
    for _ in 0..n {
        let (r, c, d) = slots[rng.gen_range(0..slots.len())];
        let f = form_of_degree(rng, chart, d, &Bounds { max_terms: 1, ..*b });
        out += &EndForm::entry(bundle, r, c, &f).expect("slot in range");
    }
    out
}

/// A random End(E)-valued form of the given total parity.
pub fn endform<R: Rng>(
    rng: &mut R,
    bundle: SuperBundle,
    chart: Chart,
    parity: Parity,
    b: &Bounds,
    allow_zero_form: bool,
) -> EndForm {
    let lo = if allow_zero_form { 0 } else { 1 };
    let degrees: Vec<usize> = (lo..=b.max_form_deg).collect();
    endform_in_slots(rng, bundle, chart, &slots(bundle, chart, parity, &degrees), b)
}

/// A block-diagonal End(E)-valued 1-form (odd 1-form slots are exactly the diagonal blocks).
pub fn koszul_theta<R: Rng>(rng: &mut R, bundle: SuperBundle, chart: Chart, b: &Bounds) -> EndForm {
    endform_in_slots(rng, bundle, chart, &slots(bundle, chart, Parity::Odd, &[1]), b)
}

/// An even End(E)-valued 0-form.
pub fn zero_form_b<R: Rng>(rng: &mut R, bundle: SuperBundle, chart: Chart, b: &Bounds) -> EndForm {
    endform_in_slots(rng, bundle, chart, &slots(bundle, chart, Parity::Even, &[0]), b)
}

/// How the connection form of a random primitive superconnection is shaped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaShape {
    /// Any odd θ, including 0-form odd blocks.
    General,
    /// Odd θ without 0-form terms, so the characteristic series terminate.
    Nilpotent,
    /// Block-diagonal 1-forms with a 0-form `B`.
    Koszul,
}

pub fn prim_superconn<R: Rng>(
    rng: &mut R,
    bundle: SuperBundle,
    chart: Chart,
    omega: &SymplecticForm,
    shape: ThetaShape,
    b: &Bounds,
) -> Result<PrimSuperConn> {
    let (conn, bb) = match shape {
        ThetaShape::General => (
            SuperConn::new(endform(rng, bundle, chart, Parity::Odd, b, true))?,
            endform(rng, bundle, chart, Parity::Even, b, true),
        ),
        ThetaShape::Nilpotent => (
            SuperConn::new(endform(rng, bundle, chart, Parity::Odd, b, false))?,
            endform(rng, bundle, chart, Parity::Even, b, true),
        ),
        ThetaShape::Koszul => (
            SuperConn::koszul(koszul_theta(rng, bundle, chart, b))?,
            zero_form_b(rng, bundle, chart, b),
        ),
    };
    PrimSuperConn::new(conn, bb, omega.clone())
}

/// A random polynomial `f` of degree at most `max_deg` as a coefficient list.
pub fn poly_coeffs<R: Rng>(rng: &mut R, max_deg: usize) -> Vec<Rational> {
    let deg = rng.gen_range(1..=max_deg.max(1));
    (0..=deg)
        .map(|_| if rng.gen_bool(0.7) { coeff(rng) } else { Rational::from_integer(0.into()) })
        .collect()
}
