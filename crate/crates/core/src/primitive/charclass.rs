//! Primitive characteristic classes: the Chern character and the Â-genus.

use num::{One, Zero};

use crate::coefficients::Rational;
use crate::endforms::ConnMode;
use crate::error::{Error, Result};
use crate::forms::Form;

use super::conn::PrimSuperConn;
use super::pair::{pair_product, str_bold, ScalarPair};
use super::series::a_hat_log_series;

/// Rejects data for which `𝔸^{2k}` need not vanish for large `k`.
pub fn check_nilpotent(p: &PrimSuperConn) -> Result<()> {
    let named = [("θ", p.theta().clone()), ("F + ω∧B", p.x()), ("G", p.g())];
    for (name, e) in named {
        if let Some(term) = e.describe_zero_form_term() {
            return Err(Error::SeriesDivergence(format!(
                "{name} has a 0-form component {term}"
            )));
        }
    }
    Ok(())
}

/// `Σ_k c_k Str 𝔸^{2k}` for a power series `c`, summed until the powers vanish.
fn str_series(p: &PrimSuperConn, coeff: impl Fn(usize) -> Rational) -> Result<ScalarPair> {
    check_nilpotent(p)?;
    let bound = p.chart().dim() + 2;
    let mut out = ScalarPair::zero(p.chart());
    let mut it = p.powers();
    while !it.exhausted() {
        if it.k() > bound {
            return Err(Error::SeriesDivergence(format!(
                "𝔸^{} is still nonzero on a chart of dimension {}",
                2 * it.k(),
                p.chart().dim()
            )));
        }
        let c = coeff(it.k());
        if !c.is_zero() {
            out = &out + &str_bold(&it.pair()).scale(&c);
        }
        it.advance();
    }
    Ok(out)
}

/// `ch(𝔸, ω) = Str e^{-𝔸²}`.
pub fn chern_character(p: &PrimSuperConn) -> Result<ScalarPair> {
    let mut fact = Rational::one();
    let mut factorials = vec![fact.clone()];
    for k in 1..=p.chart().dim() + 3 {
        fact *= Rational::from_integer(k.into());
        factorials.push(fact.clone());
    }
    str_series(p, |k| {
        let c = factorials[k].recip();
        if k % 2 == 0 {
            c
        } else {
            -c
        }
    })
}

/// `exp` of a pair under [`pair_product`], for pairs whose components have
/// no 0-form part.
pub fn pair_exp(tau: &ScalarPair) -> Result<ScalarPair> {
    let chart = tau.chart();
    if tau.first.min_degree() == Some(0) || tau.second.min_degree() == Some(0) {
        return Err(Error::SeriesDivergence(
            "exponent pair has a 0-form component".into(),
        ));
    }
    let mut out = ScalarPair::unit(chart);
    let mut power = ScalarPair::unit(chart);
    let mut fact = Rational::one();
    for n in 1..=chart.dim() + 2 {
        power = pair_product(&power, tau)?;
        if power.is_zero() {
            return Ok(out);
        }
        fact *= Rational::from_integer(n.into());
        out = &out + &power.scale(&fact.recip());
    }
    Err(Error::SeriesDivergence("pair exponential did not terminate".into()))
}

/// `Â(𝔸, ω) = exp Tr(½ ln((𝔸²/2) / sinh(𝔸²/2)))`.
pub fn a_hat(p: &PrimSuperConn) -> Result<ScalarPair> {
    a_hat_with_order(p, p.chart().dim() / 2 + 1)
}

/// [`a_hat`] with the series for `ln((z/2)/sinh(z/2))` cut at `z^order`.
pub fn a_hat_with_order(p: &PrimSuperConn, order: usize) -> Result<ScalarPair> {
    if p.bundle().r_minus() != 0 {
        return Err(Error::Precondition("Â-genus needs E⁻ = 0".into()));
    }
    if !p.b().is_zero_form() {
        return Err(Error::Precondition("Â-genus needs B to be a 0-form".into()));
    }
    if p.conn().mode() != ConnMode::Koszul {
        return Err(Error::Precondition(
            "Â-genus needs a Koszul connection (block-diagonal 1-form θ)".into(),
        ));
    }
    let g = a_hat_log_series(order)?;
    let tau = str_series(p, |k| g.coeff(k))?;
    pair_exp(&tau)
}

/// Degree-0 part of the first component, as a constant when it is one.
pub fn degree_zero_part(p: &ScalarPair) -> Form {
    p.first.degree_part(0)
}
