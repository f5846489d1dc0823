//! Closed-form calculus on the two function classes every energy integral
//! lives in: `poly(r)·e^{−βr}` on `[0, ∞)` and canonical trig polynomials on
//! `[0, π]`. Both are closed under differentiation and multiplication, and
//! both integrate to exact rationals.

mod exp_poly;
mod trig_poly;

pub use exp_poly::ExpPoly;
pub use trig_poly::TrigPoly;

pub(crate) use exp_poly::horner;

use crate::error::Result;
use crate::rational::Rational;

pub fn integrate_radial(f: &ExpPoly) -> Result<Rational> {
    f.integrate()
}

pub fn integrate_polar(f: &TrigPoly, with_sin_measure: bool) -> Result<Rational> {
    f.integrate(with_sin_measure)
}

pub fn differentiate_radial(f: &ExpPoly) -> ExpPoly {
    f.derivative()
}

pub fn differentiate_polar(f: &TrigPoly) -> TrigPoly {
    f.derivative()
}
