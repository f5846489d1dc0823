use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, to_f64, Rational};

/// `Σ c_k r^k · e^{−βr}` with a single shared decay rate.
///
/// Terms are kept sorted by power with no zero coefficients. The zero
/// function keeps whatever `beta` it was created with; arithmetic with a zero
/// operand adopts the other operand's rate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpPoly {
    terms: BTreeMap<u32, Rational>,
    beta: Rational,
}

impl ExpPoly {
    pub fn zero(beta: Rational) -> Self {
        Self { terms: BTreeMap::new(), beta }
    }

    /// `coeff · r^power · e^{−βr}`
    pub fn monomial(coeff: Rational, power: u32, beta: Rational) -> Self {
        let mut p = Self::zero(beta);
        p.add_term(power, coeff);
        p
    }

    /// From polynomial coefficients `[c_0, c_1, ...]` in ascending power.
    pub fn from_coeffs(coeffs: &[Rational], beta: Rational) -> Self {
        let mut p = Self::zero(beta);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(k as u32, c.clone());
        }
        p
    }

    fn add_term(&mut self, power: u32, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(power).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(power, coeff)` pairs in ascending power.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, power: u32) -> Rational {
        self.terms.get(&power).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn lowest_power(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let beta = self.common_beta(other)?;
        let mut out = Self { terms: self.terms.clone(), beta };
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    fn common_beta(&self, other: &Self) -> Result<Rational> {
        if self.is_zero() {
            Ok(other.beta.clone())
        } else if other.is_zero() || self.beta == other.beta {
            Ok(self.beta.clone())
        } else {
            Err(Error::BetaMismatch(
                rational::to_pq(&self.beta),
                rational::to_pq(&other.beta),
            ))
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero(self.beta.clone());
        for (k, c) in &self.terms {
            out.add_term(*k, c * s);
        }
        out
    }

    /// Product; decay rates add.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.beta + &other.beta);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                out.add_term(i + j, a * b);
            }
        }
        out
    }

    /// Multiply by `r^shift`; negative shifts divide and fail if any power
    /// would drop below zero.
    pub fn shift(&self, shift: i32) -> Result<Self> {
        let mut out = Self::zero(self.beta.clone());
        for (k, c) in &self.terms {
            let p = *k as i64 + shift as i64;
            if p < 0 {
                return Err(Error::Domain(format!(
                    "r^{k} · r^{shift} has a negative power"
                )));
            }
            out.add_term(p as u32, c.clone());
        }
        Ok(out)
    }

    /// Exact `d/dr`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.beta.clone());
        for (k, c) in &self.terms {
            if *k > 0 {
                out.add_term(k - 1, c * Rational::from_integer((*k).into()));
            }
            out.add_term(*k, -(c * &self.beta));
        }
        out
    }

    /// Exact `∫₀^∞ f(r) dr = Σ c_k · k! / β^{k+1}`.
    pub fn integrate(&self) -> Result<Rational> {
        if !self.beta.is_positive() {
            return Err(Error::Divergent(rational::to_pq(&self.beta)));
        }
        let mut total = Rational::zero();
        for (k, c) in &self.terms {
            let beta_pow = rational::pow(&self.beta, *k as i32 + 1)?;
            total += c * Rational::from_integer(rational::factorial(*k as usize)) / beta_pow;
        }
        Ok(total)
    }

    /// Polynomial part only, in `f64`.
    pub fn float_coeffs(&self) -> Vec<f64> {
        let deg = self.degree().map_or(0, |d| d as usize + 1);
        let mut out = vec![0.0; deg];
        for (k, c) in &self.terms {
            out[*k as usize] = to_f64(c);
        }
        out
    }

    pub fn eval(&self, r: f64) -> f64 {
        horner(&self.float_coeffs(), r) * (-to_f64(&self.beta) * r).exp()
    }
}

pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "(")?;
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·r^{k}")?;
        }
        write!(f, ")·e^(-{}r)", self.beta)
    }
}
