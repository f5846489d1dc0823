use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{self, int, to_f64, Rational};

/// Sum of `c · sin^s(θ) · cos^k(θ)` in canonical form: every `sin²θ` is
/// rewritten as `1 − cos²θ`, so `s ∈ {0, 1}`.
///
/// Keys are `(s, k)`; iteration order is by key, which makes the term order
/// (and every serialization derived from it) deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrigPoly {
    terms: BTreeMap<(u8, u32), Rational>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn sin() -> Self {
        Self::term(int(1), 1, 0)
    }

    pub fn cos() -> Self {
        Self::term(int(1), 0, 1)
    }

    /// `coeff · sin^sin_power · cos^cos_power`, canonicalized.
    pub fn term(coeff: Rational, sin_power: u32, cos_power: u32) -> Self {
        let mut out = Self::zero();
        out.push_expanded(&coeff, sin_power, cos_power);
        out
    }

    /// `sin^sin_power(θ) · Σ cos_coeffs[k] cos^k(θ)`.
    pub fn from_cos_poly(sin_power: u32, cos_coeffs: &[Rational]) -> Self {
        let mut out = Self::zero();
        for (k, c) in cos_coeffs.iter().enumerate() {
            out.push_expanded(c, sin_power, k as u32);
        }
        out
    }

    fn insert(&mut self, key: (u8, u32), coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// sin^{2j+p} = sin^p (1 − cos²)^j, expanded binomially.
    fn push_expanded(&mut self, coeff: &Rational, sin_power: u32, cos_power: u32) {
        if coeff.is_zero() {
            return;
        }
        let parity = (sin_power % 2) as u8;
        let j = (sin_power / 2) as usize;
        for i in 0..=j {
            let b = Rational::from_integer(rational::binomial(j, i));
            let c = if i % 2 == 0 { coeff * b } else { -(coeff * b) };
            self.insert((parity, cos_power + 2 * i as u32), c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(sin_power, cos_power, coeff)` with `sin_power ∈ {0, 1}`.
    pub fn terms(&self) -> impl Iterator<Item = (u8, u32, &Rational)> {
        self.terms.iter().map(|((s, k), c)| (*s, *k, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (key, c) in &other.terms {
            out.insert(*key, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            out.insert(*key, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((s1, k1), a) in &self.terms {
            for ((s2, k2), b) in &other.terms {
                out.push_expanded(&(a * b), (*s1 + *s2) as u32, k1 + k2);
            }
        }
        out
    }

    /// Exact `d/dθ`, re-canonicalized.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for ((s, k), c) in &self.terms {
            let kk = Rational::from_integer((*k).into());
            if *s == 0 {
                // d cos^k = −k sin cos^{k−1}
                if *k > 0 {
                    out.insert((1, k - 1), -(c * &kk));
                }
            } else {
                // d (sin cos^k) = cos^{k+1} − k sin² cos^{k−1}
                //               = (k+1) cos^{k+1} − k cos^{k−1}
                out.insert((0, k + 1), c * (&kk + int(1)));
                if *k > 0 {
                    out.insert((0, k - 1), -(c * &kk));
                }
            }
        }
        out
    }

    /// Exact `∫₀^π f(θ) [sin θ] dθ` via `u = cos θ`.
    ///
    /// Every term must carry an odd power of `sin θ` once the optional measure
    /// is folded in; even-power terms integrate to rational multiples of π and
    /// are rejected.
    pub fn integrate(&self, with_sin_measure: bool) -> Result<Rational> {
        let folded;
        let f = if with_sin_measure {
            folded = self.mul(&Self::sin());
            &folded
        } else {
            self
        };
        let mut total = Rational::zero();
        for ((s, k), c) in &f.terms {
            if *s == 0 {
                return Err(Error::UnsupportedIntegrand(format!(
                    "term {c}·cos^{k}θ has an even power of sin θ"
                )));
            }
            // ∫_{-1}^{1} u^k du
            if k % 2 == 0 {
                total += c * rational::ratio(2, *k as i64 + 1);
            }
        }
        Ok(total)
    }

    /// Highest `cos` power present.
    pub fn cos_degree(&self) -> u32 {
        self.terms.keys().map(|(_, k)| *k).max().unwrap_or(0)
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.terms
            .iter()
            .map(|((sp, k), coeff)| {
                let sin_part = if *sp == 1 { s } else { 1.0 };
                to_f64(coeff) * sin_part * c.powi(*k as i32)
            })
            .sum()
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, ((s, k), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if *s == 1 {
                write!(f, "·sin")?;
            }
            if *k > 0 {
                write!(f, "·cos^{k}")?;
            }
        }
        Ok(())
    }
}
