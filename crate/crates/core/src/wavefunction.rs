//! Separated hydrogen eigenfunctions `Ψ = C_r R(r) · N Θ(θ) · e^{imφ}/√(2π)`.
//!
//! Lengths are in Bohr radii and energies in units of `E₁` (one Rydberg), so
//! the Hamiltonian is `−∇² − 2/r`. All polynomial factors are built by exact
//! integer/rational recurrences and the normalizations are stored squared.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ExpPoly, TrigPoly};
use crate::rational::{int, ratio, to_pq, Rational};

/// Validated `(n, l, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

impl QuantumNumbers {
    pub fn new(n: i64, l: i64, m: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain(format!("n must be >= 1 (got n={n})")));
        }
        if l < 0 {
            return Err(Error::Domain(format!("l must be >= 0 (got l={l})")));
        }
        if l >= n {
            return Err(Error::Domain(format!("l must be < n (got l={l}, n={n})")));
        }
        if m.abs() > l {
            return Err(Error::Domain(format!("|m| must be <= l (got m={m}, l={l})")));
        }
        Ok(Self { n: n as u32, l: l as u32, m: m as i32 })
    }

    /// Every valid triple with `1 <= n <= n_max`, ordered by `(n, l, m)`.
    pub fn all_up_to(n_max: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for n in 1..=n_max {
            for l in 0..n {
                for m in -(l as i32)..=(l as i32) {
                    out.push(Self { n, l, m });
                }
            }
        }
        out
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.n, self.l, self.m)
    }
}

/// `R(r) = poly(r) · e^{−r/n}` with `C_r²` such that `C_r² ∫ R² r² dr = 1`.
///
/// `poly` is `r^l · k!·L_k^{(2l+1)}(2r/n)`, `k = n − l − 1`, i.e. the
/// Laguerre factor scaled to integer coefficients in `ρ = 2r/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPart {
    n: u32,
    l: u32,
    poly: Vec<Rational>,
    beta: Rational,
    c2: Rational,
}

impl RadialPart {
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn l(&self) -> u32 {
        self.l
    }
    /// Ascending coefficients of the polynomial factor in `r`.
    pub fn poly(&self) -> &[Rational] {
        &self.poly
    }
    pub fn beta(&self) -> &Rational {
        &self.beta
    }
    pub fn c2(&self) -> &Rational {
        &self.c2
    }

    /// Unnormalized `R(r)` as an exact function.
    pub fn function(&self) -> ExpPoly {
        ExpPoly::from_coeffs(&self.poly, self.beta.clone())
    }

    /// `C_r² ∫ R² r² dr`; exactly one for a correctly built part.
    pub fn norm_integral(&self) -> Result<Rational> {
        let r = self.function();
        Ok(&self.c2 * r.mul(&r).shift(2)?.integrate()?)
    }

    /// Number of sign changes of `R` on `(0, ∞)`, by Sturm sequence.
    pub fn node_count(&self) -> usize {
        let reduced: Vec<Rational> = self.poly[self.l as usize..].to_vec();
        sturm_positive_roots(&reduced)
    }

    pub(crate) fn scale_c2(&mut self, factor: &Rational) {
        self.c2 = &self.c2 * factor;
    }
}

/// `N Θ(θ)` with `Θ = sin^{|m|}θ · P(cos θ)`; `P` is the primitive integer
/// polynomial proportional to `d^{|m|}P_l/dx^{|m|}` with a positive leading
/// coefficient, and `N² ∫ Θ² sin θ dθ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarPart {
    l: u32,
    m: i32,
    cos_poly: Vec<Rational>,
    n2: Rational,
}

impl PolarPart {
    pub fn l(&self) -> u32 {
        self.l
    }
    pub fn m(&self) -> i32 {
        self.m
    }
    pub fn sin_power(&self) -> u32 {
        self.m.unsigned_abs()
    }
    /// Exponent of `sin θ` modulo 2 in canonical form.
    pub fn sin_parity(&self) -> u8 {
        (self.sin_power() % 2) as u8
    }
    pub fn cos_poly(&self) -> &[Rational] {
        &self.cos_poly
    }
    pub fn n2(&self) -> &Rational {
        &self.n2
    }

    /// Unnormalized `Θ(θ)` in canonical form.
    pub fn function(&self) -> TrigPoly {
        TrigPoly::from_cos_poly(self.sin_power(), &self.cos_poly)
    }

    /// `Θ(θ)² / sin²θ`, defined for `m ≠ 0`.
    pub fn squared_over_sin2(&self) -> Result<TrigPoly> {
        let s = self.sin_power();
        if s == 0 {
            return Err(Error::Domain("Θ²/sin²θ is singular for m = 0".into()));
        }
        let p = TrigPoly::from_cos_poly(0, &self.cos_poly);
        Ok(TrigPoly::term(int(1), 2 * s - 2, 0).mul(&p.mul(&p)))
    }

    pub fn norm_integral(&self) -> Result<Rational> {
        let t = self.function();
        Ok(&self.n2 * t.mul(&t).integrate(true)?)
    }
}

/// `e^{imφ}/√(2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AzimuthalPart {
    pub m: i32,
}

impl AzimuthalPart {
    /// Squared normalization, stored as the reciprocal `2π` is irrational.
    pub fn norm2_times_two_pi(&self) -> Rational {
        int(1)
    }

    /// `(1/2π) ∫ e^{−imφ} ∂²_φ e^{imφ} dφ = −m²`.
    pub fn second_derivative_expectation(&self) -> Rational {
        int(-(self.m as i64 * self.m as i64))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HydrogenState {
    pub qn: QuantumNumbers,
    pub radial: RadialPart,
    pub polar: PolarPart,
    pub azimuthal: AzimuthalPart,
}

impl HydrogenState {
    pub fn n(&self) -> u32 {
        self.qn.n
    }
    pub fn l(&self) -> u32 {
        self.qn.l
    }
    pub fn m(&self) -> i32 {
        self.qn.m
    }

    /// `∫|Ψ|² dV` as the product of the three factor normalizations.
    pub fn norm_integral(&self) -> Result<Rational> {
        Ok(self.radial.norm_integral()?
            * self.polar.norm_integral()?
            * self.azimuthal.norm2_times_two_pi())
    }

    pub fn to_json_value(&self) -> StateJson {
        StateJson {
            n: self.qn.n,
            l: self.qn.l,
            m: self.qn.m,
            c2: to_pq(&self.radial.c2),
            poly: self.radial.poly.iter().map(to_pq).collect(),
            beta: to_pq(&self.radial.beta),
            polar: PolarJson {
                l: self.polar.l,
                m: self.polar.m,
                sin_parity: self.polar.sin_parity(),
                sin_power: self.polar.sin_power(),
                cos_poly: self.polar.cos_poly.iter().map(to_pq).collect(),
                n2: to_pq(&self.polar.n2),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StateJson {
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub c2: String,
    pub poly: Vec<String>,
    pub beta: String,
    pub polar: PolarJson,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PolarJson {
    pub l: u32,
    pub m: i32,
    pub sin_parity: u8,
    pub sin_power: u32,
    pub cos_poly: Vec<String>,
    pub n2: String,
}

/// `k! · L_k^{(α)}(x)` as ascending integer coefficients, from
/// `M_{k+1} = (2k + 1 + α − x) M_k − k (k + α) M_{k−1}`.
pub fn scaled_laguerre(k: u32, alpha: u32) -> Vec<BigInt> {
    let a = BigInt::from(alpha);
    let mut prev = vec![BigInt::one()];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![&a + 1u32, BigInt::from(-1)];
    for j in 1..k {
        let jj = BigInt::from(j);
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        let lin = BigInt::from(2 * j + 1) + &a;
        for (i, c) in cur.iter().enumerate() {
            next[i] += &lin * c;
            next[i + 1] -= c;
        }
        let w = &jj * (&jj + &a);
        for (i, c) in prev.iter().enumerate() {
            next[i] -= &w * c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Legendre `P_l(x)` by Bonnet's recurrence.
pub fn legendre(l: u32) -> Vec<Rational> {
    let mut prev = vec![int(1)];
    if l == 0 {
        return prev;
    }
    let mut cur = vec![int(0), int(1)];
    for k in 1..l {
        let mut next = vec![int(0); cur.len() + 1];
        let a = ratio(2 * k as i64 + 1, k as i64 + 1);
        let b = ratio(k as i64, k as i64 + 1);
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += &a * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= &b * c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

fn poly_derivative(p: &[Rational]) -> Vec<Rational> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * int(k as i64))
        .collect()
}

/// Scale to coprime integers with a positive leading coefficient.
fn primitive(p: &[Rational]) -> Vec<Rational> {
    let lcm = p
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let lead_negative = ints.iter().rev().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    ints.into_iter()
        .map(|c| {
            let v = Rational::new(c, gcd.clone());
            if lead_negative {
                -v
            } else {
                v
            }
        })
        .collect()
}

pub fn build_radial(n: i64, l: i64) -> Result<RadialPart> {
    let qn = QuantumNumbers::new(n, l, 0)?;
    let (n, l) = (qn.n, qn.l);
    let k = n - l - 1;
    let lag = scaled_laguerre(k, 2 * l + 1);
    let rho_scale = ratio(2, n as i64);
    let mut poly = vec![int(0); n as usize];
    let mut scale = int(1);
    for (i, c) in lag.iter().enumerate() {
        poly[l as usize + i] = Rational::from_integer(c.clone()) * &scale;
        scale *= &rho_scale;
    }
    let beta = ratio(1, n as i64);
    let r = ExpPoly::from_coeffs(&poly, beta.clone());
    let raw = r.mul(&r).shift(2)?.integrate()?;
    let c2 = crate::rational::checked_div(&int(1), &raw)?;
    Ok(RadialPart { n, l, poly, beta, c2 })
}

pub fn build_polar(l: i64, m: i64) -> Result<PolarPart> {
    if l < 0 {
        return Err(Error::Domain(format!("l must be >= 0 (got l={l})")));
    }
    if m.abs() > l {
        return Err(Error::Domain(format!("|m| must be <= l (got m={m}, l={l})")));
    }
    let mut p = legendre(l as u32);
    for _ in 0..m.unsigned_abs() {
        p = poly_derivative(&p);
    }
    let cos_poly = primitive(&p);
    let theta = TrigPoly::from_cos_poly(m.unsigned_abs() as u32, &cos_poly);
    let raw = theta.mul(&theta).integrate(true)?;
    let n2 = crate::rational::checked_div(&int(1), &raw)?;
    Ok(PolarPart { l: l as u32, m: m as i32, cos_poly, n2 })
}

pub fn build_state(n: i64, l: i64, m: i64) -> Result<HydrogenState> {
    let qn = QuantumNumbers::new(n, l, m)?;
    Ok(HydrogenState {
        qn,
        radial: build_radial(n, l)?,
        polar: build_polar(l, m)?,
        azimuthal: AzimuthalPart { m: qn.m },
    })
}

/// Applies the radial and angular parts of `−∇² − 2/r` symbolically and
/// returns the eigenvalue in units of `E₁`.
///
/// The angular equation is checked multiplied through by `sin²θ` and the
/// radial one by `r²`, so both residuals live in the closed function classes.
/// The eigenvalue is read off the leading radial power and the full residual
/// must then vanish identically.
pub fn verify_eigenvalue(state: &HydrogenState) -> Result<Rational> {
    let l = state.l() as i64;
    let m2 = state.m() as i64 * state.m() as i64;
    let separation = int(l * (l + 1));

    // sinθ (sinθ Θ')' − m² Θ + l(l+1) sin²θ Θ = 0
    let theta = state.polar.function();
    let sin = TrigPoly::sin();
    let angular = sin
        .mul(&sin.mul(&theta.derivative()).derivative())
        .sub(&theta.scale(&int(m2)))
        .add(&TrigPoly::term(separation.clone(), 2, 0).mul(&theta));
    if !angular.is_zero() {
        return Err(Error::Consistency(format!(
            "angular residual for ({}) is {angular}",
            state.qn
        )));
    }

    // −(r² R')' + l(l+1) R − 2 r R − E r² R = 0
    let r = state.radial.function();
    let kinetic = r.derivative().shift(2)?.derivative().scale(&int(-1));
    let known = kinetic
        .add(&r.scale(&separation))?
        .sub(&r.shift(1)?.scale(&int(2)))?;
    let degree = r
        .degree()
        .ok_or_else(|| Error::Consistency("radial function is zero".into()))?;
    let energy = known.coeff(degree + 2) / r.coeff(degree);
    let residual = known.sub(&r.shift(2)?.scale(&energy))?;
    if !residual.is_zero() {
        return Err(Error::Consistency(format!(
            "radial residual for ({}) is {residual}",
            state.qn
        )));
    }
    Ok(energy)
}

/// `⟨r^k⟩` in units of `a^k`.
pub fn expectation_r_power(state: &HydrogenState, k: i32) -> Result<Rational> {
    let lowest = 2 * state.l() as i64 + 2 + k as i64;
    if lowest < 0 {
        return Err(Error::Domain(format!(
            "<r^{k}> diverges for l={} (need k >= {})",
            state.l(),
            -(2 * state.l() as i64 + 2)
        )));
    }
    let r = state.radial.function();
    let integrand = r.mul(&r).shift(k + 2)?;
    Ok(state.radial.c2() * integrand.integrate()?)
}

fn poly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let q = &r[dr] / lead;
        for (i, c) in b.iter().enumerate() {
            let idx = dr - db + i;
            r[idx] = &r[idx] - &q * c;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn sign_changes(values: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for s in values.filter(|s| *s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Distinct real roots of `p` in `(0, ∞)`, assuming `p(0) ≠ 0`.
fn sturm_positive_roots(p: &[Rational]) -> usize {
    let mut p: Vec<Rational> = p.to_vec();
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    if p.len() <= 1 {
        return 0;
    }
    let mut seq = vec![p.clone(), poly_derivative(&p)];
    loop {
        let n = seq.len();
        let rem = poly_rem(&seq[n - 2], &seq[n - 1]);
        if rem.is_empty() {
            break;
        }
        seq.push(rem.into_iter().map(|c| -c).collect());
    }
    let sgn = |c: &Rational| -> i8 {
        if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        }
    };
    let at_zero = sign_changes(seq.iter().map(|q| q.first().map_or(0, sgn)));
    let at_inf = sign_changes(seq.iter().map(|q| q.last().map_or(0, sgn)));
    at_zero - at_inf
}
