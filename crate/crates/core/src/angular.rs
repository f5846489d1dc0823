//! Explicit spinning-field analysis of the 2p states and spin-½ coupling.
//!
//! The charge is eliminated before any SI evaluation using the Gaussian
//! relation `e² = ħ²/(m a)`, so `E₁ = ħ²/(2 m a²)` and only mass, ħ, the Bohr
//! radius and c are needed as SI inputs.

use std::f64::consts::PI;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::energy::{self, EnergyBreakdown};
use crate::error::{Error, Result};
use crate::exact::TrigPoly;
use crate::rational::{int, ratio, to_f64, Rational};
use crate::wavefunction::{build_state, expectation_r_power};

/// SI constants; CODATA 2018 by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PhysicalConstants {
    /// kg
    pub electron_mass: f64,
    /// J·s
    pub hbar: f64,
    /// m
    pub bohr_radius: f64,
    /// m/s
    pub light_speed: f64,
    /// J
    #[serde(rename = "E1")]
    pub e1: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

impl PhysicalConstants {
    pub const CODATA_2018: Self = Self {
        electron_mass: 9.109_383_701_5e-31,
        hbar: 1.054_571_817e-34,
        bohr_radius: 5.291_772_109_03e-11,
        light_speed: 299_792_458.0,
        e1: 2.179_872_361_103_5e-18,
    };

    /// `ħ²/(2 m a²)`
    pub fn derived_e1(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.electron_mass * self.bohr_radius * self.bohr_radius)
    }

    /// Positive, finite, and `E₁` consistent with `ħ²/(2ma²)` to 6 significant figures.
    pub fn validate(&self) -> Result<()> {
        let all = [self.electron_mass, self.hbar, self.bohr_radius, self.light_speed, self.e1];
        if all.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::Domain("physical constants must be positive and finite".into()));
        }
        let rel = (self.derived_e1() - self.e1).abs() / self.e1;
        if rel > 5e-6 {
            return Err(Error::Domain(format!(
                "E1 = {} J is inconsistent with hbar^2/(2 m a^2) = {} J",
                self.e1,
                self.derived_e1()
            )));
        }
        Ok(())
    }
}

/// `|L| = √(l(l+1)) ħ`, with the integer `l(l+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMomentum {
    pub l_squared: u64,
    pub magnitude: f64,
}

pub fn total_l_magnitude(l: u32) -> AngularMomentum {
    let l_squared = l as u64 * (l as u64 + 1);
    AngularMomentum { l_squared, magnitude: (l_squared as f64).sqrt() }
}

/// Exact ingredients of the moment integral for the `(2,1,0)` field:
/// `∫ C_r² r⁶ e^{−r} dr` (a = 1) and `∫ cos²θ sin³θ dθ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentIntegrals {
    pub radial: Rational,
    pub polar: Rational,
}

impl MomentIntegrals {
    /// `|L| T / (π m a²)`: the rational coefficient `(3/2)·I_r·I_θ·2`, where
    /// the trailing 2 is `∫dφ / π`.
    pub fn coefficient(&self) -> Rational {
        ratio(3, 2) * &self.radial * &self.polar * int(2)
    }
}

pub fn moment_integrals_2p() -> Result<MomentIntegrals> {
    let s = build_state(2, 1, 0)?;
    let r = s.radial.function();
    // |Ψ|² r² · (r sinθ)² carries r⁶ e^{−r} radially
    let radial = s.radial.c2() * r.mul(&r).shift(4)?.integrate()?;
    let polar = TrigPoly::term(int(1), 3, 2).integrate(false)?;
    Ok(MomentIntegrals { radial, polar })
}

/// Spinning period `T = 24 π m a² / (√2 ħ)` of the `Y₁,₀` field.
pub fn spinning_period_closed_form(c: &PhysicalConstants) -> f64 {
    24.0 * c.electron_mass * PI * c.bohr_radius * c.bohr_radius / (2f64.sqrt() * c.hbar)
}

/// `T` solved from the moment integral `|L| = (3m/2T) ∫∫∫ … = √2 ħ`.
pub fn spinning_period_from_moment(c: &PhysicalConstants) -> Result<f64> {
    let k = moment_integrals_2p()?.coefficient();
    let l = total_l_magnitude(1);
    Ok(to_f64(&k) * PI * c.electron_mass * c.bohr_radius * c.bohr_radius / (l.magnitude * c.hbar))
}

/// Closed-form `T`, checked against the moment-integral route to 1e−12.
pub fn spinning_period_2p(c: &PhysicalConstants) -> Result<f64> {
    let closed = spinning_period_closed_form(c);
    let moment = spinning_period_from_moment(c)?;
    if ((closed - moment) / closed).abs() > 1e-12 {
        return Err(Error::Consistency(format!(
            "spinning period: closed form {closed:e} s vs moment integral {moment:e} s"
        )));
    }
    Ok(closed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitDynamicEnergy {
    pub joules: f64,
    /// Energy over `E₁`, exact.
    pub ratio_to_e1: Rational,
}

/// `E = (3πm / 2T²) ∫ C_r² r⁶ e^{−r} dr ∫ cos²θ sin³θ dθ ∫ dφ`.
///
/// The SI value uses the supplied period; the exact ratio substitutes the
/// closed-form `T`, giving `2 K_E l(l+1) / K_T²` with `K_E = K_T` the moment
/// coefficient.
pub fn dynamic_energy_explicit(c: &PhysicalConstants, period: f64) -> Result<ExplicitDynamicEnergy> {
    let mi = moment_integrals_2p()?;
    let k = mi.coefficient();
    let joules = to_f64(&k) * PI * PI * c.electron_mass * c.bohr_radius * c.bohr_radius
        / (period * period);
    let l2 = int(total_l_magnitude(1).l_squared as i64);
    let ratio_to_e1 = int(2) * &k * l2 / (&k * &k);
    Ok(ExplicitDynamicEnergy { joules, ratio_to_e1 })
}

/// Explicit energy at the spinning period, required to agree with the
/// operator result `KE_θ + KE_φ` for `(2,1,0)`.
pub fn dynamic_energy_explicit_2p(c: &PhysicalConstants) -> Result<ExplicitDynamicEnergy> {
    let t = spinning_period_2p(c)?;
    let e = dynamic_energy_explicit(c, t)?;
    let operator = energy::decompose(&build_state(2, 1, 0)?)?.dynamic;
    if e.ratio_to_e1 != operator {
        return Err(Error::Consistency(format!(
            "explicit dynamic energy {} E1 != operator {} E1",
            e.ratio_to_e1, operator
        )));
    }
    let si_ratio = e.joules / c.derived_e1();
    let want = to_f64(&operator);
    if ((si_ratio - want) / want).abs() > 1e-12 {
        return Err(Error::Consistency(format!(
            "explicit dynamic energy {si_ratio} E1 (SI) != operator {want} E1"
        )));
    }
    Ok(e)
}

/// `f = ω/2π` with `e²/r² = m r ω²` at `r³ = ⟨r³⟩` and `e² = ħ²/(ma)`.
pub fn particle_orbit_frequency_2p(c: &PhysicalConstants) -> Result<f64> {
    let r3 = to_f64(&expectation_r_power(&build_state(2, 1, 0)?, 3)?);
    let omega = c.hbar / (r3.sqrt() * c.electron_mass * c.bohr_radius * c.bohr_radius);
    Ok(omega / (2.0 * PI))
}

/// `v = 2π r sinθ / T` in m/s for `r` in Bohr radii.
pub fn field_velocity(r: f64, sin_theta: f64, period: f64, c: &PhysicalConstants) -> Result<f64> {
    if r < 0.0 || !(0.0..=1.0).contains(&sin_theta) || period <= 0.0 {
        return Err(Error::Domain(format!(
            "field velocity needs r >= 0, 0 <= sin θ <= 1, T > 0 (got r={r}, sin θ={sin_theta}, T={period})"
        )));
    }
    Ok(2.0 * PI * r * c.bohr_radius * sin_theta / period)
}

/// Half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(pub i32);

impl HalfInt {
    pub fn from_twice(twice: i32) -> Self {
        Self(twice)
    }
    pub fn twice(self) -> i32 {
        self.0
    }
    pub fn to_rational(self) -> Rational {
        ratio(self.0 as i64, 2)
    }
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl std::str::FromStr for HalfInt {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a half-integer: {s:?}"));
        match s.split_once('/') {
            Some((n, "2")) => n.trim().parse::<i32>().map(HalfInt).map_err(|_| bad()),
            Some(_) => Err(bad()),
            None => s.parse::<i32>().map(|v| HalfInt(2 * v)).map_err(|_| bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoupledTerm {
    pub coeff_squared: Rational,
    pub l: u32,
    pub ml: i32,
    /// Spin projection, ±½.
    pub sz: HalfInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinCoupledState {
    pub j: HalfInt,
    pub jz: HalfInt,
    pub terms: Vec<CoupledTerm>,
}

/// `|j, jz⟩` in the `|l, ml⟩|½, sz⟩` basis, as squared Clebsch–Gordan
/// coefficients. Terms with `|ml| > l` carry zero weight and are omitted.
pub fn couple_spin(l: u32, j: HalfInt, jz: HalfInt) -> Result<SpinCoupledState> {
    let tl = 2 * l as i32;
    let valid_j = j.0 == tl + 1 || (j.0 == tl - 1 && l > 0);
    if !valid_j {
        return Err(Error::Domain(format!("j must be l ± 1/2 and >= 1/2 (got l={l}, j={j})")));
    }
    if jz.0.abs() > j.0 || (jz.0 - j.0) % 2 != 0 {
        return Err(Error::Domain(format!("jz must be in -j..=j in integer steps (got j={j}, jz={jz})")));
    }
    let denom = int(2 * l as i64 + 1);
    let lf = int(l as i64);
    let half = ratio(1, 2);
    let jzr = jz.to_rational();
    // (l + jz + 1/2) and (l − jz + 1/2)
    let plus = (&lf + &jzr + &half) / &denom;
    let minus = (&lf - &jzr + &half) / &denom;
    let (up, down) = if j.0 == tl + 1 { (plus, minus) } else { (minus, plus) };

    let mut terms = Vec::new();
    let ml_up = (jz.0 - 1) / 2;
    let ml_down = (jz.0 + 1) / 2;
    for (w, ml, sz) in [(up, ml_up, HalfInt(1)), (down, ml_down, HalfInt(-1))] {
        if ml.unsigned_abs() <= l && !w.is_zero() {
            terms.push(CoupledTerm { coeff_squared: w, l, ml, sz });
        }
    }
    Ok(SpinCoupledState { j, jz, terms })
}

impl SpinCoupledState {
    pub fn weight_sum(&self) -> Rational {
        self.terms.iter().map(|t| &t.coeff_squared).sum()
    }
}

/// Weighted sum of the component breakdowns for principal number `n`.
pub fn mixed_state_energy(coupled: &SpinCoupledState, n: u32) -> Result<EnergyBreakdown> {
    let mut acc = EnergyBreakdown::zero();
    for t in &coupled.terms {
        let s = build_state(n as i64, t.l as i64, t.ml as i64)?;
        acc = acc.add_weighted(&t.coeff_squared, &energy::decompose(&s)?);
    }
    let expected = -(int(1) / int(n as i64 * n as i64));
    if acc.total != expected {
        return Err(Error::Consistency(format!(
            "mixed state total {} != {}",
            acc.total, expected
        )));
    }
    Ok(acc)
}

/// Everything the `spin2p` report prints.
#[derive(Debug, Clone, PartialEq)]
pub struct Spin2pReport {
    pub period: f64,
    pub period_from_moment: f64,
    pub f_field: f64,
    pub f_particle: f64,
    pub r3_expectation: Rational,
    pub velocity_3a: f64,
    pub velocity_3a_over_c: f64,
    pub explicit_dynamic_joules: f64,
    pub explicit_dynamic_e1: Rational,
    pub operator_dynamic_e1: Rational,
    pub agreement: bool,
}

pub fn spin2p_report(c: &PhysicalConstants) -> Result<Spin2pReport> {
    c.validate()?;
    let period = spinning_period_2p(c)?;
    let period_from_moment = spinning_period_from_moment(c)?;
    let explicit = dynamic_energy_explicit(c, period)?;
    let state = build_state(2, 1, 0)?;
    let operator = energy::decompose(&state)?.dynamic;
    let agreement = dynamic_energy_explicit_2p(c).is_ok();
    let v = field_velocity(3.0, 1.0, period, c)?;
    Ok(Spin2pReport {
        period,
        period_from_moment,
        f_field: 1.0 / period,
        f_particle: particle_orbit_frequency_2p(c)?,
        r3_expectation: expectation_r_power(&state, 3)?,
        velocity_3a: v,
        velocity_3a_over_c: v / c.light_speed,
        explicit_dynamic_joules: explicit.joules,
        explicit_dynamic_e1: explicit.ratio_to_e1,
        operator_dynamic_e1: operator,
        agreement,
    })
}
