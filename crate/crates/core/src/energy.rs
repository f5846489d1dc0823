//! Potential, intrinsic (radial) and dynamic (θ, φ) kinetic energies of a
//! hydrogen eigenstate, in units of `E₁`.
//!
//! With `a = 1` and `E₁ = 1` the prefactor `−ħ²/2m` is `−1` and `e² = 2`.
//! The angular kinetic energy is split by grouping the `1/sin θ` and
//! `1/sin²θ` operator denominators with the polar and azimuthal integrals
//! respectively, which is what makes `KE_θ` and `KE_φ` depend on `m`
//! individually while their sum does not.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::TrigPoly;
use crate::rational::{int, ratio, to_f64, to_pq, Rational};
use crate::wavefunction::{build_state, HydrogenState};

/// Display-only conversion factor.
pub const E1_EV: f64 = 13.605693;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyBreakdown {
    pub ke_r: Rational,
    pub ke_theta: Rational,
    pub ke_phi: Rational,
    pub potential: Rational,
    pub dynamic: Rational,
    pub total_ke: Rational,
    pub total: Rational,
}

impl EnergyBreakdown {
    pub fn new(ke_r: Rational, ke_theta: Rational, ke_phi: Rational, potential: Rational) -> Self {
        let dynamic = &ke_theta + &ke_phi;
        let total_ke = &ke_r + &dynamic;
        let total = &total_ke + &potential;
        Self { ke_r, ke_theta, ke_phi, potential, dynamic, total_ke, total }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero())
    }

    /// `self + w · other`, field by field.
    pub fn add_weighted(&self, w: &Rational, other: &Self) -> Self {
        Self::new(
            &self.ke_r + w * &other.ke_r,
            &self.ke_theta + w * &other.ke_theta,
            &self.ke_phi + w * &other.ke_phi,
            &self.potential + w * &other.potential,
        )
    }

    /// `[KE_r, KE_θ + KE_φ, KE, V, total]`: the parts that do not depend on
    /// how the angular energy is split between θ and φ.
    pub fn field_energies(&self) -> [&Rational; 5] {
        [&self.ke_r, &self.dynamic, &self.total_ke, &self.potential, &self.total]
    }

    /// `(name, value)` in column order.
    pub fn fields(&self) -> [(&'static str, &Rational); 7] {
        [
            ("keR", &self.ke_r),
            ("keTheta", &self.ke_theta),
            ("kePhi", &self.ke_phi),
            ("dynamic", &self.dynamic),
            ("totalKE", &self.total_ke),
            ("potential", &self.potential),
            ("total", &self.total),
        ]
    }

    pub fn to_json(&self) -> EnergyJson {
        let s = |r: &Rational| to_pq(r);
        let f = |r: &Rational| to_f64(r);
        EnergyJson {
            ke_r: s(&self.ke_r),
            ke_theta: s(&self.ke_theta),
            ke_phi: s(&self.ke_phi),
            dynamic: s(&self.dynamic),
            total_ke: s(&self.total_ke),
            potential: s(&self.potential),
            total: s(&self.total),
            unit: "E1",
            approx: EnergyApprox {
                ke_r: f(&self.ke_r),
                ke_theta: f(&self.ke_theta),
                ke_phi: f(&self.ke_phi),
                dynamic: f(&self.dynamic),
                total_ke: f(&self.total_ke),
                potential: f(&self.potential),
                total: f(&self.total),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EnergyJson {
    pub ke_r: String,
    pub ke_theta: String,
    pub ke_phi: String,
    pub dynamic: String,
    #[serde(rename = "totalKE")]
    pub total_ke: String,
    pub potential: String,
    pub total: String,
    pub unit: &'static str,
    pub approx: EnergyApprox,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EnergyApprox {
    pub ke_r: f64,
    pub ke_theta: f64,
    pub ke_phi: f64,
    pub dynamic: f64,
    #[serde(rename = "totalKE")]
    pub total_ke: f64,
    pub potential: f64,
    pub total: f64,
}

/// `N² ∫ Θ² sin θ dθ · (1/2π) ∫ dφ`; one for a normalized state.
pub fn angular_norm(state: &HydrogenState) -> Result<Rational> {
    Ok(state.polar.norm_integral()? * state.azimuthal.norm2_times_two_pi())
}

/// `V = −e² C_r² ∫ r R² dr` times the angular normalization.
pub fn potential_energy(state: &HydrogenState) -> Result<Rational> {
    let r = state.radial.function();
    let radial = r.mul(&r).shift(1)?.integrate()?;
    Ok(int(-2) * state.radial.c2() * radial * angular_norm(state)?)
}

/// `KE_r = −C_r² ∫ R (1/r²) (r² R')' r² dr` times the angular normalization.
pub fn ke_radial(state: &HydrogenState) -> Result<Rational> {
    let r = state.radial.function();
    let inner = r.derivative().shift(2)?.derivative();
    let radial = r.mul(&inner).integrate()?;
    Ok(-(state.radial.c2() * radial) * angular_norm(state)?)
}

/// `−C_r² ∫ R² dr`: the radial factor shared by both dynamic energies.
pub fn ri_term(state: &HydrogenState) -> Result<Rational> {
    let r = state.radial.function();
    Ok(-(state.radial.c2() * r.mul(&r).integrate()?))
}

/// `N² ∫ Θ (1/sin θ)(sin θ Θ')' sin θ dθ · (1/2π)∫dφ`.
pub fn polar_term(state: &HydrogenState) -> Result<Rational> {
    let theta = state.polar.function();
    let inner = TrigPoly::sin().mul(&theta.derivative()).derivative();
    let integral = theta.mul(&inner).integrate(false)?;
    Ok(state.polar.n2() * integral * state.azimuthal.norm2_times_two_pi())
}

/// `N² ∫ (Θ²/sin²θ) sin θ dθ · (1/2π)∫ e^{−imφ} ∂²_φ e^{imφ} dφ`.
pub fn azimuthal_term(state: &HydrogenState) -> Result<Rational> {
    let phi = state.azimuthal.second_derivative_expectation();
    if phi.is_zero() {
        return Ok(Rational::zero());
    }
    let integral = state.polar.squared_over_sin2()?.integrate(true)?;
    Ok(state.polar.n2() * integral * phi)
}

pub fn ke_polar(state: &HydrogenState) -> Result<Rational> {
    Ok(ri_term(state)? * polar_term(state)?)
}

pub fn ke_azimuthal(state: &HydrogenState) -> Result<Rational> {
    Ok(ri_term(state)? * azimuthal_term(state)?)
}

/// All components; fails if `total ≠ −1/n²`.
pub fn decompose(state: &HydrogenState) -> Result<EnergyBreakdown> {
    let b = EnergyBreakdown::new(
        ke_radial(state)?,
        ke_polar(state)?,
        ke_azimuthal(state)?,
        potential_energy(state)?,
    );
    let n2 = int(state.n() as i64 * state.n() as i64);
    let expected = -(int(1) / n2);
    if b.total != expected {
        return Err(Error::Consistency(format!(
            "checksum for ({}): total {} != {}",
            state.qn,
            to_pq(&b.total),
            to_pq(&expected)
        )));
    }
    Ok(b)
}

#[derive(Debug, Clone)]
pub struct TableRow {
    pub label: &'static str,
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub breakdown: EnergyBreakdown,
}

/// Rows of the energy table: labels and the representative `m` used.
pub const TABLE2_ROWS: [(&str, u32, u32, i32); 14] = [
    ("1,0,0", 1, 0, 0),
    ("2,0,0", 2, 0, 0),
    ("3,0,0", 3, 0, 0),
    ("2,1,0", 2, 1, 0),
    ("2,1,±1", 2, 1, 1),
    ("3,1,0", 3, 1, 0),
    ("3,1,±1", 3, 1, 1),
    ("3,2,0", 3, 2, 0),
    ("3,2,∓1", 3, 2, -1),
    ("3,2,±2", 3, 2, 2),
    ("7,3,0", 7, 3, 0),
    ("7,3,±1", 7, 3, 1),
    ("7,3,±2", 7, 3, 2),
    ("7,3,±3", 7, 3, 3),
];

pub fn table2() -> Result<Vec<TableRow>> {
    TABLE2_ROWS
        .par_iter()
        .map(|&(label, n, l, m)| {
            let state = build_state(n as i64, l as i64, m as i64)?;
            Ok(TableRow { label, n, l, m, breakdown: decompose(&state)? })
        })
        .collect()
}

/// `l(l+1) · |RI|`, the `L²/2mr²` expectation.
pub fn dynamic_by_operator(state: &HydrogenState) -> Result<Rational> {
    let l = state.l() as i64;
    Ok(int(l * (l + 1)) * -ri_term(state)?)
}

/// `x / n²` in units of `E₁`, i.e. `x·E_n`.
pub fn of_en(x: Rational, n: u32) -> Rational {
    x / int(n as i64 * n as i64)
}

pub fn en_ratio(num: i64, den: i64, n: u32) -> Rational {
    of_en(ratio(num, den), n)
}
