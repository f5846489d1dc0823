//! Exact hydrogen eigenfunctions and the decomposition of each state's
//! energy into intrinsic (radial) kinetic, dynamic (θ, φ) kinetic and
//! potential parts.
//!
//! Everything in [`wavefunction`], [`exact`] and [`energy`] is computed with
//! arbitrary-precision rationals in units of `a = 1` and `E₁ = 1`.
//! [`quadrature`] re-derives the same integrals numerically, [`angular`]
//! works in SI units, and [`grid`] samples densities for rasters.

pub mod angular;
pub mod energy;
pub mod error;
pub mod exact;
pub mod grid;
pub mod quadrature;
pub mod rational;
pub mod suite;
pub mod wavefunction;

pub use energy::{decompose, table2, EnergyBreakdown};
pub use error::{Error, Result};
pub use rational::Rational;
pub use wavefunction::{build_state, HydrogenState, QuantumNumbers};
