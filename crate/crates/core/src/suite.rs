//! The `verify` suite: every module invariant, run over all states up to a
//! principal-number ceiling, reported per family.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::angular::{self, HalfInt, PhysicalConstants};
use crate::energy::{self, EnergyBreakdown, TABLE2_ROWS};
use crate::error::Result;
use crate::grid::{self, AzimuthalForm, FloatState};
use crate::quadrature;
use crate::rational::{int, ratio, to_pq, Rational};
use crate::wavefunction::{build_state, verify_eigenvalue, HydrogenState, QuantumNumbers};

/// Deliberate corruption for exercising the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Doubles every radial `C_r²`.
    Normalization,
}

impl std::str::FromStr for Fault {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normalization" => Ok(Self::Normalization),
            _ => Err(crate::Error::Parse(format!("unknown fault {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub n_max: u32,
    /// Ceiling for the sampled radial-current and inversion checks.
    pub sampled_n_max: u32,
    pub samples_per_state: usize,
    pub seed: u64,
    pub constants: PhysicalConstants,
    pub fault: Option<Fault>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            n_max: 12,
            sampled_n_max: 7,
            samples_per_state: 100,
            seed: 0x5eed,
            constants: PhysicalConstants::default(),
            fault: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl FamilyResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub n_max: u32,
    pub states: usize,
    pub families: Vec<FamilyResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(FamilyResult::passed)
    }

    pub fn failed_families(&self) -> Vec<&'static str> {
        self.families.iter().filter(|f| !f.passed()).map(|f| f.name).collect()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.families.iter().map(|r| r.name.len()).max().unwrap_or(0);
        for r in &self.families {
            let tag = if r.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{tag}  {:width$}  {} checks", r.name, r.checks)?;
            for msg in r.failures.iter().take(5) {
                writeln!(f, "      {msg}")?;
            }
            if r.failures.len() > 5 {
                writeln!(f, "      ... {} more", r.failures.len() - 5)?;
            }
        }
        let failed = self.failed_families();
        if failed.is_empty() {
            write!(f, "all {} families passed over {} states (n <= {})", self.families.len(), self.states, self.n_max)
        } else {
            write!(f, "failed: {}", failed.join(", "))
        }
    }
}

struct Family {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Family {
    fn new(name: &'static str) -> Self {
        Self { name, checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    fn finish(self) -> FamilyResult {
        FamilyResult { name: self.name, checks: self.checks, failures: self.failures }
    }
}

fn en(n: u32) -> Rational {
    ratio(1, n as i64 * n as i64)
}

/// Breakdown from the individual integrals, without the checksum guard in
/// [`energy::decompose`], so a corrupted state is reported rather than refused.
fn raw_breakdown(s: &HydrogenState) -> Result<EnergyBreakdown> {
    Ok(EnergyBreakdown::new(
        energy::ke_radial(s)?,
        energy::ke_polar(s)?,
        energy::ke_azimuthal(s)?,
        energy::potential_energy(s)?,
    ))
}

fn prepare(qn: QuantumNumbers, fault: Option<Fault>) -> Result<HydrogenState> {
    let mut s = build_state(qn.n as i64, qn.l as i64, qn.m as i64)?;
    if fault == Some(Fault::Normalization) {
        s.radial.scale_c2(&int(2));
    }
    Ok(s)
}

struct Evaluated {
    state: HydrogenState,
    breakdown: Result<EnergyBreakdown>,
    eigen: Result<Rational>,
    dynamic_op: Result<Rational>,
}

pub fn run(opts: &SuiteOptions) -> Result<SuiteReport> {
    let qns = QuantumNumbers::all_up_to(opts.n_max);
    let evaluated: Vec<Evaluated> = qns
        .par_iter()
        .map(|qn| {
            let state = prepare(*qn, opts.fault)?;
            Ok(Evaluated {
                breakdown: raw_breakdown(&state),
                eigen: verify_eigenvalue(&state),
                dynamic_op: energy::dynamic_by_operator(&state),
                state,
            })
        })
        .collect::<Result<_>>()?;

    let families = vec![
        normalization(&evaluated),
        eigenvalue(&evaluated),
        node_count(&evaluated),
        checksum(&evaluated),
        virial(&evaluated),
        m_independence(&evaluated),
        dynamic_identity(&evaluated),
        inversion(&evaluated, opts),
        radial_current(&evaluated, opts),
        oracle(opts)?,
        clebsch_gordan()?,
        spin2p(opts),
    ];
    Ok(SuiteReport { n_max: opts.n_max, states: evaluated.len(), families })
}

fn normalization(ev: &[Evaluated]) -> FamilyResult {
    let mut f = Family::new("normalization");
    for e in ev {
        let s = &e.state;
        let radial = s.radial.norm_integral();
        f.check(radial.as_ref().is_ok_and(One::is_one), || {
            format!("{}: radial norm {}", s.qn, show(&radial))
        });
        let polar = s.polar.norm_integral();
        f.check(polar.as_ref().is_ok_and(One::is_one), || {
            format!("{}: polar norm {}", s.qn, show(&polar))
        });
        let total = s.norm_integral();
        f.check(total.as_ref().is_ok_and(One::is_one), || {
            format!("{}: |psi|^2 integral {}", s.qn, show(&total))
        });
    }
    f.finish()
}

fn show(r: &Result<Rational>) -> String {
    match r {
        Ok(v) => to_pq(v),
        Err(e) => format!("error: {e}"),
    }
}

fn eigenvalue(ev: &[Evaluated]) -> FamilyResult {
    let mut f = Family::new("eigenvalue");
    for e in ev {
        let want = -en(e.state.n());
        f.check(e.eigen.as_ref().is_ok_and(|v| *v == want), || {
            format!("{}: eigenvalue {}", e.state.qn, show(&e.eigen))
        });
    }
    f.finish()
}

fn node_count(ev: &[Evaluated]) -> FamilyResult {
    let mut f = Family::new("node count");
    for e in ev {
        let s = &e.state;
        let want = (s.n() - s.l() - 1) as usize;
        let got = s.radial.node_count();
        f.check(got == want, || format!("{}: {got} radial nodes, expected {want}", s.qn));
    }
    f.finish()
}

fn checksum(ev: &[Evaluated]) -> FamilyResult {
    let mut f = Family::new("checksum");
    for e in ev {
        let want = -en(e.state.n());
        let ok = e.breakdown.as_ref().is_ok_and(|b| b.total == want);
        f.check(ok, || match &e.breakdown {
            Ok(b) => format!("{}: total {} != {}", e.state.qn, to_pq(&b.total), to_pq(&want)),
            Err(err) => format!("{}: {err}", e.state.qn),
        });
    }
    f.finish()
}

fn virial(ev: &[Evaluated]) -> FamilyResult {
    let mut f = Family::new("virial");
    for e in ev {
        let Ok(b) = &e.breakdown else {
            f.check(false, || format!("{}: no breakdown", e.state.qn));
            continue;
        };
        f.check(b.total_ke == en(e.state.n()), || {
            format!("{}: total KE {}", e.state.qn, to_pq(&b.total_ke))
        });
        f.check(b.potential == -(int(2) * &b.total_ke), || {
            format!("{}: V {} != -2 KE {}", e.state.qn, to_pq(&b.potential), to_pq(&b.total_ke))
        });
    }
    f.finish()
}

fn m_independence(ev: &[Evaluated]) -> FamilyResult {
    let mut f = Family::new("m-independence");
    let mut groups: BTreeMap<(u32, u32), Vec<&Evaluated>> = BTreeMap::new();
    for e in ev {
        groups.entry((e.state.n(), e.state.l())).or_default().push(e);
    }
    for ((n, l), members) in groups {
        let Some(Ok(first)) = members.first().map(|e| &e.breakdown) else {
            continue;
        };
        for e in &members[1..] {
            let ok = e.breakdown.as_ref().is_ok_and(|b| b.field_energies() == first.field_energies());
            f.check(ok, || format!("({n},{l}): m={} differs from m={}", e.state.m(), members[0].state.m()));
        }
    }
    f.finish()
}

fn dynamic_identity(ev: &[Evaluated]) -> FamilyResult {
    let mut f = Family::new("dynamic identity");
    for e in ev {
        let ok = match (&e.breakdown, &e.dynamic_op) {
            (Ok(b), Ok(d)) => b.dynamic == *d,
            _ => false,
        };
        f.check(ok, || format!("{}: KE_theta + KE_phi != l(l+1)|RI|", e.state.qn));
    }
    f.finish()
}

fn random_point(rng: &mut StdRng, n: u32) -> (f64, f64, f64) {
    let r = rng.gen_range(0.05..(3.0 * (n * n) as f64));
    let theta = rng.gen_range(0.0..std::f64::consts::PI);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    (r, theta, phi)
}

fn sampled<'a>(ev: &'a [Evaluated], opts: &SuiteOptions) -> impl Iterator<Item = (usize, &'a Evaluated)> + 'a {
    let cap = opts.sampled_n_max;
    ev.iter().enumerate().filter(move |(_, e)| e.state.n() <= cap)
}

fn inversion(ev: &[Evaluated], opts: &SuiteOptions) -> FamilyResult {
    let mut f = Family::new("inversion");
    for (i, e) in sampled(ev, opts) {
        let fs = FloatState::new(&e.state);
        let mut rng = StdRng::seed_from_u64(opts.seed ^ (i as u64).wrapping_mul(0x9e37_79b9));
        for _ in 0..opts.samples_per_state {
            let (r, theta, phi) = random_point(&mut rng, e.state.n());
            // x → −x is (θ, φ) → (π − θ, φ + π) without rounding π − θ
            let x = [r * theta.sin() * phi.cos(), r * theta.sin() * phi.sin(), r * theta.cos()];
            let a = fs.density_at(x, AzimuthalForm::Complex);
            let b = fs.density_at(x.map(|c| -c), AzimuthalForm::Complex);
            let ok = (a - b).abs() <= 1e-12 * a.max(b).max(f64::MIN_POSITIVE);
            f.check(ok, || format!("{} at r={r:.3}: {a:e} vs {b:e}", e.state.qn));
        }
    }
    f.finish()
}

fn radial_current(ev: &[Evaluated], opts: &SuiteOptions) -> FamilyResult {
    let mut f = Family::new("radial current");
    for (i, e) in sampled(ev, opts) {
        let s = &e.state;
        f.check(grid::radial_current_exact(s).is_zero(), || format!("{}: symbolic j_r nonzero", s.qn));
        let mut rng = StdRng::seed_from_u64(opts.seed.wrapping_add(i as u64));
        for _ in 0..opts.samples_per_state {
            let (r, theta, phi) = random_point(&mut rng, s.n());
            let exact = grid::radial_current(s, r, theta, phi);
            let fd = grid::radial_current_fd(s, r, theta, phi, 1e-4 * r.max(1.0));
            for (label, v) in [("exact", exact), ("finite-difference", fd)] {
                let ok = v.as_ref().is_ok_and(|j| j.abs() < 1e-14);
                f.check(ok, || format!("{} {label} j_r at r={r:.3}: {v:?}", s.qn));
            }
        }
    }
    f.finish()
}

fn oracle(opts: &SuiteOptions) -> Result<FamilyResult> {
    let mut f = Family::new("oracle cross-check");
    let devs: Vec<(String, Result<f64>)> = TABLE2_ROWS
        .par_iter()
        .map(|(label, n, l, m)| {
            let qn = QuantumNumbers { n: *n, l: *l, m: *m };
            let dev = prepare(qn, opts.fault).and_then(|s| quadrature::cross_check_state(&s));
            (label.to_string(), dev)
        })
        .collect();
    for (label, dev) in devs {
        f.check(dev.as_ref().is_ok_and(|d| *d < 1e-10), || format!("({label}): deviation {dev:?}"));
    }
    Ok(f.finish())
}

fn clebsch_gordan() -> Result<FamilyResult> {
    let mut f = Family::new("clebsch-gordan");
    for l in 0..=6u32 {
        let tl = 2 * l as i32;
        for tj in [tl - 1, tl + 1].into_iter().filter(|tj| *tj > 0) {
            let j = HalfInt(tj);
            let mut energies = Vec::new();
            for tjz in (-tj..=tj).step_by(2) {
                let c = angular::couple_spin(l, j, HalfInt(tjz))?;
                f.check(c.weight_sum().is_one(), || {
                    format!("l={l} j={j} jz={}: weights sum to {}", HalfInt(tjz), to_pq(&c.weight_sum()))
                });
                energies.push(angular::mixed_state_energy(&c, l + 1));
            }
            let first = energies[0].as_ref().ok().map(|b| b.field_energies().map(Clone::clone));
            for b in &energies {
                let same = match (b, &first) {
                    (Ok(b), Some(first)) => b.field_energies().map(Clone::clone) == *first,
                    _ => false,
                };
                f.check(same, || format!("l={l} j={j}: mixed-state energy depends on jz"));
            }
        }
    }
    let c = angular::couple_spin(1, HalfInt(1), HalfInt(1))?;
    let weights: Vec<&Rational> = c.terms.iter().map(|t| &t.coeff_squared).collect();
    f.check(weights == [&ratio(1, 3), &ratio(2, 3)], || {
        format!("2P1/2 jz=1/2 weights {weights:?}")
    });
    Ok(f.finish())
}

fn spin2p(opts: &SuiteOptions) -> FamilyResult {
    let mut f = Family::new("spin2p agreement");
    match angular::spin2p_report(&opts.constants) {
        Ok(r) => {
            f.check(r.agreement, || "explicit and operator dynamic energies disagree".into());
            f.check(r.explicit_dynamic_e1 == ratio(1, 6), || {
                format!("explicit dynamic energy {}", to_pq(&r.explicit_dynamic_e1))
            });
            let rel = (r.period - r.period_from_moment).abs() / r.period;
            f.check(rel < 1e-12, || format!("period mismatch {rel:e}"));
        }
        Err(e) => f.check(false, || e.to_string()),
    }
    f.finish()
}
