//! Gauss–Laguerre and Gauss–Legendre rules, used as an independent numeric
//! check on the exact integrals.
//!
//! Nodes come from Newton iteration on the three-term recurrences; no
//! tabulated values are used.

use std::f64::consts::PI;

use crate::energy::{self, EnergyBreakdown};
use crate::error::{Error, Result};
use crate::exact::{horner, ExpPoly, TrigPoly};
use crate::rational::{to_f64, Rational};
use crate::wavefunction::HydrogenState;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    GaussLaguerre,
    GaussLegendre,
}

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

/// `(L_n(x), L_{n−1}(x))`
fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        p1 = ((2 * j + 1) as f64 - x) * p2 / (j + 1) as f64 - j as f64 * p3 / (j + 1) as f64;
    }
    (p1, p2)
}

/// `(P_n(x), P_{n−1}(x))`
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        p1 = ((2 * j + 1) as f64 * x * p2 - j as f64 * p3) / (j + 1) as f64;
    }
    (p1, p2)
}

impl QuadratureRule {
    /// Rule for `∫₀^∞ f(x) e^{−x} dx`.
    pub fn gauss_laguerre(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let nf = n as f64;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut z = 0.0f64;
        for i in 0..n {
            // Stroud–Secrest style starting points
            z = match i {
                0 => 3.0 / (1.0 + 2.4 * nf),
                1 => z + 15.0 / (1.0 + 2.5 * nf),
                _ => {
                    let ai = (i - 1) as f64;
                    z + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2])
                }
            };
            for _ in 0..NEWTON_MAX_ITER {
                let (p, q) = laguerre_pair(n, z);
                let dz = p / (nf * (p - q) / z);
                z -= dz;
                if dz.abs() <= NEWTON_TOL * z.abs().max(1.0) {
                    break;
                }
            }
            let (p, q) = laguerre_pair(n, z);
            let deriv = nf * (p - q) / z;
            nodes.push(z);
            weights.push(1.0 / (z * deriv * deriv));
        }
        Self { kind: RuleKind::GaussLaguerre, nodes, weights, order }
    }

    /// Rule for `∫_{−1}^{1} f(x) dx`.
    pub fn gauss_legendre(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..NEWTON_MAX_ITER {
                let (p, q) = legendre_pair(n, z);
                let dz = p / (nf * (z * p - q) / (z * z - 1.0));
                z -= dz;
                if dz.abs() <= NEWTON_TOL {
                    break;
                }
            }
            let (p, q) = legendre_pair(n, z);
            let deriv = nf * (z * p - q) / (z * z - 1.0);
            let w = 2.0 / ((1.0 - z * z) * deriv * deriv);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { kind: RuleKind::GaussLegendre, nodes, weights, order }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

/// Smallest order that is exact for polynomials of degree `deg`.
pub fn min_order(deg: u32) -> usize {
    (deg as usize + 2) / 2
}

/// Default order: twice the polynomial degree, at least the minimum.
pub fn default_order(deg: u32) -> usize {
    (2 * deg as usize).max(min_order(deg)).max(2)
}

/// Gauss–Laguerre on `x = βr`.
pub fn quad_radial(f: &ExpPoly, order: usize) -> Result<f64> {
    let beta = to_f64(f.beta());
    if beta <= 0.0 {
        return Err(Error::Divergent(crate::rational::to_pq(f.beta())));
    }
    let deg = f.degree().unwrap_or(0);
    let needed = min_order(deg);
    if order < needed {
        return Err(Error::InsufficientOrder { order, needed });
    }
    let coeffs = f.float_coeffs();
    let rule = QuadratureRule::gauss_laguerre(order);
    Ok(rule.integrate(|x| horner(&coeffs, x / beta)) / beta)
}

/// Gauss–Legendre on `u = cos θ`. The trig polynomial itself is evaluated at
/// `θ = acos u` and the Jacobian `sin θ` divided out, which leaves a
/// polynomial in `u` only when every term carries an odd power of `sin θ`.
pub fn quad_polar(f: &TrigPoly, with_sin_measure: bool, order: usize) -> Result<f64> {
    let folded = if with_sin_measure { f.mul(&TrigPoly::sin()) } else { f.clone() };
    if let Some((_, k, c)) = folded.terms().find(|(s, _, _)| *s == 0) {
        return Err(Error::UnsupportedIntegrand(format!(
            "term {c}·cos^{k}θ has an even power of sin θ"
        )));
    }
    let needed = min_order(folded.cos_degree());
    if order < needed {
        return Err(Error::InsufficientOrder { order, needed });
    }
    let rule = QuadratureRule::gauss_legendre(order);
    Ok(rule.integrate(|u| {
        let theta = u.acos();
        folded.eval(theta) / theta.sin()
    }))
}

/// Worst relative deviation of the quadrature energies from the exact ones.
///
/// The kinetic integrals are evaluated in their integrated-by-parts form
/// (`∫ r² R'² dr`, `∫ sin θ Θ'² dθ`), so this also exercises a different
/// algebraic route from the exact engine.
pub fn cross_check_state(state: &HydrogenState) -> Result<f64> {
    let exact = energy::decompose(state)?;
    let numeric = quadrature_breakdown(state)?;
    let rel = |q: f64, e: &Rational| {
        let e = to_f64(e);
        if e == 0.0 {
            q.abs()
        } else {
            ((q - e) / e).abs()
        }
    };
    let pairs = [
        (numeric[0], &exact.ke_r),
        (numeric[1], &exact.ke_theta),
        (numeric[2], &exact.ke_phi),
        (numeric[3], &exact.potential),
    ];
    Ok(pairs.iter().map(|(q, e)| rel(*q, e)).fold(0.0, f64::max))
}

/// `[KE_r, KE_θ, KE_φ, V]` by quadrature.
pub fn quadrature_breakdown(state: &HydrogenState) -> Result<[f64; 4]> {
    let c2 = to_f64(state.radial.c2());
    let n2 = to_f64(state.polar.n2());
    let r = state.radial.function();
    let dr = r.derivative();
    let theta = state.polar.function();
    let dtheta = theta.derivative();

    let qr = |f: &ExpPoly| quad_radial(f, default_order(f.degree().unwrap_or(0)));
    let qp = |f: &TrigPoly, w: bool| quad_polar(f, w, default_order(f.cos_degree() + 2));

    let angular = n2 * qp(&theta.mul(&theta), true)?;
    let potential = -2.0 * c2 * qr(&r.mul(&r).shift(1)?)? * angular;
    let ke_r = c2 * qr(&dr.mul(&dr).shift(2)?)? * angular;
    let ri = -c2 * qr(&r.mul(&r))?;
    let polar = -n2 * qp(&TrigPoly::sin().mul(&dtheta.mul(&dtheta)), false)?;
    let m2 = (state.m() as f64).powi(2);
    let az = if state.m() == 0 {
        0.0
    } else {
        -m2 * n2 * qp(&state.polar.squared_over_sin2()?, true)?
    };
    Ok([ke_r, ri * polar, ri * az, potential])
}

/// Helper for tests and the CLI: the exact breakdown next to its numeric twin.
pub fn compare(state: &HydrogenState) -> Result<(EnergyBreakdown, [f64; 4])> {
    Ok((energy::decompose(state)?, quadrature_breakdown(state)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::wavefunction::build_state;

    fn factorial_f64(k: usize) -> f64 {
        (1..=k).map(|i| i as f64).product()
    }

    #[test]
    fn laguerre_rule_self_test() {
        for q in [4usize, 8, 16] {
            let rule = QuadratureRule::gauss_laguerre(q);
            assert_eq!(rule.nodes.len(), q);
            assert!(rule.weights.iter().all(|w| *w > 0.0));
            let k = 2 * q - 1;
            let got = rule.integrate(|x| x.powi(k as i32));
            let want = factorial_f64(k);
            assert!(((got - want) / want).abs() < 1e-9, "q={q}: {got} vs {want}");
        }
    }

    #[test]
    fn legendre_rule_self_test() {
        for q in [1usize, 2, 5, 12, 31] {
            let rule = QuadratureRule::gauss_legendre(q);
            assert!(rule.weights.iter().all(|w| *w > 0.0));
            assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let k = 2 * q - 2;
            let got = rule.integrate(|x| x.powi(k as i32));
            assert!((got - 2.0 / (k as f64 + 1.0)).abs() < 1e-13, "q={q}");
        }
    }

    #[test]
    fn radial_examples() {
        let f = ExpPoly::monomial(int(1), 4, ratio(2, 3));
        assert!((quad_radial(&f, 8).unwrap() - 182.25).abs() < 1e-8);
        let e = ExpPoly::monomial(int(1), 0, int(1));
        assert!((quad_radial(&e, 2).unwrap() - 1.0).abs() < 1e-14);
        let s = build_state(1, 0, 0).unwrap();
        let r = s.radial.function();
        let norm = to_f64(s.radial.c2()) * quad_radial(&r.mul(&r).shift(2).unwrap(), 4).unwrap();
        assert!((norm - 1.0).abs() < 1e-13);
    }

    #[test]
    fn insufficient_order_refused() {
        let f = ExpPoly::monomial(int(1), 9, int(1));
        assert!(matches!(quad_radial(&f, 4), Err(Error::InsufficientOrder { needed: 5, .. })));
        let g = TrigPoly::term(int(1), 1, 10);
        assert!(quad_polar(&g, false, 3).is_err());
    }

    #[test]
    fn polar_examples() {
        let s3 = TrigPoly::term(int(1), 3, 0);
        assert!((quad_polar(&s3, false, 4).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert!((quad_polar(&TrigPoly::sin(), false, 2).unwrap() - 2.0).abs() < 1e-14);
        // polar bracket for Θ = sin²θ, n² = 15/16
        let theta = TrigPoly::term(int(1), 2, 0);
        let inner = TrigPoly::sin().mul(&theta.derivative()).derivative();
        let v = 15.0 / 16.0 * quad_polar(&theta.mul(&inner), false, 8).unwrap();
        assert!((v + 1.0).abs() < 1e-12);
    }

    #[test]
    fn cross_check_examples() {
        assert!(cross_check_state(&build_state(3, 2, 2).unwrap()).unwrap() < 1e-10);
        assert!(cross_check_state(&build_state(1, 0, 0).unwrap()).unwrap() < 1e-12);
        assert!(cross_check_state(&build_state(7, 3, 3).unwrap()).unwrap() < 1e-10);
    }
}
