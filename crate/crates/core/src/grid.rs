//! Floating-point sampling of `|Ψ|²`: point densities, planar sections,
//! lobe counting, 2p velocity arrows and the radial probability current.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::angular::{self, PhysicalConstants};
use crate::error::{Error, Result};
use crate::exact::{horner, ExpPoly};
use crate::rational::to_f64;
use crate::wavefunction::HydrogenState;

/// Plateau tolerance for lobe counting, on max-normalized profiles.
pub const PLATEAU_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// The plane `axis = offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plane {
    pub axis: Axis,
    pub offset: f64,
}

impl Plane {
    pub const Z0: Self = Self { axis: Axis::Z, offset: 0.0 };

    /// In-plane `(u, v)` to Cartesian. `z` plane: `(x, y)`; `x` plane: `(y, z)`;
    /// `y` plane: `(x, z)`.
    pub fn to_cartesian(&self, u: f64, v: f64) -> [f64; 3] {
        match self.axis {
            Axis::Z => [u, v, self.offset],
            Axis::X => [self.offset, u, v],
            Axis::Y => [u, self.offset, v],
        }
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.axis {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        };
        write!(f, "{a}={}", self.offset)
    }
}

impl std::str::FromStr for Plane {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("plane must look like z=0 or x=1.5 (got {s:?})"));
        let (a, o) = s.split_once('=').ok_or_else(bad)?;
        let axis = match a.trim() {
            "x" | "X" => Axis::X,
            "y" | "Y" => Axis::Y,
            "z" | "Z" => Axis::Z,
            _ => return Err(bad()),
        };
        let offset: f64 = o.trim().parse().map_err(|_| bad())?;
        if !offset.is_finite() {
            return Err(bad());
        }
        Ok(Self { axis, offset })
    }
}

/// Which azimuthal factor the raster shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AzimuthalForm {
    /// `e^{imφ}/√(2π)`: `|Ψ|²` is independent of φ.
    Complex,
    /// `cos(mφ)/√π` for `m ≠ 0`, the real combination `(Ψ_m + Ψ_{−m})/√2`,
    /// whose density has `2|m|` lobes around the z axis.
    #[default]
    Standing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub plane: Plane,
    /// Half-width in Bohr radii.
    pub extent: f64,
    /// Pixels per side.
    pub resolution: usize,
    pub form: AzimuthalForm,
}

impl GridSpec {
    pub fn new(plane: Plane, extent: f64, resolution: usize) -> Result<Self> {
        let spec = Self { plane, extent, resolution, form: AzimuthalForm::default() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_form(mut self, form: AzimuthalForm) -> Self {
        self.form = form;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.extent > 0.0 && self.extent.is_finite()) {
            return Err(Error::Domain(format!("extent must be > 0 (got {})", self.extent)));
        }
        if self.resolution < 16 || !self.resolution.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "resolution must be even and >= 16 (got {})",
                self.resolution
            )));
        }
        Ok(())
    }

    pub fn pixel(&self) -> f64 {
        2.0 * self.extent / self.resolution as f64
    }

    /// Center of pixel `(row, col)`; row 0 is the top (`v = +extent`).
    pub fn pixel_center(&self, row: usize, col: usize) -> (f64, f64) {
        let h = self.pixel();
        (
            -self.extent + (col as f64 + 0.5) * h,
            self.extent - (row as f64 + 0.5) * h,
        )
    }
}

/// Half-width that contains the outermost radial lobe of every state with
/// principal number `n`: `2n(n+1)` Bohr radii.
pub fn default_extent(n: u32) -> f64 {
    2.0 * n as f64 * (n as f64 + 1.0)
}

pub const DEFAULT_RESOLUTION: usize = 256;

/// `f64` copy of a state with the normalizations folded in.
#[derive(Debug, Clone)]
pub struct FloatState {
    pub n: u32,
    pub l: u32,
    pub m: i32,
    radial: Vec<f64>,
    radial_deriv: Vec<f64>,
    beta: f64,
    polar: Vec<f64>,
    sin_power: i32,
}

impl FloatState {
    pub fn new(state: &HydrogenState) -> Self {
        let cr = to_f64(state.radial.c2()).sqrt();
        let cn = to_f64(state.polar.n2()).sqrt();
        let r: ExpPoly = state.radial.function();
        let scale = |v: Vec<f64>, s: f64| v.into_iter().map(|c| c * s).collect::<Vec<_>>();
        Self {
            n: state.n(),
            l: state.l(),
            m: state.m(),
            radial: scale(r.float_coeffs(), cr),
            radial_deriv: scale(r.derivative().float_coeffs(), cr),
            beta: to_f64(state.radial.beta()),
            polar: state.polar.cos_poly().iter().map(|c| to_f64(c) * cn).collect(),
            sin_power: state.polar.sin_power() as i32,
        }
    }

    /// Normalized `C_r R(r)`.
    pub fn radial(&self, r: f64) -> f64 {
        horner(&self.radial, r) * (-self.beta * r).exp()
    }

    /// `d/dr` of [`Self::radial`].
    pub fn radial_deriv(&self, r: f64) -> f64 {
        horner(&self.radial_deriv, r) * (-self.beta * r).exp()
    }

    /// Normalized `N Θ(θ)`.
    pub fn polar(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.polar_sc(s, c)
    }

    fn polar_sc(&self, sin_theta: f64, cos_theta: f64) -> f64 {
        sin_theta.powi(self.sin_power) * horner(&self.polar, cos_theta)
    }

    /// Density at a Cartesian point. Angles enter through `z/r` and `ρ/r`, so
    /// nodal planes through the origin come out exactly zero.
    pub fn density_at(&self, p: [f64; 3], form: AzimuthalForm) -> f64 {
        let [x, y, z] = p;
        let rho = x.hypot(y);
        let r = rho.hypot(z);
        let (s, c) = if r > 0.0 { (rho / r, z / r) } else { (0.0, 1.0) };
        let a = self.radial(r) * self.polar_sc(s, c);
        match form {
            AzimuthalForm::Standing if self.m != 0 => {
                let b = a * (self.m as f64 * y.atan2(x)).cos();
                b * b / PI
            }
            _ => a * a / (2.0 * PI),
        }
    }

    /// `|Ψ|²` with the complex azimuthal factor.
    pub fn density(&self, r: f64, theta: f64) -> f64 {
        let a = self.radial(r) * self.polar(theta);
        a * a / (2.0 * PI)
    }

    /// Complex `Ψ(r, θ, φ)` and `∂Ψ/∂r`.
    pub fn psi_and_dr(&self, r: f64, theta: f64, phi: f64) -> (Complex64, Complex64) {
        let phase = Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), self.m as f64 * phi);
        let ang = self.polar(theta);
        (
            phase * (self.radial(r) * ang),
            phase * (self.radial_deriv(r) * ang),
        )
    }

    pub fn psi(&self, r: f64, theta: f64, phi: f64) -> Complex64 {
        self.psi_and_dr(r, theta, phi).0
    }
}

/// `(r, θ, φ)` of a Cartesian point.
pub fn to_spherical(p: [f64; 3]) -> (f64, f64, f64) {
    let [x, y, z] = p;
    let r = (x * x + y * y + z * z).sqrt();
    let theta = if r > 0.0 { (z / r).clamp(-1.0, 1.0).acos() } else { 0.0 };
    (r, theta, y.atan2(x))
}

/// `|Ψ|²` at a point, in `a⁻³`; independent of φ.
pub fn density(state: &HydrogenState, r: f64, theta: f64, _phi: f64) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::Domain(format!("r must be >= 0 (got {r})")));
    }
    Ok(FloatState::new(state).density(r, theta))
}

#[derive(Debug, Clone, Serialize)]
pub struct RasterMeta {
    pub state: String,
    pub plane: Plane,
    pub extent: f64,
    pub resolution: usize,
    pub form: AzimuthalForm,
    pub note: &'static str,
}

#[derive(Debug, Clone)]
pub struct Raster {
    /// Row-major, `resolution × resolution`, raw `|Ψ|²` in `a⁻³`.
    pub values: Vec<f64>,
    pub spec: GridSpec,
    pub meta: RasterMeta,
}

impl Raster {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.spec.resolution + col]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn argmax(&self) -> (usize, usize) {
        let (idx, _) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |best, (i, v)| if *v > best.1 { (i, *v) } else { best });
        (idx / self.spec.resolution, idx % self.spec.resolution)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# state={}", self.meta.state)?;
        writeln!(w, "# plane={}", self.meta.plane)?;
        writeln!(w, "# extent={}", self.meta.extent)?;
        writeln!(w, "# resolution={}", self.meta.resolution)?;
        writeln!(w, "# form={}", form_name(self.meta.form))?;
        writeln!(w, "# {}", self.meta.note)?;
        for row in self.values.chunks(self.spec.resolution) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.9e}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    /// Binary 8-bit PGM, linearly max-normalized.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> io::Result<()> {
        let res = self.spec.resolution;
        write!(w, "P5\n{res} {res}\n255\n")?;
        let max = self.max();
        let bytes: Vec<u8> = self
            .values
            .iter()
            .map(|v| if max > 0.0 { (v / max * 255.0).round() as u8 } else { 0 })
            .collect();
        w.write_all(&bytes)
    }
}

fn form_name(f: AzimuthalForm) -> &'static str {
    match f {
        AzimuthalForm::Complex => "complex",
        AzimuthalForm::Standing => "standing",
    }
}

fn plane_density(fs: &FloatState, spec: &GridSpec, u: f64, v: f64) -> f64 {
    fs.density_at(spec.plane.to_cartesian(u, v), spec.form)
}

/// Section raster sampled at pixel centers; rows are computed in parallel.
pub fn section(state: &HydrogenState, spec: &GridSpec) -> Result<Raster> {
    spec.validate()?;
    let fs = FloatState::new(state);
    let res = spec.resolution;
    let mut values = vec![0.0; res * res];
    values.par_chunks_mut(res).enumerate().for_each(|(row, out)| {
        for (col, slot) in out.iter_mut().enumerate() {
            let (u, v) = spec.pixel_center(row, col);
            *slot = plane_density(&fs, spec, u, v);
        }
    });
    Ok(Raster {
        values,
        spec: *spec,
        meta: RasterMeta {
            state: state.qn.to_string(),
            plane: spec.plane,
            extent: spec.extent,
            resolution: res,
            form: spec.form,
            note: "raw |psi|^2 in a^-3 sampled at pixel centers",
        },
    })
}

/// Local maxima of a sampled profile. Neighbouring samples within `tol` of
/// each other (after max-normalization) form one plateau; a plateau counts
/// once if it is higher than both neighbouring plateaus. Open profiles treat
/// their ends as having a single neighbour. A flat profile has no maxima.
pub fn count_local_maxima(profile: &[f64], periodic: bool, tol: f64) -> usize {
    let max = profile.iter().copied().fold(0.0, f64::max);
    if profile.is_empty() || max <= 0.0 {
        return 0;
    }
    let mut runs: Vec<f64> = Vec::new();
    for v in profile.iter().map(|v| v / max) {
        match runs.last() {
            Some(last) if (v - last).abs() <= tol => {}
            _ => runs.push(v),
        }
    }
    if periodic && runs.len() > 1 && (runs[0] - runs[runs.len() - 1]).abs() <= tol {
        runs.pop();
    }
    let k = runs.len();
    if k <= 1 {
        return 0;
    }
    (0..k)
        .filter(|&i| {
            let left = if i > 0 {
                Some(runs[i - 1])
            } else if periodic {
                Some(runs[k - 1])
            } else {
                None
            };
            let right = if i + 1 < k {
                Some(runs[i + 1])
            } else if periodic {
                Some(runs[0])
            } else {
                None
            };
            left.is_none_or(|l| runs[i] > l) && right.is_none_or(|r| runs[i] > r)
        })
        .count()
}

/// Connected groups of pixels that are `>=` all 8 neighbours (within the
/// plateau tolerance); ties between symmetric pixels count once.
pub fn count_raster_maxima(raster: &Raster, tol: f64) -> usize {
    let res = raster.spec.resolution;
    let max = raster.max();
    if max <= 0.0 {
        return 0;
    }
    let val = |r: usize, c: usize| raster.get(r, c) / max;
    let neighbours = |r: usize, c: usize| {
        let mut out = Vec::with_capacity(8);
        for dr in -1i64..=1 {
            for dc in -1i64..=1 {
                if dr == 0 && dc == 0 {
                    continue;
                }
                let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                if nr >= 0 && nc >= 0 && (nr as usize) < res && (nc as usize) < res {
                    out.push((nr as usize, nc as usize));
                }
            }
        }
        out
    };
    let mut candidate = vec![false; res * res];
    for r in 0..res {
        for c in 0..res {
            let v = val(r, c);
            candidate[r * res + c] =
                v > tol && neighbours(r, c).iter().all(|&(nr, nc)| v + tol >= val(nr, nc));
        }
    }
    let mut seen = vec![false; res * res];
    let mut groups = 0;
    for start in 0..res * res {
        if !candidate[start] || seen[start] {
            continue;
        }
        groups += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for (nr, nc) in neighbours(i / res, i % res) {
                let j = nr * res + nc;
                if candidate[j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    groups
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LobeReport {
    /// Maxima around the circle through the brightest pixel.
    pub azimuthal: usize,
    /// Maxima along the ray from the plane center through the brightest pixel.
    pub radial: usize,
    /// Connected 2-D local-maximum regions of the raster.
    pub in_plane: usize,
    pub peak_radius: f64,
    pub peak_angle: f64,
    /// The ray's first maximum sits at the center.
    pub central: bool,
}

impl LobeReport {
    pub fn summary(&self) -> String {
        if self.radial == 0 && self.azimuthal == 0 {
            "no density in this plane".to_string()
        } else if self.azimuthal == 0 {
            if self.radial == 1 && self.central {
                "1 central maximum".to_string()
            } else {
                format!("rotationally symmetric, {} radial maxima", self.radial)
            }
        } else {
            format!("{} azimuthal × {} radial maxima", self.azimuthal, self.radial)
        }
    }
}

const PROFILE_SAMPLES: usize = 4096;

/// Profile of the plane density around the circle of radius `radius`.
pub fn circle_profile(state: &HydrogenState, spec: &GridSpec, radius: f64, samples: usize) -> Vec<f64> {
    let fs = FloatState::new(state);
    (0..samples)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / samples as f64;
            plane_density(&fs, spec, radius * a.cos(), radius * a.sin())
        })
        .collect()
}

/// Profile along the in-plane ray at `angle`, from the center out to `extent`.
pub fn ray_profile(state: &HydrogenState, spec: &GridSpec, angle: f64, samples: usize) -> Vec<f64> {
    let fs = FloatState::new(state);
    let (s, c) = angle.sin_cos();
    (0..samples)
        .map(|i| {
            let t = spec.extent * (i as f64 + 0.5) / samples as f64;
            plane_density(&fs, spec, t * c, t * s)
        })
        .collect()
}

pub fn lobe_report(state: &HydrogenState, raster: &Raster) -> LobeReport {
    let spec = &raster.spec;
    let (row, col) = raster.argmax();
    let (u, v) = spec.pixel_center(row, col);
    let peak_radius = (u * u + v * v).sqrt();
    let peak_angle = v.atan2(u);
    let circle = circle_profile(state, spec, peak_radius, PROFILE_SAMPLES);
    let ray = ray_profile(state, spec, peak_angle, PROFILE_SAMPLES);
    let ray_max = ray.iter().copied().fold(0.0, f64::max);
    let central = ray_max > 0.0 && (ray[0] / ray_max) >= 1.0 - PLATEAU_TOL;
    LobeReport {
        azimuthal: count_local_maxima(&circle, true, PLATEAU_TOL),
        radial: count_local_maxima(&ray, false, PLATEAU_TOL),
        in_plane: count_raster_maxima(raster, PLATEAU_TOL),
        peak_radius,
        peak_angle,
        central,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arrow {
    /// In-plane coordinates, Bohr radii.
    pub u: f64,
    pub v: f64,
    pub position: [f64; 3],
    /// m/s
    pub magnitude: f64,
    /// Unit azimuthal direction; zero on the z axis.
    pub direction: [f64; 3],
    pub density: f64,
}

/// Tangential field velocities `2π r sinθ / T` of a 2p state, one arrow per
/// `stride`-th pixel center, keeping arrows whose density is at least
/// `min_density_fraction` of the largest sampled density.
pub fn velocity_field(
    state: &HydrogenState,
    spec: &GridSpec,
    period: f64,
    constants: &PhysicalConstants,
    stride: usize,
    min_density_fraction: f64,
) -> Result<Vec<Arrow>> {
    if state.n() != 2 || state.l() != 1 {
        return Err(Error::Domain(format!(
            "velocity field is defined for 2p states only (got {})",
            state.qn
        )));
    }
    spec.validate()?;
    let stride = stride.max(1);
    let fs = FloatState::new(state);
    let mut arrows = Vec::new();
    for row in (stride / 2..spec.resolution).step_by(stride) {
        for col in (stride / 2..spec.resolution).step_by(stride) {
            let (u, v) = spec.pixel_center(row, col);
            let p = spec.plane.to_cartesian(u, v);
            let rho = p[0].hypot(p[1]);
            let r = rho.hypot(p[2]);
            let sin_theta = if r > 0.0 { rho / r } else { 0.0 };
            let magnitude = angular::field_velocity(r, sin_theta, period, constants)?;
            let direction = if rho > 0.0 { [-p[1] / rho, p[0] / rho, 0.0] } else { [0.0; 3] };
            arrows.push(Arrow {
                u,
                v,
                position: p,
                magnitude,
                direction,
                density: fs.density_at(p, spec.form),
            });
        }
    }
    let max = arrows.iter().map(|a| a.density).fold(0.0, f64::max);
    arrows.retain(|a| a.density >= min_density_fraction * max);
    Ok(arrows)
}

/// `j_r = (iħ/2m)(Ψ ∂Ψ*/∂r − Ψ* ∂Ψ/∂r)` with `ħ/2m = 1`, using the exact
/// radial derivative.
pub fn radial_current(state: &HydrogenState, r: f64, theta: f64, phi: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("r must be > 0 (got {r})")));
    }
    let (psi, dpsi) = FloatState::new(state).psi_and_dr(r, theta, phi);
    Ok(current(psi, dpsi))
}

/// Same as [`radial_current`] with `∂Ψ/∂r` from central differences of the
/// sampled complex wavefunction.
pub fn radial_current_fd(state: &HydrogenState, r: f64, theta: f64, phi: f64, h: f64) -> Result<f64> {
    if r <= h {
        return Err(Error::Domain(format!("r must exceed the step (r={r}, h={h})")));
    }
    let fs = FloatState::new(state);
    let psi = fs.psi(r, theta, phi);
    let dpsi = (fs.psi(r + h, theta, phi) - fs.psi(r - h, theta, phi)) / (2.0 * h);
    Ok(current(psi, dpsi))
}

fn current(psi: Complex64, dpsi: Complex64) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    let j = i * (psi * dpsi.conj() - psi.conj() * dpsi);
    j.re
}

/// Exact `r`-dependent factor of `j_r`: `R R'` times the difference of the
/// azimuthal phase products `e^{imφ}e^{−imφ} − e^{−imφ}e^{imφ}`. The phase
/// exponents cancel in both products, so the coefficient is zero.
pub fn radial_current_exact(state: &HydrogenState) -> ExpPoly {
    let r = state.radial.function();
    let product = r.mul(&r.derivative());
    let m = state.m() as i64;
    let phase = |a: i64, b: i64| if a + b == 0 { 1 } else { 0 };
    let coeff = phase(m, -m) - phase(-m, m);
    product.scale(&crate::rational::int(coeff))
}

/// Midpoint-rule `∫|Ψ|² dV` over the cube `[−extent, extent]³`.
pub fn integrate_density_3d(state: &HydrogenState, extent: f64, resolution: usize) -> f64 {
    let fs = FloatState::new(state);
    let h = 2.0 * extent / resolution as f64;
    let coord = |i: usize| -extent + (i as f64 + 0.5) * h;
    let sum: f64 = (0..resolution)
        .into_par_iter()
        .map(|k| {
            let z = coord(k);
            let mut acc = 0.0;
            for j in 0..resolution {
                let y = coord(j);
                for i in 0..resolution {
                    acc += fs.density_at([coord(i), y, z], AzimuthalForm::Complex);
                }
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    sum * h * h * h
}
