//! Finite-difference check that the Milne phase carries free Schrödinger
//! solutions to solutions in a uniform gravitational field, and that this
//! works only when gravitational and inertial mass agree.
//!
//! With `ħ = 1`, a free solution `ψ` and a displacement `A(t)`, the field
//!
//! ```text
//! ψ'(x, t) = e^{iθ(x,t)} ψ(x − A(t), t),   θ = m Ȧ x − (m/2) ∫₀ᵗ Ȧ²
//! ```
//!
//! satisfies `i∂_tψ' + (1/2m)∂²_xψ' − m_g φ ψ' = 0` with `φ = −Ä(t) x` exactly
//! when `m_g = m`. The curvature invariant of the potential vanishes for a
//! linear `φ` and is not modeled.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::groupexp::MilnePhase;
use crate::ratpoly::{rational_from_f64, Rational, RationalPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchrodError {
    #[error("invalid {what}: {value}")]
    InvalidParameter { what: &'static str, value: String },
    #[error("grid has {got} points along {axis}, the stencil needs at least {need}")]
    GridTooSmall { axis: &'static str, need: usize, got: usize },
    #[error("transformed support leaves the grid at slice {slice} (lost norm fraction {lost:e})")]
    SupportEscapes { slice: usize, lost: f64 },
    #[error("ratios must include 1")]
    MissingUnitRatio,
}

/// `n` uniformly spaced points starting at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformAxis {
    pub start: f64,
    pub step: f64,
    pub n: usize,
}

impl UniformAxis {
    pub fn new(start: f64, step: f64, n: usize) -> Result<Self, SchrodError> {
        if !(step > 0.0) || n < 2 {
            return Err(SchrodError::InvalidParameter {
                what: "axis",
                value: format!("start {start}, step {step}, n {n}"),
            });
        }
        Ok(Self { start, step, n })
    }

    /// `n` points covering `[a, b]` inclusive.
    pub fn covering(a: f64, b: f64, n: usize) -> Result<Self, SchrodError> {
        Self::new(a, (b - a) / (n.max(2) - 1) as f64, n)
    }

    pub fn at(&self, k: usize) -> f64 {
        self.start + self.step * k as f64
    }

    pub fn end(&self) -> f64 {
        self.at(self.n - 1)
    }
}

/// Samples `ψ(x_j, t_k)` on a uniform space-time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub x: UniformAxis,
    pub t: UniformAxis,
    pub mass: f64,
    /// Slice-major: `values[k * x.n + j]`.
    values: Vec<Complex64>,
}

impl WaveField {
    pub fn sample(
        x: UniformAxis,
        t: UniformAxis,
        mass: f64,
        f: impl Fn(f64, f64) -> Complex64 + Sync,
    ) -> Result<Self, SchrodError> {
        check_mass(mass)?;
        let values = (0..t.n)
            .into_par_iter()
            .flat_map_iter(|k| {
                let tk = t.at(k);
                (0..x.n).map(move |j| (j, tk))
            })
            .map(|(j, tk)| f(x.at(j), tk))
            .collect();
        Ok(Self { x, t, mass, values })
    }

    pub fn value(&self, j: usize, k: usize) -> Complex64 {
        self.values[k * self.x.n + j]
    }

    pub fn slice(&self, k: usize) -> &[Complex64] {
        &self.values[k * self.x.n..(k + 1) * self.x.n]
    }

    /// Discrete `sqrt(h Σ_j |ψ_jk|²)`.
    pub fn slice_norm(&self, k: usize) -> f64 {
        (self.x.step * self.slice(k).iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }
}

fn check_mass(m: f64) -> Result<(), SchrodError> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(SchrodError::InvalidParameter {
            what: "mass",
            value: m.to_string(),
        });
    }
    Ok(())
}

/// Spreading Gaussian solution of `i∂_tψ = −(1/2m)∂²_xψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianPacket {
    pub mass: f64,
    pub x0: f64,
    pub k0: f64,
    pub width: f64,
}

/// `ψ = (2πσ²)^{-1/4} s^{-1/2} exp(−(x − x0 − k0t/m)²/(4σ²s) + ik0(x − x0) − ik0²t/2m)`,
/// `s = 1 + it/(2mσ²)`.
pub fn gaussian_packet(mass: f64, x0: f64, k0: f64, width: f64) -> Result<GaussianPacket, SchrodError> {
    check_mass(mass)?;
    if !(width > 0.0) {
        return Err(SchrodError::InvalidParameter {
            what: "width",
            value: width.to_string(),
        });
    }
    Ok(GaussianPacket { mass, x0, k0, width })
}

impl GaussianPacket {
    pub fn eval(&self, x: f64, t: f64) -> Complex64 {
        let (m, s2) = (self.mass, self.width * self.width);
        let s = Complex64::new(1.0, t / (2.0 * m * s2));
        let y = x - self.x0 - self.k0 * t / m;
        let norm = (2.0 * std::f64::consts::PI * s2).powf(-0.25);
        let expo = -(y * y) / (4.0 * s2 * s)
            + Complex64::i() * (self.k0 * (x - self.x0) - self.k0 * self.k0 * t / (2.0 * m));
        norm * expo.exp() / s.sqrt()
    }
}

/// One-dimensional displacement `A(t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccelProfile {
    pub a: RationalPoly,
}

impl AccelProfile {
    pub fn new(a: RationalPoly) -> Self {
        Self { a }
    }

    /// `A(t) = (g/2) t²`.
    pub fn uniform(g: Rational) -> Self {
        Self::new(RationalPoly::monomial(g / Rational::from_integer(2.into()), 2))
    }

    /// The field strength `g(t) = Ä(t)`.
    pub fn field(&self) -> RationalPoly {
        self.a.differentiate().differentiate()
    }

    /// True when `Ä ≡ 0`: there is no potential to couple to.
    pub fn is_unaccelerated(&self) -> bool {
        self.field().is_zero()
    }
}

/// `θ(x, t) = m Ȧ x − (m/2) ∫₀ᵗ Ȧ²`, exactly. The same closed form drives
/// the Milne group phase.
pub fn milne_phase(mass: &Rational, a: &AccelProfile) -> MilnePhase<Rational> {
    MilnePhase::from_polys(mass.clone(), std::slice::from_ref(&a.a))
}

/// Six-point Lagrange interpolation of a slice at `x`; `None` off the stencil range.
fn interpolate(axis: &UniformAxis, slice: &[Complex64], x: f64) -> Option<Complex64> {
    let u = (x - axis.start) / axis.step;
    let nearest = u.round();
    if (u - nearest).abs() < 1e-9 && nearest >= 0.0 && (nearest as usize) < axis.n {
        return Some(slice[nearest as usize]);
    }
    let base = u.floor() as isize - 2;
    if u < 2.0 || base < 0 || base as usize + 5 >= axis.n {
        return None;
    }
    let base = base as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..6 {
        let mut w = 1.0;
        for k in 0..6 {
            if k != i {
                w *= (u - (base + k) as f64) / (i as f64 - k as f64);
            }
        }
        acc += slice[base + i] * w;
    }
    Some(acc)
}

/// Norm fraction of a source slice allowed to map off the grid.
pub const SUPPORT_TOL: f64 = 1e-8;

/// `ψ'(x', t) = e^{iθ(x',t)} ψ(x' − A(t), t)` on the same grid.
///
/// Source points off the interpolation range contribute zero; if the norm
/// lost that way exceeds [`SUPPORT_TOL`] the transform is rejected.
pub fn transform_wave(psi: &WaveField, a: &AccelProfile) -> Result<WaveField, SchrodError> {
    let phase = milne_phase(&rational_from_f64(psi.mass), a).to_f64();
    let mut values = Vec::with_capacity(psi.values.len());
    for k in 0..psi.t.n {
        let t = psi.t.at(k);
        let shift = a.a.evaluate_f64(t);
        let slice = psi.slice(k);
        let mut out: Vec<Complex64> = (0..psi.x.n)
            .into_par_iter()
            .map(|j| {
                let xp = psi.x.at(j);
                interpolate(&psi.x, slice, xp - shift)
                    .map(|v| v * Complex64::from_polar(1.0, phase.evaluate(&[xp], &t)))
                    .unwrap_or_default()
            })
            .collect();
        // Source nodes whose image has no full stencil on the output grid.
        let (lo, hi) = (psi.x.at(2), psi.x.at(psi.x.n - 3));
        let total: f64 = slice.iter().map(|z| z.norm_sqr()).sum();
        let off: f64 = (0..psi.x.n)
            .filter(|&j| {
                let image = psi.x.at(j) + shift;
                image < lo || image > hi
            })
            .map(|j| slice[j].norm_sqr())
            .sum();
        let lost = if total > 0.0 { (off / total).sqrt() } else { 0.0 };
        if lost > SUPPORT_TOL {
            return Err(SchrodError::SupportEscapes { slice: k, lost });
        }
        values.append(&mut out);
    }
    Ok(WaveField {
        x: psi.x,
        t: psi.t,
        mass: psi.mass,
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    /// Discrete L² residual on each interior time slice.
    pub per_slice: Vec<f64>,
    pub max: f64,
}

/// `i∂_tψ + (1/2m_i)∂²_xψ − m_g φ ψ` with `φ = −g(t) x`, using fourth-order
/// central differences in `x` and second-order in `t`, on interior nodes.
pub fn schrodinger_residual(
    psi: &WaveField,
    m_inertial: f64,
    m_grav: f64,
    g: &RationalPoly,
) -> Result<Residual, SchrodError> {
    check_mass(m_inertial)?;
    if psi.x.n < 5 {
        return Err(SchrodError::GridTooSmall { axis: "x", need: 5, got: psi.x.n });
    }
    if psi.t.n < 3 {
        return Err(SchrodError::GridTooSmall { axis: "t", need: 3, got: psi.t.n });
    }
    let (h, dt) = (psi.x.step, psi.t.step);
    let per_slice: Vec<f64> = (1..psi.t.n - 1)
        .into_par_iter()
        .map(|k| {
            let t = psi.t.at(k);
            let gt = g.evaluate_f64(t);
            let (prev, cur, next) = (psi.slice(k - 1), psi.slice(k), psi.slice(k + 1));
            let sum: f64 = (2..psi.x.n - 2)
                .map(|j| {
                    let dt_psi = (next[j] - prev[j]) / (2.0 * dt);
                    let dxx = (-cur[j - 2] + cur[j - 1] * 16.0 - cur[j] * 30.0 + cur[j + 1] * 16.0 - cur[j + 2])
                        / (12.0 * h * h);
                    let phi = -gt * psi.x.at(j);
                    let r = Complex64::i() * dt_psi + dxx / (2.0 * m_inertial) - cur[j] * (m_grav * phi);
                    r.norm_sqr()
                })
                .sum();
            (h * sum).sqrt()
        })
        .collect();
    let max = per_slice.iter().copied().fold(0.0, f64::max);
    Ok(Residual { per_slice, max })
}

/// A packet, an acceleration, and the grid at refinement level 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub packet: GaussianPacket,
    pub accel: AccelProfile,
    pub x_range: (f64, f64),
    pub t_range: (f64, f64),
    pub nx: usize,
    pub nt: usize,
}

impl Scenario {
    /// Unit mass packet moving right under `A = t²/2` for `t ∈ [0, 1]`.
    pub fn standard() -> Self {
        Self {
            packet: GaussianPacket {
                mass: 1.0,
                x0: 0.0,
                k0: 1.0,
                width: 1.0,
            },
            accel: AccelProfile::uniform(Rational::from_integer(1.into())),
            x_range: (-12.0, 14.0),
            t_range: (0.0, 1.0),
            nx: 131,
            nt: 21,
        }
    }

    /// Axes at refinement `level`: both steps halved per level.
    pub fn axes(&self, level: u32) -> Result<(UniformAxis, UniformAxis), SchrodError> {
        let f = 1usize << level;
        Ok((
            UniformAxis::covering(self.x_range.0, self.x_range.1, (self.nx - 1) * f + 1)?,
            UniformAxis::covering(self.t_range.0, self.t_range.1, (self.nt - 1) * f + 1)?,
        ))
    }

    /// The transformed packet sampled from its closed form.
    pub fn transformed_field(&self, level: u32) -> Result<WaveField, SchrodError> {
        let (x, t) = self.axes(level)?;
        let m = self.packet.mass;
        let phase = milne_phase(&rational_from_f64(m), &self.accel).to_f64();
        let packet = self.packet;
        let a = self.accel.a.clone();
        WaveField::sample(x, t, m, move |x, t| {
            Complex64::from_polar(1.0, phase.evaluate(&[x], &t)) * packet.eval(x - a.evaluate_f64(t), t)
        })
    }

    pub fn free_field(&self, level: u32) -> Result<WaveField, SchrodError> {
        let (x, t) = self.axes(level)?;
        let packet = self.packet;
        WaveField::sample(x, t, packet.mass, move |x, t| packet.eval(x, t))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub steps: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Least-squares slope of `log residual` against `log h`.
    pub order: f64,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

/// Max-over-slices residual of `field(level)` for `level < levels`.
pub fn convergence_study(
    levels: u32,
    mass_ratio: f64,
    scenario: &Scenario,
    field: impl Fn(u32) -> Result<WaveField, SchrodError>,
    g: &RationalPoly,
) -> Result<ConvergenceStudy, SchrodError> {
    if levels < 2 {
        return Err(SchrodError::InvalidParameter {
            what: "levels",
            value: levels.to_string(),
        });
    }
    let m = scenario.packet.mass;
    let mut steps = Vec::new();
    let mut residuals = Vec::new();
    for level in 0..levels {
        let psi = field(level)?;
        steps.push(psi.x.step);
        residuals.push(schrodinger_residual(&psi, m, mass_ratio * m, g)?.max);
    }
    let lx: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ly: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    Ok(ConvergenceStudy {
        order: slope(&lx, &ly),
        steps,
        residuals,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub ratio: f64,
    pub coarse: f64,
    /// Residual at the finest level.
    pub plateau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassSweep {
    pub rows: Vec<SweepRow>,
    /// `Ä ≡ 0`: every ratio fits equally well and nothing is scored.
    pub degenerate: bool,
    pub best_ratio: Option<f64>,
    /// Nearest competitor's plateau divided by the best plateau.
    pub margin: Option<f64>,
}

/// Plateau residual of the transformed packet against the equation with
/// `m_g = ρ m` for each ratio `ρ`, at refinement levels `0` and `levels − 1`.
pub fn mass_equality_sweep(scenario: &Scenario, ratios: &[f64], levels: u32) -> Result<MassSweep, SchrodError> {
    if !ratios.contains(&1.0) {
        return Err(SchrodError::MissingUnitRatio);
    }
    let finest = levels.max(1) - 1;
    let coarse_field = scenario.transformed_field(0)?;
    let fine_field = scenario.transformed_field(finest)?;
    let g = scenario.accel.field();
    let m = scenario.packet.mass;
    let mut rows = Vec::new();
    for &ratio in ratios {
        rows.push(SweepRow {
            ratio,
            coarse: schrodinger_residual(&coarse_field, m, ratio * m, &g)?.max,
            plateau: schrodinger_residual(&fine_field, m, ratio * m, &g)?.max,
        });
    }
    let degenerate = scenario.accel.is_unaccelerated();
    let (best_ratio, margin) = if degenerate {
        (None, None)
    } else {
        let best = rows
            .iter()
            .min_by(|a, b| a.plateau.total_cmp(&b.plateau))
            .expect("ratios are nonempty");
        let runner_up = rows
            .iter()
            .filter(|r| r.ratio != best.ratio)
            .map(|r| r.plateau)
            .fold(f64::INFINITY, f64::min);
        (Some(best.ratio), Some(runner_up / best.plateau))
    };
    Ok(MassSweep {
        rows,
        degenerate,
        best_ratio,
        margin,
    })
}
