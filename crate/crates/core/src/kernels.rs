//! Covariance kernels of ball-indexed fields.
//!
//! For a strictly positive bounded operator `A` with radial Fourier
//! multiplier `m(|k|)` the kernel is
//!
//! ```text
//! K(b1, b2) = ⟨v_r 1_{b(x,r)}, A v_s 1_{b(y,s)}⟩
//!           = (2π)^{-d} S_{d-1} ∫_0^∞ m(ρ) Φ_{d/2}(rρ) Φ_{d/2}(sρ) Φ_{d/2-1}(ρ|x-y|) ρ^{d-1} dρ
//! ```
//!
//! where `Φ_ν` is the normalized Bessel function (see [`crate::special::bessel`]),
//! `Φ_{d/2}(rρ) = v_r · F̂[1_{b(0,r)}](ρ)` and `Φ_{d/2-1}` is the spherical
//! average of `e^{ik·z}`. The identity part of a multiplier (`W`, white
//! noise, the floor of a spectral multiplier) is evaluated exactly through
//! the intersection volume; only the decaying part goes through quadrature.

use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::geometry::{check_same_dim, lens_volume, Ball};
use crate::special::{gamma_half, gauss_legendre, normalized_bessel, normalized_bessel_envelope, AdaptiveIntegrator};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// Radial multiplier `m(ρ) = floor + weight · (ρ² + mass²)^(−exponent)`.
///
/// Bounds: `floor ≤ m(ρ) ≤ floor + weight · mass^(−2·exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralMultiplier {
    pub floor: f64,
    pub weight: f64,
    pub mass: f64,
    pub exponent: f64,
}

impl SpectralMultiplier {
    pub fn validate(&self) -> Result<()> {
        let ok = self.floor > 0.0
            && self.floor.is_finite()
            && self.weight >= 0.0
            && self.weight.is_finite()
            && self.mass > 0.0
            && self.mass.is_finite()
            && self.exponent >= 1.0
            && self.exponent.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "spectral multiplier needs floor > 0, weight >= 0, mass > 0, exponent >= 1 (got {self:?})"
            )))
        }
    }

    pub fn eval(&self, rho: f64) -> f64 {
        self.floor + self.weight * (rho * rho + self.mass * self.mass).powf(-self.exponent)
    }

    pub fn lower_bound(&self) -> f64 {
        self.floor
    }

    pub fn upper_bound(&self) -> f64 {
        self.floor + self.weight * self.mass.powf(-2.0 * self.exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    /// `W(b1, b2) = vol(b1 ∩ b2)`, the Brownian sheet indexed by balls.
    W,
    /// Mollified white noise, `A = I`.
    White,
    /// Mollified free field, `A = (−Δ + m²)^{-1}`.
    FreeField { mass: f64 },
    Spectral(SpectralMultiplier),
}

impl KernelSpec {
    pub fn free_field() -> Self {
        KernelSpec::FreeField { mass: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::W | KernelSpec::White => Ok(()),
            KernelSpec::FreeField { mass } => {
                if *mass > 0.0 && mass.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!("free-field mass must be positive (got {mass})")))
                }
            }
            KernelSpec::Spectral(m) => m.validate(),
        }
    }

    /// Short machine-readable name.
    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::W => "w",
            KernelSpec::White => "white",
            KernelSpec::FreeField { .. } => "free_field",
            KernelSpec::Spectral(_) => "spectral",
        }
    }

    /// Parameters as `key=value` pairs joined by `;`.
    pub fn params(&self) -> String {
        match self {
            KernelSpec::W | KernelSpec::White => String::new(),
            KernelSpec::FreeField { mass } => format!("mass={mass}"),
            KernelSpec::Spectral(m) => format!(
                "floor={};weight={};mass={};exponent={}",
                m.floor, m.weight, m.mass, m.exponent
            ),
        }
    }

    /// Constant multiplying the white-noise kernel.
    fn identity_part(&self) -> f64 {
        match self {
            KernelSpec::W | KernelSpec::FreeField { .. } => 0.0,
            KernelSpec::White => 1.0,
            KernelSpec::Spectral(m) => m.floor,
        }
    }

    /// `(weight, mass, exponent)` of the decaying part, if any.
    fn decaying_part(&self) -> Option<Decay> {
        match *self {
            KernelSpec::FreeField { mass } => Some(Decay {
                weight: 1.0,
                mass,
                exponent: 1.0,
            }),
            KernelSpec::Spectral(m) if m.weight > 0.0 => Some(Decay {
                weight: m.weight,
                mass: m.mass,
                exponent: m.exponent,
            }),
            _ => None,
        }
    }

    /// Lower and upper bounds `c ≤ m(ρ) ≤ K` of the multiplier, when the
    /// kernel is defined through one.
    pub fn multiplier_bounds(&self) -> Option<(f64, f64)> {
        match self {
            KernelSpec::W => None,
            KernelSpec::White => Some((1.0, 1.0)),
            KernelSpec::FreeField { mass } => Some((0.0, mass.powi(-2))),
            KernelSpec::Spectral(m) => Some((m.lower_bound(), m.upper_bound())),
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.params();
        if p.is_empty() {
            write!(f, "{}", self.name())
        } else {
            write!(f, "{}({})", self.name(), p)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Decay {
    weight: f64,
    mass: f64,
    exponent: f64,
}

impl Decay {
    fn eval(&self, rho: f64) -> f64 {
        let q = rho * rho + self.mass * self.mass;
        if self.exponent == 1.0 {
            self.weight / q
        } else {
            self.weight * q.powf(-self.exponent)
        }
    }
}

/// Accuracy controls for the spectral quadrature.
///
/// The target absolute error of a kernel entry is
/// `max(abs_tol, rel_tol · scale)` where `scale` is a lower estimate of
/// `sqrt(K(b1,b1) K(b2,b2))`, so the relative tolerance is measured
/// against the diagonal of the covariance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Fraction of the error budget granted to truncating `[0, ∞)` at `R`.
    /// `R` is the smallest `R0 · 2^k` whose tail envelope fits the budget.
    pub tail_share: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 400_000,
            tail_share: 0.25,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_subdivisions >= 1
            && self.tail_share > 0.0
            && self.tail_share < 1.0
        {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid quadrature configuration {self:?}")))
        }
    }
}

/// A kernel value with its accuracy record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelEval {
    pub value: f64,
    /// Estimated absolute error (quadrature plus truncated tail); zero for
    /// exactly evaluated kernels.
    pub error_estimate: f64,
    /// Truncation radius of the spectral integral, when one was used.
    pub truncation_radius: Option<f64>,
    pub tail_bound: f64,
}

impl KernelEval {
    fn exact(value: f64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            truncation_radius: None,
            tail_bound: 0.0,
        }
    }
}

/// Anything that evaluates a covariance on pairs of balls.
pub trait Kernel: Sync {
    fn eval(&self, b1: &Ball, b2: &Ball, q: &QuadratureConfig) -> Result<KernelEval>;

    fn describe(&self) -> String;
}

impl Kernel for KernelSpec {
    fn eval(&self, b1: &Ball, b2: &Ball, q: &QuadratureConfig) -> Result<KernelEval> {
        eval_kernel_detailed(self, b1, b2, q)
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

pub fn eval_kernel(spec: &KernelSpec, b1: &Ball, b2: &Ball, q: &QuadratureConfig) -> Result<f64> {
    eval_kernel_detailed(spec, b1, b2, q).map(|e| e.value)
}

pub fn eval_kernel_detailed(
    spec: &KernelSpec,
    b1: &Ball,
    b2: &Ball,
    q: &QuadratureConfig,
) -> Result<KernelEval> {
    let d = check_same_dim(b1, b2)?;
    spec.validate()?;
    // canonical argument order makes the result exactly symmetric
    let (r, s) = if b1.radius() <= b2.radius() {
        (b1.radius(), b2.radius())
    } else {
        (b2.radius(), b1.radius())
    };
    let delta = b1.center_distance(b2);
    eval_radial(spec, d, r, s, delta, q)
}

/// Kernel as a function of the radii and the center distance.
pub fn eval_radial(
    spec: &KernelSpec,
    d: usize,
    r: f64,
    s: f64,
    delta: f64,
    q: &QuadratureConfig,
) -> Result<KernelEval> {
    if let KernelSpec::W = spec {
        return Ok(KernelEval::exact(lens_volume(d, r, s, delta)));
    }
    let c = spec.identity_part();
    let white = if c > 0.0 {
        let vr = 1.0 / crate::geometry::ball_volume(d, r)?;
        let vs = 1.0 / crate::geometry::ball_volume(d, s)?;
        c * vr * vs * lens_volume(d, r, s, delta)
    } else {
        0.0
    };
    match spec.decaying_part() {
        None => Ok(KernelEval::exact(white)),
        Some(decay) => {
            q.validate()?;
            let mut e = spectral_integral(d, r, s, delta, &decay, q, c)?;
            e.value += white;
            Ok(e)
        }
    }
}

/// `(2π)^{-d} S_{d-1}`, the radial Fourier prefactor.
fn radial_prefactor(d: usize) -> f64 {
    let sphere = 2.0 * PI.powf(d as f64 / 2.0) / gamma_half(d as u32);
    sphere * (2.0 * PI).powi(-(d as i32))
}

/// Lower estimate of the diagonal `K(b, b)` of the decaying part, using
/// `Φ_{d/2}(u) ≥ Φ_{d/2}(1)` on `[0, 1]`.
fn diagonal_scale(d: usize, r: f64, decay: &Decay, identity_part: f64) -> f64 {
    let (x, w) = gauss_legendre(24);
    let upper = 1.0 / r;
    let half = 0.5 * upper;
    let integral: f64 = x
        .iter()
        .zip(&w)
        .map(|(xi, wi)| {
            let rho = half * (xi + 1.0);
            wi * decay.eval(rho) * rho.powi(d as i32 - 1)
        })
        .sum::<f64>()
        * half;
    let phi1 = normalized_bessel(d as i32, 1.0);
    let white_diag = identity_part / crate::geometry::ball_volume(d, r).unwrap_or(f64::INFINITY);
    radial_prefactor(d) * phi1 * phi1 * integral + white_diag
}

/// Envelope bound of `∫_R^∞ |integrand|` in kernel units.
fn tail_envelope(d: usize, r: f64, s: f64, delta: f64, decay: &Decay, big_r: f64) -> f64 {
    let nu = d as f64 / 2.0;
    // |Φ_ν(u)| ≤ c_ν(u0) u^{-ν-1/2} for u ≥ u0
    let ball_const = |u0: f64| {
        normalized_bessel_envelope(d as i32, u0) * u0.powf(nu + 0.5)
    };
    let amp = decay.weight * ball_const(r * big_r) * ball_const(s * big_r) * (r * s).powf(-(nu + 0.5));
    let a = 2.0 * decay.exponent + 2.0;
    let integral = if d == 1 || delta == 0.0 {
        big_r.powf(1.0 - a) / (a - 1.0)
    } else {
        let b = (d as f64 - 1.0) / 2.0;
        let u0 = (delta * big_r).max(1.0);
        let sphere_const = normalized_bessel_envelope(d as i32 - 2, u0).max(1e-300) * u0.powf(b);
        // min(1, B ρ^{-b}) with B = sphere_const · δ^{-b}
        let bb = sphere_const * delta.powf(-b);
        let rho_star = bb.powf(1.0 / b);
        if big_r >= rho_star {
            bb * big_r.powf(1.0 - a - b) / (a + b - 1.0)
        } else {
            (big_r.powf(1.0 - a) - rho_star.powf(1.0 - a)) / (a - 1.0)
                + bb * rho_star.powf(1.0 - a - b) / (a + b - 1.0)
        }
    };
    radial_prefactor(d) * amp * integral
}

fn spectral_integral(
    d: usize,
    r: f64,
    s: f64,
    delta: f64,
    decay: &Decay,
    q: &QuadratureConfig,
    identity_part: f64,
) -> Result<KernelEval> {
    let scale = (diagonal_scale(d, r, decay, identity_part) * diagonal_scale(d, s, decay, identity_part)).sqrt();
    let target = q.abs_tol.max(q.rel_tol * scale);
    let tail_target = q.tail_share * target;
    let omega = r + s + delta;
    let panel = PI / omega;

    let nu2 = d as i32;
    let start = (16.0f64).max(d as f64) / r;
    let mut big_r = start;
    let mut tail = tail_envelope(d, r, s, delta, decay, big_r);
    while tail > tail_target {
        big_r *= 2.0;
        if big_r / panel > q.max_subdivisions as f64 {
            return Err(Error::Numerical {
                message: format!(
                    "spectral tail needs truncation radius beyond {big_r:.3e} (r={r}, s={s}, |x-y|={delta})"
                ),
                estimate: tail,
            });
        }
        tail = tail_envelope(d, r, s, delta, decay, big_r);
    }

    let panels = (big_r / panel).ceil() as usize;
    let breaks: Vec<f64> = (0..=panels).map(|k| big_r * k as f64 / panels as f64).collect();
    let pref = radial_prefactor(d);
    let pow = d as i32 - 1;
    let integrand = |rho: f64| {
        let base = pref * decay.eval(rho) * rho.powi(pow);
        let pr = normalized_bessel(nu2, r * rho);
        let ps = if s == r { pr } else { normalized_bessel(nu2, s * rho) };
        if delta == 0.0 {
            base * pr * ps
        } else {
            base * pr * ps * normalized_bessel(nu2 - 2, delta * rho)
        }
    };
    let integ = AdaptiveIntegrator::new(target - tail, q.max_subdivisions);
    let result = integ.integrate_panels(integrand, &breaks)?;
    Ok(KernelEval {
        value: result.value,
        error_estimate: result.error + tail,
        truncation_radius: Some(big_r),
        tail_bound: tail,
    })
}

/// Canonical pseudo-metric `sqrt(K(b1,b1) + K(b2,b2) − 2K(b1,b2))`.
pub fn pseudo_metric<K: Kernel + ?Sized>(kernel: &K, b1: &Ball, b2: &Ball, q: &QuadratureConfig) -> Result<f64> {
    let k11 = kernel.eval(b1, b1, q)?.value;
    let k22 = kernel.eval(b2, b2, q)?.value;
    let k12 = kernel.eval(b1, b2, q)?.value;
    Ok(pseudo_metric_from_entries(k11, k22, k12))
}

pub fn pseudo_metric_from_entries(k11: f64, k22: f64, k12: f64) -> f64 {
    (k11 + k22 - 2.0 * k12).max(0.0).sqrt()
}

/// Symmetric kernel matrix over `balls`; only `i ≤ j` is evaluated and
/// mirrored. Entries are computed independently, so the result does not
/// depend on the thread count.
pub fn kernel_matrix<K: Kernel + ?Sized>(
    kernel: &K,
    balls: &[Ball],
    q: &QuadratureConfig,
) -> Result<CovarianceMatrix> {
    if balls.is_empty() {
        return Err(Error::domain("kernel matrix needs at least one ball"));
    }
    let d = balls[0].dim();
    if let Some(i) = balls.iter().position(|b| b.dim() != d) {
        return Err(Error::domain(format!("ball {i} has dimension {} (expected {d})", balls[i].dim())));
    }
    let n = balls.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let evals: Vec<KernelEval> = pairs
        .par_iter()
        .map(|&(i, j)| kernel.eval(&balls[i], &balls[j], q))
        .collect::<Result<_>>()?;
    let mut entries = vec![0.0; n * n];
    let mut max_err: f64 = 0.0;
    for (&(i, j), e) in pairs.iter().zip(&evals) {
        entries[i * n + j] = e.value;
        entries[j * n + i] = e.value;
        max_err = max_err.max(e.error_estimate);
    }
    let mut m = CovarianceMatrix::from_entries(n, d, entries)?;
    m.max_error_estimate = max_err;
    Ok(m)
}

/// Rectangular cross matrix `K(rows_i, cols_j)`; used for reflection matrices.
pub fn cross_matrix<K: Kernel + ?Sized>(
    kernel: &K,
    rows: &[Ball],
    cols: &[Ball],
    q: &QuadratureConfig,
) -> Result<(Vec<f64>, f64)> {
    let pairs: Vec<(usize, usize)> = (0..rows.len())
        .flat_map(|i| (0..cols.len()).map(move |j| (i, j)))
        .collect();
    let evals: Vec<KernelEval> = pairs
        .par_iter()
        .map(|&(i, j)| kernel.eval(&rows[i], &cols[j], q))
        .collect::<Result<_>>()?;
    let max_err = evals.iter().map(|e| e.error_estimate).fold(0.0, f64::max);
    Ok((evals.into_iter().map(|e| e.value).collect(), max_err))
}

/// `C ∘ (ψ × ψ)`: the kernel of the image measure under a map of the index set.
pub struct PushforwardKernel<'a, F> {
    spec: &'a KernelSpec,
    map: F,
}

pub fn pushforward_kernel<F>(spec: &KernelSpec, map: F) -> PushforwardKernel<'_, F>
where
    F: Fn(&Ball) -> Ball + Sync,
{
    PushforwardKernel { spec, map }
}

impl<F> PushforwardKernel<'_, F>
where
    F: Fn(&Ball) -> Ball + Sync,
{
    pub fn map_ball(&self, b: &Ball) -> Ball {
        (self.map)(b)
    }
}

impl<F> Kernel for PushforwardKernel<'_, F>
where
    F: Fn(&Ball) -> Ball + Sync,
{
    fn eval(&self, b1: &Ball, b2: &Ball, q: &QuadratureConfig) -> Result<KernelEval> {
        eval_kernel_detailed(self.spec, &(self.map)(b1), &(self.map)(b2), q)
    }

    fn describe(&self) -> String {
        format!("pushforward of {}", self.spec)
    }
}
