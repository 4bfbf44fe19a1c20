//! Pointwise nonlinear maps of sampled fields, `X^φ_b = φ(X_b)`.

use crate::axioms::Functional;
use crate::error::{Error, Result};
use crate::gaussian::{sample, SampleBatch};
use crate::geometry::Ball;
use crate::kernels::{KernelSpec, QuadratureConfig};
use crate::rng::stream_rng;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    Identity,
    Tanh,
    /// `x^p` for odd `p`.
    Power { p: u32 },
    /// Clamp to `[−bound, bound]`.
    Clip { bound: f64 },
    /// Piecewise-linear interpolation through `(x, y)` knots, extended
    /// linearly beyond the end knots.
    Table { knots: Vec<(f64, f64)> },
}

impl Transform {
    pub fn validate(&self) -> Result<()> {
        match self {
            Transform::Identity | Transform::Tanh => Ok(()),
            Transform::Power { p } => {
                if p % 2 == 1 {
                    Ok(())
                } else {
                    Err(Error::domain(format!("power transform needs an odd exponent (got {p})")))
                }
            }
            Transform::Clip { bound } => {
                if *bound >= 0.0 && bound.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!("clip bound must be finite and >= 0 (got {bound})")))
                }
            }
            Transform::Table { knots } => {
                if knots.is_empty() {
                    return Err(Error::domain("table transform needs at least one knot"));
                }
                if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
                    return Err(Error::domain("table knots must be finite"));
                }
                if knots.windows(2).any(|w| !(w[0].0 < w[1].0)) {
                    return Err(Error::domain("table knots must be strictly increasing in x"));
                }
                Ok(())
            }
        }
    }

    /// Catalogue name with parameters, recorded in batch metadata.
    pub fn label(&self) -> String {
        match self {
            Transform::Identity => "identity".into(),
            Transform::Tanh => "tanh".into(),
            Transform::Power { p } => format!("power({p})"),
            Transform::Clip { bound } => format!("clip({bound})"),
            Transform::Table { knots } => format!("table({} knots)", knots.len()),
        }
    }

    pub fn is_odd(&self) -> bool {
        match self {
            Transform::Identity | Transform::Tanh | Transform::Power { .. } | Transform::Clip { .. } => true,
            Transform::Table { knots } => {
                let probe = |x: f64| self.eval(x).0;
                knots.iter().all(|&(x, _)| probe(-x) == -probe(x))
            }
        }
    }

    /// `φ(x)` and whether a table was extrapolated.
    pub fn eval(&self, x: f64) -> (f64, bool) {
        match self {
            Transform::Identity => (x, false),
            Transform::Tanh => (x.tanh(), false),
            Transform::Power { p } => (x.powi(*p as i32), false),
            Transform::Clip { bound } => (x.clamp(-bound, *bound), false),
            Transform::Table { knots } => table_eval(knots, x),
        }
    }
}

fn table_eval(knots: &[(f64, f64)], x: f64) -> (f64, bool) {
    if knots.len() == 1 {
        return (knots[0].1, x != knots[0].0);
    }
    let last = knots.len() - 1;
    let seg = if x < knots[0].0 {
        0
    } else if x > knots[last].0 {
        last - 1
    } else {
        // first knot with x_k >= x, minus one
        knots.partition_point(|k| k.0 < x).saturating_sub(1).min(last - 1)
    };
    let (x0, y0) = knots[seg];
    let (x1, y1) = knots[seg + 1];
    let y = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    (y, x < knots[0].0 || x > knots[last].0)
}

pub fn apply_transform(phi: &Transform, batch: &SampleBatch) -> Result<SampleBatch> {
    phi.validate()?;
    let mapped: Vec<(f64, bool)> = batch.values.par_iter().map(|&v| phi.eval(v)).collect();
    let extrapolated = mapped.iter().any(|&(_, e)| e);
    let mut out = batch.clone();
    out.values = mapped.into_iter().map(|(v, _)| v).collect();
    out.transforms.push(phi.label());
    out.extrapolated |= extrapolated;
    Ok(out)
}

pub fn sample_transformed(
    spec: &KernelSpec,
    phi: &Transform,
    balls: &[Ball],
    n_samples: usize,
    seed: u64,
    q: &QuadratureConfig,
) -> Result<SampleBatch> {
    apply_transform(phi, &sample(spec, balls, n_samples, seed, q)?)
}

/// Empirical `E exp(iF)` with a bootstrap standard error of its modulus-scale
/// fluctuation (standard deviation of the resampled complex means).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharEstimate {
    pub re: f64,
    pub im: f64,
    pub stderr: f64,
}

pub fn empirical_char_functional(
    batch: &SampleBatch,
    functionals: &[Functional],
    resamples: usize,
    seed: u64,
) -> Result<Vec<CharEstimate>> {
    if batch.n_samples < 1000 {
        return Err(Error::precondition(
            format!("characteristic functional needs at least 1000 samples (got {})", batch.n_samples),
            None,
        ));
    }
    let n = batch.order();
    for f in functionals {
        f.coefficients(n)?;
    }
    let ns = batch.n_samples;
    functionals
        .iter()
        .map(|f| {
            let phases: Vec<(f64, f64)> = (0..ns)
                .map(|k| {
                    let (s, c) = f.eval(batch.row(k)).sin_cos();
                    (c, s)
                })
                .collect();
            let mean = |idx: &mut dyn Iterator<Item = usize>| {
                let (mut re, mut im) = (0.0, 0.0);
                for k in idx {
                    re += phases[k].0;
                    im += phases[k].1;
                }
                (re / ns as f64, im / ns as f64)
            };
            let (re, im) = mean(&mut (0..ns));
            let boots: Vec<(f64, f64)> = (0..resamples)
                .into_par_iter()
                .map(|r| {
                    let mut rng = stream_rng(seed, r as u64);
                    mean(&mut (0..ns).map(|_| rng.random_range(0..ns)))
                })
                .collect();
            let stderr = if resamples >= 2 {
                let var: f64 = boots
                    .iter()
                    .map(|(a, b)| (a - re).powi(2) + (b - im).powi(2))
                    .sum::<f64>()
                    / (resamples - 1) as f64;
                var.sqrt()
            } else {
                0.0
            };
            Ok(CharEstimate { re, im, stderr })
        })
        .collect()
}
