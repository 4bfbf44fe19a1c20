//! Numerical checks of reflection positivity, Euclidean invariance and the
//! index-set properties of ball-indexed fields.

use crate::error::{Error, Result};
use crate::gaussian::SampleBatch;
use crate::geometry::{apply_motion, region_contains_ball, Ball, EuclideanMotion, Region};
use crate::kernels::{cross_matrix, eval_kernel, kernel_matrix, pseudo_metric, KernelSpec, QuadratureConfig};
use crate::linalg;
use crate::rng::stream_rng;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RPKind {
    KernelTheta,
    GaussianClosedForm,
    MonteCarlo,
}

/// Positive-semidefiniteness verdict for a reflection matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RPReport {
    pub kind: RPKind,
    pub n: usize,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Eigenvector of the smallest eigenvalue when the check fails.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_imag: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

/// A finite linear combination `F = Σ λ_k X_{b_k}` of field values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    pub terms: Vec<(usize, f64)>,
}

impl Functional {
    pub fn new(terms: Vec<(usize, f64)>) -> Self {
        Self { terms }
    }

    pub fn single(index: usize, weight: f64) -> Self {
        Self {
            terms: vec![(index, weight)],
        }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Dense coefficient vector over `m` balls.
    pub fn coefficients(&self, m: usize) -> Result<Vec<f64>> {
        let mut c = vec![0.0; m];
        for &(k, w) in &self.terms {
            if k >= m {
                return Err(Error::precondition(format!("functional references ball {k} of {m}"), Some(k)));
            }
            c[k] += w;
        }
        Ok(c)
    }

    pub fn eval(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(k, w)| w * values[k]).sum()
    }
}

/// Every ball must lie in `B_d⁺ = B_d({t > 0})`.
pub fn check_positive_time(balls: &[Ball]) -> Result<()> {
    let v = Region::positive_time();
    match balls.iter().position(|b| !region_contains_ball(&v, b)) {
        None => Ok(()),
        Some(i) => Err(Error::precondition(
            format!(
                "ball {i} (t = {}, r = {}) is not contained in the half-space t > 0",
                balls[i].time(),
                balls[i].radius()
            ),
            Some(i),
        )),
    }
}

/// The configuration followed by its time reflections.
pub fn with_reflections(balls: &[Ball]) -> Vec<Ball> {
    balls.iter().cloned().chain(balls.iter().map(Ball::reflect_time)).collect()
}

fn kernel_rel_tol(spec: &KernelSpec) -> f64 {
    match spec {
        KernelSpec::W | KernelSpec::White => 1e-10,
        _ => 1e-8,
    }
}

fn psd_report(kind: RPKind, n: usize, entries: &[f64], tolerance: f64) -> RPReport {
    let (min, v) = linalg::min_eigen(n, entries);
    let pass = min >= -tolerance;
    RPReport {
        kind,
        n,
        min_eigenvalue: min,
        tolerance,
        pass,
        witness: (!pass).then_some(v),
        witness_imag: None,
        stderr: None,
        seed: None,
    }
}

/// `A^θ_ij = K(b_i, θ b_j)` must be positive semidefinite.
///
/// The tolerance is relative to the mean diagonal `K(b_i, b_i)`: 1e−8 for
/// quadrature-based kernels and 1e−10 for the exact ones.
pub fn rp_kernel_check(spec: &KernelSpec, balls: &[Ball], q: &QuadratureConfig) -> Result<RPReport> {
    if balls.is_empty() {
        return Err(Error::domain("reflection check needs at least one ball"));
    }
    check_positive_time(balls)?;
    let reflected: Vec<Ball> = balls.iter().map(Ball::reflect_time).collect();
    let (a, _) = cross_matrix(spec, balls, &reflected, q)?;
    let n = balls.len();
    // exact symmetry: K(b_i, θb_j) = K(b_j, θb_i) up to rounding
    let mut sym = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            sym[i * n + j] = 0.5 * (a[i * n + j] + a[j * n + i]);
        }
    }
    let diag: Vec<f64> = balls
        .par_iter()
        .map(|b| eval_kernel(spec, b, b, q))
        .collect::<Result<_>>()?;
    let scale = diag.iter().sum::<f64>() / n as f64;
    Ok(psd_report(RPKind::KernelTheta, n, &sym, kernel_rel_tol(spec) * scale))
}

/// Closed-form Gaussian reflection matrix `S_ij = exp(−½ Var(F_i − θF_j))`.
pub fn gaussian_reflection_matrix(
    spec: &KernelSpec,
    balls: &[Ball],
    functionals: &[Functional],
    q: &QuadratureConfig,
) -> Result<Vec<f64>> {
    let m = balls.len();
    let n = functionals.len();
    let both = with_reflections(balls);
    let c = kernel_matrix(spec, &both, q)?;
    let coeffs: Vec<Vec<f64>> = functionals.iter().map(|f| f.coefficients(m)).collect::<Result<_>>()?;
    // lift to the 2m configuration: F on the first block, θF on the second
    let lift = |lambda: &[f64], reflected: bool| {
        let mut v = vec![0.0; 2 * m];
        let off = if reflected { m } else { 0 };
        v[off..off + m].copy_from_slice(lambda);
        v
    };
    let plain: Vec<Vec<f64>> = coeffs.iter().map(|l| lift(l, false)).collect();
    let refl: Vec<Vec<f64>> = coeffs.iter().map(|l| lift(l, true)).collect();
    let var_plain: Vec<f64> = plain.iter().map(|v| c.bilinear(v, v)).collect();
    let var_refl: Vec<f64> = refl.iter().map(|v| c.bilinear(v, v)).collect();
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let var = var_plain[i] + var_refl[j] - 2.0 * c.bilinear(&plain[i], &refl[j]);
            s[i * n + j] = (-0.5 * var).exp();
        }
    }
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (s[i * n + j] + s[j * n + i]);
            s[i * n + j] = avg;
            s[j * n + i] = avg;
        }
    }
    Ok(s)
}

pub fn rp_gaussian_check(
    spec: &KernelSpec,
    balls: &[Ball],
    functionals: &[Functional],
    q: &QuadratureConfig,
) -> Result<RPReport> {
    if functionals.is_empty() {
        return Err(Error::domain("reflection check needs at least one functional"));
    }
    check_positive_time(balls)?;
    let n = functionals.len();
    let s = gaussian_reflection_matrix(spec, balls, functionals, q)?;
    let tol = kernel_rel_tol(spec) * linalg::trace(n, &s) / n as f64;
    Ok(psd_report(RPKind::GaussianClosedForm, n, &s, tol))
}

/// Monte Carlo estimate of `S_ij = E exp(iF_i − iθF_j)`, Hermitized, with
/// per-entry standard errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReflection {
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub se_re: Vec<f64>,
    pub se_im: Vec<f64>,
}

/// Per-sample `a_i = e^{iF_i}` and `b_j = e^{iθF_j}` as (cos, sin) pairs.
fn phases(batch: &SampleBatch, functionals: &[Functional]) -> Result<(Vec<[f64; 2]>, Vec<[f64; 2]>)> {
    let total = batch.order();
    if total % 2 != 0 {
        return Err(Error::precondition("batch must cover balls and their reflections", None));
    }
    let m = total / 2;
    for k in 0..m {
        if batch.balls[m + k] != batch.balls[k].reflect_time() {
            return Err(Error::precondition(
                format!("batch ball {} is not the reflection of ball {k}", m + k),
                Some(m + k),
            ));
        }
    }
    for f in functionals {
        f.coefficients(m)?;
    }
    let n = functionals.len();
    let mut a = vec![[0.0; 2]; batch.n_samples * n];
    let mut b = vec![[0.0; 2]; batch.n_samples * n];
    a.par_chunks_mut(n)
        .zip(b.par_chunks_mut(n))
        .enumerate()
        .for_each(|(k, (ak, bk))| {
            let row = batch.row(k);
            let (plain, refl) = row.split_at(m);
            for (i, f) in functionals.iter().enumerate() {
                let (s, c) = f.eval(plain).sin_cos();
                ak[i] = [c, s];
                let (s, c) = f.eval(refl).sin_cos();
                bk[i] = [c, s];
            }
        });
    Ok((a, b))
}

/// `Σ_k w_k a_k b_kᴴ` over the samples listed in `rows` (with repeats).
fn accumulate<I: Iterator<Item = usize>>(a: &[[f64; 2]], b: &[[f64; 2]], n: usize, rows: I) -> (Vec<f64>, Vec<f64>) {
    let mut re = vec![0.0; n * n];
    let mut im = vec![0.0; n * n];
    for k in rows {
        let ak = &a[k * n..(k + 1) * n];
        let bk = &b[k * n..(k + 1) * n];
        for i in 0..n {
            let [ar, ai] = ak[i];
            for j in 0..n {
                let [br, bi] = bk[j];
                re[i * n + j] += ar * br + ai * bi;
                im[i * n + j] += ai * br - ar * bi;
            }
        }
    }
    (re, im)
}

fn hermitize(n: usize, re: &mut [f64], im: &mut [f64]) {
    for i in 0..n {
        for j in 0..=i {
            let r = 0.5 * (re[i * n + j] + re[j * n + i]);
            let m = 0.5 * (im[i * n + j] - im[j * n + i]);
            re[i * n + j] = r;
            re[j * n + i] = r;
            im[i * n + j] = m;
            im[j * n + i] = -m;
        }
    }
}

pub const MIN_MONTE_CARLO_SAMPLES: usize = 1000;

pub fn monte_carlo_reflection_matrix(batch: &SampleBatch, functionals: &[Functional]) -> Result<MonteCarloReflection> {
    if batch.n_samples < MIN_MONTE_CARLO_SAMPLES {
        return Err(Error::precondition(
            format!("need at least {MIN_MONTE_CARLO_SAMPLES} samples (got {})", batch.n_samples),
            None,
        ));
    }
    let n = functionals.len();
    let (a, b) = phases(batch, functionals)?;
    let ns = batch.n_samples;
    // per-sample Hermitized summands give means and standard errors together
    let mut sum_re = vec![0.0; n * n];
    let mut sum_im = vec![0.0; n * n];
    let mut sq_re = vec![0.0; n * n];
    let mut sq_im = vec![0.0; n * n];
    for k in 0..ns {
        let (mut re, mut im) = accumulate(&a, &b, n, std::iter::once(k));
        hermitize(n, &mut re, &mut im);
        for idx in 0..n * n {
            sum_re[idx] += re[idx];
            sum_im[idx] += im[idx];
            sq_re[idx] += re[idx] * re[idx];
            sq_im[idx] += im[idx] * im[idx];
        }
    }
    let nf = ns as f64;
    let se = |sum: f64, sq: f64| {
        let mean = sum / nf;
        ((sq / nf - mean * mean).max(0.0) / (nf - 1.0)).sqrt()
    };
    Ok(MonteCarloReflection {
        n,
        re: sum_re.iter().map(|s| s / nf).collect(),
        im: sum_im.iter().map(|s| s / nf).collect(),
        se_re: sum_re.iter().zip(&sq_re).map(|(&s, &q)| se(s, q)).collect(),
        se_im: sum_im.iter().zip(&sq_im).map(|(&s, &q)| se(s, q)).collect(),
    })
}

/// Reflection positivity from samples over `balls ++ θ·balls`.
///
/// The standard error is the bootstrap RMS of the spectral-norm deviation
/// `‖Ŝ* − Ŝ‖₂`. By Weyl's inequality this bounds how far any eigenvalue
/// of the estimate can sit from the truth, including the downward bias
/// of the smallest eigenvalue when the true matrix is singular (which the
/// spread of the bootstrap minimum alone underestimates). Passes when the
/// smallest eigenvalue is at least `−(3·SE + 1e−12·trace/n)`.
pub fn rp_monte_carlo_check(
    batch: &SampleBatch,
    functionals: &[Functional],
    resamples: usize,
    seed: u64,
) -> Result<RPReport> {
    if functionals.is_empty() {
        return Err(Error::domain("reflection check needs at least one functional"));
    }
    if resamples < 2 {
        return Err(Error::domain("bootstrap needs at least 2 resamples"));
    }
    let mc = monte_carlo_reflection_matrix(batch, functionals)?;
    let n = mc.n;
    let (a, b) = phases(batch, functionals)?;
    let ns = batch.n_samples;
    let nf = ns as f64;
    let boot: Vec<f64> = (0..resamples)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r as u64);
            let rows = (0..ns).map(move |_| rng.random_range(0..ns));
            let (mut re, mut im) = accumulate(&a, &b, n, rows);
            hermitize(n, &mut re, &mut im);
            for (idx, (x, y)) in re.iter_mut().zip(im.iter_mut()).enumerate() {
                *x = *x / nf - mc.re[idx];
                *y = *y / nf - mc.im[idx];
            }
            let lo = linalg::min_eigen_hermitian(n, &re, &im).0;
            let neg_re: Vec<f64> = re.iter().map(|x| -x).collect();
            let neg_im: Vec<f64> = im.iter().map(|x| -x).collect();
            let hi = -linalg::min_eigen_hermitian(n, &neg_re, &neg_im).0;
            lo.abs().max(hi.abs())
        })
        .collect();
    let se = (boot.iter().map(|x| x * x).sum::<f64>() / resamples as f64).sqrt();
    let (min, vr, vi) = linalg::min_eigen_hermitian(n, &mc.re, &mc.im);
    let tolerance = 3.0 * se + 1e-12 * linalg::trace(n, &mc.re) / n as f64;
    let pass = min >= -tolerance;
    Ok(RPReport {
        kind: RPKind::MonteCarlo,
        n,
        min_eigenvalue: min,
        tolerance,
        pass,
        witness: (!pass).then_some(vr),
        witness_imag: (!pass).then_some(vi),
        stderr: Some(se),
        seed: Some(seed),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub motions: usize,
    pub pairs: usize,
    pub max_deviation: f64,
}

/// `max |K(g·b_i, g·b_j) − K(b_i, b_j)|` over motions and pairs.
pub fn invariance_check(
    spec: &KernelSpec,
    motions: &[EuclideanMotion],
    balls: &[Ball],
    q: &QuadratureConfig,
) -> Result<InvarianceReport> {
    let base = kernel_matrix(spec, balls, q)?;
    let mut worst: f64 = 0.0;
    for g in motions {
        let moved: Vec<Ball> = balls.iter().map(|b| apply_motion(g, b)).collect::<Result<_>>()?;
        let m = kernel_matrix(spec, &moved, q)?;
        for (x, y) in m.entries().iter().zip(base.entries()) {
            worst = worst.max((x - y).abs());
        }
    }
    let n = balls.len();
    Ok(InvarianceReport {
        motions: motions.len(),
        pairs: n * (n + 1) / 2,
        max_deviation: worst,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    /// Pool indices in `B_d(V1)` and `B_d(V2)`.
    pub inner: Vec<usize>,
    pub outer: Vec<usize>,
    pub inclusion_holds: bool,
    pub strict: bool,
    /// Pool balls whose membership disagrees between `g·B_d(V)` and `B_d(g·V)`.
    pub equivariance_violations: usize,
    pub pass: bool,
}

/// Index-set monotonicity `V1 ⊆ V2 ⇒ B_d(V1) ⊆ B_d(V2)` and covariance
/// `g·B_d(V) = B_d(g·V)` on a pool of balls.
pub fn index_monotonicity_check(
    v1: &Region,
    v2: &Region,
    pool: &[Ball],
    motions: &[EuclideanMotion],
) -> Result<MonotonicityReport> {
    if !v1.is_subset_of(v2)? {
        return Err(Error::precondition("first region is not contained in the second", None));
    }
    let select = |v: &Region| -> Vec<usize> { (0..pool.len()).filter(|&i| region_contains_ball(v, &pool[i])).collect() };
    let inner = select(v1);
    let outer = select(v2);
    let inclusion_holds = inner.iter().all(|i| outer.binary_search(i).is_ok());
    let mut violations = 0;
    for g in motions {
        for v in [v1, v2] {
            let gv = v.transformed(g)?;
            for b in pool {
                let gb = apply_motion(g, b)?;
                if region_contains_ball(v, b) != region_contains_ball(&gv, &gb) {
                    violations += 1;
                }
            }
        }
    }
    Ok(MonotonicityReport {
        strict: inner.len() < outer.len(),
        pass: inclusion_holds && violations == 0,
        inner,
        outer,
        inclusion_holds,
        equivariance_violations: violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub pairs: usize,
    /// Pairs skipped because the reference distance vanished.
    pub excluded: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// Range of `d_a / d_b` over the given pairs of balls.
pub fn metric_equivalence(
    a: &KernelSpec,
    b: &KernelSpec,
    pairs: &[(Ball, Ball)],
    q: &QuadratureConfig,
) -> Result<EquivalenceReport> {
    let ratios: Vec<Option<f64>> = pairs
        .par_iter()
        .map(|(x, y)| {
            let db = pseudo_metric(b, x, y, q)?;
            if db == 0.0 {
                return Ok(None);
            }
            Ok(Some(pseudo_metric(a, x, y, q)? / db))
        })
        .collect::<Result<_>>()?;
    let kept: Vec<f64> = ratios.iter().flatten().copied().collect();
    Ok(EquivalenceReport {
        pairs: pairs.len(),
        excluded: pairs.len() - kept.len(),
        min_ratio: kept.iter().copied().fold(f64::INFINITY, f64::min),
        max_ratio: kept.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::sample;

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn ball(c: &[f64], r: f64) -> Ball {
        Ball::new(c.to_vec(), r).unwrap()
    }

    #[test]
    fn single_white_ball_far_from_boundary() {
        let r = rp_kernel_check(&KernelSpec::White, &[ball(&[2.0, 0.0], 1.0)], &q()).unwrap();
        assert_eq!(r.min_eigenvalue, 0.0);
        assert!(r.pass);
        let tangent = rp_kernel_check(&KernelSpec::White, &[ball(&[1.0, 0.0], 1.0)], &q()).unwrap();
        assert!(tangent.pass);
    }

    #[test]
    fn precondition_names_ball() {
        let balls = [ball(&[2.0, 0.0], 1.0), ball(&[0.5, 0.0], 1.0)];
        match rp_kernel_check(&KernelSpec::White, &balls, &q()) {
            Err(Error::Precondition { index, .. }) => assert_eq!(index, Some(1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_functional_closed_form() {
        let balls = [ball(&[1.0, 0.0], 0.5)];
        let f = [Functional::single(0, 1.3)];
        let s = gaussian_reflection_matrix(&KernelSpec::White, &balls, &f, &q()).unwrap();
        let var = 2.0 * 1.3 * 1.3 * balls[0].inverse_volume();
        assert!((s[0] - (-0.5 * var).exp()).abs() < 1e-15);
    }

    #[test]
    fn far_white_functionals_give_rank_one() {
        let balls = [ball(&[5.0, 0.0], 0.5), ball(&[6.0, 3.0], 0.7), ball(&[4.0, -3.0], 1.0)];
        let f: Vec<Functional> = (0..3).map(|k| Functional::single(k, 0.8)).collect();
        let r = rp_gaussian_check(&KernelSpec::White, &balls, &f, &q()).unwrap();
        assert!(r.pass);
        assert!(r.min_eigenvalue.abs() < 1e-14);
    }

    #[test]
    fn theta_fixed_balls_reproduce_kernel_matrix() {
        let balls = vec![ball(&[0.0, 0.0], 0.5), ball(&[0.0, 0.7], 0.3), ball(&[0.0, -0.4], 0.6)];
        let reflected: Vec<Ball> = balls.iter().map(Ball::reflect_time).collect();
        let (a, _) = cross_matrix(&KernelSpec::free_field(), &balls, &reflected, &q()).unwrap();
        let k = kernel_matrix(&KernelSpec::free_field(), &balls, &q()).unwrap();
        assert_eq!(a, k.entries());
    }

    #[test]
    fn monte_carlo_constant_functionals() {
        let balls = [ball(&[1.0, 0.0], 0.5), ball(&[2.0, 0.0], 0.5)];
        let batch = sample(&KernelSpec::White, &with_reflections(&balls), 2000, 3, &q()).unwrap();
        let f = vec![Functional::zero(); 3];
        let mc = monte_carlo_reflection_matrix(&batch, &f).unwrap();
        assert!(mc.re.iter().all(|&v| v == 1.0));
        assert!(mc.im.iter().all(|&v| v == 0.0));
        let r = rp_monte_carlo_check(&batch, &f, 20, 1).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn monte_carlo_detects_a_violation() {
        // reflected values shifted by π turn S into minus a PSD matrix
        let balls = [ball(&[1.0, 0.0], 0.5), ball(&[2.0, 0.0], 0.5)];
        let good = sample(&KernelSpec::White, &with_reflections(&balls), 4000, 5, &q()).unwrap();
        let mut bad = good.clone();
        for k in 0..bad.n_samples {
            let row = &mut bad.values[k * 4..(k + 1) * 4];
            row[2] = row[0] + std::f64::consts::PI;
            row[3] = row[1] + std::f64::consts::PI;
        }
        let f = vec![Functional::single(0, 1.0), Functional::single(1, 1.0)];
        let r = rp_monte_carlo_check(&bad, &f, 100, 2).unwrap();
        assert!(!r.pass, "{r:?}");
        assert!(r.witness.is_some());
        assert!(rp_monte_carlo_check(&good, &f, 100, 2).unwrap().pass);
    }

    #[test]
    fn monte_carlo_singular_truth_passes() {
        // independent halves make S rank one; its zero eigenvalues are
        // estimated with a downward bias that the bound has to absorb
        let balls: Vec<Ball> = (0..10).map(|k| ball(&[1.0 + k as f64, 0.0], 0.4)).collect();
        let batch = sample(&KernelSpec::White, &with_reflections(&balls), 2000, 11, &q()).unwrap();
        let f: Vec<Functional> = (0..10).map(|k| Functional::single(k, 1.0)).collect();
        let r = rp_monte_carlo_check(&batch, &f, 50, 3).unwrap();
        assert!(r.min_eigenvalue < 0.0);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn monte_carlo_needs_enough_samples() {
        let balls = [ball(&[1.0, 0.0], 0.5)];
        let batch = sample(&KernelSpec::White, &with_reflections(&balls), 100, 3, &q()).unwrap();
        assert!(matches!(
            rp_monte_carlo_check(&batch, &[Functional::single(0, 1.0)], 10, 0),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn monotonicity_examples() {
        let pool = vec![ball(&[0.0, 0.0], 0.5), ball(&[1.5, 0.0], 0.4), ball(&[3.5, 0.0], 0.2)];
        let small = Region::Box { lo: vec![-1.0, -1.0], hi: vec![1.0, 1.0] };
        let big = Region::Box { lo: vec![-2.0, -2.0], hi: vec![2.0, 2.0] };
        let same = index_monotonicity_check(&small, &small, &pool, &[]).unwrap();
        assert_eq!(same.inner, same.outer);
        let r = index_monotonicity_check(&small, &big, &pool, &[EuclideanMotion::translation(vec![0.5, 0.25])]).unwrap();
        assert!(r.pass && r.strict);
        let up = Region::TimeAbove { c: 1.0 };
        let half = Region::positive_time();
        let shift = EuclideanMotion::translation(vec![1.0, 0.0]);
        assert_eq!(half.transformed(&shift).unwrap(), up);
        assert!(index_monotonicity_check(&up, &half, &pool, &[shift]).unwrap().pass);
        assert!(index_monotonicity_check(&big, &small, &pool, &[]).is_err());
    }
}
