//! Finite-dimensional marginals of centered Gaussian measures on ball
//! configurations: factorization, seeded sampling and empirical checks.

use crate::error::{Error, Result};
use crate::geometry::Ball;
use crate::kernels::{kernel_matrix, Kernel, KernelSpec, QuadratureConfig};
use crate::linalg;
use crate::rng::{stream_rng, RNG_ALGORITHM};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Symmetric covariance matrix over a finite ball configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrix {
    n: usize,
    dim: usize,
    entries: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    factor: Option<Vec<f64>>,
    pub jitter_applied: f64,
    /// Largest per-entry error estimate reported by the kernel.
    pub max_error_estimate: f64,
}

impl CovarianceMatrix {
    /// Wrap row-major entries; the matrix must be exactly symmetric.
    pub fn from_entries(n: usize, dim: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::domain(format!("expected {n}x{n} entries, got {}", entries.len())));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("covariance entries must be finite"));
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::domain(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            n,
            dim,
            entries,
            factor: None,
            jitter_applied: 0.0,
            max_error_estimate: 0.0,
        })
    }

    pub fn identity(n: usize, dim: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self::from_entries(n, dim, entries).expect("identity is symmetric")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn factor(&self) -> Option<&[f64]> {
        self.factor.as_deref()
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(self.n, &self.entries)
    }

    pub fn mean_diagonal(&self) -> f64 {
        self.trace() / self.n as f64
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::symmetric_eigen(self.n, &self.entries).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigen(self.n, &self.entries).0
    }

    pub fn submatrix(&self, indices: &[usize]) -> Result<CovarianceMatrix> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n) {
            return Err(Error::precondition(format!("index {bad} out of range for order {}", self.n), Some(bad)));
        }
        let m = indices.len();
        let mut entries = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                entries.push(self.get(i, j));
            }
        }
        CovarianceMatrix::from_entries(m, self.dim, entries)
    }

    /// `λᵀ C μ`.
    pub fn bilinear(&self, lambda: &[f64], mu: &[f64]) -> f64 {
        let n = self.n;
        (0..n)
            .map(|i| {
                let row: f64 = (0..n).map(|j| self.entries[i * n + j] * mu[j]).sum();
                lambda[i] * row
            })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "epsilon", rename_all = "snake_case")]
pub enum JitterPolicy {
    None,
    /// Try `ε · (trace/n) · 10^k` for `k = 0..=6` after a jitter-free attempt.
    Relative(f64),
}

impl Default for JitterPolicy {
    fn default() -> Self {
        JitterPolicy::Relative(1e-12)
    }
}

/// Cholesky factor of `C + jitter·I` with the smallest jitter that works.
pub fn factorize(c: &CovarianceMatrix, policy: JitterPolicy) -> Result<CovarianceMatrix> {
    let n = c.n;
    let mut last_minor = match linalg::cholesky(n, &c.entries, 0.0) {
        Ok(l) => {
            return Ok(CovarianceMatrix {
                factor: Some(l),
                jitter_applied: 0.0,
                ..c.clone()
            })
        }
        Err(minor) => minor,
    };
    let mut last_jitter = 0.0;
    if let JitterPolicy::Relative(eps) = policy {
        let scale = c.mean_diagonal().abs().max(f64::MIN_POSITIVE);
        for k in 0..=6 {
            let jitter = eps * scale * 10f64.powi(k);
            match linalg::cholesky(n, &c.entries, jitter) {
                Ok(l) => {
                    return Ok(CovarianceMatrix {
                        factor: Some(l),
                        jitter_applied: jitter,
                        ..c.clone()
                    })
                }
                Err(minor) => {
                    last_minor = minor;
                    last_jitter = jitter;
                }
            }
        }
    }
    Err(Error::Factorization {
        minor: last_minor,
        jitter: last_jitter,
    })
}

/// Seeded draws of a centered Gaussian vector at a ball configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub balls: Vec<Ball>,
    pub n_samples: usize,
    /// `n_samples × n` values, row-major (one row per draw).
    pub values: Vec<f64>,
    pub seed: u64,
    pub rng_algorithm: String,
    pub kernel: String,
    pub jitter_applied: f64,
    /// Pointwise maps applied after sampling, in order.
    #[serde(default)]
    pub transforms: Vec<String>,
    /// Set when a table transform extrapolated beyond its knots.
    #[serde(default)]
    pub extrapolated: bool,
}

impl SampleBatch {
    pub fn order(&self) -> usize {
        self.balls.len()
    }

    pub fn row(&self, k: usize) -> &[f64] {
        let n = self.order();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.n_samples).map(|k| self.row(k)[i]).collect()
    }
}

/// Draw `n_samples` vectors `L z` where `L` is the factor of `c`.
/// Sample `k` uses the random stream `k` of `seed`.
pub fn sample_from_factor(c: &CovarianceMatrix, n_samples: usize, seed: u64) -> Result<Vec<f64>> {
    let l = c
        .factor()
        .ok_or_else(|| Error::precondition("covariance matrix has not been factorized", None))?;
    let n = c.n;
    let mut values = vec![0.0; n_samples * n];
    values.par_chunks_mut(n).enumerate().for_each(|(k, row)| {
        let mut rng = stream_rng(seed, k as u64);
        let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        for i in 0..n {
            row[i] = (0..=i).map(|j| l[i * n + j] * z[j]).sum();
        }
    });
    Ok(values)
}

pub fn sample(
    spec: &KernelSpec,
    balls: &[Ball],
    n_samples: usize,
    seed: u64,
    q: &QuadratureConfig,
) -> Result<SampleBatch> {
    sample_kernel(spec, balls, n_samples, seed, q)
}

/// [`sample`] for any kernel, e.g. a pushforward.
pub fn sample_kernel<K: Kernel + ?Sized>(
    kernel: &K,
    balls: &[Ball],
    n_samples: usize,
    seed: u64,
    q: &QuadratureConfig,
) -> Result<SampleBatch> {
    if n_samples == 0 {
        return Err(Error::domain("n_samples must be at least 1"));
    }
    let c = factorize(&kernel_matrix(kernel, balls, q)?, JitterPolicy::default())?;
    let values = sample_from_factor(&c, n_samples, seed)?;
    Ok(SampleBatch {
        balls: balls.to_vec(),
        n_samples,
        values,
        seed,
        rng_algorithm: RNG_ALGORITHM.to_string(),
        kernel: kernel.describe(),
        jitter_applied: c.jitter_applied,
        transforms: Vec::new(),
        extrapolated: false,
    })
}

const SUM_CHUNK: usize = 4096;

/// `(1/N) Σ v vᵀ` without mean subtraction.
///
/// Partial sums run over fixed chunks of draws and are combined in order,
/// so the result does not depend on the thread count.
pub fn empirical_covariance(batch: &SampleBatch) -> Result<CovarianceMatrix> {
    if batch.n_samples < 2 {
        return Err(Error::precondition("empirical covariance needs at least 2 samples", None));
    }
    let n = batch.order();
    let partials: Vec<Vec<f64>> = batch
        .values
        .par_chunks(SUM_CHUNK * n)
        .map(|chunk| {
            let mut acc = vec![0.0; n * n];
            for row in chunk.chunks(n) {
                for i in 0..n {
                    let vi = row[i];
                    for j in i..n {
                        acc[i * n + j] += vi * row[j];
                    }
                }
            }
            acc
        })
        .collect();
    let mut sum = vec![0.0; n * n];
    for p in &partials {
        for (s, v) in sum.iter_mut().zip(p) {
            *s += v;
        }
    }
    let inv = 1.0 / batch.n_samples as f64;
    for i in 0..n {
        for j in i..n {
            let v = sum[i * n + j] * inv;
            sum[i * n + j] = v;
            sum[j * n + i] = v;
        }
    }
    let dim = batch.balls.first().map_or(0, |b| b.dim());
    CovarianceMatrix::from_entries(n, dim, sum)
}

/// CLT half-width `z · sqrt((C_ii C_jj + C_ij²)/N)` for the `(i, j)` entry
/// of an empirical covariance of `N` centered Gaussian draws.
pub fn clt_bound(c: &CovarianceMatrix, i: usize, j: usize, n_samples: usize, z: f64) -> f64 {
    let cij = c.get(i, j);
    z * ((c.get(i, i) * c.get(j, j) + cij * cij) / n_samples as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub subset: Vec<usize>,
    /// Kernel matrix over the subset equals the full matrix restricted.
    pub exact_match: bool,
    /// Largest `|Ĉ_sub − Ĉ_full|` over entries, in units of its 5σ bound.
    pub max_normalized_deviation: f64,
    pub n_samples: usize,
    pub pass: bool,
}

/// Kolmogorov consistency of finite marginals: the subset covariance is the
/// restricted full covariance, and sampling the subset agrees in law with
/// sampling everything and projecting.
pub fn marginal_consistency(
    spec: &KernelSpec,
    balls: &[Ball],
    subset: &[usize],
    n_samples: usize,
    seed: u64,
    q: &QuadratureConfig,
) -> Result<ConsistencyReport> {
    if subset.is_empty() {
        return Err(Error::precondition("subset must be nonempty", None));
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= balls.len()) {
        return Err(Error::precondition(format!("subset index {bad} out of range"), Some(bad)));
    }
    let full = kernel_matrix(spec, balls, q)?;
    let sub_balls: Vec<Ball> = subset.iter().map(|&i| balls[i].clone()).collect();
    let sub = kernel_matrix(spec, &sub_balls, q)?;
    let restricted = full.submatrix(subset)?;
    let exact_match = sub.entries() == restricted.entries();

    let sub_batch = sample(spec, &sub_balls, n_samples, seed, q)?;
    let full_batch = sample(spec, balls, n_samples, seed.wrapping_add(0x9e37_79b9_7f4a_7c15), q)?;
    let sub_cov = empirical_covariance(&sub_batch)?;
    let full_cov = empirical_covariance(&full_batch)?.submatrix(subset)?;
    let m = subset.len();
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in i..m {
            // difference of two independent estimates: variance doubles
            let bound = std::f64::consts::SQRT_2 * clt_bound(&restricted, i, j, n_samples, 5.0);
            let dev = (sub_cov.get(i, j) - full_cov.get(i, j)).abs();
            let normalized = if bound > 0.0 {
                dev / bound
            } else if dev == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst = worst.max(normalized);
        }
    }
    Ok(ConsistencyReport {
        subset: subset.to_vec(),
        exact_match,
        max_normalized_deviation: worst,
        n_samples,
        pass: exact_match && worst <= 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn disjoint_balls() -> Vec<Ball> {
        vec![
            Ball::new(vec![0.0, 0.0], 0.5).unwrap(),
            Ball::new(vec![3.0, 0.0], 1.0).unwrap(),
            Ball::new(vec![0.0, 4.0], 0.8).unwrap(),
        ]
    }

    #[test]
    fn identity_factor_is_identity() {
        let c = factorize(&CovarianceMatrix::identity(4, 2), JitterPolicy::default()).unwrap();
        assert_eq!(c.jitter_applied, 0.0);
        assert_eq!(c.factor().unwrap(), CovarianceMatrix::identity(4, 2).entries());
    }

    #[test]
    fn diagonal_white_factor_is_sqrt() {
        let balls = disjoint_balls();
        let c = factorize(&kernel_matrix(&KernelSpec::White, &balls, &q()).unwrap(), JitterPolicy::None).unwrap();
        let l = c.factor().unwrap();
        for i in 0..3 {
            assert!((l[i * 3 + i] - balls[i].inverse_volume().sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn near_duplicate_balls_need_small_jitter() {
        let balls = vec![
            Ball::new(vec![0.0, 0.0], 0.5).unwrap(),
            Ball::new(vec![1e-9, 0.0], 0.5).unwrap(),
        ];
        let c = kernel_matrix(&KernelSpec::White, &balls, &q()).unwrap();
        let f = factorize(&c, JitterPolicy::default()).unwrap();
        assert!(f.jitter_applied <= 1e-6 * c.mean_diagonal());
    }

    #[test]
    fn failure_names_minor() {
        let c = CovarianceMatrix::from_entries(2, 1, vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        match factorize(&c, JitterPolicy::default()) {
            Err(Error::Factorization { minor, jitter }) => {
                assert_eq!(minor, 2);
                assert!(jitter > 0.0);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(factorize(&c, JitterPolicy::None), Err(Error::Factorization { minor: 2, .. })));
    }

    #[test]
    fn asymmetric_entries_rejected() {
        assert!(CovarianceMatrix::from_entries(2, 1, vec![1.0, 0.5, 0.4, 1.0]).is_err());
    }

    #[test]
    fn unit_variance_white_sample() {
        // v_r = 1 ⇔ r = 1/π^{1/2} in d = 2
        let b = Ball::new(vec![0.0, 0.0], 1.0 / std::f64::consts::PI.sqrt()).unwrap();
        let n = 100_000;
        let batch = sample(&KernelSpec::White, &[b], n, 5, &q()).unwrap();
        let var = empirical_covariance(&batch).unwrap().get(0, 0);
        assert!((var - 1.0).abs() < 5.0 * (2.0 / n as f64).sqrt(), "{var}");
        let mean = batch.values.iter().sum::<f64>() / n as f64;
        assert!(mean.abs() < 5.0 * (1.0 / n as f64).sqrt());
    }

    #[test]
    fn sampling_is_deterministic() {
        let balls = disjoint_balls();
        let a = sample(&KernelSpec::White, &balls, 100, 42, &q()).unwrap();
        let b = sample(&KernelSpec::White, &balls, 100, 42, &q()).unwrap();
        assert_eq!(a, b);
        let c = sample(&KernelSpec::White, &balls, 100, 43, &q()).unwrap();
        assert_ne!(a.values, c.values);
        assert!(sample(&KernelSpec::White, &balls, 0, 1, &q()).is_err());
    }

    #[test]
    fn identical_copies_give_outer_product() {
        let v = [1.0, -2.0, 0.5];
        let batch = SampleBatch {
            balls: disjoint_balls(),
            n_samples: 5,
            values: v.iter().cycle().take(15).copied().collect(),
            seed: 0,
            rng_algorithm: RNG_ALGORITHM.into(),
            kernel: "none".into(),
            jitter_applied: 0.0,
            transforms: vec![],
            extrapolated: false,
        };
        let c = empirical_covariance(&batch).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((c.get(i, j) - v[i] * v[j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn consistency_trivial_cases() {
        let balls = disjoint_balls();
        let full = marginal_consistency(&KernelSpec::White, &balls, &[0, 1, 2], 2000, 1, &q()).unwrap();
        assert!(full.exact_match);
        let single = marginal_consistency(&KernelSpec::White, &balls, &[1], 2000, 1, &q()).unwrap();
        assert!(single.exact_match);
        assert!(marginal_consistency(&KernelSpec::White, &balls, &[], 10, 1, &q()).is_err());
    }
}
