//! Metric-entropy and sample-path diagnostics under the canonical
//! pseudo-metric `d_X(b, b') = ‖X_b − X_b'‖_{L²}`.

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, SampleBatch};
use crate::geometry::Ball;
use crate::kernels::{kernel_matrix, pseudo_metric_from_entries, Kernel, QuadratureConfig};
use serde::{Deserialize, Serialize};

/// All pairwise pseudo-distances of a finite configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<f64>,
}

impl DistanceTable {
    pub fn from_covariance(c: &CovarianceMatrix) -> Self {
        let n = c.order();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = pseudo_metric_from_entries(c.get(i, i), c.get(j, j), c.get(i, j));
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Self { n, dist }
    }

    pub fn compute<K: Kernel + ?Sized>(kernel: &K, grid: &[Ball], q: &QuadratureConfig) -> Result<Self> {
        Ok(Self::from_covariance(&kernel_matrix(kernel, grid, q)?))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }
}

/// Farthest-point (Gonzalez) ordering of a finite metric space.
///
/// `radii[k − 1]` is the covering radius of the first `k` centers, so the
/// sequence is nonincreasing and ends at 0. The first center is point 0
/// and ties go to the lowest index, which fixes the scan order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarthestPointCover {
    pub order: Vec<usize>,
    pub radii: Vec<f64>,
}

impl FarthestPointCover {
    pub fn new(table: &DistanceTable) -> Self {
        let n = table.len();
        let mut order = Vec::with_capacity(n);
        let mut radii = Vec::with_capacity(n);
        if n == 0 {
            return Self { order, radii };
        }
        let mut nearest: Vec<f64> = (0..n).map(|j| table.get(0, j)).collect();
        let mut chosen = vec![false; n];
        order.push(0);
        chosen[0] = true;
        loop {
            let mut far = None;
            let mut far_d = -1.0;
            for j in 0..n {
                if !chosen[j] && nearest[j] > far_d {
                    far = Some(j);
                    far_d = nearest[j];
                }
            }
            match far {
                Some(j) => {
                    radii.push(far_d);
                    order.push(j);
                    chosen[j] = true;
                    for m in 0..n {
                        nearest[m] = nearest[m].min(table.get(j, m));
                    }
                }
                None => {
                    radii.push(0.0);
                    break;
                }
            }
        }
        Self { order, radii }
    }

    /// Number of closed `ε`-balls used by the greedy cover.
    ///
    /// Greedy centers are `ε`-separated up to the step where the cover
    /// closes, so `P(ε) ≥ greedy(ε) ≥ N(ε)` where `P` is the packing number;
    /// together with `P(ε) ≤ N(ε/2)` this brackets the covering number.
    pub fn count_closed(&self, eps: f64) -> usize {
        self.radii.iter().position(|&r| r <= eps).map_or(self.radii.len(), |k| k + 1)
    }

    /// Number of open `ε`-balls used by the greedy cover; the left limit of
    /// [`Self::count_closed`] at `ε`.
    pub fn count_open(&self, eps: f64) -> usize {
        self.radii.iter().position(|&r| r < eps).map_or(self.radii.len(), |k| k + 1)
    }
}

pub fn covering_number<K: Kernel + ?Sized>(kernel: &K, grid: &[Ball], eps: f64, q: &QuadratureConfig) -> Result<usize> {
    if grid.is_empty() {
        return Err(Error::domain("covering number needs a nonempty grid"));
    }
    if !(eps > 0.0) {
        return Err(Error::domain(format!("covering radius must be positive (got {eps})")));
    }
    let table = DistanceTable::compute(kernel, grid, q)?;
    Ok(FarthestPointCover::new(&table).count_closed(eps))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub region: String,
    pub grid_resolution: Option<f64>,
    pub n_points: usize,
    pub diameter: f64,
    /// Integration nodes, decreasing from the diameter.
    pub epsilons: Vec<f64>,
    pub covering_numbers: Vec<usize>,
    /// The integral is truncated below at this radius.
    pub lower_limit: f64,
    pub j_estimate: f64,
    /// `N(ε)` is nonincreasing in `ε` along the nodes.
    pub monotone: bool,
}

fn check_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::domain("epsilon schedule is empty"));
    }
    if schedule.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
        return Err(Error::domain("epsilon schedule must be positive and finite"));
    }
    if schedule.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::domain("epsilon schedule must be strictly decreasing"));
    }
    Ok(())
}

/// Trapezoid estimate of `J = ∫ sqrt(log N(ε)) dε` from the diameter down
/// to the smallest schedule radius.
pub fn entropy_from_table(table: &DistanceTable, schedule: &[f64]) -> Result<EntropyReport> {
    check_schedule(schedule)?;
    if table.is_empty() {
        return Err(Error::domain("entropy integral needs a nonempty grid"));
    }
    let cover = FarthestPointCover::new(table);
    let diameter = table.diameter();
    let lower = *schedule.last().expect("nonempty");
    let mut epsilons = Vec::new();
    if diameter > lower {
        epsilons.push(diameter);
    }
    epsilons.extend(schedule.iter().copied().filter(|&e| e < diameter));
    if epsilons.is_empty() {
        epsilons.push(lower);
    }
    let counts: Vec<usize> = epsilons.iter().map(|&e| cover.count_open(e)).collect();
    let integrand: Vec<f64> = counts.iter().map(|&n| (n as f64).ln().sqrt()).collect();
    let j: f64 = epsilons
        .windows(2)
        .zip(integrand.windows(2))
        .map(|(e, f)| 0.5 * (e[0] - e[1]) * (f[0] + f[1]))
        .sum();
    Ok(EntropyReport {
        region: String::new(),
        grid_resolution: None,
        n_points: table.len(),
        diameter,
        monotone: counts.windows(2).all(|w| w[0] <= w[1]),
        covering_numbers: counts,
        epsilons,
        lower_limit: lower,
        j_estimate: j,
    })
}

pub fn entropy_integral<K: Kernel + ?Sized>(
    kernel: &K,
    grid: &[Ball],
    schedule: &[f64],
    q: &QuadratureConfig,
) -> Result<EntropyReport> {
    if grid.is_empty() {
        return Err(Error::domain("entropy integral needs a nonempty grid"));
    }
    check_schedule(schedule)?;
    entropy_from_table(&DistanceTable::compute(kernel, grid, q)?, schedule)
}

/// Geometric schedule `hi, hi·ρ, …` down to (and including) `lo`.
pub fn geometric_schedule(hi: f64, lo: f64, points: usize) -> Result<Vec<f64>> {
    if !(hi > lo && lo > 0.0) || points < 2 {
        return Err(Error::domain("geometric schedule needs hi > lo > 0 and at least 2 points"));
    }
    let ratio = (lo / hi).powf(1.0 / (points - 1) as f64);
    let mut s: Vec<f64> = (0..points).map(|k| hi * ratio.powi(k as i32)).collect();
    s[points - 1] = lo;
    Ok(s)
}

/// Balls with centers on the regular lattice of `per_axis` points per
/// coordinate spanning `[lo, hi]`, crossed with every radius in `radii`.
/// Returns the lattice spacing and the balls (radius varies fastest).
pub fn ball_grid(lo: &[f64], hi: &[f64], per_axis: usize, radii: &[f64]) -> Result<(f64, Vec<Ball>)> {
    let d = lo.len();
    if d == 0 || hi.len() != d || per_axis < 2 || radii.is_empty() {
        return Err(Error::domain("ball grid needs matching bounds, >= 2 points per axis and radii"));
    }
    let steps: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| (b - a) / (per_axis - 1) as f64).collect();
    let total = per_axis.pow(d as u32);
    let mut balls = Vec::with_capacity(total * radii.len());
    for idx in 0..total {
        let mut rest = idx;
        let mut center = vec![0.0; d];
        for k in (0..d).rev() {
            center[k] = lo[k] + steps[k] * (rest % per_axis) as f64;
            rest /= per_axis;
        }
        for &r in radii {
            balls.push(Ball::new(center.clone(), r)?);
        }
    }
    Ok((steps.iter().copied().fold(0.0, f64::max), balls))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathModulusReport {
    pub pairs_used: usize,
    /// Pairs at pseudo-distance zero, which carry no modulus information.
    pub excluded_zero: usize,
    pub threshold_factor: f64,
    pub max_ratio: f64,
    pub flagged_samples: usize,
    pub flagged_fraction: f64,
}

/// Empirical modulus `|X_b − X_b'| / d_X(b, b')` over the `pair_budget`
/// nearest pairs. A sample is flagged when some increment exceeds
/// `k · d_X · sqrt(2 log P)` with `P` the number of pairs used.
pub fn path_modulus(batch: &SampleBatch, table: &DistanceTable, pair_budget: usize, k: f64) -> Result<PathModulusReport> {
    let n = batch.order();
    if table.len() != n {
        return Err(Error::domain(format!("distance table has {} points, batch has {n}", table.len())));
    }
    let mut pairs = Vec::new();
    let mut excluded = 0;
    for i in 0..n {
        for j in i + 1..n {
            let d = table.get(i, j);
            if d > 0.0 {
                pairs.push((d, i, j));
            } else {
                excluded += 1;
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    pairs.truncate(pair_budget);
    let scale = k * (2.0 * (pairs.len().max(2) as f64).ln()).sqrt();
    let mut max_ratio: f64 = 0.0;
    let mut flagged = 0;
    for s in 0..batch.n_samples {
        let row = batch.row(s);
        let mut worst: f64 = 0.0;
        for &(d, i, j) in &pairs {
            worst = worst.max((row[i] - row[j]).abs() / d);
        }
        max_ratio = max_ratio.max(worst);
        if worst > scale {
            flagged += 1;
        }
    }
    Ok(PathModulusReport {
        pairs_used: pairs.len(),
        excluded_zero: excluded,
        threshold_factor: scale,
        max_ratio,
        flagged_samples: flagged,
        flagged_fraction: flagged as f64 / batch.n_samples.max(1) as f64,
    })
}
