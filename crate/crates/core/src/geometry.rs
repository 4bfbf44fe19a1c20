//! Exact geometry of open balls in ℝ^d.
//!
//! The first coordinate of every point is the "time" coordinate `t`; the
//! time reflection θ negates it. Balls are identified with points of
//! ℝ^d × (0, ∞).

use crate::error::{Error, Result};
use crate::special::{betainc, gamma_half};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const ORTHOGONALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BallRepr")]
pub struct Ball {
    center: Vec<f64>,
    radius: f64,
}

#[derive(Deserialize)]
struct BallRepr {
    center: Vec<f64>,
    radius: f64,
}

impl TryFrom<BallRepr> for Ball {
    type Error = Error;

    fn try_from(r: BallRepr) -> Result<Self> {
        Ball::new(r.center, r.radius)
    }
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::domain("ball center must have at least one coordinate"));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::domain(format!("ball radius must be positive and finite (got {radius})")));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("ball center must be finite"));
        }
        Ok(Self { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// The time coordinate of the center.
    pub fn time(&self) -> f64 {
        self.center[0]
    }

    pub fn volume(&self) -> f64 {
        ball_volume_unchecked(self.dim(), self.radius)
    }

    /// Reciprocal volume `v_r`, the normalization of the mollifier.
    pub fn inverse_volume(&self) -> f64 {
        self.volume().recip()
    }

    pub fn reflect_time(&self) -> Ball {
        let mut center = self.center.clone();
        center[0] = -center[0];
        Ball {
            center,
            radius: self.radius,
        }
    }

    /// Euclidean distance between centers.
    pub fn center_distance(&self, other: &Ball) -> f64 {
        distance(&self.center, &other.center)
    }

    /// Distance in ℝ^d × (0, ∞) with the plain Euclidean metric.
    pub fn index_distance(&self, other: &Ball) -> f64 {
        let dc = self.center_distance(other);
        let dr = self.radius - other.radius;
        (dc * dc + dr * dr).sqrt()
    }
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn check_same_dim(b1: &Ball, b2: &Ball) -> Result<usize> {
    if b1.dim() != b2.dim() {
        return Err(Error::domain(format!(
            "dimension mismatch: {} vs {}",
            b1.dim(),
            b2.dim()
        )));
    }
    Ok(b1.dim())
}

/// Volume π^{d/2} r^d / Γ(d/2 + 1) of a d-dimensional ball of radius `r`.
pub fn ball_volume(d: usize, r: f64) -> Result<f64> {
    if d < 1 {
        return Err(Error::domain("ball_volume requires d >= 1"));
    }
    if !(r > 0.0) {
        return Err(Error::domain(format!("ball_volume requires r > 0 (got {r})")));
    }
    Ok(ball_volume_unchecked(d, r))
}

fn ball_volume_unchecked(d: usize, r: f64) -> f64 {
    PI.powf(d as f64 / 2.0) * r.powi(d as i32) / gamma_half(d as u32 + 2)
}

/// Volume of `{x ∈ b(0, r) : x_1 > c}` for `|c| <= r`.
///
/// For `c >= 0` this is the cap of height `h = r − c`:
/// `½ V_d(r) I_{1 − c²/r²}((d+1)/2, ½)`.
fn cap_beyond(d: usize, r: f64, c: f64) -> f64 {
    let full = ball_volume_unchecked(d, r);
    if c >= r {
        return 0.0;
    }
    if c <= -r {
        return full;
    }
    if c >= 0.0 {
        let x = ((r - c) * (r + c) / (r * r)).clamp(0.0, 1.0);
        let ib = betainc((d as f64 + 1.0) / 2.0, 0.5, x).expect("arguments in range");
        0.5 * full * ib
    } else {
        full - cap_beyond(d, r, -c)
    }
}

/// Lebesgue measure of `b1 ∩ b2`, exact up to special-function accuracy.
pub fn intersection_volume(b1: &Ball, b2: &Ball) -> Result<f64> {
    let d = check_same_dim(b1, b2)?;
    // argument order fixed so the result is exactly symmetric
    let (r, s) = if b1.radius <= b2.radius { (b1.radius, b2.radius) } else { (b2.radius, b1.radius) };
    Ok(lens_volume(d, r, s, b1.center_distance(b2)))
}

/// Intersection volume of two balls with radii `r`, `s` and center distance `delta`.
pub(crate) fn lens_volume(d: usize, r: f64, s: f64, delta: f64) -> f64 {
    if delta >= r + s {
        return 0.0;
    }
    if delta <= (r - s).abs() {
        return ball_volume_unchecked(d, r.min(s));
    }
    // separating hyperplane at signed distance c1 from the first center
    let c1 = (delta * delta + (r - s) * (r + s)) / (2.0 * delta);
    let c2 = delta - c1;
    let v = cap_beyond(d, r, c1) + cap_beyond(d, s, c2);
    v.clamp(0.0, ball_volume_unchecked(d, r.min(s)))
}

/// A rigid motion `x ↦ R x + τ` of ℝ^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MotionRepr")]
pub struct EuclideanMotion {
    dim: usize,
    /// Row-major d×d orthogonal matrix.
    rotation: Vec<f64>,
    translation: Vec<f64>,
}

#[derive(Deserialize)]
struct MotionRepr {
    rotation: Vec<f64>,
    translation: Vec<f64>,
}

impl TryFrom<MotionRepr> for EuclideanMotion {
    type Error = Error;

    fn try_from(m: MotionRepr) -> Result<Self> {
        EuclideanMotion::new(m.rotation, m.translation)
    }
}

impl EuclideanMotion {
    pub fn new(rotation: Vec<f64>, translation: Vec<f64>) -> Result<Self> {
        let d = translation.len();
        if d == 0 || rotation.len() != d * d {
            return Err(Error::domain("rotation must be d×d with d = translation length"));
        }
        let motion = Self {
            dim: d,
            rotation,
            translation,
        };
        let dev = motion.orthogonality_defect();
        if dev > ORTHOGONALITY_TOL {
            return Err(Error::domain(format!("rotation is not orthogonal (defect {dev:.3e})")));
        }
        Ok(motion)
    }

    pub fn identity(d: usize) -> Self {
        let mut rotation = vec![0.0; d * d];
        for i in 0..d {
            rotation[i * d + i] = 1.0;
        }
        Self {
            dim: d,
            rotation,
            translation: vec![0.0; d],
        }
    }

    pub fn translation(offset: Vec<f64>) -> Self {
        let mut m = Self::identity(offset.len());
        m.translation = offset;
        m
    }

    /// θ: (t, x_1, …) ↦ (−t, x_1, …).
    pub fn time_reflection(d: usize) -> Self {
        let mut m = Self::identity(d);
        m.rotation[0] = -1.0;
        m
    }

    /// Rotation by `angle` in the plane spanned by axes `i` and `j`.
    pub fn plane_rotation(d: usize, i: usize, j: usize, angle: f64) -> Result<Self> {
        if i >= d || j >= d || i == j {
            return Err(Error::domain("plane rotation needs two distinct axes < d"));
        }
        let mut m = Self::identity(d);
        let (s, c) = angle.sin_cos();
        m.rotation[i * d + i] = c;
        m.rotation[j * d + j] = c;
        m.rotation[i * d + j] = -s;
        m.rotation[j * d + i] = s;
        Ok(m)
    }

    /// A random proper or improper motion: Haar-like orthogonal part from
    /// Gram–Schmidt on a Gaussian matrix, translation uniform in `[-scale, scale]^d`.
    pub fn random<R: Rng + ?Sized>(d: usize, scale: f64, rng: &mut R) -> Self {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
        while cols.len() < d {
            let mut v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            // two passes keep the columns orthogonal to rounding level even
            // when v starts nearly parallel to an earlier column
            for _ in 0..2 {
                for u in &cols {
                    let proj: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi -= proj * ui;
                    }
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-8 {
                continue;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            cols.push(v);
        }
        let mut rotation = vec![0.0; d * d];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..d {
                rotation[i * d + j] = col[i];
            }
        }
        let translation = (0..d).map(|_| rng.random_range(-scale..=scale)).collect();
        Self {
            dim: d,
            rotation,
            translation,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rotation(&self) -> &[f64] {
        &self.rotation
    }

    pub fn translation_vector(&self) -> &[f64] {
        &self.translation
    }

    /// max |RᵀR − I| entrywise.
    pub fn orthogonality_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d)
                    .map(|k| self.rotation[k * d + i] * self.rotation[k * d + j])
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    pub fn apply_point(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d)
            .map(|i| {
                (0..d).map(|k| self.rotation[i * d + k] * x[k]).sum::<f64>() + self.translation[i]
            })
            .collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &EuclideanMotion) -> Result<EuclideanMotion> {
        if self.dim != other.dim {
            return Err(Error::domain("cannot compose motions of different dimension"));
        }
        let d = self.dim;
        let mut rotation = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                rotation[i * d + j] = (0..d)
                    .map(|k| self.rotation[i * d + k] * other.rotation[k * d + j])
                    .sum();
            }
        }
        let translation = self
            .apply_point(&other.translation)
            .into_iter()
            .collect::<Vec<_>>();
        Ok(EuclideanMotion {
            dim: d,
            rotation,
            translation,
        })
    }

    pub fn inverse(&self) -> EuclideanMotion {
        let d = self.dim;
        let mut rotation = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                rotation[i * d + j] = self.rotation[j * d + i];
            }
        }
        let translation = (0..d)
            .map(|i| -(0..d).map(|k| rotation[i * d + k] * self.translation[k]).sum::<f64>())
            .collect();
        EuclideanMotion {
            dim: d,
            rotation,
            translation,
        }
    }

    /// True when the motion maps the time axis to itself (block-diagonal
    /// rotation with ±1 in the time slot).
    fn time_sign(&self) -> Option<f64> {
        let d = self.dim;
        let r00 = self.rotation[0];
        if (r00.abs() - 1.0).abs() > ORTHOGONALITY_TOL {
            return None;
        }
        let off = (1..d).all(|k| {
            self.rotation[k].abs() <= ORTHOGONALITY_TOL
                && self.rotation[k * d].abs() <= ORTHOGONALITY_TOL
        });
        off.then_some(r00.signum())
    }

    fn is_translation(&self) -> bool {
        *self == Self::translation(self.translation.clone())
    }

    fn is_axis_permuting(&self) -> bool {
        // diagonal ±1 rotation
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| {
                let v = self.rotation[i * d + j];
                if i == j {
                    v == 1.0 || v == -1.0
                } else {
                    v == 0.0
                }
            })
        })
    }
}

/// `g · (x, r) = (g · x, r)`.
pub fn apply_motion(g: &EuclideanMotion, b: &Ball) -> Result<Ball> {
    if g.dim() != b.dim() {
        return Err(Error::domain(format!(
            "motion dimension {} does not match ball dimension {}",
            g.dim(),
            b.dim()
        )));
    }
    Ok(Ball {
        center: g.apply_point(b.center()),
        radius: b.radius,
    })
}

/// Open regions of ℝ^d used to select index sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// `{t > c}`.
    TimeAbove { c: f64 },
    /// `{t < c}`.
    TimeBelow { c: f64 },
    /// Open axis-aligned box `∏ (lo_i, hi_i)`.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Open ball `b(center, radius)`.
    OpenBall { center: Vec<f64>, radius: f64 },
    Whole,
    /// Open box `∏ (lo_i, hi_i)` inside the hyperplane `{t = 0}`; bounds
    /// cover the spatial coordinates only.
    TimeZeroSlab { lo: Vec<f64>, hi: Vec<f64> },
}

impl Region {
    pub fn positive_time() -> Self {
        Region::TimeAbove { c: 0.0 }
    }

    pub fn negative_time() -> Self {
        Region::TimeBelow { c: 0.0 }
    }

    /// Membership of a point in the open set.
    pub fn contains_point(&self, x: &[f64]) -> bool {
        match self {
            Region::TimeAbove { c } => x[0] > *c,
            Region::TimeBelow { c } => x[0] < *c,
            Region::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, h))| *l < *v && *v < *h),
            Region::OpenBall { center, radius } => distance(x, center) < *radius,
            Region::Whole => true,
            Region::TimeZeroSlab { lo, hi } => {
                x[0] == 0.0
                    && x[1..]
                        .iter()
                        .zip(lo.iter().zip(hi))
                        .all(|(v, (l, h))| *l < *v && *v < *h)
            }
        }
    }

    /// Image `g · V` for the motion/region pairs where it is again a region
    /// of the same family.
    pub fn transformed(&self, g: &EuclideanMotion) -> Result<Region> {
        let unsupported = || {
            Err(Error::Unsupported(format!(
                "image of {self:?} under a general motion is not representable"
            )))
        };
        match self {
            Region::Whole => Ok(Region::Whole),
            Region::OpenBall { center, radius } => Ok(Region::OpenBall {
                center: g.apply_point(center),
                radius: *radius,
            }),
            Region::TimeAbove { c } | Region::TimeBelow { c } => {
                let Some(sign) = g.time_sign() else {
                    return unsupported();
                };
                let c_new = sign * c + g.translation[0];
                let above = matches!(self, Region::TimeAbove { .. }) == (sign > 0.0);
                Ok(if above {
                    Region::TimeAbove { c: c_new }
                } else {
                    Region::TimeBelow { c: c_new }
                })
            }
            Region::Box { lo, hi } => {
                if !g.is_axis_permuting() {
                    return unsupported();
                }
                let a = g.apply_point(lo);
                let b = g.apply_point(hi);
                Ok(Region::Box {
                    lo: a.iter().zip(&b).map(|(x, y)| x.min(*y)).collect(),
                    hi: a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect(),
                })
            }
            Region::TimeZeroSlab { lo, hi } => {
                if !(g.is_translation() || g.is_axis_permuting()) || g.translation[0] != 0.0 {
                    return unsupported();
                }
                let mut plo = vec![0.0];
                plo.extend_from_slice(lo);
                let mut phi = vec![0.0];
                phi.extend_from_slice(hi);
                let a = g.apply_point(&plo);
                let b = g.apply_point(&phi);
                Ok(Region::TimeZeroSlab {
                    lo: a[1..].iter().zip(&b[1..]).map(|(x, y)| x.min(*y)).collect(),
                    hi: a[1..].iter().zip(&b[1..]).map(|(x, y)| x.max(*y)).collect(),
                })
            }
        }
    }

    /// Certified inclusion `self ⊆ other` for the supported nestings.
    pub fn is_subset_of(&self, other: &Region) -> Result<bool> {
        use Region::*;
        if self == other {
            return Ok(true);
        }
        let ans = match (self, other) {
            (_, Whole) => true,
            (Whole, _) => false,
            (TimeAbove { c: c1 }, TimeAbove { c: c2 }) => c1 >= c2,
            (TimeBelow { c: c1 }, TimeBelow { c: c2 }) => c1 <= c2,
            (TimeAbove { .. }, TimeBelow { .. }) | (TimeBelow { .. }, TimeAbove { .. }) => false,
            (Box { lo: l1, hi: h1 }, Box { lo: l2, hi: h2 }) => {
                l1.iter().zip(l2).all(|(a, b)| a >= b) && h1.iter().zip(h2).all(|(a, b)| a <= b)
            }
            (Box { lo, .. }, TimeAbove { c }) => lo[0] >= *c,
            (Box { hi, .. }, TimeBelow { c }) => hi[0] <= *c,
            (OpenBall { center: y1, radius: r1 }, OpenBall { center: y2, radius: r2 }) => {
                distance(y1, y2) + r1 <= *r2
            }
            (OpenBall { center, radius }, Box { lo, hi }) => center
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(y, (l, h))| y - radius >= *l && y + radius <= *h),
            (OpenBall { center, radius }, TimeAbove { c }) => center[0] - radius >= *c,
            (OpenBall { center, radius }, TimeBelow { c }) => center[0] + radius <= *c,
            (TimeZeroSlab { lo: l1, hi: h1 }, TimeZeroSlab { lo: l2, hi: h2 }) => {
                l1.iter().zip(l2).all(|(a, b)| a >= b) && h1.iter().zip(h2).all(|(a, b)| a <= b)
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "cannot certify {self:?} ⊆ {other:?}"
                )))
            }
        };
        Ok(ans)
    }
}

/// `b(x, r) ⊆ V`, the membership test for `B_d(V)`.
///
/// Containment of an open ball in an open set is tested with closure
/// margins allowed to vanish: for `{t > 0}` the criterion is `x_t >= r`.
pub fn region_contains_ball(v: &Region, b: &Ball) -> bool {
    let x = b.center();
    let r = b.radius();
    match v {
        Region::TimeAbove { c } => x[0] - r >= *c,
        Region::TimeBelow { c } => x[0] + r <= *c,
        Region::Box { lo, hi } => x
            .iter()
            .zip(lo.iter().zip(hi))
            .all(|(v, (l, h))| v - r >= *l && v + r <= *h),
        Region::OpenBall { center, radius } => distance(x, center) + r <= *radius,
        Region::Whole => true,
        // a d-dimensional ball never fits in a hyperplane
        Region::TimeZeroSlab { .. } => false,
    }
}

/// `x ∈ V`, the membership test for `B⁰_d(V)`.
pub fn region_contains_center(v: &Region, b: &Ball) -> bool {
    v.contains_point(b.center())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ball(c: &[f64], r: f64) -> Ball {
        Ball::new(c.to_vec(), r).unwrap()
    }

    #[test]
    fn volumes() {
        assert!((ball_volume(2, 1.0).unwrap() - PI).abs() < 1e-14);
        assert!((ball_volume(3, 2.0).unwrap() - 4.0 / 3.0 * PI * 8.0).abs() < 1e-12);
        assert!((ball_volume(5, 1.0).unwrap() - 8.0 * PI * PI / 15.0).abs() < 1e-13);
        assert!((ball_volume(1, 0.75).unwrap() - 1.5).abs() < 1e-15);
        assert!(ball_volume(0, 1.0).is_err());
        assert!(ball_volume(2, 0.0).is_err());
        assert!(ball_volume(2, -1.0).is_err());
    }

    #[test]
    fn ball_validation() {
        assert!(Ball::new(vec![0.0, 0.0], 0.0).is_err());
        assert!(Ball::new(vec![], 1.0).is_err());
        assert!(Ball::new(vec![f64::NAN], 1.0).is_err());
    }

    #[test]
    fn intersection_special_cases() {
        let b = ball(&[0.0, 0.0], 1.0);
        assert!((intersection_volume(&b, &b).unwrap() - PI).abs() < 1e-12);
        for d in 1..=6 {
            let mut c = vec![0.0; d];
            let b1 = Ball::new(c.clone(), 1.0).unwrap();
            c[0] = 3.0;
            let b2 = Ball::new(c.clone(), 1.0).unwrap();
            assert_eq!(intersection_volume(&b1, &b2).unwrap(), 0.0);
            // tangency
            c[0] = 2.0;
            let b3 = Ball::new(c, 1.0).unwrap();
            assert_eq!(intersection_volume(&b1, &b3).unwrap(), 0.0);
        }
        // nested
        let big = ball(&[0.0, 0.0, 0.0], 2.0);
        let small = ball(&[0.5, 0.2, 0.0], 0.5);
        let v = intersection_volume(&big, &small).unwrap();
        assert!((v - small.volume()).abs() < 1e-14);
        assert!(intersection_volume(&big, &ball(&[0.0, 0.0], 1.0)).is_err());
    }

    #[test]
    fn unit_lens_in_three_dimensions() {
        let b1 = ball(&[0.0, 0.0, 0.0], 1.0);
        let b2 = ball(&[1.0, 0.0, 0.0], 1.0);
        let v = intersection_volume(&b1, &b2).unwrap();
        assert!((v - 5.0 * PI / 12.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn one_dimensional_overlap_is_interval_length() {
        let b1 = ball(&[0.0], 1.0);
        let b2 = ball(&[1.5], 0.75);
        let v = intersection_volume(&b1, &b2).unwrap();
        assert!((v - 0.25).abs() < 1e-14);
    }

    #[test]
    fn motions() {
        let b = ball(&[1.0, 2.0], 0.5);
        assert_eq!(apply_motion(&EuclideanMotion::identity(2), &b).unwrap(), b);
        let tb = apply_motion(&EuclideanMotion::time_reflection(2), &b).unwrap();
        assert_eq!(tb.center(), &[-1.0, 2.0]);
        assert_eq!(tb.radius(), 0.5);
        let rot = EuclideanMotion::plane_rotation(2, 0, 1, PI / 2.0).unwrap();
        let rb = apply_motion(&rot, &ball(&[1.0, 0.0], 0.3)).unwrap();
        assert!(rb.center()[0].abs() < 1e-15 && (rb.center()[1] - 1.0).abs() < 1e-15);
        assert!(apply_motion(&rot, &ball(&[1.0, 0.0, 0.0], 0.3)).is_err());
        assert!(EuclideanMotion::new(vec![1.0, 1.0, 0.0, 1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn motion_group_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 1..=5 {
            let g = EuclideanMotion::random(d, 3.0, &mut rng);
            let h = EuclideanMotion::random(d, 3.0, &mut rng);
            assert!(g.orthogonality_defect() < 1e-12);
            let gh = g.compose(&h).unwrap();
            assert!(gh.orthogonality_defect() < 1e-12);
            let x: Vec<f64> = (0..d).map(|i| i as f64 - 0.5).collect();
            let lhs = gh.apply_point(&x);
            let rhs = g.apply_point(&h.apply_point(&x));
            for (a, b) in lhs.iter().zip(&rhs) {
                assert!((a - b).abs() < 1e-12);
            }
            let back = g.inverse().apply_point(&g.apply_point(&x));
            for (a, b) in back.iter().zip(&x) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn containment() {
        let plus = Region::positive_time();
        assert!(region_contains_ball(&plus, &ball(&[2.0, 0.0], 1.0)));
        assert!(!region_contains_ball(&plus, &ball(&[0.5, 0.0], 1.0)));
        assert!(region_contains_ball(&plus, &ball(&[1.0, 0.0], 1.0)));
        let slab = Region::TimeZeroSlab {
            lo: vec![-1.0],
            hi: vec![1.0],
        };
        assert!(region_contains_center(&slab, &ball(&[0.0, 0.5], 7.0)));
        assert!(!region_contains_center(&slab, &ball(&[1e-9, 0.5], 7.0)));
        assert!(!region_contains_ball(&slab, &ball(&[0.0, 0.5], 0.1)));
    }

    #[test]
    fn region_images() {
        let shift = EuclideanMotion::translation(vec![1.0, 0.0]);
        assert_eq!(
            Region::positive_time().transformed(&shift).unwrap(),
            Region::TimeAbove { c: 1.0 }
        );
        let theta = EuclideanMotion::time_reflection(2);
        assert_eq!(
            Region::positive_time().transformed(&theta).unwrap(),
            Region::negative_time()
        );
        let rot = EuclideanMotion::plane_rotation(2, 0, 1, 0.3).unwrap();
        assert!(Region::positive_time().transformed(&rot).is_err());
    }

    #[test]
    fn subset_certification() {
        let a = Region::Box { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0] };
        let b = Region::Box { lo: vec![-1.0, -1.0], hi: vec![2.0, 2.0] };
        assert!(a.is_subset_of(&b).unwrap());
        assert!(!b.is_subset_of(&a).unwrap());
        assert!(a.is_subset_of(&Region::positive_time()).unwrap());
        assert!(Region::TimeAbove { c: 1.0 }.is_subset_of(&Region::positive_time()).unwrap());
        assert!(Region::Box { lo: vec![0.0], hi: vec![1.0] }
            .is_subset_of(&Region::OpenBall { center: vec![0.0], radius: 3.0 })
            .is_err());
    }
}
