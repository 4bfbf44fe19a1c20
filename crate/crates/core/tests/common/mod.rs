//! Independent reference computations for the integration tests. Nothing
//! here calls into the library's numerics.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Γ(n/2) by recursion from Γ(1/2) and Γ(1).
pub fn gamma_half(n: u32) -> f64 {
    let mut g = if n % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut k = if n % 2 == 0 { 2 } else { 1 };
    while k < n {
        g *= k as f64 / 2.0;
        k += 2;
    }
    g
}

pub fn unit_ball_volume(d: usize) -> f64 {
    PI.powf(d as f64 / 2.0) / gamma_half(d as u32 + 2)
}

pub fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma_half(d as u32)
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

/// Adaptive Simpson with absolute tolerance `eps`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, eps, 40)
}

/// Modified Bessel I_ν(x) by its power series.
pub fn bessel_i(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    // Γ(ν+1) for ν ∈ ½ℤ, ν ≥ 0
    let g = gamma_half((2.0 * nu) as u32 + 2);
    let mut term = (0.5 * x).powf(nu) / g;
    let mut sum = term;
    for k in 1..400 {
        let k = k as f64;
        term *= q / (k * (k + nu));
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Modified Bessel K_ν(x) = ∫_0^∞ exp(−x cosh t) cosh(νt) dt.
pub fn bessel_k(nu: f64, x: f64) -> f64 {
    // integrand below e^{-745} beyond t_max
    let t_max = (745.0 / x).max(1.0).acosh() + 1.0;
    // smooth and rapidly decaying, so a fixed fine rule is plenty
    simpson(|t: f64| (-x * t.cosh()).exp() * (nu * t).cosh(), 0.0, t_max, 4000)
}

/// Green function of (−Δ + m²) on ℝ^d at distance ρ > 0.
pub fn yukawa_green(d: usize, m: f64, rho: f64) -> f64 {
    match d {
        1 => (-m * rho).exp() / (2.0 * m),
        3 => (-m * rho).exp() / (4.0 * PI * rho),
        _ => {
            let nu = d as f64 / 2.0 - 1.0;
            (2.0 * PI).powf(-(d as f64) / 2.0) * (m / rho).powf(nu) * bessel_k(nu, m * rho)
        }
    }
}

/// Ball average of a function u with (−Δ + m²)u = 0 equals u(center)·Ψ(m a).
pub fn ball_mean_factor(d: usize, x: f64) -> f64 {
    let nu = d as f64 / 2.0;
    gamma_half(d as u32 + 2) * (2.0 / x).powf(nu) * bessel_i(nu, x)
}

/// Sphere average factor Λ(m a) of the same mean-value property.
pub fn sphere_mean_factor(d: usize, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let nu = d as f64 / 2.0 - 1.0;
    gamma_half(d as u32) * (2.0 / x).powf(nu) * bessel_i(nu, x)
}

/// Free-field kernel of two disjoint balls (mean-value property).
pub fn free_field_disjoint(d: usize, m: f64, r: f64, s: f64, delta: f64) -> f64 {
    assert!(delta >= r + s);
    yukawa_green(d, m, delta) * ball_mean_factor(d, m * r) * ball_mean_factor(d, m * s)
}

/// Classical d = 3 lens volume.
pub fn lens3(r: f64, s: f64, delta: f64) -> f64 {
    if delta >= r + s {
        return 0.0;
    }
    if delta <= (r - s).abs() {
        let a = r.min(s);
        return 4.0 / 3.0 * PI * a * a * a;
    }
    PI * (r + s - delta).powi(2) * (delta * delta + 2.0 * delta * s - 3.0 * s * s + 2.0 * delta * r + 6.0 * r * s - 3.0 * r * r)
        / (12.0 * delta)
}

/// Lens volume in ℝ^d by slicing along the axis through both centers.
pub fn lens_sliced(d: usize, r: f64, s: f64, delta: f64) -> f64 {
    if delta >= r + s {
        return 0.0;
    }
    let lo = (-r).max(delta - s);
    let hi = r.min(delta + s);
    if hi <= lo {
        return 0.0;
    }
    let vd1 = unit_ball_volume(d - 1);
    let f = |x: f64| {
        let h2 = (r * r - x * x).min(s * s - (x - delta) * (x - delta));
        if h2 <= 0.0 {
            0.0
        } else {
            vd1 * h2.powf((d as f64 - 1.0) / 2.0)
        }
    };
    // the slice radius has a kink where the two spheres cross
    let kink = ((delta * delta + r * r - s * s) / (2.0 * delta)).clamp(lo, hi);
    adaptive_simpson(&f, lo, kink, 1e-14) + adaptive_simpson(&f, kink, hi, 1e-14)
}

/// Free-field kernel of two balls in any position, as a radial integral of
/// the lens volume against the sphere mean of the Green function.
pub fn free_field_radial(d: usize, m: f64, r: f64, s: f64, delta: f64) -> f64 {
    let lens = |u: f64| if d == 3 { lens3(r, s, u) } else { lens_sliced(d, r, s, u) };
    let f = |u: f64| {
        if u == 0.0 && d <= 2 {
            return 0.0;
        }
        let big = u.max(delta);
        let small = u.min(delta);
        if big == 0.0 {
            return 0.0;
        }
        lens(u) * u.powi(d as i32 - 1) * yukawa_green(d, m, big) * sphere_mean_factor(d, m * small)
    };
    let top = r + s;
    let mut cuts = vec![0.0, (r - s).abs(), top];
    if delta > 0.0 && delta < top {
        cuts.push(delta);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let scale = simpson(&f, 0.0, top, 64).abs();
    let integral: f64 = cuts.windows(2).map(|w| adaptive_simpson(&f, w[0], w[1], 1e-11 * scale)).sum();
    let vr = unit_ball_volume(d) * r.powi(d as i32);
    let vs = unit_ball_volume(d) * s.powi(d as i32);
    sphere_area(d) * integral / (vr * vs)
}

/// Uniform point in the ball b(center, r) by rejection from the cube.
pub fn uniform_in_ball<R: Rng>(rng: &mut R, center: &[f64], r: f64) -> Vec<f64> {
    loop {
        let p: Vec<f64> = center.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
        if p.iter().map(|x| x * x).sum::<f64>() < 1.0 {
            return p.iter().zip(center).map(|(x, c)| c + r * x).collect();
        }
    }
}

/// Monte Carlo estimate of vol(b1 ∩ b2) by sampling the bounding box of
/// the smaller ball; returns (estimate, standard error).
pub fn mc_intersection(c1: &[f64], r1: f64, c2: &[f64], r2: f64, n: usize, seed: u64) -> (f64, f64) {
    let (ca, ra, cb, rb) = if r1 <= r2 { (c1, r1, c2, r2) } else { (c2, r2, c1, r1) };
    let d = ca.len();
    let mut g = rng(seed);
    let mut hits = 0usize;
    for _ in 0..n {
        let p: Vec<f64> = ca.iter().map(|c| c + ra * g.random_range(-1.0..1.0)).collect();
        let in_a = p.iter().zip(ca).map(|(x, c)| (x - c).powi(2)).sum::<f64>() < ra * ra;
        let in_b = p.iter().zip(cb).map(|(x, c)| (x - c).powi(2)).sum::<f64>() < rb * rb;
        if in_a && in_b {
            hits += 1;
        }
    }
    let box_vol = (2.0 * ra).powi(d as i32);
    let p = hits as f64 / n as f64;
    (box_vol * p, box_vol * (p * (1.0 - p) / n as f64).sqrt())
}

/// E[g(Z)] for Z ~ N(0, 1).
pub fn normal_expectation<F: Fn(f64) -> f64>(g: F) -> f64 {
    let f = |z: f64| g(z) * (-0.5 * z * z).exp() / (2.0 * PI).sqrt();
    adaptive_simpson(&f, -12.0, 12.0, 1e-14)
}
