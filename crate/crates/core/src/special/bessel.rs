//! Bessel functions of the first kind for orders in ½ℤ, ν ≥ −½.
//!
//! Orders are passed doubled (`nu2 = 2ν`) so that integer and half-integer
//! orders share one entry point. The kernel code mostly needs the
//! normalized form
//!
//! ```text
//! Φ_ν(u) = Γ(ν+1) (2/u)^ν J_ν(u),   Φ_ν(0) = 1,
//! ```
//!
//! which is the characteristic function of the uniform law on a ball
//! (ν = d/2) or a sphere (ν = d/2 − 1) and is bounded by 1 in modulus.
//!
//! Evaluation strategy:
//! * `u < 4` (or `u < ν`): power series in `−u²/4`;
//! * half-integer ν: closed-form spherical Bessel recurrence;
//! * integer ν, `u < 20`: Miller backward recurrence normalized by
//!   `J_0 + 2 Σ J_{2k} = 1`;
//! * integer ν, `u ≥ 20`: Hankel asymptotic expansion.

use super::gamma::gamma_half;
use std::f64::consts::{FRAC_2_PI, PI};

const SERIES_LIMIT: f64 = 4.0;
const ASYMPTOTIC_LIMIT: f64 = 20.0;

fn order(nu2: i32) -> f64 {
    assert!(nu2 >= -1, "Bessel order must be >= -1/2 (got nu2 = {nu2})");
    nu2 as f64 / 2.0
}

/// Γ(ν+1) for ν = nu2/2.
fn gamma_nu_plus_one(nu2: i32) -> f64 {
    gamma_half((nu2 + 2) as u32)
}

/// Φ_ν(u) = Γ(ν+1)(2/u)^ν J_ν(u) with ν = nu2/2. Even in `u`.
pub fn normalized_bessel(nu2: i32, u: f64) -> f64 {
    let nu = order(nu2);
    let u = u.abs();
    if u == 0.0 {
        return 1.0;
    }
    match nu2 {
        -1 => return u.cos(),
        1 => return u.sin() / u,
        _ => {}
    }
    if u < SERIES_LIMIT || u < nu {
        return normalized_series(nu, u);
    }
    gamma_nu_plus_one(nu2) * (2.0 / u).powf(nu) * bessel_j(nu2, u)
}

/// J_ν(x) for ν = nu2/2 ≥ −½ and x ≥ 0.
pub fn bessel_j(nu2: i32, x: f64) -> f64 {
    let nu = order(nu2);
    assert!(x >= 0.0, "bessel_j requires x >= 0");
    if x == 0.0 {
        return match nu2 {
            0 => 1.0,
            -1 => f64::INFINITY,
            _ => 0.0,
        };
    }
    if x < SERIES_LIMIT || x < nu {
        // J_ν(x) = (x/2)^ν / Γ(ν+1) · Φ_ν(x)
        return (x / 2.0).powf(nu) / gamma_nu_plus_one(nu2) * normalized_series(nu, x);
    }
    if nu2 % 2 != 0 {
        let n = (nu2 - 1) / 2;
        (2.0 * x / PI).sqrt() * spherical_j(n, x)
    } else if x < ASYMPTOTIC_LIMIT {
        miller(nu2 as usize / 2, x)
    } else {
        hankel(nu, x)
    }
}

/// Upper envelope of |Φ_ν(u)| used for quadrature tail bounds.
///
/// Combines |Φ_ν| ≤ 1 with the large-argument modulus
/// sqrt(2/(πu))·(1 + (4ν²+1)/(8u²)) of J_ν.
pub fn normalized_bessel_envelope(nu2: i32, u: f64) -> f64 {
    let nu = order(nu2);
    let u = u.abs();
    if u <= 1.0 {
        return 1.0;
    }
    let modulus = (FRAC_2_PI / u).sqrt() * (1.0 + (4.0 * nu * nu + 1.0) / (8.0 * u * u));
    let bound = gamma_nu_plus_one(nu2) * (2.0 / u).powf(nu) * modulus;
    bound.min(1.0)
}

fn normalized_series(nu: f64, u: f64) -> f64 {
    let q = -0.25 * u * u;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let k = k as f64;
        term *= q / (k * (nu + k));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Spherical Bessel j_n(x) for n ≥ −1 by upward recurrence from
/// j_{−1} = cos x / x and j_0 = sin x / x. Callers guarantee x ≥ n.
fn spherical_j(n: i32, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let mut prev = c / x;
    if n == -1 {
        return prev;
    }
    let mut cur = s / x;
    for k in 0..n {
        let next = (2 * k + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn miller(n: usize, x: f64) -> f64 {
    let mut top = n.max(x.ceil() as usize) + x.ceil() as usize + 30;
    if top % 2 == 1 {
        top += 1;
    }
    let mut above = 0.0; // J_{k+1}
    let mut cur = 1.0; // J_k, arbitrary scale
    let mut sum = 2.0 * cur; // top is even
    let mut result = if top == n { cur } else { 0.0 };
    for k in (1..=top).rev() {
        let below = 2.0 * k as f64 / x * cur - above;
        above = cur;
        cur = below;
        let idx = k - 1;
        if idx == n {
            result = cur;
        }
        if idx % 2 == 0 && idx >= 2 {
            sum += 2.0 * cur;
        }
        if cur.abs() > 1e200 {
            cur *= 1e-200;
            above *= 1e-200;
            sum *= 1e-200;
            result *= 1e-200;
        }
    }
    sum += cur; // J_0
    result / sum
}

fn hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    for k in 1..80 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() > term.abs() && k > 2 {
            break;
        }
        term = next;
        // k-th term contributes to Q (odd k) or P (even k) with alternating signs
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * term;
        } else {
            p += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let phase = (0.5 * nu + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    (FRAC_2_PI / x).sqrt() * (p * cos_chi - q * sin_chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    // (ν, x, J_ν(x)) from an independent reference implementation
    const REFERENCE: &[(f64, f64, f64)] = &[
        (0.0, 0.5, 0.938469807240813),
        (0.0, 1.0, 0.7651976865579666),
        (0.0, 3.9, -0.40182601488763997),
        (0.0, 4.1, -0.38866967983585377),
        (0.0, 10.0, -0.24593576445134832),
        (0.0, 19.9, 0.17287775639261846),
        (0.0, 20.1, 0.15953606793729705),
        (0.0, 55.5, -0.028104074301152394),
        (1.0, 1.0, 0.44005058574493355),
        (1.0, 7.0, -0.0046828234823457346),
        (1.0, 20.5, 0.13625468819339565),
        (1.0, 150.0, -0.06514516365772735),
        (2.0, 5.0, 0.04656511627775229),
        (2.0, 12.0, -0.08493049487860475),
        (2.0, 33.0, -0.0911725116830781),
        (-0.5, 2.5, -0.4042783022390569),
        (0.5, 0.7, 0.6143610667912658),
        (1.5, 1.0, 0.24029783912342725),
        (1.5, 4.5, -0.0024196645430748526),
        (1.5, 60.0, 0.09758139271532926),
        (2.5, 3.0, 0.4127100322097165),
        (2.5, 9.0, -0.0247729194067888),
        (3.0, 6.0, 0.11476838482077517),
        (4.0, 2.0, 0.03399571980756843),
        (4.0, 25.0, 0.13229714269714343),
        (3.5, 8.0, -0.23256798563458198),
    ];

    #[test]
    fn matches_reference_values() {
        for &(nu, x, expected) in REFERENCE {
            let got = bessel_j((2.0 * nu) as i32, x);
            assert!(
                (got - expected).abs() < 2e-15_f64.max(1e-13 * expected.abs()),
                "J_{nu}({x}) = {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn normalized_form_is_continuous_across_switches() {
        for nu2 in -1..=8 {
            for &u in &[SERIES_LIMIT, ASYMPTOTIC_LIMIT, 4.5, 5.5] {
                let lo = normalized_bessel(nu2, u * (1.0 - 1e-15));
                let hi = normalized_bessel(nu2, u * (1.0 + 1e-15));
                assert!((lo - hi).abs() < 1e-12, "nu2={nu2} u={u}: {lo} vs {hi}");
            }
        }
    }

    #[test]
    fn normalized_closed_forms() {
        for &u in &[0.3, 2.0, 7.0, 31.0] {
            let (s, c) = f64::sin_cos(u);
            assert!((normalized_bessel(-1, u) - c).abs() < 1e-15);
            assert!((normalized_bessel(1, u) - s / u).abs() < 1e-15);
            // d = 3 ball: 3 (sin u - u cos u) / u^3
            let ball3 = 3.0 * (s - u * c) / (u * u * u);
            assert!((normalized_bessel(3, u) - ball3).abs() < 1e-13, "u={u}");
        }
    }

    #[test]
    fn envelope_dominates() {
        for nu2 in -1..=6 {
            for i in 0..4000 {
                let u = 0.01 + i as f64 * 0.05;
                let v = normalized_bessel(nu2, u).abs();
                assert!(v <= normalized_bessel_envelope(nu2, u) + 1e-14, "nu2={nu2} u={u}");
            }
        }
    }
}
