//! Regularized incomplete beta function I_x(a, b).

use super::gamma::ln_gamma;
use crate::error::{Error, Result};

const MAX_ITER: usize = 500;

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Regularized incomplete beta function for `a, b > 0` and `0 <= x <= 1`.
///
/// Evaluated by the modified Lentz continued fraction, switching to
/// `1 - I_{1-x}(b, a)` past the mean where the fraction converges slowly.
pub fn betainc(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain(format!("betainc requires a, b > 0 (got {a}, {b})")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("betainc requires 0 <= x <= 1 (got {x})")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        Ok(1.0 - continued_fraction(b, a, 1.0 - x)?)
    } else {
        continued_fraction(a, b, x)
    }
}

fn continued_fraction(a: f64, b: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let ln_prefix = a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b);
    let prefix = ln_prefix.exp() / a;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;

        if (delta - 1.0).abs() < 1e-16 {
            return Ok(prefix * h);
        }
    }
    Err(Error::Numerical {
        message: format!("incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"),
        estimate: f64::NAN,
    })
}
