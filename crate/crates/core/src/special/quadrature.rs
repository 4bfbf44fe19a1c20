//! Gauss–Kronrod adaptive quadrature and fixed Gauss–Legendre rules.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    /// Number of subintervals in the final partition.
    pub intervals: usize,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// 21-point Gauss–Kronrod rule on `[a, b]`; returns (value, error estimate).
pub fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_g = 0.0;
    let mut res_k = f_center * WGK[10];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (res_k - res_g) * half;
    let value = res_k * half;
    let abs_half = half.abs();
    (value, rescale_error(err, res_abs * abs_half, res_asc * abs_half))
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        // largest error first; ties broken by position for determinism
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive Gauss–Kronrod integration: the subinterval with the
/// largest error estimate is bisected until the summed estimate meets
/// `abs_target` or the partition reaches `max_intervals`.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveIntegrator {
    pub abs_target: f64,
    pub max_intervals: usize,
}

impl AdaptiveIntegrator {
    pub fn new(abs_target: f64, max_intervals: usize) -> Self {
        Self {
            abs_target,
            max_intervals,
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Integral> {
        self.integrate_panels(f, &[a, b])
    }

    /// Integrate over `[breaks[0], breaks[last]]`, starting from the
    /// partition given by `breaks` (sorted ascending).
    pub fn integrate_panels<F: Fn(f64) -> f64>(&self, f: F, breaks: &[f64]) -> Result<Integral> {
        assert!(breaks.len() >= 2, "need at least one panel");
        let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
        let mut total_err = 0.0;
        for w in breaks.windows(2) {
            let (value, error) = gk21(&f, w[0], w[1]);
            total_err += error;
            heap.push(Piece {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }

        while total_err > self.abs_target {
            if heap.len() >= self.max_intervals {
                return Err(Error::Numerical {
                    message: format!(
                        "adaptive quadrature hit {} subintervals before reaching {:.3e}",
                        self.max_intervals, self.abs_target
                    ),
                    estimate: total_err,
                });
            }
            let worst = heap.pop().expect("nonempty partition");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                return Err(Error::Numerical {
                    message: "adaptive quadrature reached roundoff-limited subinterval".into(),
                    estimate: total_err,
                });
            }
            let (v1, e1) = gk21(&f, worst.a, mid);
            let (v2, e2) = gk21(&f, mid, worst.b);
            total_err += e1 + e2 - worst.error;
            heap.push(Piece { a: worst.a, b: mid, value: v1, error: e1 });
            heap.push(Piece { a: mid, b: worst.b, value: v2, error: e2 });
        }

        let mut pieces = heap.into_vec();
        pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
        let value = pieces.iter().map(|p| p.value).sum();
        let error = pieces.iter().map(|p| p.error).sum();
        Ok(Integral {
            value,
            error,
            intervals: pieces.len(),
        })
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1] (Newton iteration on P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk21_exact_for_polynomials() {
        let (v, _) = gk21(&|x: f64| x.powi(10) - 3.0 * x, 0.0, 2.0);
        assert!((v - (2f64.powi(11) / 11.0 - 6.0)).abs() < 1e-12);
    }

    #[test]
    fn adaptive_oscillatory() {
        // ∫_0^{100} sin(x)/x dx = Si(100)
        let integ = AdaptiveIntegrator::new(1e-13, 10_000);
        let breaks: Vec<f64> = (0..=32).map(|k| k as f64 * 100.0 / 32.0).collect();
        let r = integ
            .integrate_panels(|x: f64| if x == 0.0 { 1.0 } else { x.sin() / x }, &breaks)
            .unwrap();
        assert!((r.value - 1.562_225_466_889_056_3).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn adaptive_singular_endpoint() {
        let r = AdaptiveIntegrator::new(1e-12, 10_000)
            .integrate(|x: f64| x.sqrt().recip(), 0.0, 1.0);
        let r = r.unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn reports_non_convergence() {
        let err = AdaptiveIntegrator::new(1e-15, 4)
            .integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0)
            .unwrap_err();
        assert!(matches!(err, Error::Numerical { .. }));
    }

    #[test]
    fn legendre_rule() {
        let (x, w) = gauss_legendre(20);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
        assert!((v - 2.0 / 39.0).abs() < 1e-14);
    }
}
